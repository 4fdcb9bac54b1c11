#include "tracemult/trace_poly.hpp"

#include <array>
#include <unordered_map>

#include "tracemult/errors.hpp"

namespace tracemult {

TracePoly::TracePoly(std::map<Monomial, BigInt> terms) {
  for (auto& [m, c] : terms) {
    if (sgn(c) != 0) terms_.emplace(m, std::move(c));
  }
}

TracePoly TracePoly::with_t_equal_s() const {
  std::map<Monomial, BigInt> out;
  for (const auto& [m, c] : terms_) out[Monomial{m.i + m.j, 0, m.k}] += c;
  return TracePoly(std::move(out));
}

namespace {

// Polynomials in s, t, u stored as dense rows in s keyed by (deg t, deg u).
// Word products are computed in the basis {1, x, y, xy} of the algebra
// generated by two SL2 matrices, using x^2 = s x - 1, y^2 = t y - 1 and
// yx = s y + t x + (u - s t) - xy.
using Row = std::vector<BigInt>;
using RowKey = std::pair<std::uint32_t, std::uint32_t>;
using Rows = std::map<RowKey, Row>;
using Elem = std::array<Rows, 4>;  // coefficients of 1, x, y, xy

Row& row_at(Rows& dst, RowKey key, std::size_t min_size) {
  Row& r = dst[key];
  if (r.size() < min_size) r.resize(min_size, BigInt(0));
  return r;
}

// dst += sign * s^di t^dj u^dk * src
void add_shift(Rows& dst, const Rows& src, std::uint32_t di, std::uint32_t dj, std::uint32_t dk, int sign) {
  for (const auto& [key, row] : src) {
    Row& out = row_at(dst, {key.first + dj, key.second + dk}, row.size() + di);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (sgn(row[i]) == 0) continue;
      if (sign > 0) {
        out[i + di] += row[i];
      } else {
        out[i + di] -= row[i];
      }
    }
  }
}

// dst += alpha(s) * src
void add_mul_s(Rows& dst, const Rows& src, const Row& alpha) {
  for (const auto& [key, row] : src) {
    Row& out = row_at(dst, key, row.size() + alpha.size() - 1);
    for (std::size_t d = 0; d < alpha.size(); ++d) {
      if (sgn(alpha[d]) == 0) continue;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (sgn(row[i]) == 0) continue;
        mpz_addmul(out[i + d].get_mpz_t(), row[i].get_mpz_t(), alpha[d].get_mpz_t());
      }
    }
  }
}

// dst += alpha(t) * src
void add_mul_t(Rows& dst, const Rows& src, const Row& alpha) {
  for (const auto& [key, row] : src) {
    for (std::size_t d = 0; d < alpha.size(); ++d) {
      if (sgn(alpha[d]) == 0) continue;
      Row& out = row_at(dst, {key.first + static_cast<std::uint32_t>(d), key.second}, row.size());
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (sgn(row[i]) == 0) continue;
        mpz_addmul(out[i].get_mpz_t(), row[i].get_mpz_t(), alpha[d].get_mpz_t());
      }
    }
  }
}

Elem times_x(const Elem& e) {
  Elem out;
  add_shift(out[0], e[1], 0, 0, 0, -1);
  add_shift(out[0], e[2], 0, 0, 1, +1);
  add_shift(out[0], e[2], 1, 1, 0, -1);
  add_shift(out[0], e[3], 0, 1, 0, -1);
  add_shift(out[1], e[0], 0, 0, 0, +1);
  add_shift(out[1], e[1], 1, 0, 0, +1);
  add_shift(out[1], e[2], 0, 1, 0, +1);
  add_shift(out[1], e[3], 0, 0, 1, +1);
  add_shift(out[2], e[2], 1, 0, 0, +1);
  add_shift(out[2], e[3], 0, 0, 0, +1);
  add_shift(out[3], e[2], 0, 0, 0, -1);
  return out;
}

Elem times_y(const Elem& e) {
  Elem out;
  add_shift(out[0], e[2], 0, 0, 0, -1);
  add_shift(out[1], e[3], 0, 0, 0, -1);
  add_shift(out[2], e[0], 0, 0, 0, +1);
  add_shift(out[2], e[2], 0, 1, 0, +1);
  add_shift(out[3], e[1], 0, 0, 0, +1);
  add_shift(out[3], e[3], 0, 1, 0, +1);
  return out;
}

// g^n = alpha(v) g + beta(v) for tr g = v, from g^(n+1) = (v alpha + beta) g - alpha.
std::pair<Row, Row> power_coefficients(std::uint64_t n) {
  Row alpha{BigInt(0)};
  Row beta{BigInt(1)};
  for (std::uint64_t step = 0; step < n; ++step) {
    Row next(alpha.size() + 1, BigInt(0));
    for (std::size_t i = 0; i < alpha.size(); ++i) next[i + 1] += alpha[i];
    for (std::size_t i = 0; i < beta.size(); ++i) next[i] += beta[i];
    beta = alpha;
    for (auto& c : beta) c = -c;
    alpha = std::move(next);
  }
  return {alpha, beta};
}

Elem times_power(const Elem& e, Gen g, std::int64_t n,
                 std::unordered_map<std::uint64_t, std::pair<Row, Row>>& cache) {
  const std::uint64_t mag = n < 0 ? static_cast<std::uint64_t>(-n) : static_cast<std::uint64_t>(n);
  auto it = cache.find(mag);
  if (it == cache.end()) it = cache.emplace(mag, power_coefficients(mag)).first;
  Row alpha = it->second.first;
  Row beta = it->second.second;
  if (n < 0) {
    // g^-n = -alpha g + (beta + v alpha)
    beta.resize(std::max(beta.size(), alpha.size() + 1), BigInt(0));
    for (std::size_t i = 0; i < alpha.size(); ++i) beta[i + 1] += alpha[i];
    for (auto& c : alpha) c = -c;
  }
  const Elem eg = g == Gen::a ? times_x(e) : times_y(e);
  Elem out;
  for (std::size_t c = 0; c < 4; ++c) {
    if (g == Gen::a) {
      add_mul_s(out[c], eg[c], alpha);
      add_mul_s(out[c], e[c], beta);
    } else {
      add_mul_t(out[c], eg[c], alpha);
      add_mul_t(out[c], e[c], beta);
    }
  }
  return out;
}

}  // namespace

TracePoly trace_polynomial(const FlatWord& w) {
  if (w.syllable_count() > kMaxSymbolicSyllables) {
    throw TooLarge("trace polynomial guard: " + std::to_string(w.syllable_count()) + " syllables > " +
                   std::to_string(kMaxSymbolicSyllables));
  }
  if (w.length() > kMaxSymbolicLetters) {
    throw TooLarge("trace polynomial guard: " + std::to_string(w.length()) + " letters > " +
                   std::to_string(kMaxSymbolicLetters));
  }
  const FlatWord core = cyclic_reduce(w);
  Elem e;
  e[0][{0, 0}] = Row{BigInt(1)};
  std::unordered_map<std::uint64_t, std::pair<Row, Row>> cache;
  for (const auto& syl : core.syllables()) e = times_power(e, syl.gen, syl.exp, cache);

  // tr(c0 + c1 x + c2 y + c3 xy) = 2 c0 + s c1 + t c2 + u c3
  Rows total;
  add_shift(total, e[0], 0, 0, 0, +1);
  add_shift(total, e[0], 0, 0, 0, +1);
  add_shift(total, e[1], 1, 0, 0, +1);
  add_shift(total, e[2], 0, 1, 0, +1);
  add_shift(total, e[3], 0, 0, 1, +1);
  std::map<Monomial, BigInt> terms;
  for (auto& [key, row] : total) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (sgn(row[i]) != 0) terms.emplace(Monomial{static_cast<std::uint32_t>(i), key.first, key.second}, row[i]);
    }
  }
  return TracePoly(std::move(terms));
}

bool check_symmetry(const FlatWord& tmpl) {
  return trace_polynomial(tmpl).with_t_equal_s() == trace_polynomial(swap_generators(tmpl)).with_t_equal_s();
}

std::string to_string(const TracePoly& p) {
  if (p.terms().empty()) return "0";
  std::string out;
  // descending monomial order reads naturally
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    const BigInt mag = abs(c);
    out += sgn(c) < 0 ? (out.empty() ? "-" : " - ") : (out.empty() ? "" : " + ");
    const bool constant = m.i == 0 && m.j == 0 && m.k == 0;
    std::string mono;
    auto var = [&mono](const char* name, std::uint32_t e) {
      if (e == 0) return;
      if (!mono.empty()) mono += '*';
      mono += name;
      if (e > 1) mono += "^" + std::to_string(e);
    };
    var("s", m.i);
    var("t", m.j);
    var("u", m.k);
    if (constant || mag != 1) {
      out += big_to_string(mag);
      if (!constant) out += '*';
    }
    out += mono;
  }
  return out;
}

nlohmann::json to_json(const TracePoly& p) {
  auto arr = nlohmann::json::array();
  for (const auto& [m, c] : p.terms()) {
    arr.push_back({{"i", m.i}, {"j", m.j}, {"k", m.k}, {"coeff", big_to_string(c)}});
  }
  return arr;
}

TracePoly trace_poly_from_json(const nlohmann::json& j) {
  std::map<Monomial, BigInt> terms;
  for (const auto& t : j) {
    terms[Monomial{t.at("i").get<std::uint32_t>(), t.at("j").get<std::uint32_t>(), t.at("k").get<std::uint32_t>()}] +=
        big_from_string(t.at("coeff").get<std::string>());
  }
  return TracePoly(std::move(terms));
}

}  // namespace tracemult
