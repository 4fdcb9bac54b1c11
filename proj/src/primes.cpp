#include "tracemult/primes.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <map>
#include <set>
#include <stdexcept>

#include "tracemult/errors.hpp"
#include "tracemult/ring.hpp"

namespace tracemult {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1U;
  }
  return r;
}

std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t y = 2;
    std::uint64_t x = 2;
    std::uint64_t q = 1;
    std::uint64_t g = 1;
    std::uint64_t ys = 2;
    const std::uint64_t m = 128;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    for (std::uint64_t r = 1; g == 1; r <<= 1U) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s && composite; ++r) {
      x = mulmod(x, x, n);
      composite = x != n - 1;
    }
    if (composite) return false;
  }
  return true;
}

bool is_prime(const BigInt& n) {
  if (sgn(n) < 0) return false;
  if (fits_u64(n)) return is_prime_u64(big_to_u64(n));
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

std::vector<std::pair<std::uint64_t, int>> factor_u64(std::uint64_t n) {
  std::vector<std::uint64_t> flat;
  for (std::uint64_t p = 2; p < 1000 && p * p <= n; ++p) {
    while (n % p == 0) {
      flat.push_back(p);
      n /= p;
    }
  }
  factor_rec(n, flat);
  std::sort(flat.begin(), flat.end());
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p : flat) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Integer polynomials

IntPoly parse_int_poly(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ParseError("empty polynomial");
  std::vector<BigInt> coeffs;
  std::size_t i = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError(what + " at offset " + std::to_string(i) + " in polynomial '" + text + "'");
  };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      fail("expected '+' or '-'");
    }
    BigInt coef = 1;
    bool has_coef = false;
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) {
      coef = BigInt(s.substr(start, i - start), 10);
      has_coef = true;
    }
    std::size_t exp = 0;
    if (i < s.size() && s[i] == '*') {
      if (!has_coef) fail("dangling '*'");
      ++i;
      if (i >= s.size() || s[i] != 'x') fail("expected 'x'");
    } else if (has_coef && i < s.size() && s[i] == 'x') {
      fail("expected '*' between coefficient and 'x'");
    }
    if (i < s.size() && s[i] == 'x') {
      ++i;
      exp = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) fail("expected exponent");
        exp = std::stoul(s.substr(start, i - start));
        if (exp > 4096) fail("degree too large");
      }
    } else if (!has_coef) {
      fail("expected term");
    }
    if (coeffs.size() <= exp) coeffs.resize(exp + 1, BigInt(0));
    coeffs[exp] += sign * coef;
  }
  while (!coeffs.empty() && sgn(coeffs.back()) == 0) coeffs.pop_back();
  return IntPoly{coeffs};
}

std::string to_string(const IntPoly& f) {
  if (f.coeffs.empty()) return "0";
  std::string out;
  for (int d = f.degree(); d >= 0; --d) {
    const BigInt& c = f.coeffs[d];
    if (sgn(c) == 0) continue;
    const BigInt mag = abs(c);
    out += sgn(c) < 0 ? "-" : (out.empty() ? "" : "+");
    if (mag != 1 || d == 0) out += big_to_string(mag);
    if (d >= 1) out += (mag != 1 ? "*x" : "x");
    if (d >= 2) out += "^" + std::to_string(d);
  }
  return out;
}

NumberFieldSpec NumberFieldSpec::from_polynomial(IntPoly f, bool galois_claimed) {
  if (!f.is_monic() || f.degree() < 1) throw std::invalid_argument("number field polynomial must be monic of positive degree");
  NumberFieldSpec spec;
  spec.degree = f.degree();
  spec.minimal_polynomial = std::move(f);
  spec.galois_claimed = galois_claimed;
  return spec;
}

// ---------------------------------------------------------------------------
// Constrained search

bool avoids_residues(const BigInt& p, const std::vector<ForbiddenResidues>& forbidden) {
  for (const auto& f : forbidden) {
    const std::uint64_t r = mpz_fdiv_ui(p.get_mpz_t(), f.modulus);
    if (std::find(f.residues.begin(), f.residues.end(), r) != f.residues.end()) return false;
  }
  return true;
}

BigInt next_prime_constrained(const PrimeSearchConstraints& c) {
  BigInt lower = c.strict_lower_bound;
  if (c.doubling_floor) lower = std::max(lower, BigInt(2 * *c.doubling_floor));
  // several entries may share a modulus, so pool them first
  std::map<std::uint64_t, std::set<std::uint64_t>> hit;
  for (const auto& f : c.forbidden) {
    if (f.modulus < 2) throw std::invalid_argument("forbidden residue modulus must be >= 2");
    auto& h = hit[f.modulus];
    for (auto r : f.residues) {
      if (r % f.modulus != 0) h.insert(r % f.modulus);
    }
  }
  // every prime above a modulus is a unit mod it
  std::optional<BigInt> cap;
  for (const auto& [modulus, h] : hit) {
    if (h.size() == modulus - 1 && (!cap || big_from_u64(modulus) < *cap)) cap = big_from_u64(modulus);
  }
  if (cap && *cap <= lower) throw std::invalid_argument("forbidden residues exclude every prime");
  BigInt cand = lower + 1;
  if (cand < 2) cand = 2;
  while (true) {
    const bool small = cand <= 5;
    const bool wheel_ok = small || (mpz_fdiv_ui(cand.get_mpz_t(), 2) != 0 && mpz_fdiv_ui(cand.get_mpz_t(), 3) != 0 &&
                                    mpz_fdiv_ui(cand.get_mpz_t(), 5) != 0);
    if (wheel_ok && avoids_residues(cand, c.forbidden) && is_prime(cand)) return cand;
    ++cand;
    if (cap && cand > *cap) throw std::invalid_argument("forbidden residues exclude every prime");
  }
}

// ---------------------------------------------------------------------------
// Splitting

namespace {

using Poly = std::vector<std::uint64_t>;  // residues mod p, low degree first

// (x * y) mod f for a monic f of degree d, inputs of degree < d.
Poly mulmod_poly(const PrimeField& F, const Poly& x, const Poly& y, const Poly& f) {
  const std::size_t d = f.size() - 1;
  Poly prod(2 * d, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) prod[i + j] = F.add(prod[i + j], F.mul(x[i], y[j]));
  }
  for (std::size_t k = prod.size(); k-- > d;) {
    const std::uint64_t lead = prod[k];
    if (lead == 0) continue;
    prod[k] = 0;
    for (std::size_t j = 0; j < d; ++j) prod[k - d + j] = F.sub(prod[k - d + j], F.mul(lead, f[j]));
  }
  prod.resize(d);
  return prod;
}

}  // namespace

bool splits_completely(const NumberFieldSpec& spec, std::uint64_t p) {
  const PrimeField F(p);
  const auto& coeffs = spec.minimal_polynomial.coeffs;
  Poly f(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) f[i] = F.from_integer(coeffs[i]);
  const std::size_t d = f.size() - 1;
  // f | X^p - X exactly when f mod p has d distinct roots in F_p.
  Poly x(d, 0);
  if (d == 1) {
    x[0] = F.neg(f[0]);
  } else {
    x[1] = 1;
  }
  Poly result(d, 0);
  result[0] = 1;
  Poly base = x;
  for (std::uint64_t e = p; e != 0; e >>= 1U) {
    if (e & 1U) result = mulmod_poly(F, result, base, f);
    base = mulmod_poly(F, base, base, f);
  }
  return result == x;
}

DensityReport density_estimate_serial(const NumberFieldSpec& f, std::uint64_t limit) {
  const auto primes = primes_up_to(limit);
  DensityReport rep{limit, 0, primes.size(), 0.0};
  for (std::uint64_t p : primes) {
    if (splits_completely(f, p)) ++rep.split;
  }
  rep.ratio = rep.primes == 0 ? 0.0 : static_cast<double>(rep.split) / static_cast<double>(rep.primes);
  return rep;
}

DensityReport density_estimate(const NumberFieldSpec& f, std::uint64_t limit) {
  const auto primes = primes_up_to(limit);
  const auto n = static_cast<std::int64_t>(primes.size());
  std::uint64_t split = 0;
#pragma omp parallel for schedule(static) reduction(+ : split)
  for (std::int64_t i = 0; i < n; ++i) {
    if (splits_completely(f, primes[static_cast<std::size_t>(i)])) ++split;
  }
  DensityReport rep{limit, split, primes.size(), 0.0};
  rep.ratio = rep.primes == 0 ? 0.0 : static_cast<double>(rep.split) / static_cast<double>(rep.primes);
  return rep;
}

}  // namespace tracemult
