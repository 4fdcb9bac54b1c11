#include "tracemult/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>

#include "tracemult/errors.hpp"

namespace tracemult {

std::string to_string(ElementClass c) {
  switch (c) {
    case ElementClass::loxodromic:
      return "loxodromic";
    case ElementClass::parabolic_or_identity:
      return "parabolic-or-identity";
    case ElementClass::elliptic:
      return "elliptic";
  }
  return "unknown";
}

ElementClass classify(Complex tr, double tol) {
  const Complex t2 = tr * tr;
  const bool on_segment = std::abs(t2.imag()) <= tol && t2.real() >= -tol && t2.real() <= 4.0 + tol;
  if (!on_segment) return ElementClass::loxodromic;
  if (std::abs(tr - 2.0) <= tol || std::abs(tr + 2.0) <= tol) return ElementClass::parabolic_or_identity;
  return ElementClass::elliptic;
}

ComplexLength complex_length(Complex tr, double tol) {
  if (classify(tr, tol) != ElementClass::loxodromic) {
    throw NotLoxodromic("trace " + ComplexField().to_string(tr) + " is not loxodromic");
  }
  constexpr double pi = std::numbers::pi;
  const Complex z = 2.0 * std::acosh(tr / 2.0);
  ComplexLength out;
  out.ell = std::abs(z.real());
  double theta = std::remainder(z.real() < 0 ? -z.imag() : z.imag(), 2 * pi);
  if (theta <= -pi + 1e-12) theta = pi;
  out.theta = theta;
  return out;
}

Complex trace_from_length(const ComplexLength& l) { return 2.0 * std::cosh(Complex(l.ell, l.theta) / 2.0); }

// ---------------------------------------------------------------------------
// Enumeration

namespace {

// letters: 0 = a, 1 = A, 2 = b, 3 = B; the inverse of l is l ^ 1
using Letters = std::vector<std::uint8_t>;

bool rotation_less(const Letters& w, const Letters& v, std::size_t shift) {
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = v[(i + shift) % n];
    if (x != w[i]) return x < w[i];
  }
  return false;
}

bool is_canonical(const Letters& w, bool merge_inverses) {
  for (std::size_t s = 1; s < w.size(); ++s) {
    if (rotation_less(w, w, s)) return false;
  }
  if (merge_inverses) {
    Letters inv(w.rbegin(), w.rend());
    for (auto& l : inv) l ^= 1U;
    for (std::size_t s = 0; s < inv.size(); ++s) {
      if (rotation_less(w, inv, s)) return false;
    }
  }
  return true;
}

void extend(Letters& w, std::size_t len, bool merge, std::vector<Letters>& out) {
  if (w.size() == len) {
    if ((w.back() ^ 1U) != w.front() && is_canonical(w, merge)) out.push_back(w);
    return;
  }
  for (std::uint8_t l = 0; l < 4; ++l) {
    if (!w.empty() && (w.back() ^ 1U) == l) continue;
    // a canonical word starts with its least letter
    if (!w.empty() && l < w.front()) continue;
    w.push_back(l);
    extend(w, len, merge, out);
    w.pop_back();
  }
}

std::vector<Letters> representatives(int max_len, bool merge) {
  std::vector<Letters> out;
  for (int len = 1; len <= max_len; ++len) {
    Letters w;
    extend(w, static_cast<std::size_t>(len), merge, out);
  }
  return out;
}

std::string letters_text(const Letters& w) {
  static constexpr char kNames[] = {'a', 'A', 'b', 'B'};
  std::string s;
  for (auto l : w) s += kNames[l];
  return s;
}

std::optional<ComplexLength> length_of(const ComplexField& C, const std::array<Mat2<Complex>, 4>& gens,
                                       const Letters& w, double tol) {
  Mat2<Complex> m = mat_identity(C);
  for (auto l : w) m = mat_mul(C, m, gens[l]);
  const Complex tr = mat_trace(C, m);
  if (classify(tr, tol) != ElementClass::loxodromic) return std::nullopt;
  return complex_length(tr, tol);
}

std::array<Mat2<Complex>, 4> letter_images(const WitnessAssignment<ComplexField>& asg) {
  const auto& C = asg.ring;
  return {asg.image_of_a, mat_inv(C, asg.image_of_a), asg.image_of_b, mat_inv(C, asg.image_of_b)};
}

void check_len(const SpectrumOptions& opts) {
  if (opts.max_len < 1 || opts.max_len > kMaxSpectrumLength) {
    throw std::invalid_argument("max_len must be in 1.." + std::to_string(kMaxSpectrumLength));
  }
}

std::vector<SpectrumEntry> finish(const std::vector<Letters>& reps, const std::vector<std::optional<ComplexLength>>& ls,
                                  double tol) {
  std::vector<std::pair<std::string, ComplexLength>> items;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (ls[i]) items.emplace_back(letters_text(reps[i]), *ls[i]);
  }
  return bucket_lengths(items, tol);
}

}  // namespace

std::vector<std::string> conjugacy_representatives(int max_len, bool merge_inverses) {
  std::vector<std::string> out;
  for (const auto& w : representatives(max_len, merge_inverses)) out.push_back(letters_text(w));
  return out;
}

std::vector<SpectrumEntry> bucket_lengths(const std::vector<std::pair<std::string, ComplexLength>>& items,
                                          double tol) {
  constexpr double two_pi = 2 * std::numbers::pi;
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&items](std::size_t x, std::size_t y) {
    const auto& a = items[x].second;
    const auto& b = items[y].second;
    if (a.ell != b.ell) return a.ell < b.ell;
    if (a.theta != b.theta) return a.theta < b.theta;
    return items[x].first < items[y].first;
  });

  std::vector<std::size_t> parent(order.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& li = items[order[i]].second;
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto& lj = items[order[j]].second;
      if (lj.ell - li.ell > tol) break;
      double dt = std::fabs(lj.theta - li.theta);
      dt = std::min(dt, two_pi - dt);
      if (dt <= tol) parent[find(j)] = find(i);
    }
  }

  // components keyed by their first sorted position
  std::vector<SpectrumEntry> out;
  std::vector<std::size_t> slot(order.size(), SIZE_MAX);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t root = find(i);
    if (slot[root] == SIZE_MAX) {
      slot[root] = out.size();
      out.push_back({items[order[i]].second, 0, {}});
    }
    auto& e = out[slot[root]];
    ++e.multiplicity;
    e.representatives.push_back(items[order[i]].first);
  }
  return out;
}

std::vector<SpectrumEntry> enumerate_spectrum_serial(const WitnessAssignment<ComplexField>& asg,
                                                     const SpectrumOptions& opts) {
  check_len(opts);
  const auto reps = representatives(opts.max_len, opts.merge_inverses);
  const auto gens = letter_images(asg);
  std::vector<std::optional<ComplexLength>> ls;
  for (const auto& w : reps) ls.push_back(length_of(asg.ring, gens, w, opts.tol));
  return finish(reps, ls, opts.tol);
}

std::vector<SpectrumEntry> enumerate_spectrum(const WitnessAssignment<ComplexField>& asg,
                                              const SpectrumOptions& opts) {
  check_len(opts);
  const auto reps = representatives(opts.max_len, opts.merge_inverses);
  const auto gens = letter_images(asg);
  std::vector<std::optional<ComplexLength>> ls(reps.size());
  const auto n = static_cast<std::int64_t>(reps.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    ls[k] = length_of(asg.ring, gens, reps[k], opts.tol);
  }
  return finish(reps, ls, opts.tol);
}

std::vector<SpectrumEntry> bucket_words(const WitnessAssignment<ComplexField>& asg,
                                        const std::vector<std::pair<std::string, SlpWord>>& words, double tol) {
  WordEvaluator<ComplexField> ev(asg);
  std::vector<std::pair<std::string, ComplexLength>> items;
  for (const auto& [name, w] : words) {
    const Complex tr = mat_trace(asg.ring, ev(w));
    if (classify(tr, tol) == ElementClass::loxodromic) items.emplace_back(name, complex_length(tr, tol));
  }
  return bucket_lengths(items, tol);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im") || !j["re"].is_number() || !j["im"].is_number()) {
    throw ParseError("matrix entry must be {\"re\": number, \"im\": number}");
  }
  return {j["re"].get<double>(), j["im"].get<double>()};
}

Mat2<Complex> matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) throw ParseError("a generator must list 4 entries row-major");
  return {complex_from_json(j[0]), complex_from_json(j[1]), complex_from_json(j[2]), complex_from_json(j[3])};
}

nlohmann::json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace

WitnessAssignment<ComplexField> generators_from_json(const nlohmann::json& j, double tol) {
  if (!j.is_array() || j.size() != 2) throw ParseError("generators file must hold a list of two matrices");
  const ComplexField C(tol);
  WitnessAssignment<ComplexField> asg{C, matrix_from_json(j[0]), matrix_from_json(j[1])};
  for (const auto* m : {&asg.image_of_a, &asg.image_of_b}) {
    if (std::abs(mat_det(C, *m) - 1.0) > 1e-6) throw ParseError("generator determinant is not 1");
  }
  return asg;
}

nlohmann::json generators_to_json(const WitnessAssignment<ComplexField>& asg) {
  auto one = [](const Mat2<Complex>& m) {
    return nlohmann::json::array({complex_json(m.a11), complex_json(m.a12), complex_json(m.a21), complex_json(m.a22)});
  };
  return nlohmann::json::array({one(asg.image_of_a), one(asg.image_of_b)});
}

nlohmann::json to_json(const std::vector<SpectrumEntry>& entries) {
  auto arr = nlohmann::json::array();
  for (const auto& e : entries) {
    arr.push_back({{"ell", e.length.ell},
                   {"theta", e.length.theta},
                   {"multiplicity", e.multiplicity},
                   {"representatives", e.representatives}});
  }
  return arr;
}

}  // namespace tracemult
