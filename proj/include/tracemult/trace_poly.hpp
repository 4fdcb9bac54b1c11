#pragma once

// Fricke trace polynomials: for a word W(x, y), the integer polynomial P with
// tr W(A, B) = P(tr A, tr B, tr AB) for every SL2 pair over every commutative
// ring. Variables are s = tr x, t = tr y, u = tr xy.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tracemult/mat2.hpp"
#include "tracemult/rng.hpp"
#include "tracemult/word.hpp"

namespace tracemult {

struct Monomial {
  std::uint32_t i = 0;  // power of s
  std::uint32_t j = 0;  // power of t
  std::uint32_t k = 0;  // power of u
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

class TracePoly {
 public:
  TracePoly() = default;
  explicit TracePoly(std::map<Monomial, BigInt> terms);

  // Zero coefficients are dropped on construction.
  const std::map<Monomial, BigInt>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  // P(s, s, u).
  TracePoly with_t_equal_s() const;

  friend bool operator==(const TracePoly&, const TracePoly&) = default;

 private:
  std::map<Monomial, BigInt> terms_;
};

// Symbolic size guards.
inline constexpr std::size_t kMaxSymbolicSyllables = 64;
inline constexpr std::uint64_t kMaxSymbolicLetters = 4096;

// Throws TooLarge when the cyclically reduced word exceeds either guard.
TracePoly trace_polynomial(const FlatWord& w);

// Horowitz symmetry: P_W(s, s, u) == P_{W(y, x)}(s, s, u).
bool check_symmetry(const FlatWord& tmpl);

std::string to_string(const TracePoly& p);
// [{"i":..,"j":..,"k":..,"coeff":"decimal"}, ...] in monomial order.
nlohmann::json to_json(const TracePoly& p);
TracePoly trace_poly_from_json(const nlohmann::json& j);

template <ScalarRing R>
typename R::value_type eval_trace_poly(const TracePoly& p, const R& r, const typename R::value_type& s,
                                       const typename R::value_type& t, const typename R::value_type& u) {
  auto power = [&r](const typename R::value_type& x, std::uint32_t n) {
    auto acc = r.one();
    auto base = x;
    for (; n != 0; n >>= 1U) {
      if (n & 1U) acc = r.mul(acc, base);
      base = r.mul(base, base);
    }
    return acc;
  };
  auto sum = r.zero();
  for (const auto& [m, c] : p.terms()) {
    auto term = r.mul(r.from_integer(c), r.mul(power(s, m.i), r.mul(power(t, m.j), power(u, m.k))));
    sum = r.add(sum, term);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Randomized trace equality for compressed word families

struct TraceMismatchWitness {
  std::uint64_t trial = 0;
  std::size_t word_i = 0;  // 0-based family indices
  std::size_t word_j = 0;
  std::uint64_t prime = 0;
  Mat2<std::uint64_t> image_a{};
  Mat2<std::uint64_t> image_b{};
  std::uint64_t trace_i = 0;
  std::uint64_t trace_j = 0;
};

struct TraceEqualityEvidence {
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> primes;  // one per trial
  std::optional<TraceMismatchWitness> mismatch;

  std::size_t distinct_primes() const;
};

// Trial t draws a prime P in [2^61, 2^62) and a uniform pair A, B in
// SL2(F_P) from derive_stream(seed, t), then compares the traces of every
// family member. The reported mismatch, if any, is the one with the lowest
// trial index. Results do not depend on the thread count.
TraceEqualityEvidence random_trace_equal(std::span<const SlpWord> family, std::uint64_t trials, std::uint64_t seed);
TraceEqualityEvidence random_trace_equal_serial(std::span<const SlpWord> family, std::uint64_t trials,
                                                std::uint64_t seed);

// Uniform element of SL2(F_p).
Mat2<std::uint64_t> random_sl2(const PrimeField& field, std::mt19937_64& gen);
// Uniform-start prime search in [2^61, 2^62).
std::uint64_t random_prime_61_62(std::mt19937_64& gen);

nlohmann::json to_json(const TraceEqualityEvidence& ev);
TraceEqualityEvidence trace_evidence_from_json(const nlohmann::json& j);

}  // namespace tracemult
