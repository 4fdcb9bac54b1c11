#pragma once

// Primality, constrained prime search, complete splitting of primes in
// number fields given by a monic polynomial, and an empirical density count.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tracemult/bigint.hpp"

namespace tracemult {

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);
// Exact below 2^64; above, a probable-prime test with error < 2^-80.
bool is_prime(const BigInt& n);

// Prime factorization (prime, multiplicity), ascending.
std::vector<std::pair<std::uint64_t, int>> factor_u64(std::uint64_t n);

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// Integer polynomial, coefficients low degree first, no trailing zeros.
struct IntPoly {
  std::vector<BigInt> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_monic() const { return !coeffs.empty() && coeffs.back() == 1; }
  friend bool operator==(const IntPoly&, const IntPoly&) = default;
};

// Accepts forms like "x^4+x^3+x^2+x+1", "x^2 - 2", "3*x^2-x". Throws ParseError.
IntPoly parse_int_poly(const std::string& text);
std::string to_string(const IntPoly& f);

struct NumberFieldSpec {
  IntPoly minimal_polynomial;
  int degree = 0;
  bool galois_claimed = false;

  // Throws std::invalid_argument unless f is monic of positive degree.
  static NumberFieldSpec from_polynomial(IntPoly f, bool galois_claimed);
};

struct ForbiddenResidues {
  std::uint64_t modulus;
  std::vector<std::uint64_t> residues;
};

struct PrimeSearchConstraints {
  BigInt strict_lower_bound = 0;
  std::vector<ForbiddenResidues> forbidden;
  // When set, the result must also exceed twice this value.
  std::optional<BigInt> doubling_floor;
};

bool avoids_residues(const BigInt& p, const std::vector<ForbiddenResidues>& forbidden);

// Smallest prime above every bound that avoids all forbidden residues.
// Throws std::invalid_argument if the constraints forbid every residue class
// coprime to some modulus.
BigInt next_prime_constrained(const PrimeSearchConstraints& c);

// True iff f mod p is a product of deg f distinct linear factors, i.e. p is
// unramified with all residue degrees one in Q[x]/(f).
bool splits_completely(const NumberFieldSpec& f, std::uint64_t p);

struct DensityReport {
  std::uint64_t limit = 0;
  std::uint64_t split = 0;
  std::uint64_t primes = 0;
  double ratio = 0.0;
};

// Counts over all primes <= limit. The OpenMP kernel and the serial
// reference return identical reports.
DensityReport density_estimate(const NumberFieldSpec& f, std::uint64_t limit);
DensityReport density_estimate_serial(const NumberFieldSpec& f, std::uint64_t limit);

}  // namespace tracemult
