#pragma once

// Scalar rings for 2x2 matrix arithmetic. A ring object carries any runtime
// parameters (modulus, tolerance); elements are plain values.

#include <complex>
#include <concepts>
#include <cstdint>
#include <string>

#include "tracemult/bigint.hpp"

namespace tracemult {

template <class R>
concept ScalarRing = requires(const R& r, const typename R::value_type& x, const BigInt& n) {
  { r.zero() } -> std::same_as<typename R::value_type>;
  { r.one() } -> std::same_as<typename R::value_type>;
  { r.add(x, x) } -> std::same_as<typename R::value_type>;
  { r.sub(x, x) } -> std::same_as<typename R::value_type>;
  { r.neg(x) } -> std::same_as<typename R::value_type>;
  { r.mul(x, x) } -> std::same_as<typename R::value_type>;
  { r.inv(x) } -> std::same_as<typename R::value_type>;
  { r.is_unit(x) } -> std::same_as<bool>;
  { r.eq(x, x) } -> std::same_as<bool>;
  { r.from_integer(n) } -> std::same_as<typename R::value_type>;
  { r.characteristic() } -> std::same_as<BigInt>;
  { r.to_string(x) } -> std::same_as<std::string>;
};

// Z/pZ for a prime p < 2^62, machine arithmetic.
class PrimeField {
 public:
  using value_type = std::uint64_t;
  static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

  // Throws std::invalid_argument unless 2 <= p < 2^62. Primality is the
  // caller's contract.
  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1 % p_; }
  value_type add(value_type x, value_type y) const {
    value_type s = x + y;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type x, value_type y) const { return x >= y ? x - y : x + p_ - y; }
  value_type neg(value_type x) const { return x == 0 ? 0 : p_ - x; }
  value_type mul(value_type x, value_type y) const {
    return static_cast<value_type>(static_cast<unsigned __int128>(x) * y % p_);
  }
  value_type pow(value_type x, std::uint64_t e) const;
  value_type pow(value_type x, const BigInt& e) const;
  // Throws std::domain_error on zero.
  value_type inv(value_type x) const;
  bool is_unit(value_type x) const { return x != 0; }
  bool eq(value_type x, value_type y) const { return x == y; }
  value_type from_integer(const BigInt& n) const;
  value_type from_i64(std::int64_t n) const;
  BigInt characteristic() const { return big_from_u64(p_); }
  std::string to_string(value_type x) const { return std::to_string(x); }
  // Parses a decimal residue; throws std::invalid_argument if not in [0, p).
  value_type parse(const std::string& s) const;

 private:
  std::uint64_t p_;
};

// Z/pZ for a prime of any size.
class BigPrimeField {
 public:
  using value_type = BigInt;

  explicit BigPrimeField(BigInt p);

  const BigInt& modulus() const { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type add(const value_type& x, const value_type& y) const { return norm(x + y); }
  value_type sub(const value_type& x, const value_type& y) const { return norm(x - y); }
  value_type neg(const value_type& x) const { return norm(-x); }
  value_type mul(const value_type& x, const value_type& y) const { return norm(x * y); }
  value_type inv(const value_type& x) const;
  bool is_unit(const value_type& x) const { return sgn(x) != 0; }
  bool eq(const value_type& x, const value_type& y) const { return x == y; }
  value_type from_integer(const BigInt& n) const { return norm(n); }
  BigInt characteristic() const { return p_; }
  std::string to_string(const value_type& x) const { return big_to_string(x); }

 private:
  value_type norm(const BigInt& x) const {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), p_.get_mpz_t());
    return r;
  }
  BigInt p_;
};

// Element of Z[1/2]: num / 2^shift with shift >= 0 and num odd whenever
// shift > 0 (zero is 0/2^0). The normal form makes equality structural.
struct Dyadic {
  BigInt num;
  std::int64_t shift = 0;
  friend bool operator==(const Dyadic& x, const Dyadic& y) { return x.num == y.num && x.shift == y.shift; }
};

class DyadicRing {
 public:
  using value_type = Dyadic;

  static Dyadic make(BigInt num, std::int64_t shift);

  value_type zero() const { return {}; }
  value_type one() const { return {BigInt(1), 0}; }
  value_type add(const value_type& x, const value_type& y) const;
  value_type sub(const value_type& x, const value_type& y) const { return add(x, neg(y)); }
  value_type neg(const value_type& x) const { return {-x.num, x.shift}; }
  value_type mul(const value_type& x, const value_type& y) const { return make(x.num * y.num, x.shift + y.shift); }
  // Units are exactly +-2^k. Throws std::domain_error otherwise.
  value_type inv(const value_type& x) const;
  bool is_unit(const value_type& x) const { return abs(x.num) == 1 || is_power_of_two(abs(x.num)); }
  bool eq(const value_type& x, const value_type& y) const { return x == y; }
  value_type from_integer(const BigInt& n) const { return make(n, 0); }
  BigInt characteristic() const { return 0; }
  // "n" or "n/2^k".
  std::string to_string(const value_type& x) const;
  value_type parse(const std::string& s) const;

 private:
  static bool is_power_of_two(const BigInt& v) { return sgn(v) > 0 && mpz_popcount(v.get_mpz_t()) == 1; }
};

class RationalField {
 public:
  using value_type = mpq_class;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type add(const value_type& x, const value_type& y) const { return x + y; }
  value_type sub(const value_type& x, const value_type& y) const { return x - y; }
  value_type neg(const value_type& x) const { return -x; }
  value_type mul(const value_type& x, const value_type& y) const { return x * y; }
  value_type inv(const value_type& x) const;
  bool is_unit(const value_type& x) const { return sgn(x) != 0; }
  bool eq(const value_type& x, const value_type& y) const { return x == y; }
  value_type from_integer(const BigInt& n) const { return mpq_class(n); }
  BigInt characteristic() const { return 0; }
  std::string to_string(const value_type& x) const { return x.get_str(10); }
};

// Double-precision complex numbers; eq() compares within a caller-supplied
// absolute tolerance.
class ComplexField {
 public:
  using value_type = std::complex<double>;

  explicit ComplexField(double tol = 1e-9) : tol_(tol) {}
  double tolerance() const { return tol_; }

  value_type zero() const { return {0.0, 0.0}; }
  value_type one() const { return {1.0, 0.0}; }
  value_type add(value_type x, value_type y) const { return x + y; }
  value_type sub(value_type x, value_type y) const { return x - y; }
  value_type neg(value_type x) const { return -x; }
  value_type mul(value_type x, value_type y) const { return x * y; }
  value_type inv(value_type x) const;
  bool is_unit(value_type x) const { return std::abs(x) > tol_; }
  bool eq(value_type x, value_type y) const { return std::abs(x - y) <= tol_; }
  value_type from_integer(const BigInt& n) const { return {n.get_d(), 0.0}; }
  BigInt characteristic() const { return 0; }
  std::string to_string(value_type x) const;

 private:
  double tol_;
};

// Reduction Z[1/2] -> F_p for odd p.
PrimeField::value_type reduce_dyadic(const Dyadic& x, const PrimeField& field);

}  // namespace tracemult
