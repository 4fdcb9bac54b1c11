#include "tracemult/ring.hpp"

#include <cstdio>
#include <stdexcept>

namespace tracemult {

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p < 2 || p >= kMaxModulus) throw std::invalid_argument("prime field modulus out of range: " + std::to_string(p));
}

PrimeField::value_type PrimeField::pow(value_type x, std::uint64_t e) const {
  value_type result = one();
  value_type base = x % p_;
  while (e != 0) {
    if (e & 1U) result = mul(result, base);
    base = mul(base, base);
    e >>= 1U;
  }
  return result;
}

PrimeField::value_type PrimeField::pow(value_type x, const BigInt& e) const {
  if (sgn(e) < 0) return pow(inv(x), BigInt(-e));
  value_type result = one();
  value_type base = x % p_;
  const auto bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = mul(result, result);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mul(result, base);
  }
  return result;
}

PrimeField::value_type PrimeField::inv(value_type x) const {
  if (x % p_ == 0) throw std::domain_error("inverse of zero in F_" + std::to_string(p_));
  // extended Euclid on signed 128-bit to stay exact for p < 2^62
  __int128 r0 = p_;
  __int128 r1 = x % p_;
  __int128 s0 = 0;
  __int128 s1 = 1;
  while (r1 != 0) {
    __int128 q = r0 / r1;
    __int128 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  __int128 r = s0 % static_cast<__int128>(p_);
  if (r < 0) r += p_;
  return static_cast<value_type>(r);
}

PrimeField::value_type PrimeField::from_integer(const BigInt& n) const {
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), p_);
  return big_to_u64(r);
}

PrimeField::value_type PrimeField::from_i64(std::int64_t n) const {
  __int128 r = static_cast<__int128>(n) % static_cast<__int128>(p_);
  if (r < 0) r += p_;
  return static_cast<value_type>(r);
}

PrimeField::value_type PrimeField::parse(const std::string& s) const {
  BigInt v = big_from_string(s);
  if (sgn(v) < 0 || v >= big_from_u64(p_)) throw std::invalid_argument("residue out of range: " + s);
  return big_to_u64(v);
}

BigPrimeField::BigPrimeField(BigInt p) : p_(std::move(p)) {
  if (p_ < 2) throw std::invalid_argument("prime field modulus out of range");
}

BigPrimeField::value_type BigPrimeField::inv(const value_type& x) const {
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), p_.get_mpz_t()) == 0) {
    throw std::domain_error("inverse of non-unit in F_p");
  }
  return r;
}

Dyadic DyadicRing::make(BigInt num, std::int64_t shift) {
  if (sgn(num) == 0) return {};
  if (shift < 0) {
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
    return {std::move(num), 0};
  }
  if (shift > 0) {
    auto twos = static_cast<std::int64_t>(mpz_scan1(num.get_mpz_t(), 0));
    auto drop = std::min(twos, shift);
    mpz_fdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(drop));
    shift -= drop;
  }
  return {std::move(num), shift};
}

Dyadic DyadicRing::add(const Dyadic& x, const Dyadic& y) const {
  const std::int64_t s = std::max(x.shift, y.shift);
  BigInt xn = x.num;
  BigInt yn = y.num;
  mpz_mul_2exp(xn.get_mpz_t(), xn.get_mpz_t(), static_cast<mp_bitcnt_t>(s - x.shift));
  mpz_mul_2exp(yn.get_mpz_t(), yn.get_mpz_t(), static_cast<mp_bitcnt_t>(s - y.shift));
  return make(xn + yn, s);
}

Dyadic DyadicRing::inv(const Dyadic& x) const {
  if (!is_unit(x)) throw std::domain_error("not a unit in Z[1/2]: " + to_string(x));
  const BigInt mag = abs(x.num);
  const auto k = static_cast<std::int64_t>(mpz_sizeinbase(mag.get_mpz_t(), 2) - 1);
  // x = +-2^k / 2^shift, so 1/x = +-2^shift / 2^k
  return make(sgn(x.num) < 0 ? BigInt(-1) : BigInt(1), k - x.shift);
}

std::string DyadicRing::to_string(const Dyadic& x) const {
  if (x.shift == 0) return big_to_string(x.num);
  return big_to_string(x.num) + "/2^" + std::to_string(x.shift);
}

Dyadic DyadicRing::parse(const std::string& s) const {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return make(big_from_string(s), 0);
  if (s.compare(slash, 3, "/2^") != 0) throw std::invalid_argument("bad dyadic literal: " + s);
  const BigInt k = big_from_string(s.substr(slash + 3));
  auto shift = big_to_i64(k);
  if (!shift || *shift < 0) throw std::invalid_argument("bad dyadic exponent: " + s);
  return make(big_from_string(s.substr(0, slash)), *shift);
}

mpq_class RationalField::inv(const mpq_class& x) const {
  if (sgn(x) == 0) throw std::domain_error("inverse of zero in Q");
  return 1 / x;
}

std::complex<double> ComplexField::inv(std::complex<double> x) const {
  if (!is_unit(x)) throw std::domain_error("inverse of (near) zero complex number");
  return 1.0 / x;
}

std::string ComplexField::to_string(std::complex<double> x) const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", x.real(), x.imag());
  return buf;
}

PrimeField::value_type reduce_dyadic(const Dyadic& x, const PrimeField& field) {
  if (field.modulus() == 2) throw std::domain_error("Z[1/2] does not reduce mod 2");
  const auto half = field.inv(2);
  return field.mul(field.from_integer(x.num), field.pow(half, static_cast<std::uint64_t>(x.shift)));
}

}  // namespace tracemult
