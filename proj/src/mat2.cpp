#include "tracemult/mat2.hpp"

#include <algorithm>
#include <limits>

#include "tracemult/primes.hpp"

namespace tracemult {

std::uint64_t order_in_psl2(const PrimeField& field, const Mat2<std::uint64_t>& x) {
  const std::uint64_t p = field.modulus();
  const std::uint64_t g = p == 2 ? 1 : 2;
  // Every element of PSL2(F_p) has order dividing p, (p-1)/g or (p+1)/g.
  const std::uint64_t candidates[] = {p, (p - 1) / g, (p + 1) / g};
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t n : candidates) {
    if (n == 0 || !psl_is_identity(field, mat_pow(field, x, big_from_u64(n)))) continue;
    for (const auto& [q, mult] : factor_u64(n)) {
      for (int k = 0; k < mult && n % q == 0; ++k) {
        if (!psl_is_identity(field, mat_pow(field, x, big_from_u64(n / q)))) break;
        n /= q;
      }
    }
    best = std::min(best, n);
  }
  return best;
}

WitnessAssignment<PrimeField> borel_witness(const PrimeField& field) {
  const auto two = field.from_i64(2);
  const auto half = field.inv(two);
  return {field, {two, field.one(), 0, half}, {two, 0, 0, half}};
}

WitnessAssignment<DyadicRing> borel_witness_dyadic() {
  const DyadicRing r;
  const Dyadic two = r.from_integer(2);
  const Dyadic half = DyadicRing::make(1, 1);
  return {r, {two, r.one(), r.zero(), half}, {two, r.zero(), r.zero(), half}};
}

}  // namespace tracemult
