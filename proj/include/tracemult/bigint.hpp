#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace tracemult {

using BigInt = mpz_class;

inline BigInt big_from_u64(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

inline BigInt big_from_i64(std::int64_t v) {
  if (v >= 0) return big_from_u64(static_cast<std::uint64_t>(v));
  // -(v+1) avoids overflow at INT64_MIN
  BigInt r = big_from_u64(static_cast<std::uint64_t>(-(v + 1)));
  return -r - 1;
}

inline bool fits_u64(const BigInt& v) {
  return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t big_to_u64(const BigInt& v) {
  std::uint64_t out = 0;
  if (sgn(v) == 0) return 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

inline std::optional<std::int64_t> big_to_i64(const BigInt& v) {
  BigInt mag = abs(v);
  if (mpz_sizeinbase(mag.get_mpz_t(), 2) > 63) return std::nullopt;
  auto m = static_cast<std::int64_t>(big_to_u64(mag));
  return sgn(v) < 0 ? -m : m;
}

inline std::string big_to_string(const BigInt& v) { return v.get_str(10); }

// Throws std::invalid_argument on anything other than an optionally signed
// decimal integer.
BigInt big_from_string(const std::string& s);

}  // namespace tracemult
