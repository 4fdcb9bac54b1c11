#pragma once

// Test-side reference implementations. Deliberately naive and independent of
// the library code paths they check.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tracemult/word.hpp"

namespace oracle {

// Words as strings over a, A, b, B.
inline char inverse_letter(char c) {
  switch (c) {
    case 'a': return 'A';
    case 'A': return 'a';
    case 'b': return 'B';
    default: return 'b';
  }
}

inline std::string free_reduce(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (!out.empty() && out.back() == inverse_letter(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

inline std::string cyclic_core(const std::string& w) {
  std::string r = free_reduce(w);
  while (r.size() >= 2 && r.front() == inverse_letter(r.back())) r = r.substr(1, r.size() - 2);
  return r;
}

// Conjugate in the free group iff the cyclic cores are rotations of each other.
inline bool conjugate(const std::string& u, const std::string& v) {
  const std::string cu = cyclic_core(u);
  const std::string cv = cyclic_core(v);
  if (cu.size() != cv.size()) return false;
  if (cu.empty()) return true;
  for (std::size_t s = 0; s < cu.size(); ++s) {
    if (cu.substr(s) + cu.substr(0, s) == cv) return true;
  }
  return false;
}

inline std::string invert(const std::string& w) {
  std::string out(w.rbegin(), w.rend());
  for (char& c : out) c = inverse_letter(c);
  return out;
}

inline std::string random_letters(std::mt19937_64& g, std::size_t len) {
  static constexpr char kL[] = {'a', 'A', 'b', 'B'};
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(kL[g() % 4]);
  return s;
}

inline tracemult::FlatWord to_flat(const std::string& w) {
  std::vector<tracemult::Syllable> syl;
  for (char c : w) {
    const auto gen = (c == 'a' || c == 'A') ? tracemult::Gen::a : tracemult::Gen::b;
    syl.push_back({gen, (c == 'a' || c == 'b') ? 1 : -1});
  }
  return tracemult::FlatWord::reduce(syl);
}

inline std::string from_flat(const tracemult::FlatWord& w) {
  std::string s;
  for (const auto& syl : w.syllables()) {
    const char c = syl.gen == tracemult::Gen::a ? (syl.exp > 0 ? 'a' : 'A') : (syl.exp > 0 ? 'b' : 'B');
    for (std::int64_t i = 0; i < (syl.exp > 0 ? syl.exp : -syl.exp); ++i) s.push_back(c);
  }
  return s;
}

// 2x2 matrices mod p, p < 2^62.
struct M {
  std::uint64_t a, b, c, d;
  bool operator==(const M&) const = default;
};

inline std::uint64_t mm(std::uint64_t x, std::uint64_t y, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p);
}

inline M mul(const M& x, const M& y, std::uint64_t p) {
  return {(mm(x.a, y.a, p) + mm(x.b, y.c, p)) % p, (mm(x.a, y.b, p) + mm(x.b, y.d, p)) % p,
          (mm(x.c, y.a, p) + mm(x.d, y.c, p)) % p, (mm(x.c, y.b, p) + mm(x.d, y.d, p)) % p};
}

inline M adj(const M& x, std::uint64_t p) { return {x.d, (p - x.b) % p, (p - x.c) % p, x.a}; }

inline std::uint64_t modpow(std::uint64_t x, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  for (; e; e >>= 1U, x = mm(x, x, p)) {
    if (e & 1U) r = mm(r, x, p);
  }
  return r;
}

// letter-by-letter product of a flat word
inline M eval_letters(const std::string& w, const M& A, const M& B, std::uint64_t p) {
  const M Ai = adj(A, p);
  const M Bi = adj(B, p);
  M r{1, 0, 0, 1};
  for (char c : w) r = mul(r, c == 'a' ? A : c == 'A' ? Ai : c == 'b' ? B : Bi, p);
  return r;
}

inline bool psl_identity(const M& x, std::uint64_t p) {
  return x.b == 0 && x.c == 0 && ((x.a == 1 && x.d == 1) || (x.a == p - 1 && x.d == p - 1));
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace oracle
