#pragma once

// Forged word families with one trace class and many conjugacy classes.
//
// Level n uses primes p_1 < ... < p_n, the templates
//   W_n(x, y)    = (x^(p_n-1+q_n) y^(-q_n))^(k_n) x (x^(p_n-1+q_n) y^(-q_n)) x^-1
//   Wbar_n(x, y) = x (x^(p_n-1+q_n) y^(-q_n))^(k_n) x^-1 (x^(p_n-1+q_n) y^(-q_n))
// and the recursion w_{n,1} = W_n(w_{n-1,1}, w_{n-1,2}),
// w_{n,2} = Wbar_n(w_{n-1,1}, w_{n-1,2}), w_{n,i} = w_{n,1} with the level
// (n+2-i) pair exchanged for 3 <= i <= n+1.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tracemult/mat2.hpp"
#include "tracemult/trace_poly.hpp"
#include "tracemult/word.hpp"

namespace tracemult {

struct ForgeParams {
  int level = 0;
  std::vector<std::uint64_t> p;       // p_1..p_n
  std::vector<BigInt> q;              // q_1..q_n
  std::vector<BigInt> k;              // k_1..k_n
  std::vector<BigInt> m;              // m_1..m_{n-1}, total exponent sum of w_{j,1}
  std::vector<std::uint64_t> tried;   // candidate primes examined per level
};

struct Templates {
  SlpWord w;
  SlpWord w_bar;
};

// Templates in x = a, y = b.
Templates build_templates(std::uint64_t p, const BigInt& q, const BigInt& k);

struct WordFamily {
  int level = 0;
  std::vector<std::pair<SlpWord, SlpWord>> levels;  // (w_{L,1}, w_{L,2}) for L = 1..n
  std::vector<SlpWord> words;                       // w_{n,1}..w_{n,n+1}
};

WordFamily build_family(const ForgeParams& params);

// w_{n,1}^{[i]} for 3 <= i <= n+1: the level (n+2-i) pair exchanged.
SlpWord switch_image(const WordFamily& family, int i);

struct SearchOptions {
  std::optional<BigInt> origin;  // p_1 is the least prime above max(30, origin)
  std::uint64_t budget = 10000;  // candidate primes per level
};

// Level-by-level search. Deterministic: nothing here is random.
// Throws SearchExhausted, or TooLarge when a prime would reach 2^62.
ForgeParams choose_params(int n, const SearchOptions& opts = {});

// image[i][j] is the image of w_{n,j+1} over F_{p_{i+1}} under the Borel witness.
using ImageTable = std::vector<std::vector<Mat2<std::uint64_t>>>;

ImageTable image_table(std::span<const std::uint64_t> primes, std::span<const SlpWord> words);
ImageTable image_table_serial(std::span<const std::uint64_t> primes, std::span<const SlpWord> words);

struct P3Failure {
  int i = 0;  // 1-based prime index
  int j = 0;  // 1-based word index
  Mat2<std::uint64_t> image{};
};

// Row i must be identity on columns 1..n+1-i and a nontrivial
// +-[[1, x], [0, 1]] on column n+2-i. Returns the first offending cell.
std::optional<P3Failure> check_p3_shape(const ImageTable& table, std::span<const std::uint64_t> primes);

// Computes the table and throws P3Violation on the first bad cell.
ImageTable verify_P3(const ForgeParams& params, const WordFamily& family);

struct Verdict {
  int i = 0;  // 1-based, i < j
  int j = 0;
  int prime_index = 0;  // n + 2 - j
  std::uint64_t prime = 0;
  Mat2<std::uint64_t> image_i{};
  Mat2<std::uint64_t> image_j{};
};

std::vector<Verdict> build_verdicts(const ForgeParams& params, const ImageTable& table);

struct SymbolicEvidence {
  TracePoly w1;
  TracePoly w2;
};

struct CertifyOptions {
  SearchOptions search;
  std::uint64_t trials = 20;
  bool symbolic = true;  // exact trace polynomials at level 1
};

struct Certificate {
  int version = 1;
  std::uint64_t seed = 0;
  ForgeParams params;
  WordFamily family;
  ImageTable images;
  TraceEqualityEvidence trace_evidence;
  std::optional<SymbolicEvidence> symbolic;
  std::vector<Verdict> verdicts;
};

// Throws P3Violation, SearchExhausted, TooLarge or TraceMismatch.
Certificate certify(int n, std::uint64_t seed, const CertifyOptions& opts = {});

// Polynomial fingerprint used in place of the full coefficient list.
std::string symbolic_digest(const TracePoly& p);

nlohmann::json to_json(const Certificate& cert);
// Canonical text: sorted keys, two-space indent, trailing newline.
std::string certificate_text(const Certificate& cert);

struct VerifyReport {
  bool ok = false;
  std::string path;  // JSON pointer of the first divergence
  std::string message;
};

VerifyReport verify_certificate(const nlohmann::json& cert);

}  // namespace tracemult
