#pragma once

// Words in the free group on two generators a, b.
//
// FlatWord is a freely reduced word in syllable (run-length) form.
// SlpWord is a straight-line program: an immutable DAG of leaves, products
// and integer powers whose flat expansion may be astronomically long.
// Templates W(x, y) are ordinary SlpWords in which a plays x and b plays y.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tracemult/bigint.hpp"

namespace tracemult {

enum class Gen : std::uint8_t { a = 0, b = 1 };

inline Gen other(Gen g) { return g == Gen::a ? Gen::b : Gen::a; }

struct Syllable {
  Gen gen;
  std::int64_t exp;  // nonzero
  friend bool operator==(const Syllable&, const Syllable&) = default;
};

class FlatWord {
 public:
  FlatWord() = default;

  // Free reduction of an arbitrary syllable sequence (zero exponents allowed).
  static FlatWord reduce(std::span<const Syllable> letters);
  static FlatWord letter(Gen g, std::int64_t exp = 1);

  const std::vector<Syllable>& syllables() const { return syl_; }
  std::size_t syllable_count() const { return syl_.size(); }
  bool is_identity() const { return syl_.empty(); }
  // Number of letters, i.e. the sum of |exponent|.
  std::uint64_t length() const;

  friend bool operator==(const FlatWord&, const FlatWord&) = default;

 private:
  std::vector<Syllable> syl_;
};

FlatWord concat(const FlatWord& u, const FlatWord& v);
FlatWord invert(const FlatWord& u);
FlatWord swap_generators(const FlatWord& u);

// u^e, throwing TooLarge when the reduced result would exceed `limit` letters.
FlatWord power(const FlatWord& u, const BigInt& e, std::uint64_t limit);

// Writes u = c * core * c^-1 with core cyclically reduced. Returns core.
FlatWord cyclic_reduce(const FlatWord& u, FlatWord* conjugator = nullptr);

bool is_conjugate_free(const FlatWord& u, const FlatWord& v);

std::string to_string(const FlatWord& u);

struct ExponentVector {
  BigInt e_a;
  BigInt e_b;
  BigInt total;

  ExponentVector() = default;
  ExponentVector(BigInt a, BigInt b) : e_a(std::move(a)), e_b(std::move(b)), total(e_a + e_b) {}

  friend ExponentVector operator+(const ExponentVector& x, const ExponentVector& y) {
    return {x.e_a + y.e_a, x.e_b + y.e_b};
  }
  friend ExponentVector operator*(const ExponentVector& x, const BigInt& k) {
    return {x.e_a * k, x.e_b * k};
  }
  friend bool operator==(const ExponentVector& x, const ExponentVector& y) {
    return x.e_a == y.e_a && x.e_b == y.e_b && x.total == y.total;
  }
};

ExponentVector exponent_sum(const FlatWord& u);

class SlpWord;

struct SlpNode {
  enum class Kind : std::uint8_t { leaf, product, power };
  Kind kind = Kind::product;
  Gen gen = Gen::a;                // leaf only
  std::vector<SlpWord> children;   // product: 0 (identity) or >= 2; power: exactly 1
  BigInt exponent;                 // power only, nonzero
};

class SlpWord {
 public:
  // The identity word (empty product).
  SlpWord();

  static SlpWord leaf(Gen g);
  // One child is returned unchanged; an empty list is the identity.
  static SlpWord product(std::vector<SlpWord> children);
  // Throws std::invalid_argument for a zero exponent.
  static SlpWord power(SlpWord base, BigInt exponent);
  static SlpWord inverse(SlpWord base) { return power(std::move(base), BigInt(-1)); }
  static SlpWord from_flat(const FlatWord& w);

  const SlpNode& node() const { return *node_; }
  const SlpNode* id() const { return node_.get(); }
  SlpNode::Kind kind() const { return node_->kind; }
  bool is_identity() const {
    return node_->kind == SlpNode::Kind::product && node_->children.empty();
  }

 private:
  explicit SlpWord(std::shared_ptr<const SlpNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const SlpNode> node_;
};

// Structural equality of the expression DAGs (sharing is irrelevant).
bool structurally_equal(const SlpWord& u, const SlpWord& v);

// Replaces every a-leaf of `tmpl` by x and every b-leaf by y.
SlpWord substitute(const SlpWord& tmpl, const SlpWord& x, const SlpWord& y);

// Rebuilds `w` with the nodes u and v (compared by identity) exchanged.
SlpWord switch_pair(const SlpWord& w, const SlpWord& u, const SlpWord& v);

ExponentVector exponent_sum(const SlpWord& w);

// Reduced flat expansion. Throws TooLarge if any intermediate reduced
// expansion would exceed `limit` letters.
FlatWord expand(const SlpWord& w, std::uint64_t limit);

// Number of distinct nodes reachable from w.
std::size_t node_count(const SlpWord& w);

// Text form: a, b, A (= a^-1), B (= b^-1), with x/y/X/Y accepted as
// aliases for templates; `^` integer powers; parentheses; "1" is the
// identity. Throws ParseError.
SlpWord parse_word(std::string_view text);
std::string to_string(const SlpWord& w);

}  // namespace tracemult
