#pragma once

// 2x2 determinant-one matrices over a ScalarRing, and evaluation of
// compressed words under an assignment of the generators.

#include <array>
#include <string>
#include <unordered_map>
#include <utility>

#include "tracemult/ring.hpp"
#include "tracemult/word.hpp"

namespace tracemult {

template <class T>
struct Mat2 {
  T a11, a12, a21, a22;
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

template <ScalarRing R>
using MatOf = Mat2<typename R::value_type>;

template <ScalarRing R>
MatOf<R> mat_identity(const R& r) {
  return {r.one(), r.zero(), r.zero(), r.one()};
}

template <ScalarRing R>
MatOf<R> mat_make(const R& r, long a11, long a12, long a21, long a22) {
  return {r.from_integer(BigInt(a11)), r.from_integer(BigInt(a12)), r.from_integer(BigInt(a21)),
          r.from_integer(BigInt(a22))};
}

template <ScalarRing R>
MatOf<R> mat_mul(const R& r, const MatOf<R>& x, const MatOf<R>& y) {
  return {r.add(r.mul(x.a11, y.a11), r.mul(x.a12, y.a21)), r.add(r.mul(x.a11, y.a12), r.mul(x.a12, y.a22)),
          r.add(r.mul(x.a21, y.a11), r.mul(x.a22, y.a21)), r.add(r.mul(x.a21, y.a12), r.mul(x.a22, y.a22))};
}

// Adjugate; equals the inverse because det = 1.
template <ScalarRing R>
MatOf<R> mat_inv(const R& r, const MatOf<R>& x) {
  return {x.a22, r.neg(x.a12), r.neg(x.a21), x.a11};
}

template <ScalarRing R>
MatOf<R> mat_neg(const R& r, const MatOf<R>& x) {
  return {r.neg(x.a11), r.neg(x.a12), r.neg(x.a21), r.neg(x.a22)};
}

template <ScalarRing R>
typename R::value_type mat_det(const R& r, const MatOf<R>& x) {
  return r.sub(r.mul(x.a11, x.a22), r.mul(x.a12, x.a21));
}

template <ScalarRing R>
typename R::value_type mat_trace(const R& r, const MatOf<R>& x) {
  return r.add(x.a11, x.a22);
}

template <ScalarRing R>
MatOf<R> mat_pow(const R& r, const MatOf<R>& x, const BigInt& e) {
  if (sgn(e) < 0) return mat_pow(r, mat_inv(r, x), BigInt(-e));
  MatOf<R> result = mat_identity(r);
  const auto bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (sgn(e) == 0) return result;
  for (std::size_t i = bits; i-- > 0;) {
    result = mat_mul(r, result, result);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mat_mul(r, result, x);
  }
  return result;
}

template <ScalarRing R>
bool mat_eq(const R& r, const MatOf<R>& x, const MatOf<R>& y) {
  return r.eq(x.a11, y.a11) && r.eq(x.a12, y.a12) && r.eq(x.a21, y.a21) && r.eq(x.a22, y.a22);
}

// Equality in PSL2: x = y or x = -y.
template <ScalarRing R>
bool psl_eq(const R& r, const MatOf<R>& x, const MatOf<R>& y) {
  return mat_eq(r, x, y) || mat_eq(r, x, mat_neg(r, y));
}

template <ScalarRing R>
bool psl_is_identity(const R& r, const MatOf<R>& x) {
  return psl_eq(r, x, mat_identity(r));
}

// +-[[1, x], [0, 1]] with x != 0.
template <ScalarRing R>
bool is_nontrivial_unitriangular(const R& r, const MatOf<R>& x) {
  const auto& one = r.one();
  const auto minus_one = r.neg(one);
  const bool plus = r.eq(x.a11, one) && r.eq(x.a22, one);
  const bool minus = r.eq(x.a11, minus_one) && r.eq(x.a22, minus_one);
  return (plus || minus) && r.eq(x.a21, r.zero()) && !r.eq(x.a12, r.zero());
}

template <ScalarRing R>
std::array<std::string, 4> mat_to_strings(const R& r, const MatOf<R>& x) {
  return {r.to_string(x.a11), r.to_string(x.a12), r.to_string(x.a21), r.to_string(x.a22)};
}

template <ScalarRing R>
std::string mat_to_string(const R& r, const MatOf<R>& x) {
  return "[[" + r.to_string(x.a11) + ", " + r.to_string(x.a12) + "], [" + r.to_string(x.a21) + ", " +
         r.to_string(x.a22) + "]]";
}

template <ScalarRing R>
struct WitnessAssignment {
  R ring;
  MatOf<R> image_of_a;
  MatOf<R> image_of_b;
};

// Evaluates SLP words under one assignment. The memo is owned by the
// evaluator, so several words sharing subterms are evaluated once each.
template <ScalarRing R>
class WordEvaluator {
 public:
  explicit WordEvaluator(WitnessAssignment<R> assignment) : asg_(std::move(assignment)) {}

  const R& ring() const { return asg_.ring; }

  MatOf<R> operator()(const SlpWord& w) {
    if (auto it = memo_.find(w.id()); it != memo_.end()) return it->second.second;
    const R& r = asg_.ring;
    const auto& n = w.node();
    MatOf<R> out = mat_identity(r);
    switch (n.kind) {
      case SlpNode::Kind::leaf:
        out = n.gen == Gen::a ? asg_.image_of_a : asg_.image_of_b;
        break;
      case SlpNode::Kind::product:
        for (const auto& c : n.children) out = mat_mul(r, out, (*this)(c));
        break;
      case SlpNode::Kind::power:
        out = mat_pow(r, (*this)(n.children.front()), n.exponent);
        break;
    }
    memo_.emplace(w.id(), std::make_pair(w, out));
    return out;
  }

 private:
  WitnessAssignment<R> asg_;
  // The stored word pins its node so the address key cannot be reused.
  std::unordered_map<const SlpNode*, std::pair<SlpWord, MatOf<R>>> memo_;
};

template <ScalarRing R>
MatOf<R> eval_word(const SlpWord& w, const WitnessAssignment<R>& assignment) {
  WordEvaluator<R> ev(assignment);
  return ev(w);
}

// Least e >= 1 with x^e = +-I in PSL2(F_p).
std::uint64_t order_in_psl2(const PrimeField& field, const Mat2<std::uint64_t>& x);

// The fixed generator images a -> [[2, 1], [0, 1/2]], b -> [[2, 0], [0, 1/2]].
WitnessAssignment<PrimeField> borel_witness(const PrimeField& field);
WitnessAssignment<DyadicRing> borel_witness_dyadic();

}  // namespace tracemult
