#include "tracemult/word.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "tracemult/errors.hpp"

namespace tracemult {

namespace {

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_add_overflow(x, y, &r)) throw TooLarge("syllable exponent overflow");
  return r;
}

std::uint64_t magnitude(std::int64_t e) {
  return e < 0 ? static_cast<std::uint64_t>(-(e + 1)) + 1 : static_cast<std::uint64_t>(e);
}

void push_reduced(std::vector<Syllable>& out, Syllable s) {
  if (s.exp == 0) return;
  if (!out.empty() && out.back().gen == s.gen) {
    std::int64_t e = checked_add(out.back().exp, s.exp);
    if (e == 0) {
      out.pop_back();
    } else {
      out.back().exp = e;
    }
    return;
  }
  out.push_back(s);
}

}  // namespace

FlatWord FlatWord::reduce(std::span<const Syllable> letters) {
  FlatWord w;
  for (const auto& s : letters) push_reduced(w.syl_, s);
  return w;
}

FlatWord FlatWord::letter(Gen g, std::int64_t exp) {
  Syllable s{g, exp};
  return reduce(std::span<const Syllable>(&s, 1));
}

std::uint64_t FlatWord::length() const {
  std::uint64_t n = 0;
  for (const auto& s : syl_) {
    if (__builtin_add_overflow(n, magnitude(s.exp), &n)) throw TooLarge("word length overflow");
  }
  return n;
}

FlatWord concat(const FlatWord& u, const FlatWord& v) {
  std::vector<Syllable> all(u.syllables());
  all.insert(all.end(), v.syllables().begin(), v.syllables().end());
  return FlatWord::reduce(all);
}

FlatWord invert(const FlatWord& u) {
  std::vector<Syllable> out(u.syllables().rbegin(), u.syllables().rend());
  for (auto& s : out) s.exp = -s.exp;
  return FlatWord::reduce(out);
}

FlatWord swap_generators(const FlatWord& u) {
  std::vector<Syllable> out(u.syllables());
  for (auto& s : out) s.gen = other(s.gen);
  return FlatWord::reduce(out);
}

FlatWord cyclic_reduce(const FlatWord& u, FlatWord* conjugator) {
  std::vector<Syllable> w = u.syllables();
  std::vector<Syllable> c;
  std::size_t lo = 0;
  std::size_t hi = w.size();
  while (hi - lo >= 2 && w[lo].gen == w[hi - 1].gen) {
    std::int64_t e1 = w[lo].exp;
    std::int64_t e2 = w[hi - 1].exp;
    std::int64_t sum = checked_add(e1, e2);
    if (sum == 0) {
      c.push_back(w[lo]);
      ++lo;
      --hi;
    } else {
      // g^e1 M g^e2 = g^-e2 (g^(e1+e2) M) g^e2
      c.push_back({w[lo].gen, -e2});
      w[lo].exp = sum;
      --hi;
      break;
    }
  }
  if (conjugator != nullptr) *conjugator = FlatWord::reduce(c);
  return FlatWord::reduce(std::span<const Syllable>(w.data() + lo, hi - lo));
}

bool is_conjugate_free(const FlatWord& u, const FlatWord& v) {
  const auto cu = cyclic_reduce(u).syllables();
  const auto cv = cyclic_reduce(v).syllables();
  if (cu.size() != cv.size()) return false;
  const std::size_t n = cu.size();
  if (n <= 1) return cu == cv;
  for (std::size_t shift = 0; shift < n; ++shift) {
    bool match = true;
    for (std::size_t i = 0; i < n && match; ++i) match = cu[(i + shift) % n] == cv[i];
    if (match) return true;
  }
  return false;
}

FlatWord power(const FlatWord& u, const BigInt& e, std::uint64_t limit) {
  if (sgn(e) == 0) return {};
  FlatWord c;
  FlatWord core = cyclic_reduce(u, &c);
  if (core.is_identity()) return {};
  BigInt count = abs(e);
  if (sgn(e) < 0) core = invert(core);
  BigInt len = BigInt(2) * big_from_u64(c.length()) + count * big_from_u64(core.length());
  if (len > big_from_u64(limit)) throw TooLarge("expansion exceeds " + std::to_string(limit) + " letters");
  std::vector<Syllable> out(c.syllables());
  if (core.syllable_count() == 1) {
    Syllable s = core.syllables().front();
    auto k = big_to_i64(BigInt(s.exp) * count);
    if (!k) throw TooLarge("syllable exponent overflow");
    out.push_back({s.gen, *k});
  } else {
    const auto reps = big_to_u64(count);
    for (std::uint64_t r = 0; r < reps; ++r) {
      out.insert(out.end(), core.syllables().begin(), core.syllables().end());
    }
  }
  const auto ci = invert(c);
  out.insert(out.end(), ci.syllables().begin(), ci.syllables().end());
  return FlatWord::reduce(out);
}

std::string to_string(const FlatWord& u) {
  if (u.is_identity()) return "1";
  std::string out;
  for (const auto& s : u.syllables()) {
    if (!out.empty()) out += ' ';
    const bool neg = s.exp < 0;
    out += s.gen == Gen::a ? (neg ? 'A' : 'a') : (neg ? 'B' : 'b');
    const auto mag = magnitude(s.exp);
    if (mag != 1) out += "^" + std::to_string(mag);
  }
  return out;
}

ExponentVector exponent_sum(const FlatWord& u) {
  BigInt ea = 0;
  BigInt eb = 0;
  for (const auto& s : u.syllables()) (s.gen == Gen::a ? ea : eb) += big_from_i64(s.exp);
  return {ea, eb};
}

// ---------------------------------------------------------------------------
// SlpWord

SlpWord::SlpWord() : node_(std::make_shared<const SlpNode>()) {}

SlpWord SlpWord::leaf(Gen g) {
  SlpNode n;
  n.kind = SlpNode::Kind::leaf;
  n.gen = g;
  return SlpWord(std::make_shared<const SlpNode>(std::move(n)));
}

SlpWord SlpWord::product(std::vector<SlpWord> children) {
  if (children.size() == 1) return std::move(children.front());
  SlpNode n;
  n.children = std::move(children);
  return SlpWord(std::make_shared<const SlpNode>(std::move(n)));
}

SlpWord SlpWord::power(SlpWord base, BigInt exponent) {
  if (sgn(exponent) == 0) throw std::invalid_argument("SLP power with zero exponent");
  SlpNode n;
  n.kind = SlpNode::Kind::power;
  n.children.push_back(std::move(base));
  n.exponent = std::move(exponent);
  return SlpWord(std::make_shared<const SlpNode>(std::move(n)));
}

SlpWord SlpWord::from_flat(const FlatWord& w) {
  std::vector<SlpWord> parts;
  for (const auto& s : w.syllables()) {
    auto leaf = SlpWord::leaf(s.gen);
    parts.push_back(s.exp == 1 ? leaf : SlpWord::power(leaf, big_from_i64(s.exp)));
  }
  return product(std::move(parts));
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<const SlpNode*, const SlpNode*>& p) const {
    return std::hash<const void*>()(p.first) * 31 + std::hash<const void*>()(p.second);
  }
};

bool equal_rec(const SlpWord& u, const SlpWord& v,
               std::unordered_set<std::pair<const SlpNode*, const SlpNode*>, PairHash>& seen) {
  if (u.id() == v.id()) return true;
  if (seen.contains({u.id(), v.id()})) return true;
  const auto& nu = u.node();
  const auto& nv = v.node();
  if (nu.kind != nv.kind) return false;
  switch (nu.kind) {
    case SlpNode::Kind::leaf:
      if (nu.gen != nv.gen) return false;
      break;
    case SlpNode::Kind::power:
      if (nu.exponent != nv.exponent) return false;
      [[fallthrough]];
    case SlpNode::Kind::product:
      if (nu.children.size() != nv.children.size()) return false;
      for (std::size_t i = 0; i < nu.children.size(); ++i) {
        if (!equal_rec(nu.children[i], nv.children[i], seen)) return false;
      }
      break;
  }
  seen.insert({u.id(), v.id()});
  return true;
}

// Memoized bottom-up rebuild; `hook` may replace a node outright.
SlpWord rebuild(const SlpWord& w, std::unordered_map<const SlpNode*, SlpWord>& memo,
                const std::function<std::optional<SlpWord>(const SlpWord&)>& hook) {
  if (auto it = memo.find(w.id()); it != memo.end()) return it->second;
  SlpWord out = w;
  if (auto claimed = hook(w)) {
    out = *claimed;
  } else if (w.kind() != SlpNode::Kind::leaf) {
    std::vector<SlpWord> kids;
    bool changed = false;
    for (const auto& c : w.node().children) {
      kids.push_back(rebuild(c, memo, hook));
      changed = changed || kids.back().id() != c.id();
    }
    if (changed) {
      out = w.kind() == SlpNode::Kind::power ? SlpWord::power(kids.front(), w.node().exponent)
                                             : SlpWord::product(std::move(kids));
    }
  }
  memo.emplace(w.id(), out);
  return out;
}

}  // namespace

bool structurally_equal(const SlpWord& u, const SlpWord& v) {
  std::unordered_set<std::pair<const SlpNode*, const SlpNode*>, PairHash> seen;
  return equal_rec(u, v, seen);
}

SlpWord substitute(const SlpWord& tmpl, const SlpWord& x, const SlpWord& y) {
  std::unordered_map<const SlpNode*, SlpWord> memo;
  return rebuild(tmpl, memo, [&](const SlpWord& n) -> std::optional<SlpWord> {
    if (n.kind() != SlpNode::Kind::leaf) return std::nullopt;
    return n.node().gen == Gen::a ? x : y;
  });
}

SlpWord switch_pair(const SlpWord& w, const SlpWord& u, const SlpWord& v) {
  std::unordered_map<const SlpNode*, SlpWord> memo;
  return rebuild(w, memo, [&](const SlpWord& n) -> std::optional<SlpWord> {
    if (n.id() == u.id()) return v;
    if (n.id() == v.id()) return u;
    return std::nullopt;
  });
}

namespace {

ExponentVector exponent_rec(const SlpWord& w, std::unordered_map<const SlpNode*, ExponentVector>& memo) {
  if (auto it = memo.find(w.id()); it != memo.end()) return it->second;
  ExponentVector out{BigInt(0), BigInt(0)};
  const auto& n = w.node();
  switch (n.kind) {
    case SlpNode::Kind::leaf:
      out = n.gen == Gen::a ? ExponentVector{BigInt(1), BigInt(0)} : ExponentVector{BigInt(0), BigInt(1)};
      break;
    case SlpNode::Kind::product:
      for (const auto& c : n.children) out = out + exponent_rec(c, memo);
      break;
    case SlpNode::Kind::power:
      out = exponent_rec(n.children.front(), memo) * n.exponent;
      break;
  }
  memo.emplace(w.id(), out);
  return out;
}

FlatWord expand_rec(const SlpWord& w, std::uint64_t limit, std::unordered_map<const SlpNode*, FlatWord>& memo) {
  if (auto it = memo.find(w.id()); it != memo.end()) return it->second;
  FlatWord out;
  const auto& n = w.node();
  switch (n.kind) {
    case SlpNode::Kind::leaf:
      out = FlatWord::letter(n.gen);
      break;
    case SlpNode::Kind::product:
      for (const auto& c : n.children) {
        out = concat(out, expand_rec(c, limit, memo));
        if (out.length() > limit) throw TooLarge("expansion exceeds " + std::to_string(limit) + " letters");
      }
      break;
    case SlpNode::Kind::power:
      out = power(expand_rec(n.children.front(), limit, memo), n.exponent, limit);
      break;
  }
  if (out.length() > limit) throw TooLarge("expansion exceeds " + std::to_string(limit) + " letters");
  memo.emplace(w.id(), out);
  return out;
}

}  // namespace

ExponentVector exponent_sum(const SlpWord& w) {
  std::unordered_map<const SlpNode*, ExponentVector> memo;
  return exponent_rec(w, memo);
}

FlatWord expand(const SlpWord& w, std::uint64_t limit) {
  std::unordered_map<const SlpNode*, FlatWord> memo;
  return expand_rec(w, limit, memo);
}

std::size_t node_count(const SlpWord& w) {
  std::unordered_set<const SlpNode*> seen;
  std::vector<const SlpWord*> stack{&w};
  while (!stack.empty()) {
    const SlpWord* cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur->id()).second) continue;
    for (const auto& c : cur->node().children) stack.push_back(&c);
  }
  return seen.size();
}

}  // namespace tracemult
