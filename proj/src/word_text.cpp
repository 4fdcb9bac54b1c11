#include <cctype>
#include <stdexcept>

#include "tracemult/errors.hpp"
#include "tracemult/word.hpp"

namespace tracemult {

BigInt big_from_string(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("not a decimal integer: '" + s + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) {
      throw std::invalid_argument("not a decimal integer: '" + s + "'");
    }
  }
  return BigInt(s[0] == '+' ? s.substr(1) : s, 10);
}

namespace {

class WordParser {
 public:
  explicit WordParser(std::string_view text) : text_(text) {}

  SlpWord parse() {
    auto w = parse_sequence();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && (std::isspace(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '*')) ++pos_;
  }

  bool at_item_start() {
    skip_space();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return c == '(' || c == '1' || std::string_view("abABxyXY").find(c) != std::string_view::npos;
  }

  SlpWord parse_sequence() {
    std::vector<SlpWord> items;
    while (at_item_start()) items.push_back(parse_item());
    return SlpWord::product(std::move(items));
  }

  BigInt parse_integer() {
    skip_space();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) fail("expected integer exponent");
    return big_from_string(std::string(text_.substr(start, pos_ - start)));
  }

  SlpWord parse_item() {
    skip_space();
    char c = text_[pos_];
    SlpWord atom;
    bool letter = false;
    bool inverse_letter = false;
    Gen g = Gen::a;
    if (c == '(') {
      ++pos_;
      atom = parse_sequence();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
    } else if (c == '1') {
      ++pos_;
    } else {
      ++pos_;
      letter = true;
      g = (c == 'a' || c == 'A' || c == 'x' || c == 'X') ? Gen::a : Gen::b;
      inverse_letter = std::isupper(static_cast<unsigned char>(c)) != 0;
    }
    skip_space();
    BigInt e = 1;
    bool has_exp = false;
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      e = parse_integer();
      has_exp = true;
    }
    if (letter) {
      if (inverse_letter) e = -e;
      if (sgn(e) == 0) return SlpWord();
      if (!has_exp && !inverse_letter) return SlpWord::leaf(g);
      return SlpWord::power(SlpWord::leaf(g), e);
    }
    if (!has_exp) return atom;
    if (sgn(e) == 0) return SlpWord();
    return SlpWord::power(atom, e);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_leaf_power(const SlpWord& w) {
  return w.kind() == SlpNode::Kind::power && w.node().children.front().kind() == SlpNode::Kind::leaf;
}

void print(const SlpWord& w, std::string& out) {
  const auto& n = w.node();
  switch (n.kind) {
    case SlpNode::Kind::leaf:
      out += n.gen == Gen::a ? 'a' : 'b';
      return;
    case SlpNode::Kind::product:
      if (n.children.empty()) {
        out += '1';
        return;
      }
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i > 0) out += ' ';
        const auto& c = n.children[i];
        const bool wrap = c.kind() == SlpNode::Kind::product && !c.is_identity();
        if (wrap) out += '(';
        print(c, out);
        if (wrap) out += ')';
      }
      return;
    case SlpNode::Kind::power: {
      const auto& base = n.children.front();
      if (base.kind() == SlpNode::Kind::leaf) {
        const bool neg = sgn(n.exponent) < 0;
        out += base.node().gen == Gen::a ? (neg ? 'A' : 'a') : (neg ? 'B' : 'b');
        if (abs(n.exponent) != 1 || !neg) out += "^" + big_to_string(abs(n.exponent));
        return;
      }
      const bool wrap = !base.is_identity() || is_leaf_power(base);
      if (wrap) out += '(';
      print(base, out);
      if (wrap) out += ')';
      out += "^" + big_to_string(n.exponent);
      return;
    }
  }
}

}  // namespace

SlpWord parse_word(std::string_view text) { return WordParser(text).parse(); }

std::string to_string(const SlpWord& w) {
  std::string out;
  print(w, out);
  return out;
}

}  // namespace tracemult
