#pragma once

#include <stdexcept>
#include <string>

namespace tracemult {

// A flat expansion or symbolic computation would exceed its size guard.
class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotLoxodromic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SearchExhausted : public std::runtime_error {
 public:
  SearchExhausted(int level, std::uint64_t budget)
      : std::runtime_error("prime search exhausted at level " + std::to_string(level) +
                           " after " + std::to_string(budget) + " candidates"),
        level(level),
        budget(budget) {}
  int level;
  std::uint64_t budget;
};

// Image table cell (prime index i, word index j), both 1-based, that broke
// the identity / unitriangular pattern.
class P3Violation : public std::runtime_error {
 public:
  P3Violation(int i, int j, std::string image)
      : std::runtime_error("P3 violation at prime " + std::to_string(i) + ", word " +
                           std::to_string(j) + ": image " + image),
        prime_index(i),
        word_index(j),
        image(std::move(image)) {}
  int prime_index;
  int word_index;
  std::string image;
};

class TraceMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tracemult
