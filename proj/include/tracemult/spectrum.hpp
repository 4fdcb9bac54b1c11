#pragma once

// Complex lengths l0 = l + i theta of loxodromic elements, from the trace via
// l0 = 2 acosh(tr / 2), and multiplicity histograms over short words.

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tracemult/mat2.hpp"

namespace tracemult {

using Complex = std::complex<double>;

enum class ElementClass { loxodromic, parabolic_or_identity, elliptic };

std::string to_string(ElementClass c);

// Loxodromic iff tr^2 lies off the real segment [0, 4]; tr = +-2 is
// parabolic or the identity; the rest is elliptic. `tol` widens the segment.
ElementClass classify(Complex tr, double tol = 1e-9);

struct ComplexLength {
  double ell = 0.0;    // >= 0
  double theta = 0.0;  // in (-pi, pi]
};

// Both signs of tr give the same value: theta is taken mod 2 pi, so the
// PSL2 sign ambiguity drops out. Throws NotLoxodromic.
ComplexLength complex_length(Complex tr, double tol = 1e-9);

// 2 cosh(l0 / 2); equals tr up to sign.
Complex trace_from_length(const ComplexLength& l);

struct SpectrumEntry {
  ComplexLength length;  // smallest member of the bucket
  std::size_t multiplicity = 0;
  std::vector<std::string> representatives;
};

struct SpectrumOptions {
  int max_len = 4;               // at most kMaxSpectrumLength
  double tol = 1e-9;
  bool merge_inverses = true;    // real length view; false keeps w and w^-1 apart
};

inline constexpr int kMaxSpectrumLength = 16;

// One cyclically reduced representative per conjugacy class (and per
// inverse pair when merging), lengths 1..max_len, as text over a, A, b, B.
std::vector<std::string> conjugacy_representatives(int max_len, bool merge_inverses);

// Buckets loxodromic members by |d ell| <= tol and circular |d theta| <= tol,
// closed under chaining. Entries are sorted by (ell, theta).
std::vector<SpectrumEntry> bucket_lengths(const std::vector<std::pair<std::string, ComplexLength>>& items, double tol);

// Throws std::invalid_argument when max_len is outside 1..kMaxSpectrumLength.
std::vector<SpectrumEntry> enumerate_spectrum(const WitnessAssignment<ComplexField>& asg, const SpectrumOptions& opts);
std::vector<SpectrumEntry> enumerate_spectrum_serial(const WitnessAssignment<ComplexField>& asg,
                                                     const SpectrumOptions& opts);

// Evaluates the given words and buckets the loxodromic ones.
std::vector<SpectrumEntry> bucket_words(const WitnessAssignment<ComplexField>& asg,
                                        const std::vector<std::pair<std::string, SlpWord>>& words, double tol);

// Generators file: [[{"re": x, "im": y} x 4 row-major], [...]].
// Throws ParseError on shape errors or when det is not 1 within 1e-6.
WitnessAssignment<ComplexField> generators_from_json(const nlohmann::json& j, double tol);
nlohmann::json generators_to_json(const WitnessAssignment<ComplexField>& asg);

nlohmann::json to_json(const std::vector<SpectrumEntry>& entries);

}  // namespace tracemult
