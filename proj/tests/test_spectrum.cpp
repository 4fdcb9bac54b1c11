#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "oracles.hpp"
#include "tracemult/errors.hpp"
#include "tracemult/forge.hpp"
#include "tracemult/spectrum.hpp"

using namespace tracemult;

namespace {

constexpr double kPi = std::numbers::pi;

Mat2<Complex> random_sl2c(std::mt19937_64& g, double spread) {
  std::normal_distribution<double> nd(0.0, spread);
  const Complex a(1.0 + nd(g), nd(g));
  const Complex b(nd(g), nd(g));
  const Complex c(nd(g), nd(g));
  return {a, b, c, (1.0 + b * c) / a};
}

// Every cyclically reduced word of length exactly len, letters a A b B.
void cyclic_words(int len, std::string& cur, std::vector<std::string>& out) {
  static const char letters[] = {'a', 'A', 'b', 'B'};
  if (static_cast<int>(cur.size()) == len) {
    if (len == 1 || oracle::inverse_letter(cur.front()) != cur.back()) out.push_back(cur);
    return;
  }
  for (char c : letters) {
    if (!cur.empty() && oracle::inverse_letter(cur.back()) == c) continue;
    cur.push_back(c);
    cyclic_words(len, cur, out);
    cur.pop_back();
  }
}

// Number of classes under rotation, and optionally inversion.
std::size_t brute_classes(int max_len, bool merge) {
  std::size_t count = 0;
  for (int len = 1; len <= max_len; ++len) {
    std::string cur;
    std::vector<std::string> ws;
    cyclic_words(len, cur, ws);
    std::vector<std::string> reps;
    for (const auto& w : ws) {
      bool seen = false;
      for (const auto& r : reps) {
        if (oracle::conjugate(w, r) || (merge && oracle::conjugate(oracle::invert(w), r))) {
          seen = true;
          break;
        }
      }
      if (!seen) reps.push_back(w);
    }
    count += reps.size();
  }
  return count;
}

double circ(double x, double y) {
  const double d = std::fabs(x - y);
  return std::min(d, 2 * kPi - d);
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("classification") {
    CHECK(classify({3.0, 0.0}) == ElementClass::loxodromic);
    CHECK(classify({-3.0, 0.0}) == ElementClass::loxodromic);
    CHECK(classify({0.0, 2.0}) == ElementClass::loxodromic);
    CHECK(classify({1.0, 0.0}) == ElementClass::elliptic);
    CHECK(classify({0.0, 0.0}) == ElementClass::elliptic);
    CHECK(classify({2.0, 0.0}) == ElementClass::parabolic_or_identity);
    CHECK(classify({-2.0, 1e-12}) == ElementClass::parabolic_or_identity);
    CHECK(classify({1.0, 0.1}) == ElementClass::loxodromic);
    CHECK(to_string(ElementClass::elliptic) == "elliptic");
  }

  TEST_CASE("complex length of reference traces") {
    // tr = 3: 2 acosh(3/2) = 2 ln((3 + sqrt 5) / 2)
    const auto l3 = complex_length({3.0, 0.0});
    CHECK(l3.ell == doctest::Approx(2 * std::log((3 + std::sqrt(5.0)) / 2)).epsilon(1e-12));
    CHECK(l3.ell == doctest::Approx(1.9248473002).epsilon(1e-9));
    CHECK(l3.theta == doctest::Approx(0.0));
    // tr = 2i: 2 acosh(i) = 2 ln(1 + sqrt 2) + i pi
    const auto li = complex_length({0.0, 2.0});
    CHECK(li.ell == doctest::Approx(1.7627471740).epsilon(1e-9));
    CHECK(li.theta == doctest::Approx(kPi));
    CHECK_THROWS_AS(complex_length({1.0, 0.0}), NotLoxodromic);
    CHECK_THROWS_AS(complex_length({2.0, 0.0}), NotLoxodromic);
  }

  TEST_CASE("length round-trip, sign and conjugate behaviour") {
    std::mt19937_64 g(71);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
      const Complex tr(u(g), u(g));
      if (classify(tr) != ElementClass::loxodromic) {
        CHECK_THROWS_AS(complex_length(tr), NotLoxodromic);
        continue;
      }
      ++checked;
      const auto l = complex_length(tr);
      CHECK(l.ell > 0);
      CHECK(l.theta > -kPi);
      CHECK(l.theta <= kPi);
      const Complex back = trace_from_length(l);
      CHECK(std::min(std::abs(back - tr), std::abs(back + tr)) < 1e-9 * (1 + std::abs(tr)));
      const auto neg = complex_length(-tr);
      CHECK(neg.ell == doctest::Approx(l.ell).epsilon(1e-12));
      CHECK(circ(neg.theta, l.theta) < 1e-9);
      const auto bar = complex_length(std::conj(tr));
      CHECK(bar.ell == doctest::Approx(l.ell).epsilon(1e-12));
      CHECK(circ(bar.theta, -l.theta) < 1e-9);
    }
    CHECK(checked > 1000);
  }

  TEST_CASE("representatives match brute-force conjugacy classes") {
    for (int L = 1; L <= 6; ++L) {
      for (bool merge : {true, false}) {
        const auto reps = conjugacy_representatives(L, merge);
        CHECK(reps.size() == brute_classes(L, merge));
        for (const auto& r : reps) CHECK(oracle::cyclic_core(r) == r);
        // pairwise non-conjugate
        for (std::size_t i = 0; i < reps.size(); ++i) {
          for (std::size_t j = i + 1; j < reps.size(); ++j) {
            if (reps[i].size() != reps[j].size()) continue;
            CHECK_FALSE(oracle::conjugate(reps[i], reps[j]));
          }
        }
      }
    }
    CHECK(conjugacy_representatives(1, true) == std::vector<std::string>{"a", "b"});
  }

  TEST_CASE("max_len 1 yields the generators only") {
    ComplexField C(1e-9);
    const WitnessAssignment<ComplexField> asg{C, {2.0, 1.0, 1.0, 1.0}, {3.0, 1.0, 2.0, 1.0}};
    SpectrumOptions o;
    o.max_len = 1;
    const auto e = enumerate_spectrum(asg, o);
    REQUIRE(e.size() == 2);
    CHECK(e[0].representatives == std::vector<std::string>{"a"});
    CHECK(e[1].representatives == std::vector<std::string>{"b"});
    CHECK(e[0].length.ell < e[1].length.ell);
    o.max_len = 17;
    CHECK_THROWS_AS(enumerate_spectrum(asg, o), std::invalid_argument);
    o.max_len = 0;
    CHECK_THROWS_AS(enumerate_spectrum(asg, o), std::invalid_argument);
  }

  TEST_CASE("multiplicities agree with an all-pairs brute force") {
    std::mt19937_64 g(72);
    ComplexField C(1e-9);
    for (int trial = 0; trial < 3; ++trial) {
      const WitnessAssignment<ComplexField> asg{C, random_sl2c(g, 0.8), random_sl2c(g, 0.8)};
      SpectrumOptions o;
      o.max_len = 4;
      o.tol = 1e-7;
      const auto reps = conjugacy_representatives(4, true);
      std::vector<ComplexLength> ls;
      for (const auto& r : reps) {
        const auto m = eval_word(parse_word(r), asg);
        const Complex tr = mat_trace(C, m);
        if (classify(tr, o.tol) == ElementClass::loxodromic) ls.push_back(complex_length(tr, o.tol));
      }
      // connected components of the closeness graph
      std::vector<int> comp(ls.size(), -1);
      int ncomp = 0;
      for (std::size_t s = 0; s < ls.size(); ++s) {
        if (comp[s] >= 0) continue;
        std::vector<std::size_t> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
          const auto x = stack.back();
          stack.pop_back();
          for (std::size_t y = 0; y < ls.size(); ++y) {
            if (comp[y] < 0 && std::fabs(ls[x].ell - ls[y].ell) <= o.tol && circ(ls[x].theta, ls[y].theta) <= o.tol) {
              comp[y] = ncomp;
              stack.push_back(y);
            }
          }
        }
        ++ncomp;
      }
      std::multiset<std::size_t> want;
      for (int c = 0; c < ncomp; ++c) want.insert(static_cast<std::size_t>(std::count(comp.begin(), comp.end(), c)));
      std::multiset<std::size_t> got;
      std::size_t total = 0;
      for (const auto& e : enumerate_spectrum(asg, o)) {
        got.insert(e.multiplicity);
        total += e.multiplicity;
        CHECK(e.representatives.size() == e.multiplicity);
      }
      CHECK(got == want);
      CHECK(total == ls.size());
    }
  }

  TEST_CASE("parallel spectrum equals serial at any thread count") {
    std::mt19937_64 g(73);
    ComplexField C(1e-9);
    const WitnessAssignment<ComplexField> asg{C, random_sl2c(g, 0.6), random_sl2c(g, 0.6)};
    SpectrumOptions o;
    o.max_len = 7;
    const auto serial = to_json(enumerate_spectrum_serial(asg, o));
    for (int threads : {1, 2, 4}) {
      omp_set_num_threads(threads);
      CHECK(to_json(enumerate_spectrum(asg, o)) == serial);
    }
  }

  TEST_CASE("generator file round-trip and validation") {
    ComplexField C(1e-9);
    const WitnessAssignment<ComplexField> asg{C, {2.0, 1.0, 1.0, 1.0}, {Complex(0, 1), 0.0, 0.0, Complex(0, -1)}};
    const auto back = generators_from_json(generators_to_json(asg), 1e-9);
    CHECK(back.image_of_a == asg.image_of_a);
    CHECK(back.image_of_b == asg.image_of_b);
    auto j = generators_to_json(asg);
    j[0][0]["re"] = 5.0;
    CHECK_THROWS_AS(generators_from_json(j, 1e-9), ParseError);
    CHECK_THROWS_AS(generators_from_json(nlohmann::json::array(), 1e-9), ParseError);
    CHECK_THROWS_AS(generators_from_json(nlohmann::json::parse(R"([[1,0,0,1],[1,0,0,1]])"), 1e-9), ParseError);
  }

  TEST_CASE("forged level-1 words share one length under random representations") {
    const WordFamily F = build_family(choose_params(1));
    std::mt19937_64 g(74);
    ComplexField C(1e-9);
    for (int trial = 0; trial < 5; ++trial) {
      const WitnessAssignment<ComplexField> asg{C, random_sl2c(g, 0.05), random_sl2c(g, 0.05)};
      const auto e = bucket_words(asg, {{"w1", F.words[0]}, {"w2", F.words[1]}}, 1e-9);
      if (e.empty()) continue;  // landed on a non-loxodromic trace
      CHECK(e.size() == 1);
      CHECK(e[0].multiplicity == 2);
    }
  }

  TEST_CASE("forged families give multiplicity n + 1 under a real Borel representation") {
    ComplexField C(1e-9);
    for (int n = 1; n <= 2; ++n) {
      const WordFamily F = build_family(choose_params(n));
      const double total = exponent_sum(F.words[0]).total.get_d();
      const Complex lam = std::exp(0.5 / total);
      const WitnessAssignment<ComplexField> tri{C, {lam, 0.7, 0.0, 1.0 / lam}, {lam, -0.4, 0.0, 1.0 / lam}};
      std::vector<std::pair<std::string, SlpWord>> ws;
      for (std::size_t i = 0; i < F.words.size(); ++i) ws.push_back({"w" + std::to_string(i + 1), F.words[i]});
      const auto e = bucket_words(tri, ws, 1e-9);
      REQUIRE(e.size() == 1);
      CHECK(e[0].multiplicity == static_cast<std::size_t>(n + 1));
      CHECK(e[0].length.ell == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}
