#include <doctest.h>

#include <omp.h>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "tracemult/errors.hpp"
#include "tracemult/primes.hpp"

using namespace tracemult;

namespace {

// Number of distinct roots of f in F_p by exhaustive evaluation.
int root_count(const IntPoly& f, std::uint64_t p) {
  std::vector<std::uint64_t> c;
  for (const auto& x : f.coeffs) c.push_back(mpz_fdiv_ui(x.get_mpz_t(), p));
  int roots = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = (v * x + c[i]) % p;
    roots += v == 0 ? 1 : 0;
  }
  return roots;
}

}  // namespace

TEST_SUITE("primes") {
  TEST_CASE("primality agrees with the sieve and trial division") {
    const auto ps = primes_up_to(100000);
    std::set<std::uint64_t> s(ps.begin(), ps.end());
    CHECK(ps.size() == 9592);
    for (std::uint64_t n = 0; n <= 100000; ++n) CHECK(is_prime_u64(n) == (s.count(n) == 1));
    std::mt19937_64 g(41);
    for (int trial = 0; trial < 300; ++trial) {
      const std::uint64_t n = (g() % 1000000000000ULL) | 1U;
      CHECK(is_prime_u64(n) == oracle::is_prime(n));
    }
    // strong pseudoprimes to several small bases
    CHECK_FALSE(is_prime_u64(3215031751ULL));
    CHECK_FALSE(is_prime_u64(3825123056546413051ULL));
    CHECK(is_prime_u64(18446744073709551557ULL));
    CHECK(is_prime(BigInt("170141183460469231731687303715884105727")));  // 2^127 - 1
    CHECK_FALSE(is_prime(BigInt("170141183460469231731687303715884105729")));
  }

  TEST_CASE("factorization multiplies back to n") {
    std::mt19937_64 g(42);
    for (int trial = 0; trial < 300; ++trial) {
      const std::uint64_t n = 2 + g() % (std::uint64_t{1} << 62);
      BigInt prod = 1;
      for (const auto& [q, e] : factor_u64(n)) {
        CHECK(is_prime_u64(q));
        for (int i = 0; i < e; ++i) prod *= big_from_u64(q);
      }
      CHECK(prod == big_from_u64(n));
    }
    const auto f = factor_u64(4611686014132420609ULL);  // (2^31 - 1)^2
    REQUIRE(f.size() == 1);
    CHECK(f[0] == std::pair<std::uint64_t, int>{2147483647, 2});
  }

  TEST_CASE("polynomial text round-trip") {
    for (const char* s : {"x^4+x^3+x^2+x+1", "x^2-2", "3*x^2-x", "-x^3+7", "x"}) {
      CHECK(to_string(parse_int_poly(s)) == s);
    }
    CHECK(parse_int_poly("x^2 + x - x").coeffs.size() == 3);
    CHECK_THROWS_AS(parse_int_poly("x^^2"), ParseError);
    CHECK_THROWS_AS(parse_int_poly(""), ParseError);
    CHECK_THROWS_AS(parse_int_poly("2x"), ParseError);
    CHECK_THROWS_AS(NumberFieldSpec::from_polynomial(parse_int_poly("2*x^2+1"), false), std::invalid_argument);
  }

  TEST_CASE("splits_completely agrees with root counting for every p < 10^4") {
    const char* fixtures[] = {"x^2+1",          "x^2-2",       "x^3-2",     "x^3-3*x+1",
                              "x^4+x^3+x^2+x+1", "x^4-10*x^2+1", "x^4+1",     "x-5"};
    const auto ps = primes_up_to(10000);
    for (const char* text : fixtures) {
      const auto spec = NumberFieldSpec::from_polynomial(parse_int_poly(text), false);
      for (std::uint64_t p : ps) {
        const bool want = root_count(spec.minimal_polynomial, p) == spec.degree;
        CHECK_MESSAGE(splits_completely(spec, p) == want, text << " p=" << p);
      }
    }
  }

  TEST_CASE("spot values") {
    const auto gauss = NumberFieldSpec::from_polynomial(parse_int_poly("x^2+1"), true);
    CHECK(splits_completely(gauss, 5));
    CHECK_FALSE(splits_completely(gauss, 7));
    CHECK_FALSE(splits_completely(gauss, 2));  // ramified
  }

  TEST_CASE("constrained search agrees with a linear scan") {
    std::mt19937_64 g(43);
    for (int trial = 0; trial < 300; ++trial) {
      PrimeSearchConstraints c;
      c.strict_lower_bound = static_cast<long>(g() % 5000);
      if (g() % 2) c.doubling_floor = static_cast<long>(g() % 3000);
      const std::uint64_t mods[] = {3, 5, 7, 31, 67};
      for (int k = 0; k < 2; ++k) {
        const std::uint64_t m = mods[g() % 5];
        c.forbidden.push_back({m, {g() % m, g() % m}});
      }
      BigInt lo = c.strict_lower_bound;
      if (c.doubling_floor) lo = std::max(lo, BigInt(2 * *c.doubling_floor));
      std::map<std::uint64_t, std::set<std::uint64_t>> units;
      for (const auto& f : c.forbidden) {
        for (auto r : f.residues) {
          if (r % f.modulus != 0) units[f.modulus].insert(r % f.modulus);
        }
      }
      // a fully blocked modulus leaves only primes up to itself
      std::uint64_t cap = UINT64_MAX;
      for (const auto& [m, u] : units) {
        if (u.size() == m - 1) cap = std::min(cap, m);
      }
      std::uint64_t n = big_to_u64(lo) + 1;
      while (n <= cap && !(oracle::is_prime(n) && avoids_residues(big_from_u64(n), c.forbidden))) ++n;
      if (n > cap) {
        CHECK_THROWS_AS(next_prime_constrained(c), std::invalid_argument);
        continue;
      }
      CHECK(next_prime_constrained(c) == big_from_u64(n));
    }
  }

  TEST_CASE("constrained search edge cases") {
    CHECK(next_prime_constrained({0, {}, std::nullopt}) == 2);
    CHECK(next_prime_constrained({30, {}, std::nullopt}) == 31);
    CHECK(next_prime_constrained({0, {}, BigInt(31)}) == 67);
    // every unit class mod 5 forbidden
    PrimeSearchConstraints bad{10, {{5, {1, 2, 3, 4}}}, std::nullopt};
    CHECK_THROWS_AS(next_prime_constrained(bad), std::invalid_argument);
    // the prime 5 itself is still reachable below the modulus
    PrimeSearchConstraints low{4, {{5, {1, 2, 3, 4}}}, std::nullopt};
    CHECK(next_prime_constrained(low) == 5);
  }

  TEST_CASE("density estimate: parallel equals serial for any thread count") {
    const auto spec = NumberFieldSpec::from_polynomial(parse_int_poly("x^4+x^3+x^2+x+1"), true);
    const auto serial = density_estimate_serial(spec, 20000);
    for (int threads : {1, 2, 4}) {
      omp_set_num_threads(threads);
      const auto par = density_estimate(spec, 20000);
      CHECK(par.split == serial.split);
      CHECK(par.primes == serial.primes);
    }
    // split primes of the 5th cyclotomic field are exactly p = 1 mod 5
    std::uint64_t ones = 0;
    for (std::uint64_t p : primes_up_to(20000)) ones += p % 5 == 1 ? 1 : 0;
    CHECK(serial.split == ones);
  }
}
