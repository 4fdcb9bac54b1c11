// One line per acceptance criterion; exit status is nonzero if any failed.
// Usage: acceptance <path to the tracemult binary>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "tracemult/forge.hpp"
#include "tracemult/primes.hpp"
#include "tracemult/spectrum.hpp"
#include "tracemult/trace_poly.hpp"

using namespace tracemult;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_dir;

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = "'" + g_cli + "' " + args + " 2>/dev/null";
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, got);
  const int st = pclose(f);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

json load(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

void save(const fs::path& p, const json& j) {
  std::ofstream out(p);
  out << j.dump(2) << "\n";
}

oracle::M cell(const json& m, std::uint64_t p) {
  auto v = [&](int i) { return std::stoull(m[i].get<std::string>()) % p; };
  return {v(0), v(1), v(2), v(3)};
}

bool unitriangular(const oracle::M& x, std::uint64_t p) {
  const bool sign_ok = (x.a == 1 && x.d == 1) || (x.a == p - 1 && x.d == p - 1);
  return sign_ok && x.c == 0 && x.b != 0;
}

int failures = 0;

void report(int id, const std::string& name, const std::function<bool(std::ostream&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!ok) ++failures;
  std::printf("criterion %d %s: %s (%.2f s) %s\n", id, name.c_str(), ok ? "PASS" : "FAIL", secs, detail.str().c_str());
  std::fflush(stdout);
}

// Forged certificates, written by the CLI in criterion 3 and reused after.
std::vector<json> g_certs;

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <tracemult binary>\n";
    return 64;
  }
  g_cli = argv[1];
  g_dir = fs::temp_directory_path() / ("tracemult_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(g_dir);

  report(1, "base case over F_31", [](std::ostream& d) {
    const ForgeParams P = choose_params(1);
    if (P.p[0] != 31 || P.q[0] != 1 || P.k[0] != 27) return false;
    const WordFamily F = build_family(P);
    const std::string w11 = oracle::from_flat(expand(F.words[0], 100000));
    const std::string w12 = oracle::from_flat(expand(F.words[1], 100000));
    const oracle::M A{2, 1, 0, 16}, B{2, 0, 0, 16};  // 1/2 = 16 mod 31
    const oracle::M x = oracle::eval_letters(w11, A, B, 31);
    const oracle::M y = oracle::eval_letters(w12, A, B, 31);
    const ImageTable t = verify_P3(P, F);
    d << "w11 -> [[" << x.a << "," << x.b << "],[" << x.c << "," << x.d << "]], w12 -> [[" << y.a << "," << y.b << "],["
      << y.c << "," << y.d << "]]";
    const bool lib = t[0][0] == Mat2<std::uint64_t>{x.a, x.b, x.c, x.d} && t[0][1] == Mat2<std::uint64_t>{y.a, y.b, y.c, y.d};
    return oracle::psl_identity(x, 31) && y.b == (31 - 30) % 31 && y.a == 1 && y.c == 0 && y.d == 1 && lib;
  });

  report(2, "Horowitz pair", [](std::ostream& d) {
    const TracePoly p = trace_polynomial(expand(parse_word("aabaB"), 100));
    const TracePoly q = trace_polynomial(expand(parse_word("baaBa"), 100));
    if (!(p == q)) return false;
    int agree = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
      auto g = derive_stream(2024, t);
      const std::uint64_t P = random_prime_61_62(g);
      const PrimeField F(P);
      const auto A = random_sl2(F, g);
      const auto B = random_sl2(F, g);
      const oracle::M a{A.a11, A.a12, A.a21, A.a22}, b{B.a11, B.a12, B.a21, B.a22};
      const oracle::M x = oracle::eval_letters("aabaB", a, b, P);
      const oracle::M y = oracle::eval_letters("baaBa", a, b, P);
      agree += (x.a + x.d) % P == (y.a + y.d) % P ? 1 : 0;
    }
    d << "P = " << to_string(p) << ", " << agree << "/1000 evaluations agree";
    return agree == 1000;
  });

  report(3, "forge and verify levels 1..5", [](std::ostream& d) {
    bool ok = true;
    for (int n = 1; n <= 5; ++n) {
      const fs::path out = g_dir / ("level" + std::to_string(n) + ".json");
      const Run f = run("forge --n " + std::to_string(n) + " --seed 7 --out '" + out.string() + "'");
      const Run v = run("verify '" + out.string() + "'");
      if (f.status != 0 || v.status != 0) {
        d << "level " << n << ": forge exit " << f.status << ", verify exit " << v.status << "; ";
        ok = false;
        g_certs.push_back(json());
        continue;
      }
      const json c = load(out);
      g_certs.push_back(c);
      const json& ev = c["trace_evidence"];
      std::set<std::uint64_t> primes;
      for (const auto& p : ev["primes"]) {
        const std::uint64_t P = p.get<std::uint64_t>();
        if (P < (std::uint64_t{1} << 61) || P >= (std::uint64_t{1} << 62)) ok = false;
        primes.insert(P);
      }
      const bool words = c["words"]["family"].size() == static_cast<std::size_t>(n + 1);
      const bool traces = ev["mismatch"].is_null() && ev["trials"].get<int>() >= 20 && primes.size() >= 5;
      // every pair separated by an identity / non-identity image
      std::set<std::pair<int, int>> pairs;
      for (const auto& v : c["verdicts"]) {
        const std::uint64_t P = v["prime"].get<std::uint64_t>();
        if (oracle::psl_identity(cell(v["image_i"], P), P) && !oracle::psl_identity(cell(v["image_j"], P), P)) {
          pairs.insert({v["i"].get<int>(), v["j"].get<int>()});
        }
      }
      const bool separated = pairs.size() == static_cast<std::size_t>(n * (n + 1) / 2);
      ok = ok && words && traces && separated;
      d << "n=" << n << ":" << primes.size() << " primes," << pairs.size() << " pairs; ";
    }
    return ok;
  });

  report(4, "image table shape", [](std::ostream& d) {
    bool ok = !g_certs.empty();
    for (const json& c : g_certs) {
      if (c.is_null()) return false;
      const int n = c["level"].get<int>();
      for (int i = 1; i <= n; ++i) {
        const std::uint64_t P = c["params"]["p"][i - 1].get<std::uint64_t>();
        if (!oracle::is_prime(P)) ok = false;
        for (int j = 1; j <= n + 2 - i; ++j) {
          const oracle::M m = cell(c["image_table"][i - 1][j - 1], P);
          const bool want = j <= n + 1 - i ? oracle::psl_identity(m, P) : unitriangular(m, P);
          if (!want) {
            d << "level " << n << " cell (" << i << "," << j << ") wrong; ";
            ok = false;
          }
        }
      }
    }
    d << "levels 1.." << g_certs.size();
    return ok;
  });

  report(5, "n = 3 distinguishing pattern", [](std::ostream& d) {
    if (g_certs.size() < 3 || g_certs[2].is_null()) return false;
    const json& c = g_certs[2];
    bool ok = true;
    // p_i separates w_{3,5-i} from every earlier word
    for (int i = 1; i <= 3; ++i) {
      const std::uint64_t P = c["params"]["p"][i - 1].get<std::uint64_t>();
      const int j = 5 - i;
      const json& row = c["image_table"][i - 1];
      ok = ok && !oracle::psl_identity(cell(row[j - 1], P), P);
      for (int k = 1; k < j; ++k) ok = ok && oracle::psl_identity(cell(row[k - 1], P), P);
      d << "p" << i << "=" << P << " separates w" << j << "; ";
    }
    return ok;
  });

  report(6, "splitting densities below 10^6", [](std::ostream& d) {
    const Run a = run("primes --density 'x^4+x^3+x^2+x+1' --limit 1000000");
    const Run b = run("primes --density 'x^2-2' --limit 1000000");
    if (a.status != 0 || b.status != 0) return false;
    const double ra = json::parse(a.out)["ratio"].get<double>();
    const double rb = json::parse(b.out)["ratio"].get<double>();
    d << "cyclotomic 5: " << ra << ", x^2-2: " << rb;
    return std::fabs(ra - 0.25) <= 0.01 && std::fabs(rb - 0.5) <= 0.01;
  });

  report(7, "complex length round-trip and level-1 bucket", [](std::ostream& d) {
    std::mt19937_64 g(77);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    int done = 0;
    double worst = 0;
    while (done < 1000) {
      const Complex tr(u(g), u(g));
      if (classify(tr) != ElementClass::loxodromic) continue;
      const Complex back = trace_from_length(complex_length(tr));
      worst = std::max(worst, std::min(std::abs(back - tr), std::abs(back + tr)));
      ++done;
    }
    const WordFamily F = build_family(choose_params(1));
    std::normal_distribution<double> nd(0.0, 0.05);
    auto sl2 = [&]() {
      const Complex a(1 + nd(g), nd(g)), b(nd(g), nd(g)), c(nd(g), nd(g));
      return Mat2<Complex>{a, b, c, (1.0 + b * c) / a};
    };
    ComplexField C(1e-9);
    const WitnessAssignment<ComplexField> asg{C, sl2(), sl2()};
    const auto buckets = bucket_words(asg, {{"w1", F.words[0]}, {"w2", F.words[1]}}, 1e-9);
    d << "worst round-trip error " << worst << ", level-1 buckets " << buckets.size();
    return worst <= 1e-9 && buckets.size() == 1 && buckets[0].multiplicity == 2;
  });

  report(8, "oracle suites", [](std::ostream& d) {
    std::mt19937_64 g(88);
    int bad = 0;
    // conjugacy: half the pairs are rotations of each other by construction
    for (int t = 0; t < 10000; ++t) {
      std::string u = oracle::free_reduce(oracle::random_letters(g, g() % 13));
      std::string v;
      if (t % 2 == 0 && !u.empty()) {
        const std::string c = oracle::random_letters(g, g() % 3);
        v = oracle::free_reduce(c + u + oracle::invert(c));
        if (v.size() > 12) v = u;
      } else {
        v = oracle::free_reduce(oracle::random_letters(g, g() % 13));
      }
      const bool want = oracle::conjugate(oracle::cyclic_core(u), oracle::cyclic_core(v));
      bad += is_conjugate_free(oracle::to_flat(u), oracle::to_flat(v)) != want;
    }
    d << "conjugacy " << bad << " mismatches; ";
    int bad_tp = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
      auto s = derive_stream(88, t);
      const std::uint64_t P = random_prime_61_62(s);
      const PrimeField F(P);
      const auto A = random_sl2(F, s);
      const auto B = random_sl2(F, s);
      const std::string w = oracle::random_letters(g, g() % 16);
      const oracle::M a{A.a11, A.a12, A.a21, A.a22}, b{B.a11, B.a12, B.a21, B.a22};
      const oracle::M img = oracle::eval_letters(w, a, b, P);
      const oracle::M ab = oracle::mul(a, b, P);
      const std::uint64_t got = eval_trace_poly(trace_polynomial(oracle::to_flat(w)), F, (a.a + a.d) % P, (b.a + b.d) % P,
                                                (ab.a + ab.d) % P);
      bad_tp += got != (img.a + img.d) % P;
    }
    d << "trace polynomials " << bad_tp << "; ";
    int bad_split = 0;
    const auto ps = primes_up_to(10000);
    for (const char* text : {"x^2+1", "x^2-2", "x^3-2", "x^3-3*x+1", "x^4+x^3+x^2+x+1", "x^4-10*x^2+1", "x^4+1"}) {
      const auto spec = NumberFieldSpec::from_polynomial(parse_int_poly(text), false);
      for (std::uint64_t p : ps) {
        int roots = 0;
        for (std::uint64_t x = 0; x < p; ++x) {
          std::uint64_t v = 0;
          for (std::size_t i = spec.minimal_polynomial.coeffs.size(); i-- > 0;) {
            v = (v * x + mpz_fdiv_ui(spec.minimal_polynomial.coeffs[i].get_mpz_t(), p)) % p;
          }
          roots += v == 0;
        }
        bad_split += splits_completely(spec, p) != (roots == spec.degree);
      }
    }
    d << "splitting " << bad_split << "; ";
    int bad_order = 0;
    for (std::uint64_t p : primes_up_to(101)) {
      const PrimeField F(p);
      for (int t = 0; t < 200; ++t) {
        const std::uint64_t a = 1 + g() % (p - 1), b = g() % p, c = g() % p;
        const std::uint64_t dd = F.mul(F.add(1, F.mul(b, c)), F.inv(a));
        const oracle::M x{a, b, c, dd};
        oracle::M acc = x;
        std::uint64_t e = 1;
        while (!oracle::psl_identity(acc, p)) {
          acc = oracle::mul(acc, x, p);
          ++e;
        }
        bad_order += order_in_psl2(F, {a, b, c, dd}) != e;
      }
    }
    d << "orders " << bad_order;
    return bad == 0 && bad_tp == 0 && bad_split == 0 && bad_order == 0;
  });

  report(9, "tamper detection", [](std::ostream& d) {
    if (g_certs.size() < 2 || g_certs[1].is_null()) return false;
    const json good = g_certs[1];
    const json flat = good.flatten();
    std::vector<std::string> leaves;
    for (auto it = flat.begin(); it != flat.end(); ++it) leaves.push_back(it.key());
    std::mt19937_64 g(99);
    int rejected = 0;
    int pinpointed = 0;
    for (int t = 0; t < 100; ++t) {
      const json::json_pointer ptr(leaves[g() % leaves.size()]);
      json bad = good;
      json& v = bad[ptr];
      switch (g() % 8) {
        case 0:  // type change
          v = v.is_string() ? json(12) : json("12");
          break;
        case 1:  // removal
          if (ptr.parent_pointer().empty()) {
            bad.erase(ptr.back());
          } else {
            json& parent = bad[ptr.parent_pointer()];
            if (parent.is_object()) {
              parent.erase(ptr.back());
            } else {
              parent.erase(static_cast<std::size_t>(std::stoul(ptr.back())));
            }
          }
          break;
        default:
          if (v.is_number_unsigned() || v.is_number_integer()) {
            v = v.get<std::uint64_t>() + 1 + g() % 5;
          } else if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s == "a" || s == "b") {
              v = s == "a" ? "b" : "a";
            } else if (s == "gen" || s == "mul" || s == "pow") {
              v = s == "mul" ? "pow" : "mul";
            } else {
              v = BigInt(BigInt(s) + 1 + static_cast<long>(g() % 5)).get_str();
            }
          } else if (v.is_null()) {
            v = json::object();
          } else if (v.is_boolean()) {
            v = !v.get<bool>();
          } else {
            v = nullptr;
          }
      }
      const fs::path p = g_dir / "tampered.json";
      save(p, bad);
      const Run r = run("verify '" + p.string() + "'");
      if (r.status == 2) {
        ++rejected;
        const json out = json::parse(r.out);
        const std::string where = out["divergence"]["path"].get<std::string>();
        pinpointed += !where.empty() && where[0] == '/';
      } else {
        d << "accepted or wrong exit " << r.status << " for " << ptr.to_string() << "; ";
      }
    }
    d << rejected << "/100 rejected, " << pinpointed << " with a divergence path";
    return rejected == 100 && pinpointed == 100;
  });

  std::error_code ec;
  fs::remove_all(g_dir, ec);
  return failures == 0 ? 0 : 1;
}
