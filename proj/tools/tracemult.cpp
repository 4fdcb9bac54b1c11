// tracemult command-line driver.
//
// Exit codes: 0 ok, 1 I/O, 2 P3 violation / trace mismatch / failed
// verification, 3 search exhausted, 4 size guard, 64 usage, 65 malformed input,
// 70 anything unexpected.

#include <omp.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tracemult/errors.hpp"
#include "tracemult/forge.hpp"
#include "tracemult/primes.hpp"
#include "tracemult/spectrum.hpp"
#include "tracemult/trace_poly.hpp"
#include "tracemult/version.hpp"

using nlohmann::json;
using namespace tracemult;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitFailed = 2;
constexpr int kExitExhausted = 3;
constexpr int kExitTooLarge = 4;
constexpr int kExitUsage = 64;
constexpr int kExitMalformed = 65;
constexpr int kExitInternal = 70;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  out.close();
  if (!out) throw IoError("write failed: " + path);
}

json header(const char* command, std::uint64_t seed) {
  return {{"command", command}, {"version", kToolVersion}, {"seed", seed}};
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

ForbiddenResidues parse_avoid(const std::string& spec) {
  // "m:r1,r2,..."
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError("--avoid expects MODULUS:R1,R2,... got '" + spec + "'");
  ForbiddenResidues f{0, {}};
  try {
    f.modulus = std::stoull(spec.substr(0, colon));
    std::stringstream rest(spec.substr(colon + 1));
    for (std::string item; std::getline(rest, item, ',');) {
      if (!item.empty()) f.residues.push_back(std::stoull(item));
    }
  } catch (const std::logic_error&) {
    throw ParseError("--avoid expects MODULUS:R1,R2,... got '" + spec + "'");
  }
  return f;
}

struct Options {
  std::uint64_t seed = 0;
  int jobs = 0;

  // forge
  int level = 0;
  std::string out;
  std::string origin;
  std::uint64_t budget = 10000;
  std::uint64_t trials = 20;
  bool no_symbolic = false;

  // verify
  std::string cert_path;

  // tracepoly
  std::string word;
  bool symmetry = false;

  // primes
  std::string next;
  std::vector<std::string> avoid;
  std::string floor;
  std::string split;
  std::uint64_t prime = 0;
  std::string density;
  std::uint64_t limit = 0;

  // spectrum
  std::string gens;
  int max_len = 4;
  double tol = 1e-9;
  bool distinct_inverses = false;
};

int cmd_forge(const Options& o) {
  CertifyOptions co;
  co.trials = o.trials;
  co.search.budget = o.budget;
  co.symbolic = !o.no_symbolic;
  if (!o.origin.empty()) {
    try {
      co.search.origin = big_from_string(o.origin);
    } catch (const std::invalid_argument&) {
      throw ParseError("--origin must be a decimal integer");
    }
  }
  const Certificate cert = certify(o.level, o.seed, co);
  write_file(o.out, certificate_text(cert));
  json j = header("forge", o.seed);
  j["level"] = o.level;
  j["out"] = o.out;
  j["primes"] = cert.params.p;
  j["words"] = cert.family.words.size();
  j["verdicts"] = cert.verdicts.size();
  j["trials"] = cert.trace_evidence.trials;
  j["distinct_trial_primes"] = cert.trace_evidence.distinct_primes();
  j["symbolic"] = cert.symbolic.has_value();
  j["budget"] = o.budget;
  if (!o.origin.empty()) j["origin"] = o.origin;
  emit(j);
  return 0;
}

int cmd_verify(const Options& o) {
  const std::string text = read_file(o.cert_path);
  json cert;
  try {
    cert = json::parse(text);
  } catch (const json::parse_error& e) {
    std::cerr << "malformed certificate: " << e.what() << "\n";
    return kExitMalformed;
  }
  const VerifyReport rep = verify_certificate(cert);
  std::uint64_t seed = 0;
  if (cert.is_object() && cert.contains("seed") && cert["seed"].is_number_unsigned()) seed = cert["seed"];
  json j = header("verify", seed);
  j["path"] = o.cert_path;
  j["ok"] = rep.ok;
  if (!rep.ok) {
    j["divergence"] = {{"path", rep.path}, {"message", rep.message}};
    std::cerr << "divergence at " << rep.path << ": " << rep.message << "\n";
    emit(j);
    return kExitFailed;
  }
  j["level"] = cert["level"];
  emit(j);
  return 0;
}

int cmd_tracepoly(const Options& o) {
  const SlpWord w = parse_word(o.word);
  const FlatWord flat = expand(w, kMaxSymbolicLetters);
  json j = header("tracepoly", o.seed);
  j["word"] = o.word;
  if (o.symmetry) {
    j["symmetry"] = check_symmetry(flat);
  } else {
    const TracePoly p = trace_polynomial(flat);
    j["polynomial"] = to_json(p);
    j["text"] = to_string(p);
  }
  emit(j);
  return 0;
}

int cmd_primes(const Options& o) {
  json j = header("primes", o.seed);
  const int modes = static_cast<int>(!o.next.empty()) + static_cast<int>(!o.split.empty()) +
                    static_cast<int>(!o.density.empty());
  if (modes != 1) throw std::invalid_argument("choose exactly one of --next, --split, --density");
  if (!o.next.empty()) {
    PrimeSearchConstraints c;
    try {
      c.strict_lower_bound = big_from_string(o.next);
      if (!o.floor.empty()) c.doubling_floor = big_from_string(o.floor);
    } catch (const std::invalid_argument&) {
      throw ParseError("--next and --floor take decimal integers");
    }
    for (const auto& a : o.avoid) c.forbidden.push_back(parse_avoid(a));
    j["next"] = o.next;
    j["avoid"] = o.avoid;
    if (!o.floor.empty()) j["floor"] = o.floor;
    j["prime"] = big_to_string(next_prime_constrained(c));
  } else if (!o.split.empty()) {
    if (o.prime < 2 || o.prime >= PrimeField::kMaxModulus || !is_prime_u64(o.prime)) {
      throw std::invalid_argument("--p must be a prime below 2^62");
    }
    const auto spec = NumberFieldSpec::from_polynomial(parse_int_poly(o.split), false);
    j["polynomial"] = to_string(spec.minimal_polynomial);
    j["p"] = o.prime;
    j["splits"] = splits_completely(spec, o.prime);
  } else {
    if (o.limit < 2) throw std::invalid_argument("--limit must be at least 2");
    const auto spec = NumberFieldSpec::from_polynomial(parse_int_poly(o.density), false);
    const DensityReport r = density_estimate(spec, o.limit);
    j["polynomial"] = to_string(spec.minimal_polynomial);
    j["limit"] = r.limit;
    j["split"] = r.split;
    j["primes"] = r.primes;
    j["ratio"] = r.ratio;
  }
  emit(j);
  return 0;
}

int cmd_spectrum(const Options& o) {
  const std::string text = read_file(o.gens);
  json g;
  try {
    g = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed generators file: ") + e.what());
  }
  const auto asg = generators_from_json(g, o.tol);
  SpectrumOptions so;
  so.max_len = o.max_len;
  so.tol = o.tol;
  so.merge_inverses = !o.distinct_inverses;
  const auto entries = enumerate_spectrum(asg, so);
  json j = header("spectrum", o.seed);
  j["gens"] = o.gens;
  j["max_len"] = o.max_len;
  j["tol"] = o.tol;
  j["merge_inverses"] = so.merge_inverses;
  j["convention"] = "l0 = 2 acosh(tr/2), ell >= 0, theta in (-pi, pi], either sign of tr";
  j["entries"] = to_json(entries);
  emit(j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace classes with many conjugacy classes: forging, certificates, traces, primes, spectra"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  Options o;
  app.add_option("--jobs", o.jobs, "Worker thread cap (0 = OpenMP default)")->check(CLI::NonNegativeNumber);

  auto* forge = app.add_subcommand("forge", "Forge and certify a level-n family");
  forge->add_option("--n", o.level, "Level")->required()->check(CLI::Range(1, 64));
  forge->add_option("--seed", o.seed, "Seed for the randomized trace evidence");
  forge->add_option("--out", o.out, "Certificate output path")->required();
  forge->add_option("--origin", o.origin, "p_1 is the least prime above max(30, origin)");
  forge->add_option("--budget", o.budget, "Candidate primes per level")->check(CLI::PositiveNumber);
  forge->add_option("--trials", o.trials, "Randomized trace trials")->check(CLI::PositiveNumber);
  forge->add_flag("--no-symbolic", o.no_symbolic, "Skip exact level-1 trace polynomials");

  auto* verify = app.add_subcommand("verify", "Re-check a certificate");
  verify->add_option("path", o.cert_path, "Certificate file")->required();

  auto* tp = app.add_subcommand("tracepoly", "Trace polynomial of a word in a, b");
  tp->add_option("--word", o.word, "Word text, e.g. \"aabaB\" or \"(a^3 B)^2\"")->required();
  tp->add_flag("--symmetry", o.symmetry, "Check P_W(s,s,u) = P_W(y,x)(s,s,u)");
  tp->add_option("--seed", o.seed, "Recorded only");

  auto* pr = app.add_subcommand("primes", "Constrained prime search, split test, density");
  pr->add_option("--next", o.next, "Least prime above this bound");
  pr->add_option("--avoid", o.avoid, "Forbidden residues MODULUS:R1,R2 (repeatable)");
  pr->add_option("--floor", o.floor, "Also exceed twice this value");
  pr->add_option("--split", o.split, "Polynomial for the split test, e.g. \"x^2+1\"");
  pr->add_option("--p", o.prime, "Prime for --split");
  pr->add_option("--density", o.density, "Polynomial for the density report");
  pr->add_option("--limit", o.limit, "Prime bound for --density");
  pr->add_option("--seed", o.seed, "Recorded only");

  auto* sp = app.add_subcommand("spectrum", "Complex length multiplicities over short words");
  sp->add_option("--gens", o.gens, "Generators JSON file")->required();
  sp->add_option("--max-len", o.max_len, "Word length bound")->check(CLI::Range(1, kMaxSpectrumLength));
  sp->add_option("--tol", o.tol, "Bucket tolerance")->check(CLI::PositiveNumber);
  sp->add_flag("--distinct-inverses", o.distinct_inverses, "Keep w and w^-1 as separate classes");
  sp->add_option("--seed", o.seed, "Recorded only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (o.jobs > 0) omp_set_num_threads(o.jobs);

  try {
    if (*forge) return cmd_forge(o);
    if (*verify) return cmd_verify(o);
    if (*tp) return cmd_tracepoly(o);
    if (*pr) return cmd_primes(o);
    if (*sp) return cmd_spectrum(o);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const tracemult::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const TooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTooLarge;
  } catch (const SearchExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitExhausted;
  } catch (const P3Violation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  } catch (const TraceMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
