#include <algorithm>
#include <set>

#include "tracemult/primes.hpp"
#include "tracemult/trace_poly.hpp"

namespace tracemult {

std::size_t TraceEqualityEvidence::distinct_primes() const {
  return std::set<std::uint64_t>(primes.begin(), primes.end()).size();
}

Mat2<std::uint64_t> random_sl2(const PrimeField& field, std::mt19937_64& gen) {
  const std::uint64_t p = field.modulus();
  std::uint64_t a;
  std::uint64_t c;
  do {
    a = uniform_below(gen, p);
    c = uniform_below(gen, p);
  } while (a == 0 && c == 0);
  // particular second column, then shift by a uniform multiple of the first
  std::uint64_t b = 0;
  std::uint64_t d = 0;
  if (a != 0) {
    d = field.inv(a);
  } else {
    b = field.neg(field.inv(c));
  }
  const std::uint64_t t = uniform_below(gen, p);
  return {a, field.add(b, field.mul(t, a)), c, field.add(d, field.mul(t, c))};
}

std::uint64_t random_prime_61_62(std::mt19937_64& gen) {
  constexpr std::uint64_t lo = std::uint64_t{1} << 61;
  constexpr std::uint64_t hi = std::uint64_t{1} << 62;
  while (true) {
    std::uint64_t n = lo + uniform_below(gen, lo);
    n |= 1U;
    while (n < hi && !is_prime_u64(n)) n += 2;
    if (n < hi) return n;
  }
}

namespace {

struct TrialOutcome {
  std::uint64_t prime = 0;
  std::optional<TraceMismatchWitness> mismatch;
};

TrialOutcome run_trial(std::span<const SlpWord> family, std::uint64_t seed, std::uint64_t trial) {
  auto gen = derive_stream(seed, trial);
  TrialOutcome out;
  out.prime = random_prime_61_62(gen);
  const PrimeField field(out.prime);
  const auto a = random_sl2(field, gen);
  const auto b = random_sl2(field, gen);
  WordEvaluator<PrimeField> eval({field, a, b});
  std::vector<std::uint64_t> traces;
  traces.reserve(family.size());
  for (const auto& w : family) traces.push_back(mat_trace(field, eval(w)));
  for (std::size_t j = 1; j < traces.size(); ++j) {
    if (traces[j] != traces[0]) {
      out.mismatch = TraceMismatchWitness{trial, 0, j, out.prime, a, b, traces[0], traces[j]};
      break;
    }
  }
  return out;
}

TraceEqualityEvidence assemble(std::uint64_t seed, std::uint64_t trials, std::vector<TrialOutcome>& outcomes) {
  TraceEqualityEvidence ev;
  ev.seed = seed;
  ev.trials = trials;
  for (auto& o : outcomes) {
    ev.primes.push_back(o.prime);
    if (!ev.mismatch && o.mismatch) ev.mismatch = o.mismatch;
  }
  return ev;
}

}  // namespace

TraceEqualityEvidence random_trace_equal_serial(std::span<const SlpWord> family, std::uint64_t trials,
                                                std::uint64_t seed) {
  std::vector<TrialOutcome> outcomes;
  for (std::uint64_t t = 0; t < trials; ++t) outcomes.push_back(run_trial(family, seed, t));
  return assemble(seed, trials, outcomes);
}

TraceEqualityEvidence random_trace_equal(std::span<const SlpWord> family, std::uint64_t trials, std::uint64_t seed) {
  std::vector<TrialOutcome> outcomes(trials);
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < n; ++t) {
    outcomes[static_cast<std::size_t>(t)] = run_trial(family, seed, static_cast<std::uint64_t>(t));
  }
  return assemble(seed, trials, outcomes);
}

namespace {

nlohmann::json mat_json(const Mat2<std::uint64_t>& m) {
  return nlohmann::json::array(
      {std::to_string(m.a11), std::to_string(m.a12), std::to_string(m.a21), std::to_string(m.a22)});
}

Mat2<std::uint64_t> mat_from_json(const nlohmann::json& j) {
  auto entry = [&j](std::size_t k) { return big_to_u64(big_from_string(j.at(k).get<std::string>())); };
  if (j.size() != 4) throw std::invalid_argument("matrix must have 4 entries");
  return {entry(0), entry(1), entry(2), entry(3)};
}

}  // namespace

nlohmann::json to_json(const TraceEqualityEvidence& ev) {
  nlohmann::json j;
  j["seed"] = ev.seed;
  j["trials"] = ev.trials;
  j["primes"] = ev.primes;
  if (ev.mismatch) {
    const auto& m = *ev.mismatch;
    j["mismatch"] = {{"trial", m.trial},     {"word_i", m.word_i},       {"word_j", m.word_j},
                     {"prime", m.prime},     {"image_a", mat_json(m.image_a)}, {"image_b", mat_json(m.image_b)},
                     {"trace_i", std::to_string(m.trace_i)}, {"trace_j", std::to_string(m.trace_j)}};
  } else {
    j["mismatch"] = nullptr;
  }
  return j;
}

TraceEqualityEvidence trace_evidence_from_json(const nlohmann::json& j) {
  TraceEqualityEvidence ev;
  ev.seed = j.at("seed").get<std::uint64_t>();
  ev.trials = j.at("trials").get<std::uint64_t>();
  ev.primes = j.at("primes").get<std::vector<std::uint64_t>>();
  if (!j.at("mismatch").is_null()) {
    const auto& m = j.at("mismatch");
    ev.mismatch = TraceMismatchWitness{m.at("trial").get<std::uint64_t>(),
                                       m.at("word_i").get<std::size_t>(),
                                       m.at("word_j").get<std::size_t>(),
                                       m.at("prime").get<std::uint64_t>(),
                                       mat_from_json(m.at("image_a")),
                                       mat_from_json(m.at("image_b")),
                                       big_to_u64(big_from_string(m.at("trace_i").get<std::string>())),
                                       big_to_u64(big_from_string(m.at("trace_j").get<std::string>()))};
  }
  return ev;
}

}  // namespace tracemult
