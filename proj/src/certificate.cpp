#include <algorithm>
#include <unordered_map>

#include "tracemult/errors.hpp"
#include "tracemult/forge.hpp"
#include "tracemult/primes.hpp"

namespace tracemult {

using nlohmann::json;

std::string symbolic_digest(const TracePoly& p) {
  // values at two fixed points modulo the Mersenne prime 2^61 - 1
  const PrimeField F((std::uint64_t{1} << 61) - 1);
  const auto v1 = eval_trace_poly(p, F, F.from_i64(3), F.from_i64(5), F.from_i64(7));
  const auto v2 = eval_trace_poly(p, F, F.from_i64(1000003), F.from_i64(-17), F.from_i64(424242));
  return std::to_string(v1) + ":" + std::to_string(v2);
}

namespace {

json mat_json(const Mat2<std::uint64_t>& m) {
  return json::array({std::to_string(m.a11), std::to_string(m.a12), std::to_string(m.a21), std::to_string(m.a22)});
}

json big_array(const std::vector<BigInt>& v) {
  auto arr = json::array();
  for (const auto& x : v) arr.push_back(big_to_string(x));
  return arr;
}

// Post-order node table over every root, shared nodes listed once.
class NodeTable {
 public:
  std::size_t add(const SlpWord& w) {
    if (auto it = ids_.find(w.id()); it != ids_.end()) return it->second;
    json entry;
    const auto& n = w.node();
    switch (n.kind) {
      case SlpNode::Kind::leaf:
        entry = {{"op", "gen"}, {"gen", n.gen == Gen::a ? "a" : "b"}};
        break;
      case SlpNode::Kind::product: {
        auto args = json::array();
        for (const auto& c : n.children) args.push_back(add(c));
        entry = {{"op", "mul"}, {"args", args}};
        break;
      }
      case SlpNode::Kind::power:
        entry = {{"op", "pow"}, {"arg", add(n.children.front())}, {"exp", big_to_string(n.exponent)}};
        break;
    }
    const std::size_t id = nodes_.size();
    nodes_.push_back(std::move(entry));
    ids_.emplace(w.id(), id);
    keep_.push_back(w);
    return id;
  }
  json nodes() const { return nodes_; }

 private:
  std::unordered_map<const SlpNode*, std::size_t> ids_;
  std::vector<SlpWord> keep_;
  json nodes_ = json::array();
};

json symbolic_json(const std::optional<SymbolicEvidence>& sym) {
  if (!sym) return nullptr;
  auto one = [](const TracePoly& p) { return json{{"terms", p.term_count()}, {"digest", symbolic_digest(p)}}; };
  return {{"w1", one(sym->w1)}, {"w2", one(sym->w2)}};
}

}  // namespace

json to_json(const Certificate& cert) {
  const auto& P = cert.params;
  json j;
  j["version"] = cert.version;
  j["level"] = P.level;
  j["seed"] = cert.seed;
  j["params"] = {{"p", P.p}, {"q", big_array(P.q)}, {"k", big_array(P.k)}, {"m", big_array(P.m)}};
  j["search"] = {{"tried", P.tried}};

  NodeTable table;
  auto levels = json::array();
  for (const auto& [w1, w2] : cert.family.levels) {
    const auto a = table.add(w1);
    const auto b = table.add(w2);
    levels.push_back({a, b});
  }
  auto family = json::array();
  for (const auto& w : cert.family.words) family.push_back(table.add(w));
  j["words"] = {{"nodes", table.nodes()}, {"levels", levels}, {"family", family}};

  auto images = json::array();
  for (const auto& row : cert.images) {
    auto r = json::array();
    for (const auto& m : row) r.push_back(mat_json(m));
    images.push_back(r);
  }
  j["image_table"] = images;
  j["trace_evidence"] = to_json(cert.trace_evidence);
  j["symbolic"] = symbolic_json(cert.symbolic);

  auto verdicts = json::array();
  for (const auto& v : cert.verdicts) {
    verdicts.push_back({{"i", v.i},
                        {"j", v.j},
                        {"prime_index", v.prime_index},
                        {"prime", v.prime},
                        {"image_i", mat_json(v.image_i)},
                        {"image_j", mat_json(v.image_j)}});
  }
  j["verdicts"] = verdicts;
  return j;
}

std::string certificate_text(const Certificate& cert) { return to_json(cert).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Verification

namespace {

struct Divergence {
  std::string path;
  std::string message;
};

[[noreturn]] void diverge(const std::string& path, const std::string& message) { throw Divergence{path, message}; }

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) diverge(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) diverge(path + "/" + key, "missing field");
  return *it;
}

const json& array_of(const json& j, const std::string& path, std::size_t size) {
  if (!j.is_array()) diverge(path, "expected an array");
  if (j.size() != size) diverge(path, "expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
  return j;
}

std::uint64_t get_u64(const json& j, const std::string& path) {
  // documents built in memory may hold signed values
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  diverge(path, "expected a nonnegative integer");
}

BigInt get_big(const json& j, const std::string& path) {
  if (!j.is_string()) diverge(path, "expected a decimal string");
  const auto& s = j.get_ref<const std::string&>();
  BigInt v;
  try {
    v = big_from_string(s);
  } catch (const std::invalid_argument&) {
    diverge(path, "not a decimal integer");
  }
  if (big_to_string(v) != s) diverge(path, "non-canonical decimal");
  return v;
}

Mat2<std::uint64_t> get_mat(const json& j, const std::string& path, std::uint64_t p) {
  array_of(j, path, 4);
  std::uint64_t e[4];
  for (std::size_t c = 0; c < 4; ++c) {
    const std::string at = path + "/" + std::to_string(c);
    const BigInt v = get_big(j[c], at);
    if (sgn(v) < 0 || v >= big_from_u64(p)) diverge(at, "residue out of range");
    e[c] = big_to_u64(v);
  }
  return {e[0], e[1], e[2], e[3]};
}

std::string show(const Mat2<std::uint64_t>& m) {
  return "[[" + std::to_string(m.a11) + ", " + std::to_string(m.a12) + "], [" + std::to_string(m.a21) + ", " +
         std::to_string(m.a22) + "]]";
}

// First place where two JSON values differ, in document order.
std::optional<std::string> first_difference(const json& want, const json& got, const std::string& path) {
  if (want.is_number_integer() && got.is_number_integer()) {
    return want == got ? std::nullopt : std::optional<std::string>(path);
  }
  if (want.type() != got.type()) return path;
  if (want.is_object()) {
    for (auto it = want.begin(); it != want.end(); ++it) {
      const std::string sub = path + "/" + it.key();
      if (!got.contains(it.key())) return sub;
      if (auto d = first_difference(it.value(), got.at(it.key()), sub)) return d;
    }
    for (auto it = got.begin(); it != got.end(); ++it) {
      if (!want.contains(it.key())) return path + "/" + it.key();
    }
    return std::nullopt;
  }
  if (want.is_array()) {
    const std::size_t common = std::min(want.size(), got.size());
    for (std::size_t i = 0; i < common; ++i) {
      if (auto d = first_difference(want[i], got[i], path + "/" + std::to_string(i))) return d;
    }
    if (want.size() != got.size()) return path;
    return std::nullopt;
  }
  if (want != got) return path;
  return std::nullopt;
}

std::vector<SlpWord> parse_nodes(const json& nodes, const std::string& path) {
  if (!nodes.is_array()) diverge(path, "expected an array");
  std::vector<SlpWord> out;
  auto ref = [&out](const json& id, const std::string& at) {
    const std::uint64_t k = get_u64(id, at);
    if (k >= out.size()) diverge(at, "node reference must point to an earlier node");
    return out[k];
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string at = path + "/" + std::to_string(i);
    const json& n = nodes[i];
    const json& op = field(n, at, "op");
    if (op == "gen") {
      if (n.size() != 2) diverge(at, "unexpected fields");
      const json& g = field(n, at, "gen");
      if (g != "a" && g != "b") diverge(at + "/gen", "generator must be a or b");
      out.push_back(SlpWord::leaf(g == "a" ? Gen::a : Gen::b));
    } else if (op == "mul") {
      if (n.size() != 2) diverge(at, "unexpected fields");
      const json& args = field(n, at, "args");
      if (!args.is_array() || args.size() == 1) diverge(at + "/args", "product needs zero or at least two factors");
      std::vector<SlpWord> kids;
      for (std::size_t c = 0; c < args.size(); ++c) kids.push_back(ref(args[c], at + "/args/" + std::to_string(c)));
      out.push_back(SlpWord::product(std::move(kids)));
    } else if (op == "pow") {
      if (n.size() != 3) diverge(at, "unexpected fields");
      const SlpWord base = ref(field(n, at, "arg"), at + "/arg");
      const BigInt e = get_big(field(n, at, "exp"), at + "/exp");
      if (sgn(e) == 0) diverge(at + "/exp", "zero exponent");
      out.push_back(SlpWord::power(base, e));
    } else {
      diverge(at + "/op", "unknown node kind");
    }
  }
  return out;
}

struct Parsed {
  int level = 0;
  std::uint64_t seed = 0;
  ForgeParams params;
  WordFamily family;
};

Parsed parse_and_check_params(const json& cert) {
  Parsed out;
  if (!cert.is_object()) diverge("", "certificate must be a JSON object");
  const json& version = field(cert, "", "version");
  if (version != 1) diverge("/version", "unsupported version");
  const std::uint64_t level = get_u64(field(cert, "", "level"), "/level");
  if (level < 1 || level > 64) diverge("/level", "level out of range");
  const int n = static_cast<int>(level);
  out.level = n;
  out.seed = get_u64(field(cert, "", "seed"), "/seed");

  const json& params = field(cert, "", "params");
  const auto un = static_cast<std::size_t>(n);
  const json& pj = array_of(field(params, "/params", "p"), "/params/p", un);
  const json& qj = array_of(field(params, "/params", "q"), "/params/q", un);
  const json& kj = array_of(field(params, "/params", "k"), "/params/k", un);
  const json& mj = array_of(field(params, "/params", "m"), "/params/m", un - 1);
  if (params.size() != 4) diverge("/params", "unexpected fields");

  ForgeParams& P = out.params;
  P.level = n;
  for (std::size_t i = 0; i < un; ++i) {
    const std::string at = "/params/p/" + std::to_string(i);
    const std::uint64_t p = get_u64(pj[i], at);
    if (p >= PrimeField::kMaxModulus || !is_prime_u64(p)) diverge(at, "not a prime below 2^62");
    if (i == 0 && p <= 30) diverge(at, "p_1 must exceed 30");
    if (i > 0 && p <= 2 * P.p.back()) diverge(at, "p_n must exceed 2 p_{n-1}");
    P.p.push_back(p);
    P.q.push_back(get_big(qj[i], "/params/q/" + std::to_string(i)));
    P.k.push_back(get_big(kj[i], "/params/k/" + std::to_string(i)));
  }
  for (std::size_t i = 0; i + 1 < un; ++i) P.m.push_back(get_big(mj[i], "/params/m/" + std::to_string(i)));

  if (P.q[0] != 1) diverge("/params/q/0", "q_1 must be 1");
  if (P.k[0] != big_from_u64(P.p[0]) - 4) diverge("/params/k/0", "k_1 must be p_1 - 4");
  BigInt q = 1;
  for (std::size_t L = 1; L < un; ++L) {
    q *= big_from_u64(P.p[L - 1]) * big_from_u64(P.p[L - 1] - 1);
    const std::string idx = std::to_string(L);
    if (P.q[L] != q) diverge("/params/q/" + idx, "q_n must be the product of p_j (p_j - 1) over j < n");
    const BigInt two_m = 2 * P.m[L - 1];
    if (sgn(P.m[L - 1]) <= 0) diverge("/params/m/" + std::to_string(L - 1), "m must be positive");
    for (std::size_t i = 0; i < L; ++i) {
      const PrimeField Fi(P.p[i]);
      const std::uint64_t r = mpz_fdiv_ui(big_from_u64(P.p[L]).get_mpz_t(), P.p[i]);
      if (r == 1 || r == Fi.sub(Fi.pow(2, two_m), 1)) {
        diverge("/params/p/" + idx, "p_n falls in a forbidden residue class mod p_" + std::to_string(i + 1));
      }
    }
    const PrimeField F(P.p[L]);
    if (F.pow(2, two_m) == 1 || F.pow(2, 2 * two_m) == 1) diverge("/params/p/" + idx, "2^(2m) or 2^(4m) is 1 mod p_n");
    BigInt k = big_from_u64(F.neg(F.pow(2, two_m)));
    auto bad = [&](const BigInt& kk) {
      return std::any_of(P.p.begin(), P.p.begin() + static_cast<std::ptrdiff_t>(L),
                         [&kk](std::uint64_t pi) { return mpz_fdiv_ui(BigInt(kk + 1).get_mpz_t(), pi) == 0; });
    };
    while (bad(k)) k += big_from_u64(P.p[L]);
    if (P.k[L] != k) diverge("/params/k/" + idx, "k_n must be " + big_to_string(k));
  }

  const json& words = field(cert, "", "words");
  if (words.size() != 3) diverge("/words", "unexpected fields");
  const auto nodes = parse_nodes(field(words, "/words", "nodes"), "/words/nodes");
  auto node_at = [&nodes](const json& id, const std::string& at) {
    const std::uint64_t k = get_u64(id, at);
    if (k >= nodes.size()) diverge(at, "node reference out of range");
    return nodes[k];
  };
  const json& lv = array_of(field(words, "/words", "levels"), "/words/levels", un);
  const json& fam = array_of(field(words, "/words", "family"), "/words/family", un + 1);
  WordFamily& F = out.family;
  F.level = n;
  for (std::size_t L = 0; L < un; ++L) {
    const std::string at = "/words/levels/" + std::to_string(L);
    array_of(lv[L], at, 2);
    F.levels.emplace_back(node_at(lv[L][0], at + "/0"), node_at(lv[L][1], at + "/1"));
  }
  for (std::size_t i = 0; i <= un; ++i) F.words.push_back(node_at(fam[i], "/words/family/" + std::to_string(i)));

  // m_j from the serialized words, then the words from the parameters
  for (std::size_t j = 0; j + 1 < un; ++j) {
    if (exponent_sum(F.levels[j].first).total != P.m[j]) {
      diverge("/params/m/" + std::to_string(j), "m does not match the exponent sum of the level word");
    }
  }
  const WordFamily rebuilt = build_family(P);
  for (std::size_t L = 0; L < un; ++L) {
    for (int s = 0; s < 2; ++s) {
      const auto& got = s == 0 ? F.levels[L].first : F.levels[L].second;
      const auto& want = s == 0 ? rebuilt.levels[L].first : rebuilt.levels[L].second;
      if (!structurally_equal(got, want)) {
        diverge("/words/levels/" + std::to_string(L) + "/" + std::to_string(s), "word differs from the template recursion");
      }
    }
  }
  for (std::size_t i = 0; i <= un; ++i) {
    if (!structurally_equal(F.words[i], rebuilt.words[i])) {
      diverge("/words/family/" + std::to_string(i), "family word differs from the switch construction");
    }
  }
  return out;
}

void check_images_and_verdicts(const json& cert, const Parsed& in, const ImageTable& table) {
  const int n = in.level;
  const auto un = static_cast<std::size_t>(n);
  const json& tj = array_of(field(cert, "", "image_table"), "/image_table", un);
  for (std::size_t i = 0; i < un; ++i) {
    const std::string row = "/image_table/" + std::to_string(i);
    array_of(tj[i], row, un + 1);
    for (std::size_t j = 0; j <= un; ++j) {
      const std::string at = row + "/" + std::to_string(j);
      const auto got = get_mat(tj[i][j], at, in.params.p[i]);
      if (!(got == table[i][j])) {
        const auto& want = table[i][j];
        const std::uint64_t g[4] = {got.a11, got.a12, got.a21, got.a22};
        const std::uint64_t w[4] = {want.a11, want.a12, want.a21, want.a22};
        std::size_t c = 0;
        while (g[c] == w[c]) ++c;
        diverge(at + "/" + std::to_string(c), "recorded " + show(got) + ", recomputed " + show(want));
      }
    }
  }
  if (auto bad = check_p3_shape(table, in.params.p)) {
    diverge("/image_table/" + std::to_string(bad->i - 1) + "/" + std::to_string(bad->j - 1),
            "P3 pattern fails: " + show(bad->image));
  }

  const auto want = build_verdicts(in.params, table);
  const json& vj = array_of(field(cert, "", "verdicts"), "/verdicts", want.size());
  for (std::size_t v = 0; v < want.size(); ++v) {
    const std::string at = "/verdicts/" + std::to_string(v);
    const json& e = vj[v];
    if (!e.is_object() || e.size() != 6) diverge(at, "malformed verdict");
    const auto& w = want[v];
    if (get_u64(field(e, at, "i"), at + "/i") != static_cast<std::uint64_t>(w.i)) diverge(at + "/i", "pair order");
    if (get_u64(field(e, at, "j"), at + "/j") != static_cast<std::uint64_t>(w.j)) diverge(at + "/j", "pair order");
    if (get_u64(field(e, at, "prime_index"), at + "/prime_index") != static_cast<std::uint64_t>(w.prime_index)) {
      diverge(at + "/prime_index", "distinguishing prime must be p_{n+2-j}");
    }
    if (get_u64(field(e, at, "prime"), at + "/prime") != w.prime) diverge(at + "/prime", "wrong distinguishing prime");
    const PrimeField Fp(w.prime);
    const auto mi = get_mat(field(e, at, "image_i"), at + "/image_i", w.prime);
    const auto mj = get_mat(field(e, at, "image_j"), at + "/image_j", w.prime);
    if (!(mi == w.image_i)) diverge(at + "/image_i", "does not match the image table");
    if (!(mj == w.image_j)) diverge(at + "/image_j", "does not match the image table");
    if (!psl_is_identity(Fp, mi) || !is_nontrivial_unitriangular(Fp, mj)) {
      diverge(at, "cited prime does not separate the pair");
    }
  }
}

void check_trace_evidence(const json& cert, const Parsed& in) {
  const json& ev = field(cert, "", "trace_evidence");
  if (!ev.is_object() || ev.size() != 4) diverge("/trace_evidence", "malformed trace evidence");
  if (get_u64(field(ev, "/trace_evidence", "seed"), "/trace_evidence/seed") != in.seed) {
    diverge("/trace_evidence/seed", "seed differs from the certificate seed");
  }
  const std::uint64_t trials = get_u64(field(ev, "/trace_evidence", "trials"), "/trace_evidence/trials");
  array_of(field(ev, "/trace_evidence", "primes"), "/trace_evidence/primes", trials);
  if (!field(ev, "/trace_evidence", "mismatch").is_null()) diverge("/trace_evidence/mismatch", "traces differ");
  const auto rerun = random_trace_equal(in.family.words, trials, in.seed);
  if (auto d = first_difference(to_json(rerun), ev, "/trace_evidence")) diverge(*d, "trace evidence does not reproduce");
  if (rerun.mismatch) diverge("/trace_evidence/mismatch", "traces differ on rerun");
}

void check_symbolic(const json& cert, const Parsed& in) {
  const json& got = field(cert, "", "symbolic");
  if (in.level != 1) {
    if (!got.is_null()) diverge("/symbolic", "symbolic evidence only exists at level 1");
    return;
  }
  if (got.is_null()) return;  // optional
  std::optional<SymbolicEvidence> sym;
  try {
    const auto& pr = in.family.levels.front();
    sym = SymbolicEvidence{trace_polynomial(expand(pr.first, kMaxSymbolicLetters)),
                           trace_polynomial(expand(pr.second, kMaxSymbolicLetters))};
  } catch (const TooLarge&) {
    diverge("/symbolic", "words exceed the symbolic guard");
  }
  if (!(sym->w1 == sym->w2)) diverge("/symbolic", "trace polynomials differ");
  if (auto d = first_difference(symbolic_json(sym), got, "/symbolic")) diverge(*d, "symbolic evidence does not reproduce");
}

}  // namespace

VerifyReport verify_certificate(const json& cert) {
  try {
    const Parsed in = parse_and_check_params(cert);
    const ImageTable table = image_table(in.params.p, in.family.words);
    check_images_and_verdicts(cert, in, table);
    check_trace_evidence(cert, in);
    check_symbolic(cert, in);

    // Reproduction: the search must land on the same primes with the same
    // candidate counts, and every other field must match byte for byte.
    const json& ev = field(cert, "", "trace_evidence");
    CertifyOptions opts;
    opts.trials = ev.at("trials").get<std::uint64_t>();
    opts.symbolic = false;
    opts.search.origin = big_from_u64(in.params.p[0] - 1);
    Certificate again;
    try {
      again = certify(in.level, in.seed, opts);
    } catch (const std::exception& e) {
      diverge("/params", std::string("reproduction failed: ") + e.what());
    }
    json want = to_json(again);
    json got = cert;
    want.erase("symbolic");
    got.erase("symbolic");
    if (auto d = first_difference(want, got, "")) diverge(*d, "field does not reproduce");
    return {true, "", "ok"};
  } catch (const Divergence& d) {
    return {false, d.path.empty() ? "/" : d.path, d.message};
  } catch (const std::exception& e) {
    return {false, "/", e.what()};
  }
}

}  // namespace tracemult
