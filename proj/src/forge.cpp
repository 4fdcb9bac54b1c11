#include "tracemult/forge.hpp"

#include <algorithm>

#include "tracemult/errors.hpp"
#include "tracemult/primes.hpp"

namespace tracemult {

Templates build_templates(std::uint64_t p, const BigInt& q, const BigInt& k) {
  const SlpWord x = SlpWord::leaf(Gen::a);
  const SlpWord y = SlpWord::leaf(Gen::b);
  const SlpWord x_inv = SlpWord::inverse(x);
  const SlpWord base =
      SlpWord::product({SlpWord::power(x, big_from_u64(p) - 1 + q), SlpWord::power(y, BigInt(-q))});
  const SlpWord body = SlpWord::power(base, k);
  return {SlpWord::product({body, x, base, x_inv}), SlpWord::product({x, body, x_inv, base})};
}

namespace {

std::pair<SlpWord, SlpWord> next_pair(const std::pair<SlpWord, SlpWord>& prev, std::uint64_t p, const BigInt& q,
                                      const BigInt& k) {
  const Templates t = build_templates(p, q, k);
  return {substitute(t.w, prev.first, prev.second), substitute(t.w_bar, prev.first, prev.second)};
}

std::pair<SlpWord, SlpWord> first_pair(std::uint64_t p, const BigInt& k) {
  return next_pair({SlpWord::leaf(Gen::a), SlpWord::leaf(Gen::b)}, p, BigInt(1), k);
}

BigInt q_for(const std::vector<std::uint64_t>& p, std::size_t level) {
  BigInt q = 1;
  for (std::size_t j = 0; j + 1 < level; ++j) q *= big_from_u64(p[j]) * big_from_u64(p[j] - 1);
  return q;
}

}  // namespace

WordFamily build_family(const ForgeParams& params) {
  WordFamily fam;
  fam.level = params.level;
  for (int L = 1; L <= params.level; ++L) {
    const auto idx = static_cast<std::size_t>(L - 1);
    if (L == 1) {
      fam.levels.push_back(first_pair(params.p[0], params.k[0]));
    } else {
      fam.levels.push_back(next_pair(fam.levels.back(), params.p[idx], params.q[idx], params.k[idx]));
    }
  }
  fam.words = {fam.levels.back().first, fam.levels.back().second};
  for (int i = 3; i <= params.level + 1; ++i) fam.words.push_back(switch_image(fam, i));
  return fam;
}

SlpWord switch_image(const WordFamily& family, int i) {
  const int n = family.level;
  if (i < 3 || i > n + 1) throw std::out_of_range("switch index out of range");
  const auto& pair = family.levels[static_cast<std::size_t>(n + 1 - i)];  // level n+2-i
  return switch_pair(family.levels.back().first, pair.first, pair.second);
}

ForgeParams choose_params(int n, const SearchOptions& opts) {
  if (n < 1) throw std::invalid_argument("level must be at least 1");
  ForgeParams out;
  out.level = n;

  BigInt floor1 = 30;
  if (opts.origin && *opts.origin > floor1) floor1 = *opts.origin;
  const BigInt p1 = next_prime_constrained({floor1, {}, std::nullopt});
  if (p1 >= big_from_u64(PrimeField::kMaxModulus)) throw TooLarge("p_1 does not fit the 2^62 field limit");
  out.p.push_back(big_to_u64(p1));
  out.q.emplace_back(1);
  out.k.push_back(p1 - 4);
  out.tried.push_back(1);

  std::pair<SlpWord, SlpWord> pair = first_pair(out.p[0], out.k[0]);
  for (int L = 2; L <= n; ++L) {
    const BigInt m = exponent_sum(pair.first).total;
    const BigInt two_m = 2 * m;
    const BigInt q = q_for(out.p, static_cast<std::size_t>(L));

    PrimeSearchConstraints c;
    c.doubling_floor = big_from_u64(out.p.back());
    for (std::uint64_t pi : out.p) {
      const PrimeField F(pi);
      const std::uint64_t r = F.sub(F.pow(2, two_m), 1);
      c.forbidden.push_back({pi, {1 % pi, r}});
    }

    std::uint64_t tried = 0;
    std::uint64_t chosen = 0;
    while (chosen == 0) {
      if (tried >= opts.budget) throw SearchExhausted(L, opts.budget);
      const BigInt cand = next_prime_constrained(c);
      ++tried;
      c.strict_lower_bound = cand;
      if (cand >= big_from_u64(PrimeField::kMaxModulus)) {
        throw TooLarge("p_" + std::to_string(L) + " does not fit the 2^62 field limit");
      }
      const std::uint64_t pl = big_to_u64(cand);
      const PrimeField F(pl);
      WordEvaluator<PrimeField> ev(borel_witness(F));
      // (a) z = w1^q w2^-q must be a nontrivial unitriangular element
      const auto z = mat_mul(F, mat_pow(F, ev(pair.first), q), mat_pow(F, ev(pair.second), BigInt(-q)));
      if (!is_nontrivial_unitriangular(F, z)) continue;
      if (F.pow(2, two_m) == 1) continue;      // (b)
      if (F.pow(2, 2 * two_m) == 1) continue;  // (c)
      chosen = pl;
    }

    const PrimeField F(chosen);
    BigInt k = big_from_u64(F.neg(F.pow(2, two_m)));
    auto hits_minus_one = [&out](const BigInt& kk) {
      return std::any_of(out.p.begin(), out.p.end(),
                         [&kk](std::uint64_t pi) { return mpz_fdiv_ui(BigInt(kk + 1).get_mpz_t(), pi) == 0; });
    };
    while (hits_minus_one(k)) k += big_from_u64(chosen);

    out.m.push_back(m);
    out.p.push_back(chosen);
    out.q.push_back(q);
    out.k.push_back(k);
    out.tried.push_back(tried);
    pair = next_pair(pair, chosen, q, k);
  }
  return out;
}

namespace {

std::vector<Mat2<std::uint64_t>> image_row(std::uint64_t p, std::span<const SlpWord> words) {
  const PrimeField F(p);
  WordEvaluator<PrimeField> ev(borel_witness(F));
  std::vector<Mat2<std::uint64_t>> row;
  row.reserve(words.size());
  for (const auto& w : words) row.push_back(ev(w));
  return row;
}

}  // namespace

ImageTable image_table_serial(std::span<const std::uint64_t> primes, std::span<const SlpWord> words) {
  ImageTable t;
  for (std::uint64_t p : primes) t.push_back(image_row(p, words));
  return t;
}

ImageTable image_table(std::span<const std::uint64_t> primes, std::span<const SlpWord> words) {
  ImageTable t(primes.size());
  const auto n = static_cast<std::int64_t>(primes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    t[static_cast<std::size_t>(i)] = image_row(primes[static_cast<std::size_t>(i)], words);
  }
  return t;
}

std::optional<P3Failure> check_p3_shape(const ImageTable& table, std::span<const std::uint64_t> primes) {
  const int n = static_cast<int>(primes.size());
  for (int i = 1; i <= n; ++i) {
    const PrimeField F(primes[static_cast<std::size_t>(i - 1)]);
    const auto& row = table[static_cast<std::size_t>(i - 1)];
    for (int j = 1; j <= n + 2 - i; ++j) {
      const auto& img = row[static_cast<std::size_t>(j - 1)];
      const bool good = j <= n + 1 - i ? psl_is_identity(F, img) : is_nontrivial_unitriangular(F, img);
      if (!good) return P3Failure{i, j, img};
    }
  }
  return std::nullopt;
}

ImageTable verify_P3(const ForgeParams& params, const WordFamily& family) {
  ImageTable t = image_table(params.p, family.words);
  if (auto bad = check_p3_shape(t, params.p)) {
    const PrimeField F(params.p[static_cast<std::size_t>(bad->i - 1)]);
    throw P3Violation(bad->i, bad->j, mat_to_string(F, bad->image));
  }
  return t;
}

std::vector<Verdict> build_verdicts(const ForgeParams& params, const ImageTable& table) {
  const int n = params.level;
  std::vector<Verdict> out;
  for (int i = 1; i <= n + 1; ++i) {
    for (int j = i + 1; j <= n + 1; ++j) {
      const int r = n + 2 - j;
      const auto& row = table[static_cast<std::size_t>(r - 1)];
      out.push_back({i, j, r, params.p[static_cast<std::size_t>(r - 1)], row[static_cast<std::size_t>(i - 1)],
                     row[static_cast<std::size_t>(j - 1)]});
    }
  }
  return out;
}

Certificate certify(int n, std::uint64_t seed, const CertifyOptions& opts) {
  Certificate cert;
  cert.seed = seed;
  cert.params = choose_params(n, opts.search);
  cert.family = build_family(cert.params);
  cert.images = verify_P3(cert.params, cert.family);
  cert.verdicts = build_verdicts(cert.params, cert.images);
  cert.trace_evidence = random_trace_equal(cert.family.words, opts.trials, seed);
  if (const auto& mm = cert.trace_evidence.mismatch) {
    throw TraceMismatch("trial " + std::to_string(mm->trial) + ": traces of w_" + std::to_string(mm->word_i + 1) +
                        " and w_" + std::to_string(mm->word_j + 1) + " differ mod " + std::to_string(mm->prime));
  }
  if (opts.symbolic && n == 1) {
    try {
      const auto& pr = cert.family.levels.front();
      SymbolicEvidence sym{trace_polynomial(expand(pr.first, kMaxSymbolicLetters)),
                           trace_polynomial(expand(pr.second, kMaxSymbolicLetters))};
      if (!(sym.w1 == sym.w2)) throw TraceMismatch("level-1 trace polynomials differ");
      cert.symbolic = std::move(sym);
    } catch (const TooLarge&) {
      // beyond the symbolic guard; randomized evidence stands alone
    }
  }
  return cert;
}

}  // namespace tracemult
