// Serial reference kernels against their OpenMP versions.
// Arg is the OpenMP thread count; serial runs ignore it.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "tracemult/forge.hpp"
#include "tracemult/primes.hpp"
#include "tracemult/spectrum.hpp"
#include "tracemult/trace_poly.hpp"

using namespace tracemult;

namespace {

const NumberFieldSpec& cyclotomic5() {
  static const auto spec = NumberFieldSpec::from_polynomial(parse_int_poly("x^4+x^3+x^2+x+1"), true);
  return spec;
}

const WordFamily& family5() {
  static const WordFamily F = build_family(choose_params(5));
  return F;
}

const std::vector<std::uint64_t>& primes5() {
  static const auto p = choose_params(5).p;
  return p;
}

WitnessAssignment<ComplexField> gens() {
  ComplexField C(1e-9);
  return {C, {Complex(1.3, 0.2), Complex(0.4, -0.1), Complex(0.5, 0.3), Complex(0.0, 0.0)},
          {Complex(0.9, -0.3), Complex(0.2, 0.6), Complex(-0.4, 0.1), Complex(1.1, 0.0)}};
}

// det fixup so both generators land in SL2
WitnessAssignment<ComplexField> sl2_gens() {
  auto g = gens();
  for (auto* m : {&g.image_of_a, &g.image_of_b}) {
    const Complex det = m->a11 * m->a22 - m->a12 * m->a21;
    if (std::abs(det) < 1e-9) {
      m->a22 = (1.0 + m->a12 * m->a21) / m->a11;
    } else {
      const Complex s = std::sqrt(det);
      m->a11 /= s;
      m->a12 /= s;
      m->a21 /= s;
      m->a22 /= s;
    }
  }
  return g;
}

void BM_density_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(density_estimate_serial(cyclotomic5(), 200000));
}

void BM_density_omp(benchmark::State& st) {
  omp_set_num_threads(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(density_estimate(cyclotomic5(), 200000));
}

void BM_image_table_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(image_table_serial(primes5(), family5().words));
}

void BM_image_table_omp(benchmark::State& st) {
  omp_set_num_threads(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(image_table(primes5(), family5().words));
}

void BM_trace_evidence_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(random_trace_equal_serial(family5().words, 20, 7));
}

void BM_trace_evidence_omp(benchmark::State& st) {
  omp_set_num_threads(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(random_trace_equal(family5().words, 20, 7));
}

void BM_spectrum_serial(benchmark::State& st) {
  SpectrumOptions o;
  o.max_len = 8;
  const auto g = sl2_gens();
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_spectrum_serial(g, o));
}

void BM_spectrum_omp(benchmark::State& st) {
  omp_set_num_threads(static_cast<int>(st.range(0)));
  SpectrumOptions o;
  o.max_len = 8;
  const auto g = sl2_gens();
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_spectrum(g, o));
}

}  // namespace

BENCHMARK(BM_density_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_density_omp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_image_table_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_image_table_omp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_trace_evidence_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_trace_evidence_omp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_spectrum_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spectrum_omp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
