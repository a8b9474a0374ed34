#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "sonin/extrema.hpp"
#include "sonin/kernels.hpp"
#include "sonin/verify.hpp"

namespace {

std::vector<double> grid(std::size_t n) {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = std::cos(M_PI * (i + 0.5) / n);
  return xs;
}

void recurrence(benchmark::State& state, sonin::Execution exec) {
  const int k = static_cast<int>(state.range(0));
  const auto table = sonin::RecurrenceTable::build(sonin::Params::ultraspherical(k, 3.5));
  const auto xs = grid(12 * (k + 2));
  std::vector<double> m(xs.size()), s(xs.size());
  for (auto _ : state) {
    sonin::eval_orthonormal_batch(table, xs, m, s, exec);
    benchmark::DoNotOptimize(m.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(xs.size()) * k);
}

void BM_RecurrenceSerial(benchmark::State& s) { recurrence(s, sonin::Execution::serial); }
void BM_RecurrenceBlocked(benchmark::State& s) { recurrence(s, sonin::Execution::parallel); }
BENCHMARK(BM_RecurrenceSerial)->Arg(50)->Arg(400)->Arg(2000);
BENCHMARK(BM_RecurrenceBlocked)->Arg(50)->Arg(400)->Arg(2000);

void scan(benchmark::State& state, sonin::Execution exec) {
  const auto p = sonin::Params::ultraspherical(static_cast<int>(state.range(0)), 10.0);
  sonin::ScanOptions opt;
  opt.exec = exec;
  for (auto _ : state) benchmark::DoNotOptimize(sonin::global_max(p, sonin::Window::full(), opt));
}

void BM_GlobalMaxSerial(benchmark::State& s) { scan(s, sonin::Execution::serial); }
void BM_GlobalMaxBlocked(benchmark::State& s) { scan(s, sonin::Execution::parallel); }
BENCHMARK(BM_GlobalMaxSerial)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GlobalMaxBlocked)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void sweep(benchmark::State& state, sonin::Execution exec) {
  auto cfg = sonin::SweepConfig::parse(R"({
    "checks": ["thm1", "lemma_glav", "thm4_containment"],
    "k_spec": {"min": 6, "max": 60, "step": 6},
    "alpha_spec": {"lo": "threshold", "hi": 1000, "count": 6}
  })");
  cfg.parallel = exec == sonin::Execution::parallel;
  for (auto _ : state) benchmark::DoNotOptimize(sonin::sweep(cfg, exec));
}

void BM_SweepSerial(benchmark::State& s) { sweep(s, sonin::Execution::serial); }
void BM_SweepParallel(benchmark::State& s) { sweep(s, sonin::Execution::parallel); }
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
