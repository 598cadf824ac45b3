#include <benchmark/benchmark.h>

#include "rnd/spectral.hpp"

using namespace rnd;

namespace {
const WaveProfile& wave() {
  static const WaveProfile w = [] {
    ModelParams p = presets::set_a();
    p.a = 0.5182;
    p.eps = 1e-4;
    return het_bvp_solve(singular_het_solve(p), p.eps, p);
  }();
  return w;
}

void evans_sweep_bench(benchmark::State& st, Exec exec) {
  const WaveProfile& w = wave();
  const std::vector<cd> pts = semicircle_contour(100.0, 1e-3, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(evans_sweep(pts, w, w.params, {}, exec));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(pts.size()));
}
}  // namespace

BENCHMARK_CAPTURE(evans_sweep_bench, serial, Exec::Serial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(evans_sweep_bench, parallel, Exec::Parallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
