#include <benchmark/benchmark.h>

#include <random>

#include "pinchsec/baselines.hpp"
#include "pinchsec/convex.hpp"
#include "pinchsec/model.hpp"
#include "pinchsec/past.hpp"
#include "pinchsec/pso.hpp"
#include "pinchsec/wd.hpp"

using namespace pinchsec;

namespace {

Scenario scenario(int n) {
  Scenario scn = Scenario::defaults();
  scn.num_pas_per_waveguide = n;
  scn.bob_pos = {0.8, -1.3, 0.0};
  scn.eve_pos = {-1.1, 0.9, 0.0};
  return scn;
}

CVector random_vector(int m, std::mt19937_64& gen, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  CVector h(m);
  for (int i = 0; i < m; ++i) h[i] = cplx(nd(gen), nd(gen));
  return h;
}

void BM_CompositeChannel(benchmark::State& state) {
  const Scenario scn = scenario(static_cast<int>(state.range(0)));
  PinchLayout layout{0, {}};
  for (int i = 0; i < scn.num_pas_per_waveguide; ++i) layout.xs.push_back(-2.0 + 0.3 * i);
  for (auto _ : state) benchmark::DoNotOptimize(composite_channel(layout, scn.bob_pos, scn));
}
BENCHMARK(BM_CompositeChannel)->Arg(1)->Arg(4)->Arg(8);

void BM_PastOptimize(benchmark::State& state) {
  const Scenario scn = scenario(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(past_optimize(AlignmentTarget{}, FineTuneParams{}, scn));
}
BENCHMARK(BM_PastOptimize)->Arg(2)->Arg(4)->Arg(8);

void BM_PsoStep(benchmark::State& state) {
  const int dims = static_cast<int>(state.range(0));
  const PsoHyper hyper = PsoHyper::box(dims, -2.5, 2.5);
  const Fitness sphere = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s -= v * v;
    return s;
  };
  SwarmState swarm = init_swarm(hyper, 1);
  evaluate_swarm(swarm, sphere);
  for (auto _ : state) {
    if (swarm.iter == hyper.max_iters) {
      state.PauseTiming();
      swarm = init_swarm(hyper, 1);
      evaluate_swarm(swarm, sphere);
      state.ResumeTiming();
    }
    pso_step(swarm, sphere, hyper);
  }
}
BENCHMARK(BM_PsoStep)->Arg(4)->Arg(16);

void BM_PsoSingle(benchmark::State& state) {
  const Scenario scn = scenario(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pso_single(scn, PsoHyper{}, 100.0, 3));
}
BENCHMARK(BM_PsoSingle)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_WdPowerSca(benchmark::State& state) {
  const cplx b1(3e-4), b2(5e-5), e1(1e-4), e2(2e-4);
  const PowerSplit init = wd_initial_split(b1, b2, e1, e2, 1e-3, 1e-12, 1e-12);
  for (auto _ : state) benchmark::DoNotOptimize(wd_power_sca(b1, b2, e1, e2, 1e-3, 1e-12, 1e-12, 1e-3, init));
}
BENCHMARK(BM_WdPowerSca);

void BM_WmBeamformSca(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::mt19937_64 gen(5);
  const CVector hb = random_vector(m, gen, 3e-5);
  const CVector he = random_vector(m, gen, 2e-5);
  const CVector hat = hb / hb.norm();
  const CMatrix w0 = 1e-3 * hat * hat.adjoint();
  const CMatrix v0 = CMatrix::Zero(m, m);
  for (auto _ : state) benchmark::DoNotOptimize(wm_beamform_sca(hb, he, 1e-3, 1e-12, 1e-12, 1e-3, w0, v0));
}
BENCHMARK(BM_WmBeamformSca)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_HermitianEig(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::mt19937_64 gen(9);
  CMatrix a(m, m);
  for (int i = 0; i < m; ++i) a.col(i) = random_vector(m, gen, 1.0);
  const CMatrix h = a + a.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(h));
}
BENCHMARK(BM_HermitianEig)->Arg(2)->Arg(4)->Arg(8);

void BM_OptimizeWd(benchmark::State& state) {
  const Scenario scn = dual_waveguide(scenario(3), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_wd(scn));
}
BENCHMARK(BM_OptimizeWd)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
