#include <benchmark/benchmark.h>

#include "bsep/bloore.hpp"
#include "bsep/metric.hpp"
#include "bsep/quadrature.hpp"
#include "bsep/sepfun.hpp"
#include "bsep/volumes.hpp"

using namespace bsep;

namespace {

BloorePoint sample_point(const Scenario& s) {
  BloorePoint p;
  p.rho11 = 0.2;
  p.rho22 = 0.3;
  p.rho33 = 0.15;
  p.offdiag.assign(s.offdiag_dimension(), 0.3 / static_cast<double>(s.offdiag_dimension()));
  return p;
}

const char* const kShapes[] = {"bures:[(2,3)]:real", "bures:[(1,4),(2,3)]:complex", "bures:[(1,4),(2,3)]:quat"};

void BM_Eigenvalues(benchmark::State& state) {
  const Scenario s = parse_scenario(kShapes[state.range(0)]);
  const HermitianMatrix rho = build_rho(sample_point(s), s);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_hermitian(rho));
  state.SetLabel(kShapes[state.range(0)]);
}
BENCHMARK(BM_Eigenvalues)->DenseRange(0, 2);

void BM_BuresPullback(benchmark::State& state) {
  const Scenario s = parse_scenario(kShapes[state.range(0)]);
  const BloorePoint p = sample_point(s);
  for (auto _ : state) benchmark::DoNotOptimize(volume_density_numeric(p, s));
  state.SetLabel(kShapes[state.range(0)]);
}
BENCHMARK(BM_BuresPullback)->DenseRange(0, 2);

void BM_ClosedDensity(benchmark::State& state) {
  const Scenario s = parse_scenario(kShapes[state.range(0)]);
  const BloorePoint p = sample_point(s);
  for (auto _ : state) benchmark::DoNotOptimize(volume_density_closed(p, s));
  state.SetLabel(kShapes[state.range(0)]);
}
BENCHMARK(BM_ClosedDensity)->DenseRange(0, 2);

void BM_PptIndicator(benchmark::State& state) {
  const Scenario s = parse_scenario(kShapes[1]);
  const BloorePoint p = sample_point(s);
  const auto route = state.range(0) ? IndicatorRoute::eigen : IndicatorRoute::closed_form;
  for (auto _ : state) benchmark::DoNotOptimize(ppt_indicator(p, s, route));
  state.SetLabel(state.range(0) ? "eigen" : "closed");
}
BENCHMARK(BM_PptIndicator)->DenseRange(0, 1);

void BM_MarginalJacobian(benchmark::State& state) {
  const Scenario s = parse_scenario(kShapes[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(marginal_jacobian(s, 0.6));
  state.SetLabel(kShapes[state.range(0)]);
}
BENCHMARK(BM_MarginalJacobian)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_SepfunNumeric(benchmark::State& state) {
  const Scenario s = parse_scenario(kShapes[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(sep_function_numeric(s, 0.6));
  state.SetLabel(kShapes[state.range(0)]);
}
BENCHMARK(BM_SepfunNumeric)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_QmcFourBall(benchmark::State& state) {
  const auto spec = IntegrandSpec::box(
      {-1, -1, -1, -1}, {1, 1, 1, 1}, [](std::span<const double>) { return 1.0; },
      [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] < 1.0; });
  const QmcOptions opt{static_cast<std::uint64_t>(state.range(0)), 1, 8, 1};
  for (auto _ : state) benchmark::DoNotOptimize(integrate_qmc(spec, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_QmcFourBall)->Arg(1 << 14)->Arg(1 << 18)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
