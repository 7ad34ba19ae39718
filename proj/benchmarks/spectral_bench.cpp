#include <benchmark/benchmark.h>

#include <numbers>

#include "cho/continuation.hpp"
#include "cho/mesh.hpp"
#include "cho/recurrence.hpp"

namespace {

const cho::Frequencies kFreqs(2.0, 1.0);

void BM_SheetEnergies(benchmark::State& state) {
  cho::Complex g(1.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cho::sheet_energies(kFreqs, cho::LevelSpec(3, 1), g));
    g += cho::Complex(1e-9, 0.0);
  }
}
BENCHMARK(BM_SheetEnergies);

void BM_SubsystemSpectrum(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const cho::AnsatzParameters p{cho::Complex(1.3, 0.2), cho::Complex(0.7, -0.4), cho::Complex(0.3, 0.6)};
  for (auto _ : state) benchmark::DoNotOptimize(cho::energies_from_subsystem(n, p));
}
BENCHMARK(BM_SubsystemSpectrum)->Arg(4)->Arg(10)->Arg(16);

void BM_SolveCoefficients(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto p = cho::ansatz_parameters(kFreqs, 1.0, cho::Sign::plus, cho::Sign::plus);
  const auto e = cho::closed_form_subsystem_energies(n, p).front();
  for (auto _ : state) benchmark::DoNotOptimize(cho::solve_coefficients(n, p, e));
}
BENCHMARK(BM_SolveCoefficients)->Arg(2)->Arg(4)->Arg(8);

void BM_Monodromy(benchmark::State& state) {
  const auto loop = cho::generator_loop(kFreqs, cho::branch_point_by_id(kFreqs, "real+"));
  for (auto _ : state) benchmark::DoNotOptimize(cho::monodromy(kFreqs, cho::LevelSpec(1, 1), loop));
}
BENCHMARK(BM_Monodromy)->Unit(benchmark::kMillisecond);

void BM_CoupledSurface(benchmark::State& state) {
  const auto res = static_cast<int>(state.range(0));
  const auto window = cho::default_window(kFreqs);
  for (auto _ : state) benchmark::DoNotOptimize(cho::coupled_surface(kFreqs, cho::LevelSpec(1, 1), window, res, res));
}
BENCHMARK(BM_CoupledSurface)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

}  // namespace
