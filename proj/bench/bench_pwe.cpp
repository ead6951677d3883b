// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "rotphc/pwe.hpp"

namespace {

using namespace rotphc;

void BM_Assemble(benchmark::State& state, bool parallel) {
  const PhysicalParameters p;
  const int n = static_cast<int>(state.range(0));
  const DerivedConstants dc = derive_constants(p);
  const PhasePattern pat = PhasePattern::from(p);
  const ReciprocalSet basis = reciprocal_vectors(p.pitch, n);
  const Vec2 k(0.3, 0.2);
  for (auto _ : state) {
    auto h = parallel ? assemble_hamiltonian(k, pat, basis, dc) : assemble_hamiltonian_serial(k, pat, basis, dc);
    benchmark::DoNotOptimize(h.matrix.data());
  }
}

void BM_BandStructure(benchmark::State& state, bool parallel) {
  const PhysicalParameters p;
  const PweSolver solver(p, static_cast<int>(state.range(0)));
  const BzPath path = bz_path({"G", "X", "T", "G"}, 8, p.pitch);
  for (auto _ : state) {
    auto t = parallel ? band_structure(path, solver, 8) : band_structure_serial(path, solver, 8);
    benchmark::DoNotOptimize(t.bands.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Assemble, serial, false)->Arg(10)->Arg(20);
BENCHMARK_CAPTURE(BM_Assemble, openmp, true)->Arg(10)->Arg(20);
BENCHMARK_CAPTURE(BM_BandStructure, serial, false)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BandStructure, openmp, true)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
