#include <benchmark/benchmark.h>

#include <bellgate/bell_frame.hpp>
#include <bellgate/calibration.hpp>
#include <bellgate/fidelity.hpp>
#include <bellgate/gates.hpp>
#include <bellgate/linalg.hpp>
#include <bellgate/model.hpp>

namespace {

using namespace bellgate;

PhysicalParams sample_params(int h) {
  PhysicalParams p;
  p.t = 0.7;
  p.j = {0.3, -0.2, 0.5};
  p.b1 = 0.4;
  p.b2 = -0.1;
  p.h = h;
  return p;
}

void BM_Expm4(benchmark::State& state) {
  const CMat4 hm = build_hamiltonian(sample_params(2));
  for (auto _ : state) benchmark::DoNotOptimize(expm_hermitian(hm, 0.7));
}
BENCHMARK(BM_Expm4);

void BM_Evolve(benchmark::State& state) {
  const PhysicalParams p = sample_params(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evolve(p));
}
BENCHMARK(BM_Evolve)->DenseRange(1, 3);

void BM_ToBlocks(benchmark::State& state) {
  const PhysicalParams p = sample_params(static_cast<int>(state.range(0)));
  const CMat4 u = evolve(p);
  const BellFrame& frame = bell_frame(p.h);
  for (auto _ : state) benchmark::DoNotOptimize(to_blocks(u, frame));
}
BENCHMARK(BM_ToBlocks)->DenseRange(1, 3);

void BM_ClosedForm(benchmark::State& state) {
  const PhysicalParams p = sample_params(3);
  const BellFrame& frame = bell_frame(p.h);
  for (auto _ : state) {
    const auto rp = reduced_params(p, frame);
    benchmark::DoNotOptimize(closed_form_block(rp[0], frame));
    benchmark::DoNotOptimize(closed_form_block(rp[1], frame));
  }
}
BENCHMARK(BM_ClosedForm);

void BM_SolvePhysical(benchmark::State& state) {
  GateId g;
  g.tag = GateTag::kHQ1;
  const PrescriptionTargets tg = prescription_targets(g);
  SolverOptions opts;
  opts.starts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_physical(tg, opts));
}
BENCHMARK(BM_SolvePhysical)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FidelityReport(benchmark::State& state) {
  GateId g;
  g.tag = GateTag::kHQ2;
  const PrescriptionCard card = solve_physical(prescription_targets(g));
  const BlockState s = sample_states(card.solved.h, 1, SolverOptions::kDefaultSeed).front();
  Perturbation dp;
  dp.dp.setConstant(4e-4);
  for (auto _ : state) benchmark::DoNotOptimize(fidelity_report(card, s, dp));
}
BENCHMARK(BM_FidelityReport);

}  // namespace

BENCHMARK_MAIN();
