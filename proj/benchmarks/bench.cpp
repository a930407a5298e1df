// Microbenchmarks for the evaluation hot paths: card and ensemble model
// evaluation, lattice lookup, device characterization, netlist parsing,
// and small solver runs.
#include <benchmark/benchmark.h>

#include <vector>

#include "gcm/characterize.hpp"
#include "gcm/circuit.hpp"
#include "gcm/compact_model.hpp"
#include "gcm/esd_clamp.hpp"
#include "gcm/model_grid.hpp"
#include "gcm/netlist.hpp"

namespace {

using namespace gcm;

ModelCard bench_card() {
  ModelCard card;
  card.cov = 2e-17;
  card.cch_max = 8e-17;
  return card;
}

ModelGrid bench_grid() {
  ModelGrid grid;
  grid.axis1 = {14.5, 15.5, 16.5, 17.5, 18.5};
  grid.axis2 = {5.1, 6.1, 7.1, 8.1};
  for (std::size_t i1 = 0; i1 < grid.axis1.size(); ++i1) {
    for (std::size_t i2 = 0; i2 < grid.axis2.size(); ++i2) {
      ModelCard card = bench_card();
      card.lg = grid.axis1[i1];
      card.wfin = grid.axis2[i2];
      card.vt0 = 0.30 + 0.002 * static_cast<double>(i1 + i2);
      grid.cards.push_back(card);
    }
  }
  return grid;
}

const char* kRcNetlist =
    "V1 in 0 dc 0.75\n"
    "R1 in out 100k\n"
    "C1 out 0 1p\n"
    ".tran 1u\n";

void BM_CardCurrents(benchmark::State& state) {
  const ModelCard card = bench_card();
  const BiasPoint bias{0.75, 0.55, 0.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_terminal_currents(card, bias, 4.0));
  }
}
BENCHMARK(BM_CardCurrents);

void BM_CardCurrentsSeriesR(benchmark::State& state) {
  ModelCard card = bench_card();
  card.rs = card.rd = 200.0;  // exercises the internal-node solve
  const BiasPoint bias{0.75, 0.55, 0.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_terminal_currents(card, bias, 4.0));
  }
}
BENCHMARK(BM_CardCurrentsSeriesR);

void BM_CardCharges(benchmark::State& state) {
  const ModelCard card = bench_card();
  const BiasPoint bias{0.05, 0.75, 0.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_terminal_charges(card, bias, 4.0));
  }
}
BENCHMARK(BM_CardCharges);

void BM_LocateAndWeigh(benchmark::State& state) {
  const ModelGrid grid = bench_grid();
  for (auto _ : state) {
    benchmark::DoNotOptimize(locate_and_weigh(grid, {17.8, 6.3}));
  }
}
BENCHMARK(BM_LocateAndWeigh);

void BM_EnsembleCurrents(benchmark::State& state) {
  const ModelGrid grid = bench_grid();
  const GeneralModel gm = locate_and_weigh(grid, {17.8, 6.3});
  const BiasPoint bias{0.75, 0.55, 0.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ensemble_currents(gm, bias, 4.0));
  }
}
BENCHMARK(BM_EnsembleCurrents);

void BM_CharacterizeCard(benchmark::State& state) {
  const ModelCard card = bench_card();
  for (auto _ : state) {
    benchmark::DoNotOptimize(characterize(card, 0.75));
  }
}
BENCHMARK(BM_CharacterizeCard);

void BM_ParseNetlist(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_netlist(kRcNetlist));
  }
}
BENCHMARK(BM_ParseNetlist);

void BM_RcTransient(benchmark::State& state) {
  const Netlist nl = parse_netlist(kRcNetlist);
  SolverOptions opt;
  opt.use_ic = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_transient(nl, nl.tstop, opt));
  }
}
BENCHMARK(BM_RcTransient);

void BM_ClampLeakageDc(benchmark::State& state) {
  const ModelGrid grid = bench_grid();
  const Netlist nl = build_clamp_netlist(grid, ClampConfig{}, EsdEvent::Leakage);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_dc(nl));
  }
}
BENCHMARK(BM_ClampLeakageDc);

}  // namespace

BENCHMARK_MAIN();
