#include <benchmark/benchmark.h>

#include <filesystem>

#include "fcdn/capacity.hpp"
#include "fcdn/catchment.hpp"
#include "fcdn/experiment.hpp"
#include "fcdn/mapping.hpp"
#include "fcdn/placement.hpp"
#include "fcdn/topology.hpp"

using namespace fcdn;

namespace {

// One Geant cell at the default catalogue and population settings.
struct Fixture {
  Experiment ex;
  TrialInputs inputs;
  CellInputs cell;

  Fixture(std::size_t k_origins, std::size_t k_edges)
      : ex(make_config()), inputs(ex.trial_inputs(0)),
        cell(*ex.cell_inputs(Algorithm::swing, k_origins, k_edges, 0, inputs.catalogue)) {}

  static ExperimentConfig make_config() {
    ExperimentConfig c;
    c.topology = std::filesystem::path(FCDN_DATA_DIR) / "geant2012.graphml";
    c.population = PopulationFile{std::filesystem::path(FCDN_DATA_DIR) / "geant2012_population.csv", 3.0};
    c.trials = 1;
    c.master_seed = 20170601;
    return c;
  }
};

const Fixture& fixture(std::size_t k_origins, std::size_t k_edges) {
  static const Fixture small(2, 2), large(8, 8);
  return k_origins == 2 ? small : large;
}

void BM_AllPairsDistance(benchmark::State& state) {
  const auto& g = fixture(2, 2).ex.graph();
  for (auto _ : state) benchmark::DoNotOptimize(all_pairs_hop_distance(g));
}
BENCHMARK(BM_AllPairsDistance);

void BM_SwingGeant(benchmark::State& state) {
  const auto& f = fixture(2, 2);
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_nodes(Algorithm::swing, f.ex.graph(), f.ex.distances(),
                                          f.ex.populations(), static_cast<std::size_t>(state.range(0)), rng));
  }
}
BENCHMARK(BM_SwingGeant)->Arg(4)->Arg(16)->Arg(37);

void BM_MatchFcdn(benchmark::State& state) {
  const auto& f = fixture(state.range(0), state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_fcdn(f.cell.placement, f.cell.plan, f.inputs.demand, f.ex.routes()));
  }
}
BENCHMARK(BM_MatchFcdn)->Arg(2)->Arg(8);

void BM_MatchDns(benchmark::State& state) {
  const auto& f = fixture(8, 8);
  const auto ldns = *f.ex.ldns_for(Algorithm::swing, 8, 8, 8, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_dns(f.cell.placement, ldns, f.cell.plan, f.inputs.demand, f.ex.routes()));
  }
}
BENCHMARK(BM_MatchDns);

void BM_UnicastLoads(benchmark::State& state) {
  const auto& f = fixture(8, 8);
  const auto relations = match_fcdn(f.cell.placement, f.cell.plan, f.inputs.demand, f.ex.routes());
  for (auto _ : state) {
    benchmark::DoNotOptimize(unicast_link_loads(relations, f.inputs.catalogue, f.ex.graph()));
  }
}
BENCHMARK(BM_UnicastLoads);

void BM_MulticastEvaluate(benchmark::State& state) {
  const auto& f = fixture(8, 8);
  const auto relations = match_fcdn(f.cell.placement, f.cell.plan, f.inputs.demand, f.ex.routes());
  const MulticastLayout layout(relations, f.inputs.catalogue, f.ex.graph());
  for (auto _ : state) benchmark::DoNotOptimize(layout.evaluate({900, 1}));
}
BENCHMARK(BM_MulticastEvaluate);

void BM_MulticastLayout(benchmark::State& state) {
  const auto& f = fixture(8, 8);
  const auto relations = match_fcdn(f.cell.placement, f.cell.plan, f.inputs.demand, f.ex.routes());
  for (auto _ : state) {
    benchmark::DoNotOptimize(MulticastLayout(relations, f.inputs.catalogue, f.ex.graph()));
  }
}
BENCHMARK(BM_MulticastLayout);

void BM_CatchmentReplication(benchmark::State& state) {
  Rng rng(3);
  const double mu = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_catchment_summary(mu, 1, 900, rng));
}
BENCHMARK(BM_CatchmentReplication)->Arg(1)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
