// fcdn-sim: sweep runner, catchment check and placement probe.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fcdn/capacity.hpp"
#include "fcdn/catchment.hpp"
#include "fcdn/error.hpp"
#include "fcdn/experiment.hpp"
#include "fcdn/placement.hpp"
#include "fcdn/random.hpp"

namespace {

struct RunArgs {
  std::string config;
  std::string out;
  unsigned workers = 0;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

struct CatchmentArgs {
  double mu = 1.0;
  double tau = 1.0;
  double T = 900.0;
  std::size_t reps = 1000;
  double tolerance = 0.02;
  std::uint64_t seed = 1;
};

struct PlaceArgs {
  std::string topology;
  std::string algo = "swing";
  std::size_t k = 2;
  std::string population;
  double scale = 1.0;
  std::uint64_t seed = 1;
};

int do_run(const RunArgs& a) {
  auto config = fcdn::load_config(a.config);
  if (a.seed) config.master_seed = *a.seed;
  fcdn::Experiment experiment(config);
  std::function<void(std::size_t, std::size_t)> progress;
  if (!a.quiet) {
    progress = [](std::size_t done, std::size_t total) {
      std::fprintf(stderr, "\r%zu/%zu tasks", done, total);
      if (done == total) std::fputc('\n', stderr);
    };
  }
  const auto dataset = experiment.run(a.workers, progress);
  fcdn::emit_results(dataset, config, a.out);
  std::cout << dataset.rows.size() << " rows written to " << a.out << '\n';
  if (!dataset.diagnostics.empty()) {
    std::cout << dataset.diagnostics.size() << " cells skipped (see manifest.json)\n";
  }
  return 0;
}

int do_catchment(const CatchmentArgs& a) {
  std::vector<fcdn::CatchmentSummary> runs;
  runs.reserve(a.reps);
  for (std::size_t r = 0; r < a.reps; ++r) {
    fcdn::Rng rng(fcdn::derive_seed(a.seed, {r}));
    runs.push_back(fcdn::simulate_catchment_summary(a.mu, a.tau, a.T, rng));
  }
  const double groups = fcdn::expected_group_count(a.T, a.tau, a.mu);
  const double size = fcdn::expected_group_size(a.mu, a.tau);
  const auto v = fcdn::validate_analytic(runs, groups, size, a.tolerance);
  std::printf("replications     %zu\n", v.replications);
  std::printf("groups           observed %.3f  expected %.3f  rel.err %.4f\n", v.observed_groups,
              v.expected_groups, v.groups_rel_error());
  std::printf("group size       observed %.4f  expected %.4f  rel.err %.4f\n",
              v.observed_group_size, v.expected_group_size, v.size_rel_error());
  std::printf("T/tau            %.3f\n", a.T / a.tau);
  std::printf("%s (tolerance %.3g)\n", v.pass ? "PASS" : "FAIL", a.tolerance);
  return v.pass ? 0 : 3;
}

int do_place(const PlaceArgs& a) {
  const auto g = fcdn::load_topology(a.topology);
  const auto dist = fcdn::all_pairs_hop_distance(g);
  fcdn::PopulationSource source = fcdn::UniformPopulation{g.node_count()};
  if (!a.population.empty()) source = fcdn::PopulationFile{a.population, a.scale};
  fcdn::Rng rng(fcdn::derive_seed(a.seed, {0}));
  const auto populations = fcdn::assign_populations(g, source, rng);
  const auto picked =
      fcdn::select_nodes(fcdn::parse_algorithm(a.algo), g, dist, populations, a.k, rng);
  for (std::size_t j = 0; j < picked.size(); ++j) {
    const auto& label = g.node(picked[j]).label;
    std::cout << j + 1 << ' ' << g.id(picked[j]);
    if (!label.empty()) std::cout << ' ' << label;
    std::cout << '\n';
  }
  std::cout << "k-center radius " << fcdn::k_center_objective(dist, picked) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flexible CDN simulator"};
  app.set_version_flag("--version", std::string(fcdn::software_version()));
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a parameter sweep and write result tables");
  run_cmd->add_option("--config", run.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--workers", run.workers, "Worker threads (0 = all cores)");
  run_cmd->add_option("--seed", run.seed, "Override master_seed");
  run_cmd->add_flag("--quiet", run.quiet, "No progress on stderr");

  CatchmentArgs catchment;
  auto* cat_cmd = app.add_subcommand("validate-catchment", "Compare the catchment process with its expectations");
  cat_cmd->add_option("--mu", catchment.mu, "Request rate per second")->required();
  cat_cmd->add_option("--tau", catchment.tau, "Catchment interval in seconds")->required();
  cat_cmd->add_option("--T", catchment.T, "Content duration in seconds")->required();
  cat_cmd->add_option("--reps", catchment.reps, "Replications")->capture_default_str();
  cat_cmd->add_option("--tolerance", catchment.tolerance, "Relative tolerance")->capture_default_str();
  cat_cmd->add_option("--seed", catchment.seed)->capture_default_str();

  PlaceArgs place;
  auto* place_cmd = app.add_subcommand("place", "Print a node selection");
  place_cmd->add_option("--topology", place.topology, "GraphML topology")->required()->check(CLI::ExistingFile);
  place_cmd->add_option("--algo", place.algo)->check(CLI::IsMember({"swing", "pop", "cls"}))->capture_default_str();
  place_cmd->add_option("--k", place.k, "Nodes to select")->required();
  place_cmd->add_option("--population", place.population, "node_id,population CSV (default uniform)");
  place_cmd->add_option("--scale", place.scale, "Population multiplier")->capture_default_str();
  place_cmd->add_option("--seed", place.seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(run);
    if (*cat_cmd) return do_catchment(catchment);
    if (*place_cmd) return do_place(place);
  } catch (const std::exception& e) {
    std::cerr << "fcdn-sim: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
