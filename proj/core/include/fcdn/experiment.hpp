#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcdn/capacity.hpp"
#include "fcdn/catalogue.hpp"
#include "fcdn/mapping.hpp"
#include "fcdn/placement.hpp"
#include "fcdn/topology.hpp"

namespace fcdn {

enum class System { fcdn_unicast, fcdn_multicast, cdn_dns };

std::string_view to_string(System s) noexcept;
System parse_system(std::string_view name);

struct CatalogueSpec {
  std::size_t n = 1000;
  double zipf_exponent = 0.8;
  std::vector<double> bitrates{20, 40, 60};  // Mb/s
  std::vector<double> volumes{20, 40, 60};   // MB
};

/// Field names match the JSON config keys one to one.
struct ExperimentConfig {
  std::filesystem::path topology;
  PopulationSource population = LogNormalPopulation{};
  CatalogueSpec catalogue;
  double active_fraction = 0.4;
  double cache_fraction = 0.5;
  std::vector<std::size_t> K_o{2, 4, 6, 8};
  std::vector<std::size_t> K_e{2, 4, 6, 8};
  std::vector<std::size_t> K_d{2, 4, 6, 8};
  std::vector<double> tau{0.1, 1, 10};
  std::vector<double> T{900, 1800, 2700, 3600};
  std::vector<Algorithm> algorithms{Algorithm::swing, Algorithm::pop, Algorithm::cls};
  std::vector<System> systems{System::fcdn_unicast, System::fcdn_multicast, System::cdn_dns};
  std::size_t trials = 50;
  std::uint64_t master_seed = 1;
  /// Draw one Pop/Cls placement per cell instead of one per trial.
  bool fix_placement = false;

  void validate() const;
};

/// Parses the JSON config document. Relative paths resolve against base_dir.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical JSON rendering (used in the run manifest).
std::string config_to_json(const ExperimentConfig& config);

struct ResultRow {
  System system = System::fcdn_unicast;
  Algorithm algorithm = Algorithm::swing;
  std::uint32_t K_o = 0;
  std::uint32_t K_e = 0;
  std::optional<std::uint32_t> K_d;  // cdn_dns only
  std::optional<double> tau;         // fcdn_multicast only
  std::optional<double> T;           // fcdn_multicast only
  std::uint32_t trial = 0;

  double offered_demand_gbps = 0;
  double total_backhaul_gbps = 0;
  double max_publisher_gbps = 0;
  double theoretical_mb = 0;
  double cached_mb = 0;
  double advertised_not_cached_mb = 0;
  double multicast_gain = 1;

  /// Consumer-tier path lengths; index = hop count. One client stream is one
  /// established path; relations are counted separately.
  std::vector<std::uint64_t> clients_by_hops;
  std::vector<std::uint64_t> relations_by_hops;

  std::uint64_t client_paths() const;
  double zero_path_fraction() const;
  double fraction_within(std::uint32_t hops) const;
  double mean_path_hops() const;
  std::uint32_t max_path_hops() const;

  bool operator==(const ResultRow&) const = default;
};

struct ResultsDataset {
  std::vector<ResultRow> rows;
  std::vector<std::string> diagnostics;  // skipped cells

  bool operator==(const ResultsDataset&) const = default;
};

struct EcdfPoint {
  double value = 0;
  double fraction = 0;
  bool operator==(const EcdfPoint&) const = default;
};

/// Sorted distinct values with cumulative fractions; the last fraction is 1.
std::vector<EcdfPoint> ecdf(std::span<const double> samples);
std::vector<EcdfPoint> ecdf(std::span<const double> values, std::span<const double> weights);

/// Per-trial inputs shared by every cell and system.
struct TrialInputs {
  Catalogue catalogue;
  DemandMatrix demand;
};

/// Inputs of one (algorithm, K_o, K_e, trial) cell.
struct CellInputs {
  PlacementResult placement;
  CachePlan plan;
};

/// A configured sweep. Exposes the seeded construction of every input so
/// callers can rebuild any cell of a run exactly.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const noexcept { return config_; }
  const NetworkGraph& graph() const noexcept { return graph_; }
  const DistanceMatrix& distances() const noexcept { return routes_.distances(); }
  const ShortestPaths& routes() const noexcept { return routes_; }
  const PopulationTable& populations() const noexcept { return populations_; }

  TrialInputs trial_inputs(std::size_t trial) const;
  /// nullopt (with a reason) when the cell cannot be placed on this graph.
  std::optional<CellInputs> cell_inputs(Algorithm algorithm, std::size_t k_origins,
                                        std::size_t k_edges, std::size_t trial,
                                        const Catalogue& catalogue, std::string* why = nullptr) const;
  std::optional<std::vector<Node>> ldns_for(Algorithm algorithm, std::size_t k_origins,
                                            std::size_t k_edges, std::size_t k_ldns,
                                            std::size_t trial, std::string* why = nullptr) const;

  /// Runs every (algorithm, trial) task on `workers` threads (0 = hardware
  /// concurrency). Output is independent of the worker count.
  ResultsDataset run(unsigned workers = 0,
                     const std::function<void(std::size_t done, std::size_t total)>& progress = {}) const;

 private:
  std::vector<ResultRow> run_task(Algorithm algorithm, std::size_t trial,
                                  std::vector<std::string>& diagnostics) const;

  ExperimentConfig config_;
  NetworkGraph graph_;
  ShortestPaths routes_;
  PopulationTable populations_;
  std::map<std::size_t, std::vector<Node>> swing_cache_;
};

ResultsDataset run_experiment(const ExperimentConfig& config, unsigned workers = 0);

/// Writes metrics.csv, ecdf.csv and manifest.json into `dir` (created).
void emit_results(const ResultsDataset& dataset, const ExperimentConfig& config,
                  const std::filesystem::path& dir);
/// Rebuilds a dataset from the files emit_results wrote.
ResultsDataset read_results(const std::filesystem::path& dir);

/// Column order of metrics.csv.
std::span<const std::string_view> metrics_columns();

std::string_view software_version() noexcept;

}  // namespace fcdn
