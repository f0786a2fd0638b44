#include "fcdn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fcdn/error.hpp"
#include "fcdn/random.hpp"

namespace fcdn {

namespace {

// Seed stream tags.
constexpr std::uint64_t kPopulationStream = 1;
constexpr std::uint64_t kDemandStream = 2;
constexpr std::uint64_t kPlacementStream = 3;
constexpr std::uint64_t kLdnsStream = 4;
constexpr std::uint64_t kCacheStream = 5;

std::uint64_t algorithm_key(Algorithm a) { return static_cast<std::uint64_t>(a) + 1; }

}  // namespace

std::string_view to_string(System s) noexcept {
  switch (s) {
    case System::fcdn_unicast: return "fcdn_unicast";
    case System::fcdn_multicast: return "fcdn_multicast";
    case System::cdn_dns: return "cdn_dns";
  }
  return "?";
}

System parse_system(std::string_view name) {
  if (name == "fcdn_unicast") return System::fcdn_unicast;
  if (name == "fcdn_multicast") return System::fcdn_multicast;
  if (name == "cdn_dns") return System::cdn_dns;
  throw Error("unknown system '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (topology.empty()) throw Error("config: topology is required");
  if (K_o.empty() || K_e.empty() || K_d.empty() || tau.empty() || T.empty()) {
    throw Error("config: every sweep grid must be non-empty");
  }
  if (algorithms.empty()) throw Error("config: algorithms must be non-empty");
  if (systems.empty()) throw Error("config: systems must be non-empty");
  if (trials < 1) throw Error("config: trials must be at least 1");
  if (active_fraction < 0.0 || active_fraction > 1.0) throw Error("config: active_fraction must lie in [0, 1]");
  if (cache_fraction < 0.0 || cache_fraction > 1.0) throw Error("config: cache_fraction must lie in [0, 1]");
  if (catalogue.n < 1) throw Error("config: catalogue.n must be at least 1");
  if (catalogue.bitrates.empty() || catalogue.volumes.empty()) {
    throw Error("config: catalogue bitrate and volume sets must be non-empty");
  }
  const double min_T = *std::min_element(T.begin(), T.end());
  for (double t : tau) {
    if (!(t > 0.0) || !(t < min_T)) throw Error("config: every tau must be positive and below min(T)");
  }
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <class T>
std::vector<T> read_list(const json& doc, const char* key, std::vector<T> fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& node = doc.at(key);
  if (!node.is_array()) throw Error(std::string("config: '") + key + "' must be a list");
  return node.get<std::vector<T>>();
}

PopulationSource parse_population(const json& node, const std::filesystem::path& base_dir) {
  if (node.is_string()) {
    return PopulationFile{(base_dir / node.get<std::string>()).lexically_normal(), 1.0};
  }
  const auto mode = node.value("mode", std::string("lognormal"));
  if (mode == "file") {
    PopulationFile f;
    f.path = (base_dir / node.at("path").get<std::string>()).lexically_normal();
    f.scale = node.value("scale", 1.0);
    return f;
  }
  if (mode == "uniform") return UniformPopulation{node.at("total").get<std::uint64_t>()};
  if (mode == "lognormal") {
    LogNormalPopulation p;
    p.median = node.value("median", p.median);
    p.sigma = node.value("sigma", p.sigma);
    return p;
  }
  throw Error("config: unknown population mode '" + mode + "'");
}

ordered_json population_to_json(const PopulationSource& source) {
  return std::visit(
      [](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        ordered_json j;
        if constexpr (std::is_same_v<T, PopulationFile>) {
          j["mode"] = "file";
          j["path"] = spec.path.generic_string();
          j["scale"] = spec.scale;
        } else if constexpr (std::is_same_v<T, UniformPopulation>) {
          j["mode"] = "uniform";
          j["total"] = spec.total;
        } else {
          j["mode"] = "lognormal";
          j["median"] = spec.median;
          j["sigma"] = spec.sigma;
        }
        return j;
      },
      source);
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw Error("config: document must be an object");

  ExperimentConfig c;
  try {
    c.topology = (base_dir / doc.at("topology").get<std::string>()).lexically_normal();
    if (doc.contains("population")) c.population = parse_population(doc.at("population"), base_dir);
    if (doc.contains("catalogue")) {
      const auto& cat = doc.at("catalogue");
      c.catalogue.n = cat.value("n", c.catalogue.n);
      c.catalogue.zipf_exponent = cat.value("zipf_exponent", c.catalogue.zipf_exponent);
      c.catalogue.bitrates = read_list(cat, "bitrates", c.catalogue.bitrates);
      c.catalogue.volumes = read_list(cat, "volumes", c.catalogue.volumes);
    }
    c.active_fraction = doc.value("active_fraction", c.active_fraction);
    c.cache_fraction = doc.value("cache_fraction", c.cache_fraction);
    c.K_o = read_list(doc, "K_o", c.K_o);
    c.K_e = read_list(doc, "K_e", c.K_e);
    c.K_d = read_list(doc, "K_d", c.K_d);
    c.tau = read_list(doc, "tau", c.tau);
    c.T = read_list(doc, "T", c.T);
    if (doc.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : read_list<std::string>(doc, "algorithms", {})) c.algorithms.push_back(parse_algorithm(a));
    }
    if (doc.contains("systems")) {
      c.systems.clear();
      for (const auto& s : read_list<std::string>(doc, "systems", {})) c.systems.push_back(parse_system(s));
    }
    c.trials = doc.value("trials", c.trials);
    c.master_seed = doc.value("master_seed", c.master_seed);
    c.fix_placement = doc.value("fix_placement", c.fix_placement);
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

std::string config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["topology"] = c.topology.generic_string();
  j["population"] = population_to_json(c.population);
  j["catalogue"] = {{"n", c.catalogue.n},
                    {"zipf_exponent", c.catalogue.zipf_exponent},
                    {"bitrates", c.catalogue.bitrates},
                    {"volumes", c.catalogue.volumes}};
  j["active_fraction"] = c.active_fraction;
  j["cache_fraction"] = c.cache_fraction;
  j["K_o"] = c.K_o;
  j["K_e"] = c.K_e;
  j["K_d"] = c.K_d;
  j["tau"] = c.tau;
  j["T"] = c.T;
  j["algorithms"] = ordered_json::array();
  for (auto a : c.algorithms) j["algorithms"].push_back(to_string(a));
  j["systems"] = ordered_json::array();
  for (auto s : c.systems) j["systems"].push_back(to_string(s));
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  j["fix_placement"] = c.fix_placement;
  return j.dump(2);
}

std::uint64_t ResultRow::client_paths() const {
  return std::accumulate(clients_by_hops.begin(), clients_by_hops.end(), std::uint64_t{0});
}

double ResultRow::zero_path_fraction() const { return fraction_within(0); }

double ResultRow::fraction_within(std::uint32_t hops) const {
  const auto total = client_paths();
  if (total == 0) return 0.0;
  std::uint64_t within = 0;
  for (std::size_t h = 0; h <= hops && h < clients_by_hops.size(); ++h) within += clients_by_hops[h];
  return static_cast<double>(within) / static_cast<double>(total);
}

double ResultRow::mean_path_hops() const {
  const auto total = client_paths();
  if (total == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t h = 0; h < clients_by_hops.size(); ++h) sum += static_cast<double>(h * clients_by_hops[h]);
  return sum / static_cast<double>(total);
}

std::uint32_t ResultRow::max_path_hops() const {
  for (std::size_t h = clients_by_hops.size(); h > 0; --h) {
    if (clients_by_hops[h - 1] > 0) return static_cast<std::uint32_t>(h - 1);
  }
  return 0;
}

std::vector<EcdfPoint> ecdf(std::span<const double> samples) {
  std::vector<double> ones(samples.size(), 1.0);
  return ecdf(samples, ones);
}

std::vector<EcdfPoint> ecdf(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw Error("ecdf of an empty sample");
  if (values.size() != weights.size()) throw Error("ecdf values and weights differ in length");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw Error("ecdf weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw Error("ecdf weights sum to zero");

  std::vector<EcdfPoint> out;
  double running = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    running += weights[order[k]];
    const double v = values[order[k]];
    if (k + 1 < order.size() && values[order[k + 1]] == v) continue;
    out.push_back({v, running / total});
  }
  out.back().fraction = 1.0;
  return out;
}

Experiment::Experiment(ExperimentConfig config)
    : config_(std::move(config)),
      graph_(load_topology(config_.topology)),
      routes_(graph_, all_pairs_hop_distance(graph_)) {
  config_.validate();
  Rng rng(derive_seed(config_.master_seed, {kPopulationStream}));
  populations_ = assign_populations(graph_, config_.population, rng);

  if (std::find(config_.algorithms.begin(), config_.algorithms.end(), Algorithm::swing) !=
      config_.algorithms.end()) {
    // Swing is deterministic: one selection per distinct K serves all trials.
    std::vector<std::size_t> ks(config_.K_d.begin(), config_.K_d.end());
    for (auto ko : config_.K_o) {
      for (auto ke : config_.K_e) ks.push_back(ko + ke);
    }
    for (auto k : ks) {
      if (k >= 1 && k <= graph_.node_count() && !swing_cache_.contains(k)) {
        swing_cache_.emplace(k, swing(graph_, k, routes_.distances()));
      }
    }
  }
}

TrialInputs Experiment::trial_inputs(std::size_t trial) const {
  Rng rng(derive_seed(config_.master_seed, {kDemandStream, trial}));
  TrialInputs in;
  in.catalogue = generate_catalogue(config_.catalogue.n, config_.catalogue.zipf_exponent,
                                    config_.catalogue.bitrates, config_.catalogue.volumes, rng);
  in.demand = generate_demand(in.catalogue, populations_, config_.active_fraction, rng);
  return in;
}

std::optional<CellInputs> Experiment::cell_inputs(Algorithm algorithm, std::size_t k_origins,
                                                  std::size_t k_edges, std::size_t trial,
                                                  const Catalogue& catalogue,
                                                  std::string* why) const {
  const auto k = k_origins + k_edges;
  auto reject = [&](std::string reason) -> std::optional<CellInputs> {
    if (why) *why = std::move(reason);
    return std::nullopt;
  };
  if (k == 0) return reject("no publishers requested");
  if (k > graph_.node_count()) {
    return reject("K_o + K_e = " + std::to_string(k) + " exceeds |V| = " +
                  std::to_string(graph_.node_count()));
  }
  if (k_origins == 0) return reject("edges need at least one origin");

  std::vector<Node> selection;
  if (algorithm == Algorithm::swing) {
    auto it = swing_cache_.find(k);
    selection = it != swing_cache_.end() ? it->second : swing(graph_, k, routes_.distances());
  } else {
    const std::uint64_t trial_key = config_.fix_placement ? 0 : trial + 1;
    Rng rng(derive_seed(config_.master_seed,
                        {kPlacementStream, algorithm_key(algorithm), k_origins, k_edges, trial_key}));
    selection = select_nodes(algorithm, graph_, routes_.distances(), populations_, k, rng);
  }
  CellInputs cell;
  cell.placement = split_roles(algorithm, selection, k_origins, k_edges);
  Rng cache_rng(derive_seed(config_.master_seed,
                            {kCacheStream, algorithm_key(algorithm), k_origins, k_edges, trial}));
  cell.plan = build_cache_plan(cell.placement, catalogue, populations_, config_.cache_fraction, cache_rng);
  return cell;
}

std::optional<std::vector<Node>> Experiment::ldns_for(Algorithm algorithm, std::size_t k_origins,
                                                      std::size_t k_edges, std::size_t k_ldns,
                                                      std::size_t trial, std::string* why) const {
  if (k_ldns == 0 || k_ldns > graph_.node_count()) {
    if (why) *why = "K_d = " + std::to_string(k_ldns) + " outside [1, |V|]";
    return std::nullopt;
  }
  if (algorithm == Algorithm::swing) {
    auto it = swing_cache_.find(k_ldns);
    return it != swing_cache_.end() ? it->second : swing(graph_, k_ldns, routes_.distances());
  }
  const std::uint64_t trial_key = config_.fix_placement ? 0 : trial + 1;
  Rng rng(derive_seed(config_.master_seed, {kLdnsStream, algorithm_key(algorithm), k_origins,
                                            k_edges, k_ldns, trial_key}));
  return place_ldns(graph_, routes_.distances(), populations_, k_ldns, algorithm, rng);
}

namespace {

void record_paths(ResultRow& row, const RelationSet& relations) {
  for (const auto& r : relations.consumer()) {
    if (row.clients_by_hops.size() <= r.hops) {
      row.clients_by_hops.resize(r.hops + 1, 0);
      row.relations_by_hops.resize(r.hops + 1, 0);
    }
    row.clients_by_hops[r.hops] += r.clients;
    row.relations_by_hops[r.hops] += 1;
  }
}

bool wants(const ExperimentConfig& c, System s) {
  return std::find(c.systems.begin(), c.systems.end(), s) != c.systems.end();
}

}  // namespace

std::vector<ResultRow> Experiment::run_task(Algorithm algorithm, std::size_t trial,
                                            std::vector<std::string>& diagnostics) const {
  std::vector<ResultRow> rows;
  const auto inputs = trial_inputs(trial);
  const double offered = offered_demand_gbps(inputs.catalogue, inputs.demand);
  const bool fcdn = wants(config_, System::fcdn_unicast) || wants(config_, System::fcdn_multicast);

  for (auto ko : config_.K_o) {
    for (auto ke : config_.K_e) {
      const std::string cell_name = std::string(to_string(algorithm)) + " K_o=" + std::to_string(ko) +
                                    " K_e=" + std::to_string(ke) + " trial=" + std::to_string(trial);
      std::string why;
      auto cell = cell_inputs(algorithm, ko, ke, trial, inputs.catalogue, &why);
      if (!cell) {
        diagnostics.push_back("skipped " + cell_name + ": " + why);
        continue;
      }
      const auto storage = storage_report(cell->plan, inputs.catalogue);

      ResultRow base;
      base.algorithm = algorithm;
      base.K_o = static_cast<std::uint32_t>(ko);
      base.K_e = static_cast<std::uint32_t>(ke);
      base.trial = static_cast<std::uint32_t>(trial);
      base.offered_demand_gbps = offered;
      base.theoretical_mb = storage.theoretical_mb;
      base.cached_mb = storage.cached_mb;
      base.advertised_not_cached_mb = storage.advertised_not_cached_mb;

      if (fcdn) {
        const auto relations = match_fcdn(cell->placement, cell->plan, inputs.demand, routes_);
        const auto unicast = unicast_link_loads(relations, inputs.catalogue, graph_);
        ResultRow row = base;
        record_paths(row, relations);
        row.total_backhaul_gbps = unicast.total_gbps;
        row.max_publisher_gbps = unicast.max_publisher_gbps();
        if (wants(config_, System::fcdn_unicast)) {
          row.system = System::fcdn_unicast;
          rows.push_back(row);
        }
        if (wants(config_, System::fcdn_multicast)) {
          const MulticastLayout layout(relations, inputs.catalogue, graph_);
          for (double T : config_.T) {
            for (double tau : config_.tau) {
              const auto multicast = layout.evaluate({T, tau});
              ResultRow mrow = row;
              mrow.system = System::fcdn_multicast;
              mrow.T = T;
              mrow.tau = tau;
              mrow.total_backhaul_gbps = multicast.total_gbps;
              mrow.max_publisher_gbps = multicast.max_publisher_gbps();
              mrow.multicast_gain = multicast_gain(unicast, multicast);
              rows.push_back(std::move(mrow));
            }
          }
        }
      }

      if (wants(config_, System::cdn_dns)) {
        for (auto kd : config_.K_d) {
          auto ldns = ldns_for(algorithm, ko, ke, kd, trial, &why);
          if (!ldns) {
            diagnostics.push_back("skipped " + cell_name + " K_d=" + std::to_string(kd) + ": " + why);
            continue;
          }
          cell->placement.ldns = *ldns;
          const auto relations = match_dns(cell->placement, *ldns, cell->plan, inputs.demand, routes_);
          const auto unicast = unicast_link_loads(relations, inputs.catalogue, graph_);
          ResultRow row = base;
          row.system = System::cdn_dns;
          row.K_d = static_cast<std::uint32_t>(kd);
          record_paths(row, relations);
          row.total_backhaul_gbps = unicast.total_gbps;
          row.max_publisher_gbps = unicast.max_publisher_gbps();
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

ResultsDataset Experiment::run(unsigned workers,
                               const std::function<void(std::size_t, std::size_t)>& progress) const {
  struct Task {
    Algorithm algorithm;
    std::size_t trial;
    std::vector<ResultRow> rows;
    std::vector<std::string> diagnostics;
  };
  std::vector<Task> tasks;
  for (auto a : config_.algorithms) {
    for (std::size_t t = 0; t < config_.trials; ++t) tasks.push_back({a, t, {}, {}});
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, tasks.size()));

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  std::mutex progress_mutex;

  auto worker = [&] {
    while (true) {
      const auto k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      try {
        tasks[k].rows = run_task(tasks[k].algorithm, tasks[k].trial, tasks[k].diagnostics);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks.size());
        return;
      }
      const auto finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, tasks.size());
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ResultsDataset out;
  for (auto& task : tasks) {
    std::move(task.rows.begin(), task.rows.end(), std::back_inserter(out.rows));
    std::move(task.diagnostics.begin(), task.diagnostics.end(), std::back_inserter(out.diagnostics));
  }
  return out;
}

ResultsDataset run_experiment(const ExperimentConfig& config, unsigned workers) {
  return Experiment(config).run(workers);
}

}  // namespace fcdn
