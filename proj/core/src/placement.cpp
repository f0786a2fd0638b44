#include "fcdn/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include <json.hpp>

#include "fcdn/error.hpp"

namespace fcdn {

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::swing: return "swing";
    case Algorithm::pop: return "pop";
    case Algorithm::cls: return "cls";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "swing") return Algorithm::swing;
  if (name == "pop") return Algorithm::pop;
  if (name == "cls") return Algorithm::cls;
  throw Error("unknown selection algorithm '" + std::string(name) + "'");
}

namespace {

void require_connected(const NetworkGraph& g, const DistanceMatrix& dist) {
  for (Node u = 0; u < dist.size(); ++u) {
    for (Node v = 0; v < dist.size(); ++v) {
      if (!dist.reachable(u, v)) {
        throw Error("graph is disconnected: " + g.id(v) + " is unreachable from " + g.id(u));
      }
    }
  }
}

void require_k(std::size_t k, std::size_t n) {
  if (k > n) {
    throw Error("cannot select " + std::to_string(k) + " nodes from a graph of " +
                std::to_string(n));
  }
}

// Odd k takes the best connected candidate, even k the worst. Ties go to the
// smaller vertex id; candidates are kept sorted by vertex so the first
// extreme found wins.
Node take_alternating(std::vector<SwingCandidate>& set, std::size_t k) {
  auto it = set.begin();
  for (auto c = set.begin(); c != set.end(); ++c) {
    const bool better = (k % 2 == 1) ? c->connectedness < it->connectedness
                                     : c->connectedness > it->connectedness;
    if (better) it = c;
  }
  const Node v = it->vertex;
  set.erase(it);
  return v;
}

void upsert_min(std::map<Node, std::uint64_t>& m, Node v, std::uint64_t delta) {
  auto [it, inserted] = m.emplace(v, delta);
  if (!inserted) it->second = std::min(it->second, delta);
}

std::vector<SwingCandidate> to_candidates(const std::map<Node, std::uint64_t>& m) {
  std::vector<SwingCandidate> out;
  out.reserve(m.size());
  for (const auto& [v, d] : m) out.push_back({v, d});
  return out;
}

}  // namespace

SwingCandidates swing_candidates(const NetworkGraph& g, const DistanceMatrix& dist) {
  require_connected(g, dist);
  const auto n = g.node_count();
  std::vector<std::uint64_t> sums(n);
  for (Node v = 0; v < n; ++v) sums[v] = dist.row_sum(v);

  std::map<Node, std::uint64_t> primary;
  std::map<Node, std::uint64_t> backup;
  for (Node u = 0; u < n; ++u) {
    auto nb = g.neighbors(u);
    if (nb.empty()) continue;
    // delta_v sums distances from v to every vertex except u.
    auto delta = [&](Node v) { return sums[v] - dist.hops(v, u); };
    Node best = nb.front();
    for (Node v : nb) {
      if (delta(v) < delta(best)) best = v;
    }
    upsert_min(primary, best, delta(best));
    for (Node v : nb) {
      if (v != best) upsert_min(backup, v, delta(v));
    }
  }
  for (const auto& [v, d] : primary) backup.erase(v);
  return {to_candidates(primary), to_candidates(backup)};
}

std::vector<Node> swing(const NetworkGraph& g, std::size_t k, const DistanceMatrix& dist) {
  if (k == 0) throw Error("swing needs k >= 1");
  require_k(k, g.node_count());
  auto [primary, backup] = swing_candidates(g, dist);

  std::vector<Node> selected;
  selected.reserve(k);
  if (k < primary.size()) {
    for (std::size_t step = 1; step <= k; ++step) {
      selected.push_back(take_alternating(primary, step));
    }
    return selected;
  }

  // Take all of the primary set, ordered as alternating picks would order it.
  std::size_t step = 1;
  while (!primary.empty()) {
    selected.push_back(take_alternating(primary, step++));
  }
  while (selected.size() < k && !backup.empty()) {
    selected.push_back(take_alternating(backup, step++));
  }
  if (selected.size() < k) {
    // Candidate sets exhausted: fill with unselected vertices, best connected first.
    std::vector<SwingCandidate> rest;
    for (Node v = 0; v < g.node_count(); ++v) {
      if (std::find(selected.begin(), selected.end(), v) == selected.end()) {
        rest.push_back({v, dist.row_sum(v)});
      }
    }
    std::stable_sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
      return a.connectedness < b.connectedness;
    });
    for (std::size_t i = 0; selected.size() < k; ++i) selected.push_back(rest[i].vertex);
  }
  return selected;
}

std::vector<Node> weighted_sample_without_replacement(std::span<const double> weights,
                                                      std::size_t k, Rng& rng) {
  require_k(k, weights.size());
  // Efraimidis-Spirakis: ordering by log(u)/w descending has the same law as
  // sequential draws with renormalization.
  struct Keyed {
    double key;
    Node index;
  };
  std::vector<Keyed> keyed(weights.size());
  for (Node i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0 || !std::isfinite(weights[i])) {
      throw Error("sampling weights must be finite and non-negative");
    }
    const double u = uniform01_open_low(rng);
    keyed[i] = {weights[i] > 0.0 ? std::log(u) / weights[i]
                                 : -std::numeric_limits<double>::infinity(),
                i};
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const Keyed& a, const Keyed& b) { return a.key > b.key; });
  std::vector<Node> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = keyed[j].index;
  return out;
}

std::vector<double> population_weights(const PopulationTable& populations) {
  const double total = static_cast<double>(
      std::accumulate(populations.begin(), populations.end(), std::uint64_t{0}));
  std::vector<double> rho(populations.size());
  for (std::size_t v = 0; v < populations.size(); ++v) {
    if (populations[v] == 0) throw Error("populations must be positive");
    rho[v] = static_cast<double>(populations[v]) / total;
  }
  return rho;
}

std::vector<Node> pop_select(const NetworkGraph& g, const PopulationTable& populations,
                             std::size_t k, Rng& rng) {
  if (populations.size() != g.node_count()) {
    throw Error("population table does not match graph size");
  }
  require_k(k, g.node_count());
  const auto rho = population_weights(populations);
  return weighted_sample_without_replacement(rho, k, rng);
}

std::vector<Node> cls_select(const NetworkGraph& g, const DistanceMatrix& dist, std::size_t k,
                             Rng& rng) {
  require_k(k, g.node_count());
  const auto scores = closeness_scores(g, dist);
  return weighted_sample_without_replacement(scores.normalized, k, rng);
}

std::vector<Node> select_nodes(Algorithm algorithm, const NetworkGraph& g,
                               const DistanceMatrix& dist, const PopulationTable& populations,
                               std::size_t k, Rng& rng) {
  switch (algorithm) {
    case Algorithm::swing: return swing(g, k, dist);
    case Algorithm::pop: return pop_select(g, populations, k, rng);
    case Algorithm::cls: return cls_select(g, dist, k, rng);
  }
  throw Error("unknown selection algorithm");
}

std::uint32_t k_center_objective(const DistanceMatrix& dist, std::span<const Node> selected) {
  if (selected.empty()) throw Error("k-center objective needs a non-empty selection");
  std::uint32_t worst = 0;
  for (Node v = 0; v < dist.size(); ++v) {
    auto nearest = std::numeric_limits<std::uint32_t>::max();
    for (Node c : selected) nearest = std::min(nearest, dist.hops(c, v));
    worst = std::max(worst, nearest);
  }
  return worst;
}

std::vector<Node> PlacementResult::publishers() const {
  std::vector<Node> p(origins);
  p.insert(p.end(), edges.begin(), edges.end());
  std::sort(p.begin(), p.end());
  return p;
}

PlacementResult split_roles(Algorithm algorithm, std::span<const Node> selection,
                            std::size_t k_origins, std::size_t k_edges) {
  if (selection.size() != k_origins + k_edges) {
    throw Error("selection of " + std::to_string(selection.size()) + " nodes cannot be split into " +
                std::to_string(k_origins) + " origins and " + std::to_string(k_edges) + " edges");
  }
  PlacementResult out;
  out.algorithm = algorithm;
  out.origins.assign(selection.begin(), selection.begin() + static_cast<std::ptrdiff_t>(k_origins));
  out.edges.assign(selection.begin() + static_cast<std::ptrdiff_t>(k_origins), selection.end());
  auto all = out.publishers();
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw Error("selection contains a repeated node");
  }
  return out;
}

std::vector<Node> place_ldns(const NetworkGraph& g, const DistanceMatrix& dist,
                             const PopulationTable& populations, std::size_t k_ldns,
                             Algorithm algorithm, Rng& rng) {
  if (k_ldns == 0) throw Error("at least one LDNS is required");
  return select_nodes(algorithm, g, dist, populations, k_ldns, rng);
}

CachePlan::CachePlan(std::size_t nodes, std::size_t items)
    : items_(items),
      roles_(nodes, Role::none),
      capacity_mb_(nodes, 0.0),
      stored_mb_(nodes, 0.0),
      cached_(nodes * items, 0) {}

std::vector<ItemIndex> CachePlan::cached_items(Node p) const {
  std::vector<ItemIndex> out;
  for (ItemIndex i = 0; i < items_; ++i) {
    if (caches(p, i)) out.push_back(i);
  }
  return out;
}

std::vector<Node> CachePlan::nodes_with(Role r) const {
  std::vector<Node> out;
  for (Node v = 0; v < roles_.size(); ++v) {
    if (roles_[v] == r) out.push_back(v);
  }
  return out;
}

void CachePlan::make_origin(Node p, const Catalogue& catalogue) {
  roles_.at(p) = Role::origin;
  capacity_mb_[p] = std::numeric_limits<double>::infinity();
  stored_mb_[p] = catalogue.total_volume_mb();
  std::fill_n(cached_.begin() + static_cast<std::ptrdiff_t>(index(p, 0)), items_, 1);
}

void CachePlan::make_edge(Node p, double capacity_mb) {
  roles_.at(p) = Role::edge;
  capacity_mb_[p] = capacity_mb;
}

void CachePlan::admit(Node p, ItemIndex i, double volume_mb) {
  if (caches(p, i)) return;
  if (stored_mb_[p] + volume_mb > capacity_mb_[p]) {
    throw Error("admitting item exceeds storage capacity of node " + std::to_string(p));
  }
  stored_mb_[p] += volume_mb;
  cached_[index(p, i)] = 1;
}

CachePlan build_cache_plan(const PlacementResult& placement, const Catalogue& catalogue,
                           const PopulationTable& populations, double cache_fraction, Rng& rng) {
  if (cache_fraction < 0.0 || cache_fraction > 1.0) {
    throw Error("cache fraction must lie in [0, 1]");
  }
  CachePlan plan(populations.size(), catalogue.size());
  for (Node o : placement.origins) plan.make_origin(o, catalogue);

  const double c_max = cache_fraction * catalogue.total_volume_mb();
  const auto u_max = static_cast<double>(*std::max_element(populations.begin(), populations.end()));
  const auto phi = catalogue.popularities();
  for (Node e : placement.edges) {
    const double capacity = c_max * static_cast<double>(populations.at(e)) / u_max;
    plan.make_edge(e, capacity);
    const auto order = weighted_sample_without_replacement(phi, phi.size(), rng);
    for (ItemIndex i : order) {
      if (plan.stored_mb(e) + catalogue[i].volume_mb > capacity) break;
      plan.admit(e, i, catalogue[i].volume_mb);
    }
  }
  return plan;
}

StorageReport storage_report(const CachePlan& plan, const Catalogue& catalogue) {
  StorageReport r;
  for (Node p = 0; p < plan.node_count(); ++p) {
    if (!plan.is_publisher(p)) continue;
    r.theoretical_mb += catalogue.total_volume_mb();
    r.cached_mb += plan.stored_mb(p);
    if (plan.role(p) == Role::edge) {
      r.advertised_not_cached_mb += catalogue.total_volume_mb() - plan.stored_mb(p);
    }
  }
  return r;
}

void write_placement_document(std::ostream& out, const NetworkGraph& g,
                              const PlacementResult& placement, const CachePlan* plan) {
  using nlohmann::ordered_json;
  auto ids = [&g](const std::vector<Node>& nodes) {
    ordered_json a = ordered_json::array();
    for (Node v : nodes) a.push_back(g.id(v));
    return a;
  };
  ordered_json doc;
  doc["algorithm"] = to_string(placement.algorithm);
  doc["origins"] = ids(placement.origins);
  doc["edges"] = ids(placement.edges);
  doc["ldns"] = ids(placement.ldns);
  if (plan != nullptr) {
    ordered_json cached = ordered_json::object();
    for (Node p : placement.publishers()) {
      ordered_json entry;
      entry["role"] = plan->role(p) == Role::origin ? "origin" : "edge";
      const double cap = plan->capacity_mb(p);
      entry["capacity_mb"] = std::isfinite(cap) ? ordered_json(cap) : ordered_json(nullptr);
      entry["stored_mb"] = plan->stored_mb(p);
      ordered_json ranks = ordered_json::array();
      for (ItemIndex i : plan->cached_items(p)) ranks.push_back(i + 1);
      entry["cached_ranks"] = std::move(ranks);
      cached[g.id(p)] = std::move(entry);
    }
    doc["publishers"] = std::move(cached);
  }
  out << doc.dump(2) << '\n';
}

}  // namespace fcdn
