#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "fcdn/catalogue.hpp"
#include "fcdn/random.hpp"
#include "fcdn/topology.hpp"

namespace fcdn {

enum class Algorithm { swing, pop, cls };

std::string_view to_string(Algorithm a) noexcept;
Algorithm parse_algorithm(std::string_view name);

/// A <vertex, connectedness> candidate pair. Connectedness is a hop sum,
/// smaller is better connected.
struct SwingCandidate {
  Node vertex = 0;
  std::uint64_t connectedness = 0;
  bool operator==(const SwingCandidate&) const = default;
};

struct SwingCandidates {
  std::vector<SwingCandidate> primary;  // best-connected neighbour of each vertex, deduplicated
  std::vector<SwingCandidate> backup;   // remaining neighbours, minus anything in primary
};

/// Candidate sets, both sorted by vertex.
SwingCandidates swing_candidates(const NetworkGraph& g, const DistanceMatrix& dist);

/// Deterministic K-center style selection alternating between the best and
/// the worst connected candidate. Returns k distinct vertices in selection
/// order. Throws when k == 0, k > |V| or the graph is disconnected.
std::vector<Node> swing(const NetworkGraph& g, std::size_t k, const DistanceMatrix& dist);

/// Weighted sampling of k indices without replacement; after each pick the
/// remaining weights renormalize. Returned in pick order.
std::vector<Node> weighted_sample_without_replacement(std::span<const double> weights,
                                                      std::size_t k, Rng& rng);

/// rho_v = U_v / sum(U).
std::vector<double> population_weights(const PopulationTable& populations);

std::vector<Node> pop_select(const NetworkGraph& g, const PopulationTable& populations,
                             std::size_t k, Rng& rng);
std::vector<Node> cls_select(const NetworkGraph& g, const DistanceMatrix& dist, std::size_t k,
                             Rng& rng);

/// Dispatches to swing / pop_select / cls_select. `rng` is untouched by swing.
std::vector<Node> select_nodes(Algorithm algorithm, const NetworkGraph& g,
                               const DistanceMatrix& dist, const PopulationTable& populations,
                               std::size_t k, Rng& rng);

/// max over v of the distance from v to its nearest selected node.
std::uint32_t k_center_objective(const DistanceMatrix& dist, std::span<const Node> selected);

struct PlacementResult {
  Algorithm algorithm = Algorithm::swing;
  std::vector<Node> origins;  // O
  std::vector<Node> edges;    // E, disjoint from O
  std::vector<Node> ldns;     // DNS baseline only; may overlap O and E

  /// P = E u O, ascending.
  std::vector<Node> publishers() const;
};

/// The first k_origins selections become origins, the rest edges.
PlacementResult split_roles(Algorithm algorithm, std::span<const Node> selection,
                            std::size_t k_origins, std::size_t k_edges);

/// An independent run of the selection algorithm for K_d resolver sites.
std::vector<Node> place_ldns(const NetworkGraph& g, const DistanceMatrix& dist,
                             const PopulationTable& populations, std::size_t k_ldns,
                             Algorithm algorithm, Rng& rng);

enum class Role : std::uint8_t { none, origin, edge };

/// Which publisher stores which item. Every publisher advertises the whole
/// catalogue; origins store all of it.
class CachePlan {
 public:
  CachePlan() = default;
  CachePlan(std::size_t nodes, std::size_t items);

  std::size_t node_count() const noexcept { return roles_.size(); }
  std::size_t item_count() const noexcept { return items_; }

  Role role(Node v) const { return roles_.at(v); }
  bool is_publisher(Node v) const { return role(v) != Role::none; }
  bool advertises(Node p, ItemIndex) const { return is_publisher(p); }
  bool caches(Node p, ItemIndex i) const { return cached_[index(p, i)] != 0; }
  /// c_p in MB; +inf for origins.
  double capacity_mb(Node p) const { return capacity_mb_.at(p); }
  /// theta(p) in MB.
  double stored_mb(Node p) const { return stored_mb_.at(p); }
  std::vector<ItemIndex> cached_items(Node p) const;
  std::vector<Node> nodes_with(Role r) const;

  void make_origin(Node p, const Catalogue& catalogue);
  void make_edge(Node p, double capacity_mb);
  /// Throws if admitting i would exceed c_p.
  void admit(Node p, ItemIndex i, double volume_mb);

 private:
  std::size_t index(Node p, ItemIndex i) const { return static_cast<std::size_t>(p) * items_ + i; }

  std::size_t items_ = 0;
  std::vector<Role> roles_;
  std::vector<double> capacity_mb_;
  std::vector<double> stored_mb_;
  std::vector<std::uint8_t> cached_;
};

/// c_max = cache_fraction * total catalogue volume; each edge gets
/// c_max * U_p / U_max. Items are admitted in popularity-weighted random
/// order until the next draw no longer fits.
CachePlan build_cache_plan(const PlacementResult& placement, const Catalogue& catalogue,
                           const PopulationTable& populations, double cache_fraction, Rng& rng);

struct StorageReport {
  double theoretical_mb = 0;           // every item stored at every publisher
  double cached_mb = 0;                // sum of theta(p)
  double advertised_not_cached_mb = 0;

  double cached_fraction() const {
    return theoretical_mb > 0 ? cached_mb / theoretical_mb : 0.0;
  }
};

StorageReport storage_report(const CachePlan& plan, const Catalogue& catalogue);

/// JSON audit document: node lists and per-publisher cached item ranks.
void write_placement_document(std::ostream& out, const NetworkGraph& g,
                              const PlacementResult& placement, const CachePlan* plan);

}  // namespace fcdn
