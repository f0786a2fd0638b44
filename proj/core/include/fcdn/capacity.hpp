#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fcdn/catalogue.hpp"
#include "fcdn/mapping.hpp"
#include "fcdn/topology.hpp"

namespace fcdn {

enum class DeliveryMode : std::uint8_t { unicast, multicast };

struct MulticastParams {
  double duration_s = 900.0;  // T, the time needed to stream one item
  double catchment_s = 1.0;   // tau, requires 0 < tau < T

  void validate() const;
};

/// chi(<u,v>) per arc and chi(p) per publisher, in Gb/s.
struct LinkLoadReport {
  DeliveryMode mode = DeliveryMode::unicast;
  std::optional<MulticastParams> params;
  std::vector<double> arc_gbps;        // indexed like NetworkGraph::arcs()
  std::vector<double> publisher_gbps;  // indexed by node; 0 for non-publishers
  double total_gbps = 0.0;             // backhaul: sum over arcs

  double max_publisher_gbps() const;
};

/// Every relation adds eta_i * m to each arc of its delivery path.
LinkLoadReport unicast_link_loads(const RelationSet& relations, const Catalogue& catalogue,
                                  const NetworkGraph& g);

/// Union of canonical delivery paths from one publisher; sorted arc indices.
std::vector<std::size_t> build_multicast_tree(const NetworkGraph& g, Node publisher,
                                              std::span<const Node> subscribers,
                                              const ShortestPaths& routes);

/// Mean number of catchment intervals over T for Poisson requests at rate mu:
/// the solution of T = w*tau + (w - 1)/mu, i.e. (T + 1/mu) / (tau + 1/mu).
double expected_group_count(double duration_s, double catchment_s, double rate_per_s);

/// Mean clients per catchment interval including the one that opened it:
/// 1 + mu*tau.
double expected_group_size(double rate_per_s, double catchment_s);
/// Aggregate form over several subscribers feeding one tree.
double expected_group_size(std::span<const double> rates_per_s, double catchment_s);

/// Multicast trees grouped by (tier, item, publisher), with the number of
/// clients downstream of every tree arc. Built once per relation set and
/// evaluated for any (T, tau).
class MulticastLayout {
 public:
  MulticastLayout(const RelationSet& relations, const Catalogue& catalogue, const NetworkGraph& g);

  LinkLoadReport evaluate(const MulticastParams& params) const;

  struct Group {
    ItemIndex item;
    Node publisher;
    Tier tier;
    std::uint64_t clients;  // sum of m over the group's subscribers
    double bitrate_mbps;
    std::size_t first;      // into entries()
    std::size_t last;
  };
  struct Entry {
    std::size_t arc;
    std::uint64_t downstream_clients;
  };

  std::span<const Group> groups() const noexcept { return groups_; }
  std::span<const Entry> entries() const noexcept { return entries_; }

 private:
  const NetworkGraph* graph_;
  std::vector<Group> groups_;
  std::vector<Entry> entries_;
};

/// Consumer tier: per (item, publisher) tree, each arc carries
/// eta_i * min(w, clients downstream of the arc) where w is the expected
/// group count at the aggregate request rate. Cdn tier: one orchestrated
/// stream per (item, origin) tree.
LinkLoadReport multicast_link_loads(const RelationSet& relations, const Catalogue& catalogue,
                                    const NetworkGraph& g, const MulticastParams& params);

/// Total unicast backhaul over total multicast backhaul; 1 when both are 0.
double multicast_gain(const LinkLoadReport& unicast, const LinkLoadReport& multicast);

/// kind,u,v,unicast_gbps,multicast_gbps with arc, publisher and total rows.
void write_load_table(std::ostream& out, const NetworkGraph& g, const LinkLoadReport& unicast,
                      const LinkLoadReport& multicast);

}  // namespace fcdn
