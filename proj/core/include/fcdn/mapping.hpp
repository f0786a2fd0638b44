#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fcdn/catalogue.hpp"
#include "fcdn/placement.hpp"
#include "fcdn/topology.hpp"

namespace fcdn {

enum class Tier : std::uint8_t {
  consumer,  // subscriber node -> edge or origin
  cdn,       // edge lacking the item -> origin
};

/// lambda<i,s,p> = 1 for the recorded publisher, 0 for every other.
struct PubSubRelation {
  ItemIndex item = 0;
  Node subscriber = 0;
  Node publisher = 0;
  /// m[s,i] for consumer relations; for cdn relations the clients the edge
  /// relays for this item.
  std::uint64_t clients = 0;
  Tier tier = Tier::consumer;
  std::uint32_t hops = 0;
};

/// Relations sorted by (tier, item, subscriber). Paths are not stored; they
/// are the canonical shortest paths of the routing table the set was built
/// with, which must outlive the set.
class RelationSet {
 public:
  RelationSet(const ShortestPaths& routes, std::vector<PubSubRelation> relations);

  std::span<const PubSubRelation> all() const noexcept { return relations_; }
  std::span<const PubSubRelation> consumer() const noexcept;
  std::span<const PubSubRelation> cdn() const noexcept;
  const ShortestPaths& routes() const noexcept { return *routes_; }

  /// Node sequence subscriber, ..., publisher.
  std::vector<Node> path(const PubSubRelation& r) const { return routes_->path(r.publisher, r.subscriber); }

 private:
  const ShortestPaths* routes_;
  std::vector<PubSubRelation> relations_;
  std::size_t consumer_end_ = 0;
};

/// fCDN anycast: every subscriber binds to its nearest publisher; ties prefer
/// a publisher caching the item, then the smaller id. Edges missing an item
/// they serve subscribe to their nearest origin.
RelationSet match_fcdn(const PlacementResult& placement, const CachePlan& plan,
                       const DemandMatrix& demand, const ShortestPaths& routes);

/// DNS redirection baseline: subscriber -> nearest LDNS -> publisher nearest
/// to that LDNS.
RelationSet match_dns(const PlacementResult& placement, std::span<const Node> ldns,
                      const CachePlan& plan, const DemandMatrix& demand,
                      const ShortestPaths& routes);

/// One hop count per consumer relation, in relation order.
std::vector<std::uint32_t> path_lengths(const RelationSet& relations);
/// Same for the cdn tier.
std::vector<std::uint32_t> cdn_path_lengths(const RelationSet& relations);

/// item,subscriber,publisher,tier,hops,clients
void write_relation_table(std::ostream& out, const NetworkGraph& g, const RelationSet& relations);

}  // namespace fcdn
