#include "fcdn/mapping.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

#include "fcdn/error.hpp"

namespace fcdn {

RelationSet::RelationSet(const ShortestPaths& routes, std::vector<PubSubRelation> relations)
    : routes_(&routes), relations_(std::move(relations)) {
  auto less = [](const PubSubRelation& a, const PubSubRelation& b) {
    return std::tie(a.tier, a.item, a.subscriber) < std::tie(b.tier, b.item, b.subscriber);
  };
  const auto& dist = routes.distances();
  for (const auto& r : relations_) {
    if (dist.at(r.subscriber, r.publisher) != r.hops) {
      throw Error("relation hop count disagrees with the routing table");
    }
  }
  if (!std::is_sorted(relations_.begin(), relations_.end(), less)) {
    std::sort(relations_.begin(), relations_.end(), less);
  }
  consumer_end_ = static_cast<std::size_t>(
      std::find_if(relations_.begin(), relations_.end(),
                   [](const auto& r) { return r.tier != Tier::consumer; }) -
      relations_.begin());
}

std::span<const PubSubRelation> RelationSet::consumer() const noexcept {
  return std::span<const PubSubRelation>(relations_).first(consumer_end_);
}

std::span<const PubSubRelation> RelationSet::cdn() const noexcept {
  return std::span<const PubSubRelation>(relations_).subspan(consumer_end_);
}

namespace {

/// Publishers tied at the minimum distance from one node, ascending id.
struct NearestSet {
  std::uint32_t hops = 0;
  std::vector<Node> tied;

  Node choose(const CachePlan& plan, ItemIndex item) const {
    for (Node p : tied) {
      if (plan.caches(p, item)) return p;
    }
    return tied.front();
  }
};

NearestSet nearest_publishers(const DistanceMatrix& dist, Node from, std::span<const Node> publishers) {
  NearestSet out;
  out.hops = std::numeric_limits<std::uint32_t>::max();
  for (Node p : publishers) {
    auto d = dist.at(from, p);
    if (!d) continue;
    if (*d < out.hops) {
      out.hops = *d;
      out.tied.assign(1, p);
    } else if (*d == out.hops) {
      out.tied.push_back(p);
    }
  }
  if (out.tied.empty()) {
    throw Error("node " + std::to_string(from) + " cannot reach any publisher");
  }
  return out;
}

Node nearest_of(const DistanceMatrix& dist, Node from, std::span<const Node> candidates) {
  auto best = std::numeric_limits<std::uint32_t>::max();
  Node chosen = 0;
  bool found = false;
  for (Node c : candidates) {
    auto d = dist.at(from, c);
    if (d && (*d < best || (*d == best && c < chosen))) {
      best = *d;
      chosen = c;
      found = true;
    }
  }
  if (!found) throw Error("node " + std::to_string(from) + " reaches none of the candidates");
  return chosen;
}

std::vector<Node> sorted_publishers(const PlacementResult& placement, const CachePlan& plan) {
  auto pubs = placement.publishers();
  if (pubs.empty()) throw Error("no publishers placed");
  for (Node p : pubs) {
    if (p >= plan.node_count() || !plan.is_publisher(p)) {
      throw Error("cache plan does not match placement");
    }
  }
  return pubs;
}

/// Appends cdn-tier relations for consumer relations served by an edge that
/// does not cache the item.
void add_miss_relations(std::vector<PubSubRelation>& relations, const PlacementResult& placement,
                        const CachePlan& plan, const DistanceMatrix& dist) {
  std::map<std::pair<ItemIndex, Node>, std::uint64_t> misses;
  for (const auto& r : relations) {
    if (r.tier == Tier::consumer && plan.role(r.publisher) == Role::edge &&
        !plan.caches(r.publisher, r.item)) {
      misses[{r.item, r.publisher}] += r.clients;
    }
  }
  if (misses.empty()) return;
  if (placement.origins.empty()) throw Error("edge misses need at least one origin");
  std::vector<Node> origins(placement.origins);
  std::sort(origins.begin(), origins.end());

  std::map<Node, Node> origin_of;
  for (const auto& [key, clients] : misses) {
    const auto [item, edge] = key;
    auto it = origin_of.find(edge);
    if (it == origin_of.end()) it = origin_of.emplace(edge, nearest_of(dist, edge, origins)).first;
    relations.push_back({item, edge, it->second, clients, Tier::cdn, dist.hops(edge, it->second)});
  }
}

void check_demand(const DemandMatrix& demand, const CachePlan& plan, const ShortestPaths& routes) {
  if (demand.node_count() != routes.size() || plan.node_count() != routes.size()) {
    throw Error("demand, cache plan and topology disagree on node count");
  }
  if (demand.item_count() != plan.item_count()) {
    throw Error("demand references items outside the catalogue");
  }
}

}  // namespace

RelationSet match_fcdn(const PlacementResult& placement, const CachePlan& plan,
                       const DemandMatrix& demand, const ShortestPaths& routes) {
  check_demand(demand, plan, routes);
  const auto pubs = sorted_publishers(placement, plan);
  const auto& dist = routes.distances();

  std::vector<NearestSet> nearest;
  nearest.reserve(demand.node_count());
  for (Node s = 0; s < demand.node_count(); ++s) nearest.push_back(nearest_publishers(dist, s, pubs));

  // Item-major loops emit relations already in (item, subscriber) order.
  std::vector<PubSubRelation> relations;
  for (ItemIndex i = 0; i < demand.item_count(); ++i) {
    for (Node s = 0; s < demand.node_count(); ++s) {
      const auto m = demand.at(s, i);
      if (m == 0) continue;
      relations.push_back({i, s, nearest[s].choose(plan, i), m, Tier::consumer, nearest[s].hops});
    }
  }
  add_miss_relations(relations, placement, plan, dist);
  return RelationSet(routes, std::move(relations));
}

RelationSet match_dns(const PlacementResult& placement, std::span<const Node> ldns,
                      const CachePlan& plan, const DemandMatrix& demand,
                      const ShortestPaths& routes) {
  if (ldns.empty()) throw Error("DNS mapping needs at least one LDNS");
  check_demand(demand, plan, routes);
  const auto pubs = sorted_publishers(placement, plan);
  const auto& dist = routes.distances();

  std::map<Node, NearestSet> resolver_view;
  for (Node d : ldns) {
    if (!resolver_view.contains(d)) resolver_view.emplace(d, nearest_publishers(dist, d, pubs));
  }
  std::vector<const NearestSet*> view_of(demand.node_count());
  for (Node s = 0; s < demand.node_count(); ++s) {
    view_of[s] = &resolver_view.at(nearest_of(dist, s, ldns));
  }

  std::vector<PubSubRelation> relations;
  for (ItemIndex i = 0; i < demand.item_count(); ++i) {
    for (Node s = 0; s < demand.node_count(); ++s) {
      const auto m = demand.at(s, i);
      if (m == 0) continue;
      const Node p = view_of[s]->choose(plan, i);
      relations.push_back({i, s, p, m, Tier::consumer, dist.hops(s, p)});
    }
  }
  add_miss_relations(relations, placement, plan, dist);
  return RelationSet(routes, std::move(relations));
}

std::vector<std::uint32_t> path_lengths(const RelationSet& relations) {
  std::vector<std::uint32_t> out;
  out.reserve(relations.consumer().size());
  for (const auto& r : relations.consumer()) out.push_back(r.hops);
  return out;
}

std::vector<std::uint32_t> cdn_path_lengths(const RelationSet& relations) {
  std::vector<std::uint32_t> out;
  out.reserve(relations.cdn().size());
  for (const auto& r : relations.cdn()) out.push_back(r.hops);
  return out;
}

void write_relation_table(std::ostream& out, const NetworkGraph& g, const RelationSet& relations) {
  out << "item,subscriber,publisher,tier,hops,clients\n";
  for (const auto& r : relations.all()) {
    out << (r.item + 1) << ',' << g.id(r.subscriber) << ',' << g.id(r.publisher) << ','
        << (r.tier == Tier::consumer ? "consumer" : "cdn") << ',' << r.hops << ',' << r.clients
        << '\n';
  }
}

}  // namespace fcdn
