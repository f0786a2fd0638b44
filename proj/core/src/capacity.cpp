#include "fcdn/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>

#include "fcdn/error.hpp"

namespace fcdn {

void MulticastParams::validate() const {
  if (!(duration_s > 0.0) || !(catchment_s > 0.0)) {
    throw Error("multicast parameters must be positive");
  }
  if (!(catchment_s < duration_s)) {
    throw Error("catchment interval must be shorter than the content duration");
  }
}

double LinkLoadReport::max_publisher_gbps() const {
  return publisher_gbps.empty() ? 0.0 : *std::max_element(publisher_gbps.begin(), publisher_gbps.end());
}

namespace {

LinkLoadReport empty_report(const NetworkGraph& g, DeliveryMode mode) {
  LinkLoadReport r;
  r.mode = mode;
  r.arc_gbps.assign(g.arc_count(), 0.0);
  r.publisher_gbps.assign(g.node_count(), 0.0);
  return r;
}

void finish(LinkLoadReport& r) {
  r.total_gbps = 0.0;
  for (double x : r.arc_gbps) r.total_gbps += x;
}

}  // namespace

LinkLoadReport unicast_link_loads(const RelationSet& relations, const Catalogue& catalogue,
                                  const NetworkGraph& g) {
  auto report = empty_report(g, DeliveryMode::unicast);
  const auto& routes = relations.routes();
  for (const auto& r : relations.all()) {
    if (r.hops == 0) continue;
    const double gbps = catalogue[r.item].bitrate_mbps * static_cast<double>(r.clients) / 1000.0;
    routes.for_each_delivery_arc(r.publisher, r.subscriber,
                                 [&](std::size_t arc) { report.arc_gbps[arc] += gbps; });
    // Exactly one arc of the path leaves the publisher.
    report.publisher_gbps[r.publisher] += gbps;
  }
  finish(report);
  return report;
}

std::vector<std::size_t> build_multicast_tree(const NetworkGraph& g, Node publisher,
                                              std::span<const Node> subscribers,
                                              const ShortestPaths& routes) {
  std::vector<bool> used(g.arc_count(), false);
  for (Node s : subscribers) {
    routes.for_each_delivery_arc(publisher, s, [&](std::size_t arc) { used[arc] = true; });
  }
  std::vector<std::size_t> arcs;
  for (std::size_t a = 0; a < used.size(); ++a) {
    if (used[a]) arcs.push_back(a);
  }
  return arcs;
}

double expected_group_count(double duration_s, double catchment_s, double rate_per_s) {
  if (!(rate_per_s > 0.0)) throw Error("request rate must be positive");
  MulticastParams{duration_s, catchment_s}.validate();
  const double idle = 1.0 / rate_per_s;
  return std::max(1.0, (duration_s + idle) / (catchment_s + idle));
}

double expected_group_size(double rate_per_s, double catchment_s) {
  if (rate_per_s < 0.0 || catchment_s < 0.0) throw Error("rate and catchment must be non-negative");
  return 1.0 + rate_per_s * catchment_s;
}

double expected_group_size(std::span<const double> rates_per_s, double catchment_s) {
  double total = 0.0;
  for (double r : rates_per_s) {
    if (r < 0.0) throw Error("rates must be non-negative");
    total += r;
  }
  return expected_group_size(total, catchment_s);
}

MulticastLayout::MulticastLayout(const RelationSet& relations, const Catalogue& catalogue,
                                 const NetworkGraph& g)
    : graph_(&g) {
  const auto& routes = relations.routes();
  std::vector<std::uint64_t> downstream(g.arc_count(), 0);
  std::vector<std::size_t> touched;

  // Relations are sorted by (tier, item, subscriber): collect each
  // (tier, item) run, then split it by publisher.
  auto all = relations.all();
  std::size_t begin = 0;
  while (begin < all.size()) {
    std::size_t end = begin;
    while (end < all.size() && all[end].tier == all[begin].tier && all[end].item == all[begin].item) {
      ++end;
    }
    std::map<Node, std::vector<const PubSubRelation*>> by_publisher;
    for (std::size_t k = begin; k < end; ++k) by_publisher[all[k].publisher].push_back(&all[k]);

    for (const auto& [publisher, members] : by_publisher) {
      Group group{all[begin].item, publisher, all[begin].tier, 0,
                  catalogue[all[begin].item].bitrate_mbps, entries_.size(), entries_.size()};
      for (const auto* r : members) {
        group.clients += r->clients;
        routes.for_each_delivery_arc(publisher, r->subscriber, [&](std::size_t arc) {
          if (downstream[arc] == 0) touched.push_back(arc);
          downstream[arc] += r->clients;
        });
      }
      std::sort(touched.begin(), touched.end());
      for (std::size_t arc : touched) {
        entries_.push_back({arc, downstream[arc]});
        downstream[arc] = 0;
      }
      touched.clear();
      group.last = entries_.size();
      groups_.push_back(group);
    }
    begin = end;
  }
}

LinkLoadReport MulticastLayout::evaluate(const MulticastParams& params) const {
  params.validate();
  auto report = empty_report(*graph_, DeliveryMode::multicast);
  report.params = params;
  const auto arcs = graph_->arcs();
  for (const auto& group : groups_) {
    double streams = 1.0;  // orchestrated cdn-tier delivery
    if (group.tier == Tier::consumer) {
      const double rate = static_cast<double>(group.clients) / params.duration_s;
      streams = expected_group_count(params.duration_s, params.catchment_s, rate);
    }
    for (std::size_t k = group.first; k < group.last; ++k) {
      const auto& e = entries_[k];
      // No arc carries more streams than it has clients behind it.
      const double w = std::min(streams, static_cast<double>(e.downstream_clients));
      const double gbps = group.bitrate_mbps * w / 1000.0;
      report.arc_gbps[e.arc] += gbps;
      if (arcs[e.arc].from == group.publisher) report.publisher_gbps[group.publisher] += gbps;
    }
  }
  finish(report);
  return report;
}

LinkLoadReport multicast_link_loads(const RelationSet& relations, const Catalogue& catalogue,
                                    const NetworkGraph& g, const MulticastParams& params) {
  return MulticastLayout(relations, catalogue, g).evaluate(params);
}

double multicast_gain(const LinkLoadReport& unicast, const LinkLoadReport& multicast) {
  if (unicast.total_gbps == 0.0 && multicast.total_gbps == 0.0) return 1.0;
  if (multicast.total_gbps == 0.0) return std::numeric_limits<double>::infinity();
  return unicast.total_gbps / multicast.total_gbps;
}

void write_load_table(std::ostream& out, const NetworkGraph& g, const LinkLoadReport& unicast,
                      const LinkLoadReport& multicast) {
  if (unicast.arc_gbps.size() != g.arc_count() || multicast.arc_gbps.size() != g.arc_count()) {
    throw Error("load reports do not match the graph");
  }
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::fixed << std::setprecision(3);
  out << "kind,u,v,unicast_gbps,multicast_gbps\n";
  for (std::size_t a = 0; a < g.arc_count(); ++a) {
    const auto& arc = g.arcs()[a];
    out << "arc," << g.id(arc.from) << ',' << g.id(arc.to) << ',' << unicast.arc_gbps[a] << ','
        << multicast.arc_gbps[a] << '\n';
  }
  for (Node p = 0; p < g.node_count(); ++p) {
    if (unicast.publisher_gbps[p] == 0.0 && multicast.publisher_gbps[p] == 0.0) continue;
    out << "publisher," << g.id(p) << ",," << unicast.publisher_gbps[p] << ','
        << multicast.publisher_gbps[p] << '\n';
  }
  out << "total,,," << unicast.total_gbps << ',' << multicast.total_gbps << '\n';
  out.flags(flags);
  out.precision(precision);
}

}  // namespace fcdn
