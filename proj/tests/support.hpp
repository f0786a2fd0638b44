// Graph builders and independent oracles shared by the unit and acceptance
// tests. Nothing here calls into the routing code it is used to check.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fcdn/capacity.hpp"
#include "fcdn/catalogue.hpp"
#include "fcdn/mapping.hpp"
#include "fcdn/topology.hpp"

namespace fcdn::testing {

using EdgeList = std::vector<std::pair<int, int>>;

// Single-letter ids keep lexicographic and numeric order aligned.
inline std::string letter(int k) { return std::string(1, static_cast<char>('A' + k)); }

inline NetworkGraph make_graph(int n, const EdgeList& edges) {
  std::vector<NodeRecord> nodes;
  for (int k = 0; k < n; ++k) nodes.push_back({letter(k), letter(k), std::nullopt});
  std::vector<EdgeRecord> records;
  for (auto [u, v] : edges) records.push_back({letter(u), letter(v), std::nullopt});
  return NetworkGraph::build(std::move(nodes), records);
}

inline NetworkGraph path_graph(int n) {
  EdgeList e;
  for (int k = 0; k + 1 < n; ++k) e.emplace_back(k, k + 1);
  return make_graph(n, e);
}

// Node 0 is the center.
inline NetworkGraph star_graph(int leaves) {
  EdgeList e;
  for (int k = 1; k <= leaves; ++k) e.emplace_back(0, k);
  return make_graph(leaves + 1, e);
}

inline NetworkGraph complete_graph(int n) {
  EdgeList e;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  }
  return make_graph(n, e);
}

// Adjacency as plain sets, read off the edge list rather than the graph.
inline std::vector<std::vector<int>> adjacency(int n, const EdgeList& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : edges) {
    if (u == v) continue;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

inline bool connected(int n, const EdgeList& edges) {
  const auto adj = adjacency(n, edges);
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

constexpr int kNoPath = std::numeric_limits<int>::max();

// Minimum length over every simple path, by exhaustive depth-first search.
inline std::vector<std::vector<int>> brute_force_distances(int n, const EdgeList& edges) {
  const auto adj = adjacency(n, edges);
  std::vector<std::vector<int>> best(n, std::vector<int>(n, kNoPath));
  std::vector<bool> on_path(n, false);
  std::function<void(int, int, int)> dfs = [&](int src, int u, int len) {
    best[src][u] = std::min(best[src][u], len);
    on_path[u] = true;
    for (int v : adj[u]) {
      if (!on_path[v]) dfs(src, v, len + 1);
    }
    on_path[u] = false;
  };
  for (int s = 0; s < n; ++s) dfs(s, s, 0);
  return best;
}

// Random connected graph: a random spanning tree plus extra edges.
inline EdgeList random_connected_edges(int n, double extra_p, std::mt19937_64& rng) {
  EdgeList e;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    e.emplace_back(pick(rng), v);
  }
  std::bernoulli_distribution extra(extra_p);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (std::find(e.begin(), e.end(), std::pair{u, v}) == e.end() &&
          std::find(e.begin(), e.end(), std::pair{v, u}) == e.end() && extra(rng)) {
        e.emplace_back(u, v);
      }
    }
  }
  return e;
}

// Per-arc unicast load by re-walking each delivery route from the subscriber
// back to the publisher: each step moves to the smallest-id neighbour one hop
// closer to the publisher, using brute-force distances only. Keyed by
// (from, to) node ids of the arc.
inline std::map<std::pair<int, int>, double> rewalk_unicast_loads(
    int n, const EdgeList& edges, const std::vector<PubSubRelation>& relations,
    const Catalogue& catalogue) {
  const auto adj = adjacency(n, edges);
  const auto d = brute_force_distances(n, edges);
  std::map<std::pair<int, int>, double> load;
  for (const auto& r : relations) {
    const int p = static_cast<int>(r.publisher);
    int x = static_cast<int>(r.subscriber);
    const double gbps = catalogue[r.item].bitrate_mbps * static_cast<double>(r.clients) / 1000.0;
    while (x != p) {
      int prev = -1;
      for (int y : adj[x]) {
        if (d[p][y] == d[p][x] - 1) {
          prev = y;
          break;
        }
      }
      load[{prev, x}] += gbps;
      x = prev;
    }
  }
  return load;
}

// Hand-specified catalogue: equal popularity unless given.
inline Catalogue make_catalogue(std::vector<double> bitrates, std::vector<double> volumes,
                                std::vector<double> popularity = {}) {
  const auto n = bitrates.size();
  if (popularity.empty()) popularity.assign(n, 1.0 / static_cast<double>(n));
  std::vector<ContentItem> items;
  for (std::size_t k = 0; k < n; ++k) {
    items.push_back({static_cast<std::uint32_t>(k + 1), popularity[k], bitrates[k], volumes[k]});
  }
  return Catalogue(std::move(items));
}


// Exhaustive K-center optimum: min over all K-subsets of the largest
// distance from any node to its nearest chosen node.
inline int exhaustive_k_center(const std::vector<std::vector<int>>& d, int k) {
  const int n = static_cast<int>(d.size());
  int best = kNoPath;
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(pick.size()) == k) {
      int radius = 0;
      for (int v = 0; v < n; ++v) {
        int nearest = kNoPath;
        for (int c : pick) nearest = std::min(nearest, d[c][v]);
        radius = std::max(radius, nearest);
      }
      best = std::min(best, radius);
      return;
    }
    for (int c = start; c < n; ++c) {
      pick.push_back(c);
      rec(c + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

// Radius of a given selection, from oracle distances.
inline int k_center_radius(const std::vector<std::vector<int>>& d, const std::vector<Node>& picked) {
  int radius = 0;
  for (std::size_t v = 0; v < d.size(); ++v) {
    int nearest = kNoPath;
    for (Node c : picked) nearest = std::min(nearest, d[c][v]);
    radius = std::max(radius, nearest);
  }
  return radius;
}

// Every connected labelled graph on n nodes, as edge lists.
inline std::vector<EdgeList> all_connected_graphs(int n) {
  EdgeList slots;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  }
  std::vector<EdgeList> out;
  for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
    EdgeList e;
    for (std::size_t b = 0; b < slots.size(); ++b) {
      if (mask >> b & 1u) e.push_back(slots[b]);
    }
    if (connected(n, e)) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace fcdn::testing
