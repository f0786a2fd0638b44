#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fcdn {

/// Dense node index. Nodes are numbered in ascending lexicographic order of
/// their string ids, so comparing indices is comparing ids.
using Node = std::uint32_t;

struct Arc {
  Node from = 0;
  Node to = 0;
  auto operator<=>(const Arc&) const = default;
};

struct NodeRecord {
  std::string id;
  std::string label;
  /// Per-node storage volume c_v in GB when the document carries one.
  std::optional<double> storage_gb;
};

struct EdgeRecord {
  std::string source;
  std::string target;
  /// Link rate b<u,v> in Gb/s when the document carries one. Recorded only.
  std::optional<double> capacity_gbps;
};

/// Directed graph G = {V, A}. Immutable after construction.
class NetworkGraph {
 public:
  /// Builds a graph from raw records. Undirected edges are expanded into both
  /// arcs, parallel edges collapse into one arc and self-loops are dropped.
  /// Throws Error on duplicate node ids or dangling edge endpoints.
  static NetworkGraph build(std::vector<NodeRecord> nodes, const std::vector<EdgeRecord>& edges,
                            bool directed = false);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t arc_count() const noexcept { return arcs_.size(); }

  const NodeRecord& node(Node v) const { return nodes_.at(v); }
  const std::string& id(Node v) const { return nodes_.at(v).id; }
  std::optional<Node> find(std::string_view id) const;
  /// Like find() but throws naming the id.
  Node index_of(std::string_view id) const;

  /// Out-neighbours of v in ascending order (V_v).
  std::span<const Node> neighbors(Node v) const;
  bool has_arc(Node u, Node v) const;

  /// Arcs sorted by (from, to).
  std::span<const Arc> arcs() const noexcept { return arcs_; }
  /// Position of <u,v> within arcs(), or nullopt.
  std::optional<std::size_t> arc_index(Node u, Node v) const;
  std::optional<double> arc_capacity_gbps(std::size_t arc) const { return arc_capacity_.at(arc); }

  bool symmetric() const noexcept;

 private:
  std::vector<NodeRecord> nodes_;
  std::vector<Arc> arcs_;
  std::vector<std::optional<double>> arc_capacity_;
  std::vector<std::size_t> offsets_;  // CSR offsets into arcs_
  std::vector<Node> targets_;
};

/// Parses an Internet Topology Zoo style GraphML document.
NetworkGraph load_topology(std::istream& in);
NetworkGraph load_topology(const std::filesystem::path& path);

/// Hop-count distance table. Unreachable pairs carry no value.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::optional<std::uint32_t> at(Node u, Node v) const;
  bool reachable(Node u, Node v) const { return cells_[index(u, v)] >= 0; }
  /// Hop count; throws Error when v is unreachable from u.
  std::uint32_t hops(Node u, Node v) const;
  void set(Node u, Node v, std::uint32_t hops);

  bool fully_connected() const noexcept;
  /// Sum of hops from v to every node; throws when any is unreachable.
  std::uint64_t row_sum(Node v) const;

 private:
  std::size_t index(Node u, Node v) const { return static_cast<std::size_t>(u) * n_ + v; }

  std::size_t n_ = 0;
  std::vector<std::int32_t> cells_;  // -1 = unreachable; never summed
};

/// Breadth-first search from every node.
DistanceMatrix all_pairs_hop_distance(const NetworkGraph& g);

struct ClosenessScores {
  std::vector<double> raw;         // (|V|-1) / sum of distances
  std::vector<double> normalized;  // raw / sum(raw)
};

/// Throws Error naming an unreachable pair when the graph is disconnected.
ClosenessScores closeness_scores(const NetworkGraph& g, const DistanceMatrix& dist);

/// Canonical shortest paths: for every root r and node x, parent(r, x) is the
/// smallest-id predecessor of x on a shortest r -> x path. Walking parents
/// from x back to r yields the lexicographically smallest shortest path
/// x, ..., r, and the union of those walks for one root is a tree.
class ShortestPaths {
 public:
  ShortestPaths(const NetworkGraph& g, const DistanceMatrix& dist);

  std::size_t size() const noexcept { return n_; }
  const DistanceMatrix& distances() const noexcept { return dist_; }

  std::optional<Node> parent(Node root, Node x) const;

  /// Node sequence subscriber, ..., publisher realizing delivery from
  /// publisher to subscriber. Throws when unreachable.
  std::vector<Node> path(Node publisher, Node subscriber) const;

  /// Calls fn(arc_index) for every arc on the delivery route publisher ->
  /// subscriber, starting at the subscriber end. No allocation.
  template <class Fn>
  void for_each_delivery_arc(Node publisher, Node subscriber, Fn&& fn) const {
    require_route(publisher, subscriber);
    Node x = subscriber;
    while (x != publisher) {
      const auto slot = static_cast<std::size_t>(publisher) * n_ + x;
      fn(parent_arc_[slot]);
      x = parent_[slot];
    }
  }

 private:
  void require_route(Node publisher, Node subscriber) const;

  std::size_t n_ = 0;
  DistanceMatrix dist_;
  std::vector<Node> parent_;  // n*n, self for root and unreachable nodes
  std::vector<std::size_t> parent_arc_;  // arc index parent -> x
};

}  // namespace fcdn
