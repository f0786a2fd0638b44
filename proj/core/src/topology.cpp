#include "fcdn/topology.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "fcdn/error.hpp"

namespace fcdn {

namespace {

namespace pt = boost::property_tree;

std::optional<std::string> attribute(const pt::ptree& element, const std::string& name) {
  // '/' as separator: GraphML attribute names contain dots ("attr.name").
  auto value = element.get_optional<std::string>(pt::ptree::path_type("<xmlattr>/" + name, '/'));
  if (value) {
    return *value;
  }
  return std::nullopt;
}

std::string required_attribute(const pt::ptree& element, const std::string& name,
                               std::string_view what) {
  auto value = attribute(element, name);
  if (!value) {
    throw Error("malformed topology document: " + std::string(what) + " without '" + name +
                "' attribute");
  }
  return *value;
}

std::optional<double> parse_number(const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

NetworkGraph NetworkGraph::build(std::vector<NodeRecord> nodes,
                                 const std::vector<EdgeRecord>& edges, bool directed) {
  std::sort(nodes.begin(), nodes.end(),
            [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].id == nodes[i - 1].id) {
      throw Error("duplicate node id '" + nodes[i].id + "'");
    }
  }

  NetworkGraph g;
  g.nodes_ = std::move(nodes);

  std::map<Arc, std::optional<double>> arcs;
  auto add = [&](Node u, Node v, std::optional<double> cap) {
    if (u == v) {
      return;
    }
    auto [it, inserted] = arcs.emplace(Arc{u, v}, cap);
    if (!inserted && cap) {
      // Parallel links: record the aggregate rate.
      it->second = it->second.value_or(0.0) + *cap;
    }
  };
  for (const auto& e : edges) {
    auto u = g.find(e.source);
    auto v = g.find(e.target);
    if (!u || !v) {
      throw Error("edge " + e.source + " -> " + e.target + " references undeclared node '" +
                  (!u ? e.source : e.target) + "'");
    }
    add(*u, *v, e.capacity_gbps);
    if (!directed) {
      add(*v, *u, e.capacity_gbps);
    }
  }

  g.arcs_.reserve(arcs.size());
  g.arc_capacity_.reserve(arcs.size());
  for (const auto& [arc, cap] : arcs) {
    g.arcs_.push_back(arc);
    g.arc_capacity_.push_back(cap);
  }

  const std::size_t n = g.nodes_.size();
  g.offsets_.assign(n + 1, 0);
  for (const auto& a : g.arcs_) {
    ++g.offsets_[a.from + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    g.offsets_[i + 1] += g.offsets_[i];
  }
  g.targets_.reserve(g.arcs_.size());
  for (const auto& a : g.arcs_) {
    g.targets_.push_back(a.to);
  }
  return g;
}

std::optional<Node> NetworkGraph::find(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const NodeRecord& r, std::string_view key) { return r.id < key; });
  if (it == nodes_.end() || it->id != id) {
    return std::nullopt;
  }
  return static_cast<Node>(it - nodes_.begin());
}

Node NetworkGraph::index_of(std::string_view id) const {
  auto v = find(id);
  if (!v) {
    throw Error("unknown node id '" + std::string(id) + "'");
  }
  return *v;
}

std::span<const Node> NetworkGraph::neighbors(Node v) const {
  return std::span<const Node>(targets_).subspan(offsets_.at(v), offsets_.at(v + 1) - offsets_[v]);
}

bool NetworkGraph::has_arc(Node u, Node v) const { return arc_index(u, v).has_value(); }

std::optional<std::size_t> NetworkGraph::arc_index(Node u, Node v) const {
  auto it = std::lower_bound(arcs_.begin(), arcs_.end(), Arc{u, v});
  if (it == arcs_.end() || *it != Arc{u, v}) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - arcs_.begin());
}

bool NetworkGraph::symmetric() const noexcept {
  return std::all_of(arcs_.begin(), arcs_.end(), [this](const Arc& a) {
    return std::binary_search(arcs_.begin(), arcs_.end(), Arc{a.to, a.from});
  });
}

NetworkGraph load_topology(std::istream& in) {
  pt::ptree doc;
  try {
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw Error(std::string("malformed topology document: ") + e.what());
  }

  auto root = doc.get_child_optional("graphml");
  if (!root) {
    throw Error("malformed topology document: no <graphml> root");
  }

  // key id -> attribute name, per domain
  std::map<std::string, std::string> node_keys;
  std::map<std::string, std::string> edge_keys;
  const pt::ptree* graph = nullptr;
  for (const auto& [tag, child] : *root) {
    if (tag == "key") {
      auto id = required_attribute(child, "id", "<key>");
      auto name = attribute(child, "attr.name").value_or(id);
      auto domain = attribute(child, "for").value_or("all");
      if (domain == "node" || domain == "all") node_keys[id] = name;
      if (domain == "edge" || domain == "all") edge_keys[id] = name;
    } else if (tag == "graph") {
      if (graph != nullptr) {
        throw Error("malformed topology document: more than one <graph>");
      }
      graph = &child;
    }
  }
  if (graph == nullptr) {
    throw Error("malformed topology document: no <graph> element");
  }
  const bool directed = attribute(*graph, "edgedefault").value_or("undirected") == "directed";

  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  for (const auto& [tag, child] : *graph) {
    if (tag == "node") {
      NodeRecord rec;
      rec.id = required_attribute(child, "id", "<node>");
      for (const auto& [dtag, data] : child) {
        if (dtag != "data") continue;
        auto key = required_attribute(data, "key", "<data>");
        auto it = node_keys.find(key);
        if (it == node_keys.end()) continue;
        const auto value = data.get_value<std::string>();
        if (it->second == "label") {
          rec.label = value;
        } else if (it->second == "storage_gb") {
          rec.storage_gb = parse_number(value);
        }
      }
      if (rec.label.empty()) rec.label = rec.id;
      nodes.push_back(std::move(rec));
    } else if (tag == "edge") {
      EdgeRecord rec;
      rec.source = required_attribute(child, "source", "<edge>");
      rec.target = required_attribute(child, "target", "<edge>");
      for (const auto& [dtag, data] : child) {
        if (dtag != "data") continue;
        auto key = required_attribute(data, "key", "<data>");
        auto it = edge_keys.find(key);
        if (it == edge_keys.end()) continue;
        if (it->second == "LinkSpeedRaw") {
          // bits per second
          if (auto bps = parse_number(data.get_value<std::string>())) {
            rec.capacity_gbps = *bps / 1e9;
          }
        }
      }
      edges.push_back(std::move(rec));
    }
  }
  return NetworkGraph::build(std::move(nodes), edges, directed);
}

NetworkGraph load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open topology document " + path.string());
  }
  return load_topology(in);
}

DistanceMatrix::DistanceMatrix(std::size_t n) : n_(n), cells_(n * n, -1) {}

std::optional<std::uint32_t> DistanceMatrix::at(Node u, Node v) const {
  const auto c = cells_.at(index(u, v));
  if (c < 0) return std::nullopt;
  return static_cast<std::uint32_t>(c);
}

std::uint32_t DistanceMatrix::hops(Node u, Node v) const {
  const auto c = cells_.at(index(u, v));
  if (c < 0) {
    throw Error("node " + std::to_string(v) + " is unreachable from node " + std::to_string(u));
  }
  return static_cast<std::uint32_t>(c);
}

void DistanceMatrix::set(Node u, Node v, std::uint32_t hops) {
  cells_.at(index(u, v)) = static_cast<std::int32_t>(hops);
}

bool DistanceMatrix::fully_connected() const noexcept {
  return std::none_of(cells_.begin(), cells_.end(), [](std::int32_t c) { return c < 0; });
}

std::uint64_t DistanceMatrix::row_sum(Node v) const {
  std::uint64_t sum = 0;
  for (Node u = 0; u < n_; ++u) {
    sum += hops(v, u);
  }
  return sum;
}

DistanceMatrix all_pairs_hop_distance(const NetworkGraph& g) {
  const auto n = g.node_count();
  DistanceMatrix dist(n);
  std::vector<std::int32_t> level(n);
  std::deque<Node> queue;
  for (Node s = 0; s < n; ++s) {
    std::fill(level.begin(), level.end(), -1);
    level[s] = 0;
    queue.assign(1, s);
    while (!queue.empty()) {
      const Node u = queue.front();
      queue.pop_front();
      dist.set(s, u, static_cast<std::uint32_t>(level[u]));
      for (Node v : g.neighbors(u)) {
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return dist;
}

ClosenessScores closeness_scores(const NetworkGraph& g, const DistanceMatrix& dist) {
  const auto n = g.node_count();
  ClosenessScores out;
  out.raw.resize(n);
  out.normalized.resize(n);
  if (n == 1) {
    out.raw[0] = 0.0;
    out.normalized[0] = 1.0;
    return out;
  }
  for (Node v = 0; v < n; ++v) {
    std::uint64_t sum = 0;
    for (Node u = 0; u < n; ++u) {
      auto d = dist.at(v, u);
      if (!d) {
        throw Error("graph is disconnected: " + g.id(u) + " is unreachable from " + g.id(v));
      }
      sum += *d;
    }
    out.raw[v] = static_cast<double>(n - 1) / static_cast<double>(sum);
  }
  double total = 0.0;
  for (double r : out.raw) total += r;
  for (Node v = 0; v < n; ++v) out.normalized[v] = out.raw[v] / total;
  return out;
}

ShortestPaths::ShortestPaths(const NetworkGraph& g, const DistanceMatrix& dist)
    : n_(g.node_count()), dist_(dist), parent_(n_ * n_), parent_arc_(n_ * n_, 0) {
  if (dist.size() != n_) {
    throw Error("distance matrix does not match graph size");
  }
  for (Node root = 0; root < n_; ++root) {
    for (Node x = 0; x < n_; ++x) {
      const auto slot = static_cast<std::size_t>(root) * n_ + x;
      parent_[slot] = x;
      auto dx = dist.at(root, x);
      if (!dx || *dx == 0) continue;
      // Arcs are sorted by (from, to), so the first hit is the smallest id.
      for (std::size_t a = 0; a < g.arcs().size(); ++a) {
        const Arc& arc = g.arcs()[a];
        if (arc.to != x) continue;
        auto dp = dist.at(root, arc.from);
        if (dp && *dp + 1 == *dx) {
          parent_[slot] = arc.from;
          parent_arc_[slot] = a;
          break;
        }
      }
    }
  }
}

std::optional<Node> ShortestPaths::parent(Node root, Node x) const {
  const auto slot = static_cast<std::size_t>(root) * n_ + x;
  if (root == x || !dist_.reachable(root, x)) return std::nullopt;
  return parent_.at(slot);
}

void ShortestPaths::require_route(Node publisher, Node subscriber) const {
  if (publisher >= n_ || subscriber >= n_) {
    throw Error("node index out of range");
  }
  if (!dist_.reachable(publisher, subscriber)) {
    throw Error("node " + std::to_string(subscriber) + " is unreachable from publisher " +
                std::to_string(publisher));
  }
}

std::vector<Node> ShortestPaths::path(Node publisher, Node subscriber) const {
  std::vector<Node> out{subscriber};
  for_each_delivery_arc(publisher, subscriber, [&](std::size_t) {
    out.push_back(parent_[static_cast<std::size_t>(publisher) * n_ + out.back()]);
  });
  return out;
}

}  // namespace fcdn
