#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "fcdn/error.hpp"
#include "fcdn/topology.hpp"
#include "support.hpp"

using namespace fcdn;
using namespace fcdn::testing;

namespace {

constexpr const char* kSmallDoc = R"(<?xml version="1.0"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns">
  <key attr.name="label" attr.type="string" for="node" id="d1"/>
  <key attr.name="LinkSpeedRaw" attr.type="double" for="edge" id="d2"/>
  <graph edgedefault="undirected">
    <node id="a"><data key="d1">Alpha</data></node>
    <node id="b"><data key="d1">Beta</data></node>
    <node id="c"/>
    <edge source="a" target="b"><data key="d2">10000000000</data></edge>
    <edge source="b" target="c"/>
    <edge source="c" target="c"/>
  </graph>
</graphml>)";

NetworkGraph parse(const std::string& text) {
  std::istringstream in(text);
  return load_topology(in);
}

}  // namespace

TEST(Topology, GeantHas37NodesAnd116Arcs) {
  const auto g = load_topology(std::filesystem::path(FCDN_DATA_DIR) / "geant2012.graphml");
  EXPECT_EQ(g.node_count(), 37u);
  EXPECT_EQ(g.arc_count(), 116u);
  EXPECT_TRUE(g.symmetric());
  EXPECT_TRUE(all_pairs_hop_distance(g).fully_connected());
}

TEST(Topology, ParsesLabelsCapacitiesAndDropsSelfLoops) {
  const auto g = parse(kSmallDoc);
  ASSERT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.arc_count(), 4u);
  EXPECT_EQ(g.node(g.index_of("a")).label, "Alpha");
  EXPECT_EQ(g.node(g.index_of("c")).label, "c");  // falls back to the id
  const auto ab = g.arc_index(g.index_of("a"), g.index_of("b"));
  ASSERT_TRUE(ab);
  ASSERT_TRUE(g.arc_capacity_gbps(*ab));
  EXPECT_DOUBLE_EQ(*g.arc_capacity_gbps(*ab), 10.0);
  EXPECT_FALSE(g.arc_capacity_gbps(*g.arc_index(g.index_of("b"), g.index_of("c"))));
  for (const auto& arc : g.arcs()) EXPECT_NE(arc.from, arc.to);
}

TEST(Topology, SingleNodeNoEdges) {
  const auto g = make_graph(1, {});
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_EQ(g.arc_count(), 0u);
  const auto d = all_pairs_hop_distance(g);
  EXPECT_EQ(d.at(0, 0), 0u);
}

TEST(Topology, UndirectedPathExpandsToSixArcs) {
  EXPECT_EQ(path_graph(4).arc_count(), 6u);
}

TEST(Topology, DirectedDocumentKeepsOneArcPerEdge) {
  std::string doc = kSmallDoc;
  doc.replace(doc.find("undirected"), 10, "directed");
  const auto g = parse(doc);
  EXPECT_EQ(g.arc_count(), 2u);
  EXPECT_FALSE(g.symmetric());
  const auto d = all_pairs_hop_distance(g);
  EXPECT_FALSE(d.reachable(g.index_of("c"), g.index_of("a")));
  EXPECT_FALSE(d.at(g.index_of("c"), g.index_of("a")));
  EXPECT_THROW(d.hops(g.index_of("c"), g.index_of("a")), Error);
}

TEST(Topology, RejectsDuplicateIdsAndDanglingEdges) {
  std::string dup = kSmallDoc;
  dup.replace(dup.find("<node id=\"c\"/>"), 14, "<node id=\"a\"/>");
  EXPECT_THROW(parse(dup), Error);

  std::string dangling = kSmallDoc;
  dangling.replace(dangling.find("target=\"c\"/>"), 12, "target=\"z\"/>");
  EXPECT_THROW(parse(dangling), Error);

  EXPECT_THROW(parse("<graphml><graph>"), Error);
  EXPECT_THROW(parse("<root/>"), Error);
}

TEST(Topology, ReloadingIsIdentical) {
  const auto a = parse(kSmallDoc);
  const auto b = parse(kSmallDoc);
  ASSERT_EQ(a.node_count(), b.node_count());
  EXPECT_TRUE(std::equal(a.arcs().begin(), a.arcs().end(), b.arcs().begin(), b.arcs().end()));
  for (Node v = 0; v < a.node_count(); ++v) EXPECT_EQ(a.id(v), b.id(v));
}

TEST(Distance, PathAndStarByHand) {
  const auto p = all_pairs_hop_distance(path_graph(4));
  EXPECT_EQ(p.at(0, 3), 3u);
  EXPECT_EQ(p.at(1, 2), 1u);
  const auto s = all_pairs_hop_distance(star_graph(3));
  EXPECT_EQ(s.at(1, 2), 2u);
  EXPECT_EQ(s.at(0, 3), 1u);
}

TEST(Distance, MatchesExhaustiveSimplePathSearch) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    EdgeList edges;
    std::bernoulli_distribution coin(0.35);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (coin(rng)) edges.emplace_back(u, v);
      }
    }
    const auto g = make_graph(n, edges);
    const auto d = all_pairs_hop_distance(g);
    const auto oracle = brute_force_distances(n, edges);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (oracle[u][v] == kNoPath) {
          EXPECT_FALSE(d.at(u, v)) << u << "->" << v;
        } else {
          ASSERT_TRUE(d.at(u, v));
          EXPECT_EQ(static_cast<int>(*d.at(u, v)), oracle[u][v]);
        }
      }
    }
  }
}

TEST(Distance, MetricProperties) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 12);
    const auto g = make_graph(n, random_connected_edges(n, 0.2, rng));
    const auto d = all_pairs_hop_distance(g);
    for (Node u = 0; u < g.node_count(); ++u) {
      EXPECT_EQ(d.hops(u, u), 0u);
      for (Node v = 0; v < g.node_count(); ++v) {
        EXPECT_EQ(d.hops(u, v), d.hops(v, u));
        for (Node w = 0; w < g.node_count(); ++w) {
          EXPECT_LE(d.hops(u, w), d.hops(u, v) + d.hops(v, w));
        }
      }
    }
  }
}

TEST(Closeness, PathByHand) {
  const auto g = path_graph(4);
  const auto c = closeness_scores(g, all_pairs_hop_distance(g));
  const std::vector<double> raw{0.5, 0.75, 0.75, 0.5};
  const std::vector<double> rho{0.2, 0.3, 0.3, 0.2};
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(c.raw[k], raw[k], 1e-12);
    EXPECT_NEAR(c.normalized[k], rho[k], 1e-12);
  }
}

TEST(Closeness, CompleteGraphIsUniformAndStarCenterWins) {
  const auto k5 = complete_graph(5);
  for (double x : closeness_scores(k5, all_pairs_hop_distance(k5)).normalized) EXPECT_NEAR(x, 0.2, 1e-12);

  const auto star = star_graph(3);
  const auto c = closeness_scores(star, all_pairs_hop_distance(star));
  // Distance sums 3 (center) and 5 (leaves): raw 1 and 3/5, normalizer 14/5.
  EXPECT_NEAR(c.normalized[0], 5.0 / 14.0, 1e-12);
  for (int leaf = 1; leaf <= 3; ++leaf) {
    EXPECT_NEAR(c.normalized[leaf], 3.0 / 14.0, 1e-12);
    EXPECT_GT(c.normalized[0], c.normalized[leaf]);
  }
}

TEST(Closeness, SumsToOneAndRejectsDisconnected) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 15);
    const auto g = make_graph(n, random_connected_edges(n, 0.15, rng));
    const auto c = closeness_scores(g, all_pairs_hop_distance(g));
    EXPECT_NEAR(std::accumulate(c.normalized.begin(), c.normalized.end(), 0.0), 1.0, 1e-12);
  }
  const auto split = make_graph(4, {{0, 1}, {2, 3}});
  try {
    closeness_scores(split, all_pairs_hop_distance(split));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("unreachable"), std::string::npos) << e.what();
  }
}

TEST(ShortestPaths, CanonicalPathsAreShortestAndSmallestId) {
  // Square A-B-D-C-A: two shortest routes between A and D; B < C wins.
  const auto g = make_graph(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  const ShortestPaths sp(g, all_pairs_hop_distance(g));
  EXPECT_EQ(sp.path(0, 3), (std::vector<Node>{3, 1, 0}));
  EXPECT_EQ(sp.path(3, 0), (std::vector<Node>{0, 1, 3}));
  EXPECT_EQ(sp.path(2, 2), (std::vector<Node>{2}));
  EXPECT_EQ(sp.parent(0, 3), Node{1});
  EXPECT_FALSE(sp.parent(0, 0));
}

TEST(ShortestPaths, WalksMatchRewalkOracleAndFormTrees) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const auto edges = random_connected_edges(n, 0.4, rng);
    const auto g = make_graph(n, edges);
    const ShortestPaths sp(g, all_pairs_hop_distance(g));
    const auto adj = adjacency(n, edges);
    const auto d = brute_force_distances(n, edges);
    for (int root = 0; root < n; ++root) {
      std::vector<int> arcs_into(n, 0);
      std::set<std::size_t> used;
      for (int x = 0; x < n; ++x) {
        std::vector<Node> expect{static_cast<Node>(x)};
        int y = x;
        while (y != root) {
          for (int z : adj[y]) {
            if (d[root][z] == d[root][y] - 1) {
              y = z;
              break;
            }
          }
          expect.push_back(static_cast<Node>(y));
        }
        EXPECT_EQ(sp.path(root, x), expect);
        sp.for_each_delivery_arc(root, x, [&](std::size_t a) { used.insert(a); });
      }
      // A tree on n nodes rooted at root: every non-root node has one arc in.
      for (auto a : used) ++arcs_into[g.arcs()[a].to];
      EXPECT_EQ(used.size(), static_cast<std::size_t>(n - 1));
      for (int x = 0; x < n; ++x) EXPECT_EQ(arcs_into[x], x == root ? 0 : 1);
    }
  }
}
