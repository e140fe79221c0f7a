#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "mpwsn/routing.hpp"
#include "mpwsn/errors.hpp"
#include "oracles/graph_oracle.hpp"
#include "support.hpp"

using namespace mpwsn;

namespace {

Node make_node(NodeId id, double x, double y, bool spare = false) {
  Node n;
  n.id = id;
  n.pos = {x, y};
  n.residual_energy = 10.0;
  n.is_redundant = spare;
  return n;
}

struct RandomGraph {
  TopologyGraph g;
  oracle::SmallGraph ref;
};

// Erdos-Renyi over explicit links, with a few spare nodes.
RandomGraph random_graph(std::mt19937_64& rng, int n, double p, double spare_p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomGraph r{TopologyGraph(0.0), {}};
  r.ref.n = n;
  r.ref.adj.assign(n, {});
  r.ref.relay_ok.assign(n, true);
  for (int i = 0; i < n; ++i) {
    const bool spare = i >= 2 && u(rng) < spare_p;
    r.g.add_node(make_node(static_cast<NodeId>(i), u(rng), u(rng), spare));
    r.ref.relay_ok[i] = !spare;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (u(rng) < p) {
        r.g.add_link(static_cast<NodeId>(i), static_cast<NodeId>(j));
        r.ref.adj[i].push_back(j);
        r.ref.adj[j].push_back(i);
      }
    }
  }
  return r;
}

void expect_disjoint(const std::vector<Route>& routes, NodeId s, NodeId t) {
  std::set<NodeId> seen;
  int direct = 0;
  for (const auto& r : routes) {
    ASSERT_EQ(r.nodes.front(), s);
    ASSERT_EQ(r.nodes.back(), t);
    if (r.nodes.size() == 2) ++direct;
    for (std::size_t i = 1; i + 1 < r.nodes.size(); ++i) {
      ASSERT_TRUE(seen.insert(r.nodes[i]).second) << "node " << r.nodes[i] << " reused";
    }
  }
  ASSERT_LE(direct, 1);
}

}  // namespace

TEST(Topology, AdjacencyByRangeAndLinks) {
  TopologyGraph g(10.0);
  g.add_node(make_node(1, 0, 0));
  g.add_node(make_node(2, 8, 0));
  g.add_node(make_node(3, 30, 0));
  EXPECT_TRUE(g.adjacent(1, 2));
  EXPECT_FALSE(g.adjacent(1, 3));
  g.add_link(1, 3);
  EXPECT_TRUE(g.adjacent(1, 3));
  EXPECT_EQ(g.neighbors(1), (std::vector<NodeId>{2, 3}));
  g.fail_node(2);
  EXPECT_FALSE(g.adjacent(1, 2));
  EXPECT_EQ(g.neighbors(1), (std::vector<NodeId>{3}));
  EXPECT_THROW(g.add_node(make_node(1, 5, 5)), InvalidParameter);
  EXPECT_DOUBLE_EQ(g.distance(1, 3), 30.0);
}

TEST(Topology, IdentityTransferKeepsIdsUnique) {
  TopologyGraph g(0.0);
  g.add_node(make_node(0, 0, 0));
  g.add_node(make_node(1, 1, 0));
  g.add_node(make_node(2, 2, 0));
  g.add_node(make_node(9, 1, 1, true));
  g.add_link(0, 1);
  g.add_link(1, 2);
  const auto v0 = g.version();
  g.fail_node(1);
  g.transfer_identity(1, 9);
  EXPECT_GT(g.version(), v0);
  EXPECT_EQ(g.device_of(1), 3u);
  EXPECT_EQ(g.device_of(9), 1u);
  EXPECT_TRUE(g.alive(1));
  EXPECT_FALSE(g.alive(9));
  EXPECT_FALSE(g.node(1).is_redundant);
  EXPECT_TRUE(g.adjacent(0, 1));
  EXPECT_TRUE(g.adjacent(1, 2));
}

TEST(Topology, DeploymentIsDeterministic) {
  FieldSpec spec;
  spec.node_count = 200;
  spec.seed = 17;
  const auto a = deploy_field(spec);
  const auto b = deploy_field(spec);
  std::ostringstream sa, sb;
  write_topology(sa, a);
  write_topology(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  int spares = 0;
  for (const auto& n : a.nodes()) {
    spares += n.is_redundant;
    EXPECT_GE(n.pos.x, 0.0);
    EXPECT_LT(n.pos.x, spec.width);
  }
  EXPECT_EQ(spares, 10);
}

TEST(Topology, FileRoundTrip) {
  FieldSpec spec;
  spec.node_count = 50;
  const auto g = deploy_field(spec);
  std::stringstream io;
  write_topology(io, g);
  const auto back = read_topology(io, spec.radio_range);
  ASSERT_EQ(back.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(back.device(i).id, g.device(i).id);
    EXPECT_EQ(back.device(i).pos.x, g.device(i).pos.x);
    EXPECT_EQ(back.device(i).is_redundant, g.device(i).is_redundant);
  }
  std::istringstream bad("0 1 2\n");
  EXPECT_THROW(read_topology(bad, 1.0), Error);
}

TEST(Discovery, LexicographicTieBreak) {
  // 0 - {2,3} - 1 : two equal-length paths, both found, lower id first
  TopologyGraph g(0.0);
  for (NodeId i = 0; i < 4; ++i) g.add_node(make_node(i, i, 0));
  g.add_link(0, 3);
  g.add_link(3, 1);
  g.add_link(0, 2);
  g.add_link(2, 1);
  const auto routes = discover_disjoint_paths(g, 0, 1, 0);
  ASSERT_EQ(routes.size(), 2u);
  EXPECT_EQ(routes[0].nodes, (std::vector<NodeId>{0, 2, 1}));
  EXPECT_EQ(routes[1].nodes, (std::vector<NodeId>{0, 3, 1}));
  EXPECT_EQ(routes[0].profile.path_id, 1);
  EXPECT_EQ(routes[1].profile.path_id, 2);
}

TEST(Discovery, ShortestFirstAndMaxPaths) {
  TopologyGraph g(0.0);
  for (NodeId i = 0; i < 6; ++i) g.add_node(make_node(i, i, 0));
  g.add_link(0, 2);
  g.add_link(2, 3);
  g.add_link(3, 1);
  g.add_link(0, 4);
  g.add_link(4, 1);
  g.add_link(0, 1);
  const auto all = discover_disjoint_paths(g, 0, 1, 0);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].hops(), 1);
  EXPECT_EQ(all[1].hops(), 2);
  EXPECT_EQ(all[2].hops(), 3);
  EXPECT_EQ(discover_disjoint_paths(g, 0, 1, 2).size(), 2u);
}

TEST(Discovery, SpareNodesAreNotRelays) {
  TopologyGraph g(0.0);
  g.add_node(make_node(0, 0, 0));
  g.add_node(make_node(1, 2, 0));
  g.add_node(make_node(2, 1, 0, true));
  g.add_link(0, 2);
  g.add_link(2, 1);
  EXPECT_TRUE(discover_disjoint_paths(g, 0, 1, 0).empty());
  EXPECT_THROW(discover_disjoint_paths(g, 0, 0, 0), InvalidParameter);
}

TEST(Discovery, RandomGraphsAreDisjointAndBoundedByMaxFlow) {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> size(3, 50);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const int n = size(rng);
    auto r = random_graph(rng, n, 0.05 + 0.3 * u(rng), 0.1);
    const auto routes = discover_disjoint_paths(r.g, 0, 1, 0);
    expect_disjoint(routes, 0, 1);
    ASSERT_LE(static_cast<int>(routes.size()), oracle::max_disjoint_flow(r.ref, 0, 1));
    if (!routes.empty()) ASSERT_GE(oracle::max_disjoint_flow(r.ref, 0, 1), 1);
    else ASSERT_EQ(oracle::max_disjoint_flow(r.ref, 0, 1), 0);
  }
}

TEST(Discovery, SmallGraphsNeverBeatBruteForce) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> size(3, 12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    auto r = random_graph(rng, size(rng), 0.1 + 0.35 * u(rng), 0.1);
    const auto brute = oracle::max_disjoint_bruteforce(r.ref, 0, 1);
    ASSERT_TRUE(brute.has_value());
    ++compared;
    ASSERT_EQ(*brute, oracle::max_disjoint_flow(r.ref, 0, 1));
    ASSERT_LE(static_cast<int>(discover_disjoint_paths(r.g, 0, 1, 0).size()), *brute);
  }
  EXPECT_EQ(compared, 1000);
}

TEST(Discovery, GeometricGraphs) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    FieldSpec spec;
    spec.width = spec.height = 100;
    spec.node_count = 50;
    spec.radio_range = 25;
    spec.seed = rng();
    const auto g = deploy_field(spec);
    if (g.node(0).is_redundant || g.node(1).is_redundant) continue;
    const auto routes = discover_disjoint_paths(g, 0, 1, 0);
    expect_disjoint(routes, 0, 1);
    for (const auto& r : routes) {
      for (std::size_t k = 0; k + 1 < r.nodes.size(); ++k) {
        ASSERT_TRUE(g.adjacent(r.nodes[k], r.nodes[k + 1]));
      }
    }
  }
}

TEST(PathParams, AnalyticAndProbedTau) {
  TopologyGraph g(0.0);
  for (NodeId i = 0; i < 4; ++i) g.add_node(make_node(i, 4.0 * i, 0));
  g.add_link(0, 2);
  g.add_link(2, 3);
  g.add_link(3, 1);
  auto routes = discover_disjoint_paths(g, 0, 1, 0);
  ASSERT_EQ(routes.size(), 1u);
  const auto ep = testing_support::ref_energy();
  LinkParamsd fwd{50000, 0.001, 0.0};
  auto p = estimate_path_params(g, routes[0], fwd, TauMode::Analytic, ep);
  EXPECT_DOUBLE_EQ(p.tau, 0.021);
  EXPECT_EQ(p.hops, 3);
  EXPECT_DOUBLE_EQ(p.distance, 4.0);
  EXPECT_EQ(routes[0].params.hops, 3);
  LinkParamsd back{50000, 0.003, 0.0};
  p = estimate_path_params(g, routes[0], fwd, TauMode::Probed, ep, back);
  EXPECT_NEAR(p.tau, 0.022, 1e-15);
  g.fail_node(2);
  EXPECT_THROW(estimate_path_params(g, routes[0], fwd, TauMode::Analytic, ep), StaleRouteError);
}

TEST(RoutingTableTest, BuildAndStaleness) {
  FieldSpec spec;
  spec.width = spec.height = 100;
  spec.node_count = 80;
  spec.radio_range = 25;
  auto g = deploy_field(spec);
  g.set_redundant(0, false);
  g.set_redundant(1, false);
  DiscoveryOptions opt;
  opt.link = testing_support::ref_link();
  opt.energy = testing_support::ref_energy();
  const auto table = build_routing_table(g, 0, {1}, opt);
  EXPECT_FALSE(table.is_stale(g));
  ASSERT_NE(table.routes_to(1), nullptr);
  EXPECT_LE(table.routes_to(1)->size(), 5u);
  EXPECT_EQ(table.routes_to(7), nullptr);
  EXPECT_THROW(build_routing_table(g, 0, {0}, opt), InvalidParameter);
  g.fail_node(2);
  EXPECT_TRUE(table.is_stale(g));
}

TEST(Replacement, NearestSpareToInitiator) {
  TopologyGraph g(0.0);
  g.add_node(make_node(0, 0, 0));
  g.add_node(make_node(1, 10, 0));
  g.add_node(make_node(2, 5, 0));
  g.add_node(make_node(20, 1, 1, true));
  g.add_node(make_node(21, 9, 1, true));
  g.add_link(0, 2);
  g.add_link(2, 1);
  RoutingTable table;
  table.entries[1] = discover_disjoint_paths(g, 0, 1, 0);
  const auto res = replace_failed_node(g, 2, &table, NodeId{1});
  EXPECT_EQ(res.replacement_device, 4u);
  EXPECT_EQ(res.replacement_former_id, 21u);
  EXPECT_EQ(res.routes_updated, 1);
  EXPECT_EQ(table.topology_version, g.version());
  EXPECT_TRUE(g.alive(2));
  EXPECT_FALSE(g.alive(21));
  EXPECT_TRUE(g.adjacent(0, 2));
  EXPECT_EQ(res.notified, (std::vector<NodeId>{0, 1}));

  const auto res2 = replace_failed_node(g, 2, &table);  // anchor: failed node
  EXPECT_EQ(res2.replacement_former_id, 20u);
  EXPECT_THROW(replace_failed_node(g, 2, &table), UnrecoverableFailure);
}

TEST(Replacement, TieGoesToLowestId) {
  TopologyGraph g(0.0);
  g.add_node(make_node(0, 0, 0));
  g.add_node(make_node(31, 1, 1, true));
  g.add_node(make_node(30, 1, -1, true));
  const auto res = replace_failed_node(g, 0, nullptr);
  EXPECT_EQ(res.replacement_former_id, 30u);
}

TEST(RoutesFile, RoundTrip) {
  std::vector<Route> routes(2);
  routes[0].nodes = {0, 5, 7, 1};
  routes[0].profile.path_id = 1;
  routes[1].nodes = {0, 1};
  routes[1].profile.path_id = 2;
  std::stringstream io;
  write_routes(io, routes);
  EXPECT_EQ(io.str(), "1: 0,5,7,1\n2: 0,1\n");
  const auto back = read_routes(io);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].nodes, routes[0].nodes);
  EXPECT_EQ(back[1].hops(), 1);
  std::istringstream bad("x 1,2\n");
  EXPECT_THROW(read_routes(bad), InvalidParameter);
}
