#include "cinesim/error.hpp"
#include "cinesim/graph.hpp"
#include "cinesim/io.hpp"
#include "cinesim/similarity.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <set>

#include "oracles.hpp"

using namespace cinesim;

namespace {

MovieGraph graph_from_edges(std::size_t n, const std::vector<GraphEdge>& edges) {
  MovieGraph g;
  g.model = "test";
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back({"n" + std::to_string(100 + i), "", 0.0, {}, {}});
  g.edges = edges;
  return g;
}

std::vector<std::vector<double>> adjacency(const MovieGraph& g) {
  std::vector<std::vector<double>> a(g.nodes.size(), std::vector<double>(g.nodes.size(), 0.0));
  for (const auto& e : g.edges) a[e.a][e.b] = a[e.b][e.a] = e.weight;
  return a;
}

std::vector<int> as_int(const std::vector<std::size_t>& c) { return {c.begin(), c.end()}; }

MovieGraph two_cliques() {
  std::vector<GraphEdge> edges;
  for (std::size_t base : {0u, 4u}) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) edges.push_back({base + i, base + j, 1.0});
    }
  }
  edges.push_back({3, 4, 1.0});
  std::sort(edges.begin(), edges.end(), [](auto& x, auto& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
  return graph_from_edges(8, edges);
}

MovieGraph ring(std::size_t n) {
  std::vector<GraphEdge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  edges.push_back({0, n - 1, 1.0});
  std::sort(edges.begin(), edges.end(), [](auto& x, auto& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
  return graph_from_edges(n, edges);
}

SimilarityMatrix small_similarity() {
  SimilarityMatrix s{"lsi", {"m1", "m2", "m3", "m4"}, Matrix(4, 4)};
  s.values << 1, 0.9, 0.1, 0.0,  //
      0.9, 1, 0.2, 0.3,          //
      0.1, 0.2, 1, 0.8,          //
      0.0, 0.3, 0.8, 1;
  return s;
}

}  // namespace

TEST(BuildGraph, TopKUnionWithThreshold) {
  const auto s = small_similarity();
  const auto g = build_graph(s, 1);
  EXPECT_EQ(g.edges, (std::vector<GraphEdge>{{0, 1, 0.9}, {2, 3, 0.8}}));
  const auto g2 = build_graph(s, 2);
  EXPECT_EQ(g2.edges, (std::vector<GraphEdge>{{0, 1, 0.9}, {0, 2, 0.1}, {1, 2, 0.2}, {1, 3, 0.3}, {2, 3, 0.8}}));
  const auto g3 = build_graph(s, 3, 0.25);
  EXPECT_EQ(g3.edges, (std::vector<GraphEdge>{{0, 1, 0.9}, {1, 3, 0.3}, {2, 3, 0.8}}));
  for (const auto& e : build_graph(s, 3).edges) EXPECT_GT(e.weight, 0.0);
}

TEST(BuildGraph, AttachesMetadata) {
  const std::vector<MovieMetadata> meta = {{"m2", "Second", {}, {"Dir"}, {"Drama"}, 6.5}};
  const auto g = build_graph(small_similarity(), 1, 0.0, meta);
  EXPECT_EQ(g.model, "lsi");
  EXPECT_EQ(g.nodes[1].title, "Second");
  EXPECT_EQ(g.nodes[1].score, 6.5);
  EXPECT_EQ(g.nodes[1].genres, (std::vector<std::string>{"Drama"}));
  EXPECT_EQ(g.nodes[0].title, "m1");
}

TEST(Modularity, MatchesDoubleSum) {
  const auto g = two_cliques();
  const std::vector<std::size_t> c = {0, 0, 0, 0, 1, 1, 1, 1};
  EXPECT_NEAR(modularity(g, c), oracle::modularity(adjacency(g), as_int(c)), 1e-12);
  const std::vector<std::size_t> mixed = {0, 1, 0, 1, 0, 1, 0, 1};
  EXPECT_NEAR(modularity(g, mixed), oracle::modularity(adjacency(g), as_int(mixed)), 1e-12);
  EXPECT_EQ(modularity(graph_from_edges(3, {}), std::vector<std::size_t>{0, 1, 2}), 0.0);
}

TEST(Louvain, TwoCliquesReachEnumeratedOptimum) {
  const auto g = two_cliques();
  const auto r = louvain(g);
  const auto [best_q, best] = oracle::best_partition(adjacency(g));
  EXPECT_NEAR(r.modularity, best_q, 1e-12);
  EXPECT_EQ(r.n_communities, 2u);
  EXPECT_EQ(r.community, (std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 1}));
}

TEST(Louvain, SingleEdgeAndNoEdges) {
  const auto one = louvain(graph_from_edges(2, {{0, 1, 2.0}}));
  EXPECT_EQ(one.n_communities, 1u);
  EXPECT_NEAR(one.modularity, 0.0, 1e-12);
  const auto none = louvain(graph_from_edges(3, {}));
  EXPECT_EQ(none.community, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(none.modularity, 0.0);
}

TEST(Louvain, RingOfThirty) {
  const auto r = louvain(ring(30));
  const double optimum = 1.0 - 5.0 / 30.0 - 1.0 / 5.0;  // five arcs of six, Q = 1 - c/n - 1/c
  EXPECT_NEAR(optimum, 0.6333, 1e-4);
  EXPECT_GE(r.modularity, optimum - 0.02);
  EXPECT_NEAR(r.modularity, modularity(ring(30), r.community), 1e-12);
}

TEST(Louvain, DeterministicAndMonotonePhases) {
  const auto g = build_graph(cosine_matrix({"x", {"a", "b", "c", "d", "e", "f", "g"}, Matrix::Random(7, 3).cwiseAbs()}), 2);
  const auto a = louvain(g, {1.0, 7});
  const auto b = louvain(g, {1.0, 7});
  EXPECT_EQ(a.community, b.community);
  EXPECT_EQ(a.modularity, b.modularity);
  for (std::size_t i = 1; i < a.phase_modularity.size(); ++i) {
    EXPECT_GE(a.phase_modularity[i], a.phase_modularity[i - 1] - 1e-12);
  }
  const auto r = louvain(ring(30), {1.0, 3});
  for (std::size_t i = 1; i < r.phase_modularity.size(); ++i) {
    EXPECT_GE(r.phase_modularity[i], r.phase_modularity[i - 1] - 1e-12);
  }
}

TEST(Louvain, CommunityIdsCanonical) {
  const auto r = louvain(two_cliques(), {1.0, 99});
  EXPECT_EQ(r.community[0], 0u);
  std::set<std::size_t> seen(r.community.begin(), r.community.end());
  EXPECT_EQ(seen.size(), r.n_communities);
  EXPECT_EQ(*seen.rbegin(), r.n_communities - 1);
}

TEST(ExportJson, RoundTrip) {
  const std::vector<MovieMetadata> meta = {{"m1", "One", {}, {"A"}, {"Drama", "Crime"}, 7.0}};
  const auto g = build_graph(small_similarity(), 2, 0.0, meta);
  const auto c = louvain(g);
  const auto text = export_json(g, c);
  const auto parsed = parse_graph_json(text);
  EXPECT_EQ(parsed.graph.model, g.model);
  ASSERT_EQ(parsed.graph.nodes.size(), 4u);
  EXPECT_EQ(parsed.graph.nodes[0].genres, g.nodes[0].genres);
  EXPECT_EQ(parsed.graph.edges, g.edges);
  EXPECT_EQ(parsed.assignment.community, c.community);
  EXPECT_EQ(export_json(parsed.graph, parsed.assignment), text);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["edges"][0]["a"], "m1");
  EXPECT_THROW(parse_graph_json("{\"model\": 3}"), Error);
}

TEST(ExportJson, MatchesGoldenFile) {
  const std::vector<MovieMetadata> meta = {{"m1", "One", {}, {"A"}, {"Drama", "Crime"}, 7.0},
                                           {"m3", "Three", {}, {"B"}, {"Western"}, 5.5}};
  const auto g = build_graph(small_similarity(), 1, 0.0, meta);
  const auto text = export_json(g, louvain(g));
  EXPECT_EQ(text, io::read_file(std::filesystem::path(CINESIM_TEST_DATA_DIR) / "graph_golden.json"));
}
