#include "cinesim/graph.hpp"

#include "cinesim/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace cinesim {

MovieGraph build_graph(const SimilarityMatrix& sim, std::size_t k, double min_weight,
                       std::span<const MovieMetadata> metadata) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  const std::size_t n = sim.size();
  MovieGraph g;
  g.model = sim.modality;
  std::unordered_map<std::string, const MovieMetadata*> by_id;
  for (const auto& m : metadata) by_id.emplace(m.movie_id, &m);
  for (const auto& id : sim.doc_ids) {
    GraphNode node{id, id, 0.0, {}, {}};
    if (auto it = by_id.find(id); it != by_id.end()) {
      if (!it->second->title.empty()) node.title = it->second->title;
      node.score = it->second->rating;
      node.genres = dedup_labels(it->second->genres);
      node.directors = dedup_labels(it->second->directors);
    }
    g.nodes.push_back(std::move(node));
  }

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> cands;
  for (std::size_t a = 0; a < n; ++a) {
    cands.clear();
    for (std::size_t c = 0; c < n; ++c) {
      if (c != a) cands.push_back(c);
    }
    const auto ai = static_cast<Eigen::Index>(a);
    const std::size_t take = std::min(k, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(take), cands.end(),
                      [&](std::size_t x, std::size_t y) {
                        const double sx = sim.values(ai, static_cast<Eigen::Index>(x));
                        const double sy = sim.values(ai, static_cast<Eigen::Index>(y));
                        if (sx != sy) return sx > sy;
                        return sim.doc_ids[x] < sim.doc_ids[y];
                      });
    for (std::size_t i = 0; i < take; ++i) {
      const double w = sim.values(ai, static_cast<Eigen::Index>(cands[i]));
      if (w > 0.0 && w >= min_weight) pairs.emplace(std::min(a, cands[i]), std::max(a, cands[i]));
    }
  }
  for (const auto& [a, b] : pairs) {
    g.edges.push_back({a, b, sim.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))});
  }
  return g;
}

std::string export_json(const MovieGraph& graph, const CommunityAssignment& assignment) {
  if (assignment.community.size() != graph.nodes.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "assignment does not cover the graph");
  }
  nlohmann::ordered_json j;
  j["model"] = graph.model;
  j["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const auto& n = graph.nodes[i];
    nlohmann::ordered_json node;
    node["id"] = n.id;
    node["title"] = n.title;
    node["score"] = n.score;
    node["genres"] = n.genres;
    node["directors"] = n.directors;
    node["community"] = assignment.community[i];
    j["nodes"].push_back(std::move(node));
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : graph.edges) {
    nlohmann::ordered_json edge;
    edge["a"] = graph.nodes[e.a].id;
    edge["b"] = graph.nodes[e.b].id;
    edge["weight"] = e.weight;
    j["edges"].push_back(std::move(edge));
  }
  return j.dump(1) + "\n";
}

ParsedGraph parse_graph_json(std::string_view text) {
  ParsedGraph out;
  try {
    const auto j = nlohmann::json::parse(text);
    out.graph.model = j.at("model").get<std::string>();
    std::unordered_map<std::string, std::size_t> index;
    std::size_t max_community = 0;
    for (const auto& n : j.at("nodes")) {
      GraphNode node;
      node.id = n.at("id").get<std::string>();
      node.title = n.at("title").get<std::string>();
      node.score = n.at("score").get<double>();
      node.genres = n.at("genres").get<std::vector<std::string>>();
      node.directors = n.at("directors").get<std::vector<std::string>>();
      const auto c = n.at("community").get<std::size_t>();
      max_community = std::max(max_community, c);
      out.assignment.community.push_back(c);
      index.emplace(node.id, out.graph.nodes.size());
      out.graph.nodes.push_back(std::move(node));
    }
    out.assignment.n_communities = out.graph.nodes.empty() ? 0 : max_community + 1;
    for (const auto& e : j.at("edges")) {
      const auto a = index.at(e.at("a").get<std::string>());
      const auto b = index.at(e.at("b").get<std::string>());
      out.graph.edges.push_back({a, b, e.at("weight").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("graph JSON: ") + e.what());
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::kParse, "graph JSON: edge references an unknown node");
  }
  return out;
}

}  // namespace cinesim
