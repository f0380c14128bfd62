#pragma once

#include "cinesim/metadata.hpp"
#include "cinesim/similarity.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cinesim {

struct GraphNode {
  std::string id;
  std::string title;
  double score = 0.0;
  std::vector<std::string> genres;
  std::vector<std::string> directors;
};

/// Undirected edge between node indices, a < b.
struct GraphEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct MovieGraph {
  std::string model;
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;  // sorted by (a, b)
};

/// Union of every node's top-k neighbours (ties by movie id), keeping edges
/// with weight > 0 and >= min_weight. Node attributes come from `metadata`
/// when a record with the same movie id exists.
MovieGraph build_graph(const SimilarityMatrix& sim, std::size_t k = 3, double min_weight = 0.0,
                       std::span<const MovieMetadata> metadata = {});

struct CommunityAssignment {
  std::vector<std::size_t> community;  // per node, dense from 0
  std::size_t n_communities = 0;
  double modularity = 0.0;
  std::vector<double> phase_modularity;  // after each local-moving phase
};

struct LouvainOptions {
  double resolution = 1.0;
  std::uint64_t seed = 42;
};

/// Weighted modularity of a partition; 0 for a graph without edges.
double modularity(const MovieGraph& graph, std::span<const std::size_t> community, double resolution = 1.0);

/// Two-phase Louvain. Nodes are visited in a seeded random order; community
/// ids are renumbered by the smallest member movie id. A graph without edges
/// yields singletons.
CommunityAssignment louvain(const MovieGraph& graph, const LouvainOptions& options = {});

/// {model, nodes:[{id,title,score,genres,directors,community}], edges:[{a,b,weight}]}
std::string export_json(const MovieGraph& graph, const CommunityAssignment& assignment);

struct ParsedGraph {
  MovieGraph graph;
  CommunityAssignment assignment;  // community ids only
};

ParsedGraph parse_graph_json(std::string_view text);

}  // namespace cinesim
