#include "cinesim/error.hpp"
#include "cinesim/graph.hpp"
#include "cinesim/random.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace cinesim {

namespace {

struct Arc {
  std::size_t to;
  double weight;
};

// Symmetric weighted adjacency; a self-loop of weight w appears once with 2w
// so that degrees stay sum-of-row.
struct Level {
  std::vector<std::vector<Arc>> adj;
  std::vector<double> self;  // A_ii
  std::vector<double> degree;
  double total = 0.0;  // 2m

  std::size_t size() const { return adj.size(); }
};

Level from_graph(const MovieGraph& graph) {
  Level l;
  const std::size_t n = graph.nodes.size();
  l.adj.resize(n);
  l.self.assign(n, 0.0);
  l.degree.assign(n, 0.0);
  for (const auto& e : graph.edges) {
    if (e.a == e.b) {
      l.self[e.a] += 2.0 * e.weight;
    } else {
      l.adj[e.a].push_back({e.b, e.weight});
      l.adj[e.b].push_back({e.a, e.weight});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    l.degree[i] = l.self[i];
    for (const auto& arc : l.adj[i]) l.degree[i] += arc.weight;
    l.total += l.degree[i];
  }
  return l;
}

// One local-moving phase; returns true when any node changed community.
bool local_moves(const Level& l, std::vector<std::size_t>& comm, double resolution, Rng& rng) {
  const std::size_t n = l.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += l.degree[i];
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order.begin(), order.end());

  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  bool any = false;
  for (int pass = 0; pass < 1000; ++pass) {
    bool moved = false;
    for (std::size_t i : order) {
      const std::size_t own = comm[i];
      touched.clear();
      link[own] = 0.0;
      touched.push_back(own);
      for (const auto& arc : l.adj[i]) {
        const std::size_t c = comm[arc.to];
        if (link[c] == 0.0 && std::find(touched.begin(), touched.end(), c) == touched.end()) touched.push_back(c);
        link[c] += arc.weight;
      }
      tot[own] -= l.degree[i];
      const double scale = resolution * l.degree[i] / l.total;
      std::size_t best = own;
      double best_gain = link[own] - scale * tot[own];
      for (std::size_t c : touched) {
        const double gain = link[c] - scale * tot[c];
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += l.degree[i];
      for (std::size_t c : touched) link[c] = 0.0;
      if (best != own) {
        comm[i] = best;
        moved = true;
        any = true;
      }
    }
    if (!moved) break;
  }
  return any;
}

// Dense renumbering in order of first appearance.
std::size_t renumber(std::vector<std::size_t>& comm) {
  std::map<std::size_t, std::size_t> ids;
  for (auto& c : comm) c = ids.emplace(c, ids.size()).first->second;
  return ids.size();
}

Level aggregate(const Level& l, const std::vector<std::size_t>& comm, std::size_t k) {
  Level out;
  out.adj.resize(k);
  out.self.assign(k, 0.0);
  out.degree.assign(k, 0.0);
  std::vector<std::map<std::size_t, double>> w(k);
  for (std::size_t i = 0; i < l.size(); ++i) {
    out.self[comm[i]] += l.self[i];
    for (const auto& arc : l.adj[i]) {
      if (comm[arc.to] == comm[i]) {
        out.self[comm[i]] += arc.weight;  // visited from both ends, so 2w in total
      } else {
        w[comm[i]][comm[arc.to]] += arc.weight;
      }
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (const auto& [to, weight] : w[c]) out.adj[c].push_back({to, weight});
    out.degree[c] = out.self[c];
    for (const auto& arc : out.adj[c]) out.degree[c] += arc.weight;
    out.total += out.degree[c];
  }
  return out;
}

}  // namespace

double modularity(const MovieGraph& graph, std::span<const std::size_t> community, double resolution) {
  if (community.size() != graph.nodes.size()) throw Error(ErrorCode::kDimensionMismatch, "partition does not cover graph");
  const Level l = from_graph(graph);
  if (l.total == 0.0) return 0.0;
  std::map<std::size_t, double> in, tot;
  for (std::size_t i = 0; i < l.size(); ++i) {
    tot[community[i]] += l.degree[i];
    in[community[i]] += l.self[i];
    for (const auto& arc : l.adj[i]) {
      if (community[arc.to] == community[i]) in[community[i]] += arc.weight;
    }
  }
  double q = 0.0;
  for (const auto& [c, t] : tot) q += in[c] / l.total - resolution * (t / l.total) * (t / l.total);
  return q;
}

CommunityAssignment louvain(const MovieGraph& graph, const LouvainOptions& options) {
  const std::size_t n = graph.nodes.size();
  CommunityAssignment out;
  out.community.resize(n);
  std::iota(out.community.begin(), out.community.end(), 0);
  Level level = from_graph(graph);
  if (level.total > 0.0) {
    Rng rng(options.seed);
    std::vector<std::size_t> node_comm = out.community;
    for (;;) {
      std::vector<std::size_t> comm(level.size());
      std::iota(comm.begin(), comm.end(), 0);
      if (!local_moves(level, comm, options.resolution, rng)) break;
      const std::size_t k = renumber(comm);
      for (auto& c : node_comm) c = comm[c];
      out.phase_modularity.push_back(modularity(graph, node_comm, options.resolution));
      if (k == level.size()) break;
      level = aggregate(level, comm, k);
    }
    out.community = node_comm;
  }
  // canonical ids: communities ordered by their smallest member movie id
  std::map<std::size_t, std::string> smallest;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = smallest.emplace(out.community[i], graph.nodes[i].id);
    if (!fresh && graph.nodes[i].id < it->second) it->second = graph.nodes[i].id;
  }
  std::vector<std::pair<std::string, std::size_t>> keyed;
  for (const auto& [c, id] : smallest) keyed.emplace_back(id, c);
  std::sort(keyed.begin(), keyed.end());
  std::map<std::size_t, std::size_t> canon;
  for (std::size_t i = 0; i < keyed.size(); ++i) canon[keyed[i].second] = i;
  for (auto& c : out.community) c = canon[c];
  out.n_communities = keyed.size();
  out.modularity = modularity(graph, out.community, options.resolution);
  return out;
}

}  // namespace cinesim
