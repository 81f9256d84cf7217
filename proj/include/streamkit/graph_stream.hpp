#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "streamkit/counters.hpp"
#include "streamkit/errors.hpp"
#include "streamkit/freq_sketches.hpp"
#include "streamkit/graph.hpp"
#include "streamkit/hashing.hpp"
#include "streamkit/samplers.hpp"

namespace streamkit {

/// One turnstile edge event; delta +1 inserts, -1 deletes.
struct EdgeEvent {
  std::uint32_t u;
  std::uint32_t v;
  std::int32_t delta = 1;
};

/// Streaming alpha-spanner over an insert-only stream of undirected edges:
/// an edge is retained exactly when the distance across the edges retained
/// so far exceeds alpha. Distance queries run a breadth-first search capped
/// at depth floor(alpha), which is all the retention test needs.
class Spanner {
public:
  Spanner(std::uint32_t n, double alpha) : n_(n), alpha_(alpha), adj_(n) {
    if (alpha < 1) throw Error("validation", "stretch must be at least 1");
  }

  /// Returns true when the edge was retained.
  bool offer(std::uint32_t u, std::uint32_t v) {
    if (u >= n_ || v >= n_) throw Error("validation", "edge endpoint outside vertex range");
    if (!distance_exceeds_alpha(u, v)) return false;
    retained_.push_back(Edge{u, v, 1.0});
    if (u != v) {
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    return true;
  }

  std::uint32_t n() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  const std::vector<Edge>& retained() const noexcept { return retained_; }

  Graph result() const {
    Graph g(n_, /*directed=*/false);
    for (const Edge& e : retained_) g.add_edge(e.u, e.v, e.weight);
    return g;
  }

private:
  /// True iff d_H(u, v) > alpha (unreachable counts as exceeding).
  bool distance_exceeds_alpha(std::uint32_t u, std::uint32_t v) const {
    if (u == v) return false;
    auto cap = static_cast<std::uint32_t>(alpha_);
    std::vector<std::uint32_t> dist(n_, std::numeric_limits<std::uint32_t>::max());
    std::deque<std::uint32_t> queue{u};
    dist[u] = 0;
    while (!queue.empty()) {
      std::uint32_t x = queue.front();
      queue.pop_front();
      if (dist[x] >= cap) continue;
      for (std::uint32_t y : adj_[x]) {
        if (dist[y] != std::numeric_limits<std::uint32_t>::max()) continue;
        if (y == v) return false;  // d_H(u,v) = dist[x]+1 <= cap <= alpha
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
    return true;
  }

  std::uint32_t n_;
  double alpha_;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<Edge> retained_;
};

/// Global minimum cut (Stoer-Wagner) on an undirected weighted graph.
/// Quadratic per phase, cubic overall; the desk-scale oracle the sparsifier
/// falls back to when the caller does not supply the cut value.
inline double min_cut_stoer_wagner(const Graph& g) {
  if (g.directed()) throw Error("model", "minimum cut oracle requires an undirected graph");
  std::uint32_t n = g.n();
  if (n < 2) throw Error("validation", "minimum cut needs at least two vertices");
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) continue;  // self-loops never cross a cut
    w[e.u][e.v] += e.weight;
    w[e.v][e.u] += e.weight;
  }
  std::vector<std::uint32_t> vertices(n);
  for (std::uint32_t i = 0; i < n; ++i) vertices[i] = i;
  double best = std::numeric_limits<double>::infinity();
  while (vertices.size() > 1) {
    std::size_t k = vertices.size();
    std::vector<double> weight_to_set(k, 0.0);
    std::vector<bool> added(k, false);
    std::size_t prev = 0, last = 0;
    for (std::size_t round = 0; round < k; ++round) {
      std::size_t pick = k;
      for (std::size_t i = 0; i < k; ++i)
        if (!added[i] && (pick == k || weight_to_set[i] > weight_to_set[pick])) pick = i;
      added[pick] = true;
      prev = last;
      last = pick;
      for (std::size_t i = 0; i < k; ++i)
        if (!added[i]) weight_to_set[i] += w[vertices[pick]][vertices[i]];
    }
    best = std::min(best, weight_to_set[last]);
    // contract last into prev
    std::uint32_t a = vertices[prev], b = vertices[last];
    for (std::uint32_t i = 0; i < n; ++i) {
      w[a][i] += w[b][i];
      w[i][a] += w[i][b];
    }
    vertices.erase(vertices.begin() + static_cast<std::ptrdiff_t>(last));
  }
  return best;
}

/// Keep probability min(6 * ln(n) / (min_cut * eps^2), 1).
inline double sparsifier_keep_probability(std::uint32_t n, double eps, double min_cut) {
  if (eps <= 0 || eps >= 1) throw Error("validation", "eps must be in (0, 1)");
  if (min_cut < 1)
    throw Error("validation", "minimum cut must be at least 1 (is the graph connected?)");
  double p = 6.0 * std::log(static_cast<double>(n)) / (min_cut * eps * eps);
  return std::min(p, 1.0);
}

/// Cut sparsifier: every stream occurrence of an edge is kept independently
/// with probability p and reweighted by 1/p, so every cut value is unbiased
/// and stays within (1 +- eps) with the usual concentration. When `min_cut`
/// is absent it is computed by the Stoer-Wagner oracle.
inline Graph sparsify(const Graph& g, double eps, std::optional<double> min_cut, HashSeed seed) {
  if (g.directed()) throw Error("model", "sparsifier requires an undirected graph");
  double lambda = min_cut ? *min_cut : min_cut_stoer_wagner(g);
  double p = sparsifier_keep_probability(g.n(), eps, lambda);
  Graph h(g.n(), /*directed=*/false);
  if (p >= 1.0) {
    for (const Edge& e : g.edges()) h.add_edge(e.u, e.v, e.weight);
    return h;
  }
  Rng rng(seed);
  for (const Edge& e : g.edges())
    if (rng.next_double() < p) h.add_edge(e.u, e.v, e.weight / p);
  return h;
}

/// Component count plus a vertex labeling (labels are representative ids).
struct ConnectivityResult {
  std::uint32_t component_count;
  std::vector<std::uint32_t> labels;
};

namespace detail {

class UnionFind {
public:
  explicit UnionFind(std::uint32_t n) : parent_(n) {
    for (std::uint32_t i = 0; i < n; ++i) parent_[i] = i;
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace detail

/// Connected components of a turnstile edge stream via hierarchical L0
/// samplers: ceil(log2 n) merge rounds, each backed by its own per-vertex
/// sampler set over the signed vertex-edge encoding (edge (u,v), u < v, is
/// +1 at index u*n+v for u and -1 for v, so summing samplers over a vertex
/// group cancels internal edges and leaves only the boundary). Each round
/// draws one boundary edge per supervertex and merges. Sampler failures can
/// only skip a merge, so the count never drops below the true value.
inline ConnectivityResult cc_sketch(std::uint32_t n, const std::vector<EdgeEvent>& stream,
                                    HashSeed seed) {
  ConnectivityResult result{n, std::vector<std::uint32_t>(n)};
  for (std::uint32_t i = 0; i < n; ++i) result.labels[i] = i;
  if (n == 0) {
    result.component_count = 0;
    return result;
  }
  std::uint32_t rounds = 1;
  while ((std::uint32_t{1} << rounds) < n) ++rounds;
  if (n == 1) rounds = 0;

  std::uint64_t domain = static_cast<std::uint64_t>(n) * n;
  // round -> vertex -> sampler, all samplers of a round sharing one seed so
  // they add.
  std::vector<std::vector<L0Sampler>> samplers;
  samplers.reserve(rounds);
  for (std::uint32_t r = 0; r < rounds; ++r) {
    std::vector<L0Sampler> per_vertex;
    per_vertex.reserve(n);
    for (std::uint32_t v = 0; v < n; ++v)
      per_vertex.emplace_back(domain, mix_seed(seed, r));
    samplers.push_back(std::move(per_vertex));
  }

  for (const EdgeEvent& e : stream) {
    if (e.u >= n || e.v >= n) throw Error("validation", "edge endpoint outside vertex range");
    if (e.u == e.v) continue;  // self-loops do not affect connectivity
    std::uint32_t lo = std::min(e.u, e.v), hi = std::max(e.u, e.v);
    std::uint64_t index = static_cast<std::uint64_t>(lo) * n + hi;
    for (std::uint32_t r = 0; r < rounds; ++r) {
      samplers[r][lo].update(index, e.delta);
      samplers[r][hi].update(index, -e.delta);
    }
  }

  detail::UnionFind uf(n);
  for (std::uint32_t r = 0; r < rounds; ++r) {
    // group members by representative
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> groups;
    for (std::uint32_t v = 0; v < n; ++v) groups[uf.find(v)].push_back(v);
    if (groups.size() <= 1) break;
    // iterate representatives in ascending order for determinism
    std::vector<std::uint32_t> reps;
    reps.reserve(groups.size());
    for (const auto& [rep, _] : groups) reps.push_back(rep);
    std::sort(reps.begin(), reps.end());
    for (std::uint32_t rep : reps) {
      const auto& members = groups[rep];
      L0Sampler combined = samplers[r][members[0]];
      for (std::size_t i = 1; i < members.size(); ++i) combined.merge(samplers[r][members[i]]);
      auto drawn = combined.sample();
      if (!drawn) continue;
      auto lo = static_cast<std::uint32_t>(drawn->item / n);
      auto hi = static_cast<std::uint32_t>(drawn->item % n);
      if (lo >= n || hi >= n || lo >= hi) continue;  // malformed recovery, treat as failure
      uf.unite(lo, hi);
    }
  }

  std::uint32_t count = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    result.labels[v] = uf.find(v);
    count += (result.labels[v] == v);
  }
  result.component_count = count;
  return result;
}

namespace detail {

/// Sorted triple packed into one 64-bit key, 21 bits per vertex.
inline std::uint64_t pack_triple(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 42) | (static_cast<std::uint64_t>(b) << 21) |
         static_cast<std::uint64_t>(c);
}

}  // namespace detail

/// Triangle count from the frequency moments of the triple-token substream:
/// each edge (u,v) emits a token {u,v,w} for every third vertex w, and
/// T3 = F0 - 1.5*F1 + 0.5*F2 of that token stream. Exact mode evaluates the
/// moments from a full token table (a deterministic identity); otherwise F0
/// comes from a HyperLogLog, F1 from the running length, and F2 from an AMS
/// sketch, with no error guarantee attached.
inline double count_triangles_moments(const Graph& g, bool exact, HashSeed seed) {
  if (g.directed()) throw Error("model", "triangle counting requires an undirected graph");
  std::uint32_t n = g.n();
  if (n < 3) return 0.0;
  if (n >= (std::uint32_t{1} << 21)) throw Error("validation", "vertex ids exceed 21 bits");

  if (exact) {
    std::unordered_map<std::uint64_t, std::uint32_t> tokens;
    for (const Edge& e : g.edges()) {
      if (e.u == e.v) continue;
      for (std::uint32_t w = 0; w < n; ++w) {
        if (w == e.u || w == e.v) continue;
        ++tokens[detail::pack_triple(e.u, e.v, w)];
      }
    }
    double f0 = static_cast<double>(tokens.size());
    double f1 = 0, f2 = 0;
    for (const auto& [_, c] : tokens) {
      f1 += c;
      f2 += static_cast<double>(c) * c;
    }
    return f0 - 1.5 * f1 + 0.5 * f2;
  }

  HllSketch f0_sketch(12, mix_seed(seed, 0));
  CountSketch f2_sketch = CountSketch::from_error(0.05, 0.05, mix_seed(seed, 1));
  double f1 = 0;
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) continue;
    for (std::uint32_t w = 0; w < n; ++w) {
      if (w == e.u || w == e.v) continue;
      std::uint64_t token = detail::pack_triple(e.u, e.v, w);
      f0_sketch.update(token);
      f2_sketch.update(token, 1);
      f1 += 1;
    }
  }
  return f0_sketch.estimate() - 1.5 * f1 + 0.5 * f2_sketch.second_moment();
}

/// Exact triangle count by neighbor-set intersection (bitset per vertex).
inline std::uint64_t count_triangles_bruteforce(const Graph& g) {
  if (g.directed()) throw Error("model", "triangle counting requires an undirected graph");
  std::uint32_t n = g.n();
  if (n > 512) throw Error("validation", "brute-force triangle count capped at n = 512");
  std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(n) * words, 0);
  auto set_bit = [&](std::uint32_t i, std::uint32_t j) {
    adj[static_cast<std::size_t>(i) * words + j / 64] |= std::uint64_t{1} << (j % 64);
  };
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) continue;
    set_bit(e.u, e.v);
    set_bit(e.v, e.u);
  }
  auto get_bit = [&](std::uint32_t i, std::uint32_t j) {
    return (adj[static_cast<std::size_t>(i) * words + j / 64] >> (j % 64)) & 1;
  };
  std::uint64_t triangles = 0;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) {
      if (!get_bit(u, v)) continue;
      for (std::uint32_t w = v + 1; w < n; ++w)
        if (get_bit(u, w) && get_bit(v, w)) ++triangles;
    }
  return triangles;
}

/// Mean over vertices of closed wedges over possible wedges; vertices of
/// degree < 2 contribute zero.
inline double clustering_coefficient(const Graph& g) {
  if (g.directed()) throw Error("model", "clustering coefficient requires an undirected graph");
  std::uint32_t n = g.n();
  if (n == 0) return 0.0;
  std::vector<std::vector<std::uint32_t>> adj(n);
  {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(g.m() * 2);
    for (const Edge& e : g.edges()) {
      if (e.u == e.v) continue;
      std::uint64_t key = (static_cast<std::uint64_t>(std::min(e.u, e.v)) << 32) |
                          std::max(e.u, e.v);
      if (!seen.insert(key).second) continue;
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
  }
  double total = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    std::size_t deg = adj[v].size();
    if (deg < 2) continue;
    std::uint64_t closed = 0;
    for (std::size_t i = 0; i < deg; ++i)
      for (std::size_t j = i + 1; j < deg; ++j) {
        std::uint32_t a = adj[v][i], b = adj[v][j];
        if (std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end()) ++closed;
      }
    double wedges = static_cast<double>(deg) * static_cast<double>(deg - 1) / 2.0;
    total += static_cast<double>(closed) / wedges;
  }
  return total / static_cast<double>(n);
}

}  // namespace streamkit
