#pragma once

// Brute-force oracles used by the suites: exact frequency tables, all-pairs
// shortest paths, union-find connectivity, exhaustive minimum cut, and
// deterministic random instance generators. Everything here recomputes from
// first principles, independent of the sketch implementations.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "streamkit/graph.hpp"
#include "streamkit/graph_stream.hpp"
#include "streamkit/hashing.hpp"

namespace testsupport {

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }
  std::size_t component_count() {
    std::size_t c = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) c += (find(i) == i);
    return c;
  }

private:
  std::vector<std::size_t> parent_;
};

/// Exact signed frequency table of an update stream.
inline std::map<std::uint64_t, std::int64_t> frequency_table(
    const std::vector<std::pair<std::uint64_t, std::int64_t>>& updates) {
  std::map<std::uint64_t, std::int64_t> table;
  for (auto [item, delta] : updates) table[item] += delta;
  std::erase_if(table, [](const auto& kv) { return kv.second == 0; });
  return table;
}

inline double frequency_moment(const std::map<std::uint64_t, std::int64_t>& table, int k) {
  double sum = 0;
  for (const auto& [_, f] : table) {
    double acc = 1;
    for (int i = 0; i < k; ++i) acc *= static_cast<double>(f);
    sum += acc;
  }
  return sum;
}

constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Floyd-Warshall over unit edge lengths (undirected).
inline std::vector<std::vector<std::uint32_t>> all_pairs_distances(const streamkit::Graph& g) {
  std::uint32_t n = g.n();
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, kUnreachable));
  for (std::uint32_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) {
    if (e.u == e.v) continue;
    d[e.u][e.v] = 1;
    d[e.v][e.u] = 1;
  }
  for (std::uint32_t k = 0; k < n; ++k)
    for (std::uint32_t i = 0; i < n; ++i) {
      if (d[i][k] == kUnreachable) continue;
      for (std::uint32_t j = 0; j < n; ++j) {
        if (d[k][j] == kUnreachable) continue;
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  return d;
}

/// Weight of the cut induced by a bipartition bitmask (bit i set = side A).
inline double cut_weight(const streamkit::Graph& g, std::uint64_t side_mask) {
  double total = 0;
  for (const auto& e : g.edges()) {
    bool a = (side_mask >> e.u) & 1;
    bool b = (side_mask >> e.v) & 1;
    if (a != b) total += e.weight;
  }
  return total;
}

/// Exhaustive global minimum cut, n <= 20.
inline double min_cut_exhaustive(const streamkit::Graph& g) {
  std::uint32_t n = g.n();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask)
    best = std::min(best, cut_weight(g, mask));
  return best;
}

/// Erdos-Renyi G(n, p), undirected, simple, deterministic per seed.
inline streamkit::Graph gnp_undirected(std::uint32_t n, double p, std::uint64_t seed) {
  streamkit::Rng rng(streamkit::HashSeed{seed});
  streamkit::Graph g(n, false);
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v)
      if (rng.next_double() < p) g.add_edge(u, v);
  return g;
}

inline streamkit::Graph gnp_directed(std::uint32_t n, double p, std::uint64_t seed) {
  streamkit::Rng rng(streamkit::HashSeed{seed});
  streamkit::Graph g(n, true);
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = 0; v < n; ++v)
      if (u != v && rng.next_double() < p) g.add_edge(u, v);
  return g;
}

/// G(n, p) with every vertex given at least one out-edge. Personalized
/// PageRank is linear in the teleport vector only when no dangling rows
/// get patched by it, so the linearity checks draw from this family.
inline streamkit::Graph gnp_directed_no_dangling(std::uint32_t n, double p, std::uint64_t seed) {
  streamkit::Rng rng(streamkit::HashSeed{seed});
  streamkit::Graph g(n, true);
  for (std::uint32_t u = 0; u < n; ++u) {
    bool any = false;
    for (std::uint32_t v = 0; v < n; ++v)
      if (u != v && rng.next_double() < p) {
        g.add_edge(u, v);
        any = true;
      }
    if (!any) {
      auto v = static_cast<std::uint32_t>(rng.next_below(n - 1));
      g.add_edge(u, v >= u ? v + 1 : v);
    }
  }
  return g;
}

inline streamkit::Graph complete_graph(std::uint32_t n) {
  streamkit::Graph g(n, false);
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

/// Zipf(s) stream over `items` ids, by inverse-CDF on precomputed weights.
inline std::vector<std::uint64_t> zipf_stream(std::size_t items, double s, std::size_t length,
                                              std::uint64_t seed) {
  std::vector<double> cdf(items);
  double total = 0;
  for (std::size_t i = 0; i < items; ++i) {
    total += 1.0 / std::pow(static_cast<double>(i + 1), s);
    cdf[i] = total;
  }
  for (double& c : cdf) c /= total;
  streamkit::Rng rng(streamkit::HashSeed{seed});
  std::vector<std::uint64_t> stream(length);
  for (std::size_t i = 0; i < length; ++i) {
    double u = rng.next_double();
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    stream[i] = static_cast<std::uint64_t>(it - cdf.begin());
  }
  return stream;
}

}  // namespace testsupport
