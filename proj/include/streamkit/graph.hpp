#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "streamkit/errors.hpp"

namespace streamkit {

/// Largest vertex count for which dense matrix views are built; larger
/// graphs use the sparse views with the same entries.
inline constexpr std::uint32_t kDenseMatrixCap = 4096;

struct Edge {
  std::uint32_t u;
  std::uint32_t v;
  double weight = 1.0;
};

/// Vertex count plus edge multiset, directed or undirected, 0-based ids.
/// Parallel edges stay distinct in the edge list; matrix views accumulate
/// their weights. Immutable once loaded (edges are only appended during
/// construction), so concurrent reads are safe.
class Graph {
public:
  Graph(std::uint32_t n, bool directed) : n_(n), directed_(directed) {}

  void add_edge(std::uint32_t u, std::uint32_t v, double weight = 1.0) {
    if (u >= n_ || v >= n_) throw Error("validation", "edge endpoint outside vertex range");
    if (weight <= 0) throw Error("validation", "edge weight must be positive");
    edges_.push_back(Edge{u, v, weight});
  }

  std::uint32_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }
  bool directed() const noexcept { return directed_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Out-adjacency (u -> list of (v, w)); undirected graphs list each edge
  /// from both endpoints, self-loops once.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> out_adjacency() const {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n_);
    for (const Edge& e : edges_) {
      adj[e.u].emplace_back(e.v, e.weight);
      if (!directed_ && e.u != e.v) adj[e.v].emplace_back(e.u, e.weight);
    }
    return adj;
  }

private:
  std::uint32_t n_;
  bool directed_;
  std::vector<Edge> edges_;
};

/// Per-vertex edge counts. Undirected edges count toward both endpoints'
/// out- and in-degree; a self-loop counts once. Sum of out-degrees equals m.
struct DegreeVector {
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> in;
};

inline DegreeVector degrees(const Graph& g) {
  DegreeVector d{std::vector<std::uint32_t>(g.n(), 0), std::vector<std::uint32_t>(g.n(), 0)};
  for (const Edge& e : g.edges()) {
    d.out[e.u] += 1;
    d.in[e.v] += 1;
    if (!g.directed() && e.u != e.v) {
      d.out[e.v] += 1;
      d.in[e.u] += 1;
    }
  }
  return d;
}

namespace detail {

inline bool is_blank(std::string_view s) {
  for (char c : s)
    if (c != ' ' && c != '\t' && c != '\r') return false;
  return true;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

inline std::optional<std::uint64_t> parse_u64(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::uint64_t value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    std::uint64_t digit = static_cast<std::uint64_t>(c - '0');
    if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) return std::nullopt;
    value = value * 10 + digit;
  }
  return value;
}

inline std::optional<double> parse_f64(std::string_view s) {
  std::string buf(s);
  std::size_t pos = 0;
  double value;
  try {
    value = std::stod(buf, &pos);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (pos != buf.size()) return std::nullopt;
  return value;
}

/// Header "# n=<N>" on the first line pins the vertex count.
inline std::optional<std::uint64_t> parse_n_header(std::string_view line) {
  if (line.empty() || line[0] != '#') return std::nullopt;
  for (std::string_view field : split_fields(line.substr(1)))
    if (field.substr(0, 2) == "n=") return parse_u64(field.substr(2));
  return std::nullopt;
}

}  // namespace detail

/// Parse the edge-list format: one `u v [w]` per line, whitespace-separated
/// 0-based ids, `#` comment lines skipped, optional `# n=<N>` header on the
/// first line. Vertex count defaults to 1 + max id.
inline Graph load_edge_list(std::string_view text, bool directed) {
  struct Raw {
    std::uint64_t u, v;
    double w;
    std::size_t line;
  };
  std::vector<Raw> raw;
  std::optional<std::uint64_t> n_header;
  std::uint64_t max_id = 0;
  bool any_vertex = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (detail::is_blank(line)) continue;
    auto fields = detail::split_fields(line);
    if (!fields.empty() && fields[0][0] == '#') {
      if (line_no == 1) n_header = detail::parse_n_header(line);
      continue;
    }
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError(line_no, "expected `u v [w]`");
    auto u = detail::parse_u64(fields[0]);
    auto v = detail::parse_u64(fields[1]);
    if (!u || !v) throw ParseError(line_no, "vertex ids must be nonnegative integers");
    double w = 1.0;
    if (fields.size() == 3) {
      auto parsed = detail::parse_f64(fields[2]);
      if (!parsed) throw ParseError(line_no, "malformed edge weight");
      if (*parsed < 0) throw Error("validation", "negative edge weight on line " + std::to_string(line_no));
      if (*parsed == 0) throw Error("validation", "zero edge weight on line " + std::to_string(line_no));
      w = *parsed;
    }
    max_id = std::max({max_id, *u, *v});
    any_vertex = true;
    raw.push_back(Raw{*u, *v, w, line_no});
  }

  std::uint64_t n = n_header ? *n_header : (any_vertex ? max_id + 1 : 0);
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw Error("validation", "vertex count exceeds supported range");
  if (n_header && any_vertex && max_id >= n)
    throw Error("validation", "edge id exceeds declared vertex count");

  Graph g(static_cast<std::uint32_t>(n), directed);
  for (const Raw& r : raw)
    g.add_edge(static_cast<std::uint32_t>(r.u), static_cast<std::uint32_t>(r.v), r.w);
  return g;
}

inline Graph load_edge_list_file(const std::string& path, bool directed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("parse", "cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_edge_list(buf.str(), directed);
}

/// Dense adjacency matrix; parallel edges sum, undirected graphs come out
/// symmetric.
inline Eigen::MatrixXd adjacency(const Graph& g) {
  if (g.n() > kDenseMatrixCap) throw Error("validation", "graph too large for a dense view");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (const Edge& e : g.edges()) {
    a(e.u, e.v) += e.weight;
    if (!g.directed() && e.u != e.v) a(e.v, e.u) += e.weight;
  }
  return a;
}

inline Eigen::SparseMatrix<double, Eigen::RowMajor> adjacency_sparse(const Graph& g) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(g.m() * 2);
  for (const Edge& e : g.edges()) {
    trip.emplace_back(e.u, e.v, e.weight);
    if (!g.directed() && e.u != e.v) trip.emplace_back(e.v, e.u, e.weight);
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(g.n(), g.n());
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

/// L = D - A for undirected graphs, D the diagonal of weighted degrees.
/// Rows sum to zero; self-loops cancel out of L entirely.
inline Eigen::MatrixXd laplacian(const Graph& g) {
  if (g.directed()) throw Error("model", "Laplacian requires an undirected graph");
  Eigen::MatrixXd a = adjacency(g);
  Eigen::MatrixXd l = -a;
  for (std::uint32_t i = 0; i < g.n(); ++i) l(i, i) += a.row(i).sum();
  return l;
}

inline Eigen::SparseMatrix<double, Eigen::RowMajor> laplacian_sparse(const Graph& g) {
  if (g.directed()) throw Error("model", "Laplacian requires an undirected graph");
  auto a = adjacency_sparse(g);
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < a.outerSize(); ++i) {
    double deg = 0;
    for (decltype(a)::InnerIterator it(a, i); it; ++it) {
      deg += it.value();
      trip.emplace_back(i, static_cast<int>(it.col()), -it.value());
    }
    trip.emplace_back(i, i, deg);
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> l(g.n(), g.n());
  l.setFromTriplets(trip.begin(), trip.end());
  return l;
}

/// Random-walk normalized Laplacian: identity minus the walk matrix on
/// vertices with outgoing weight, all-zero rows elsewhere.
inline Eigen::MatrixXd rw_laplacian(const Graph& g) {
  Eigen::MatrixXd a = adjacency(g);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (std::uint32_t i = 0; i < g.n(); ++i) {
    double deg = a.row(i).sum();
    if (deg == 0) continue;
    l.row(i) = -a.row(i) / deg;
    l(i, i) += 1.0;
  }
  return l;
}

}  // namespace streamkit
