#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "streamkit/errors.hpp"
#include "streamkit/graph.hpp"
#include "streamkit/hashing.hpp"

namespace streamkit {

/// Modified Markov chain (graph, damping, teleport distribution). Row i of
/// the chain is beta * A[i]/outdeg(i) + (1 - beta) * p when i has outgoing
/// weight, and plain p when i is dangling.
struct TransitionModel {
  const Graph* graph;
  double beta;
  Eigen::VectorXd personalization;
};

inline Eigen::VectorXd uniform_personalization(std::uint32_t n) {
  return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
}

inline Eigen::VectorXd basis_personalization(std::uint32_t n, std::uint32_t vertex) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p(vertex) = 1.0;
  return p;
}

inline TransitionModel make_transition(const Graph& g, double beta,
                                       const Eigen::VectorXd& personalization) {
  if (beta < 0 || beta > 1) throw Error("validation", "damping must lie in [0, 1]");
  if (personalization.size() != static_cast<Eigen::Index>(g.n()))
    throw Error("validation", "personalization length must equal the vertex count");
  if ((personalization.array() < 0).any())
    throw Error("validation", "personalization entries must be nonnegative");
  if (std::abs(personalization.sum() - 1.0) > 1e-9)
    throw Error("validation", "personalization must sum to 1");
  return TransitionModel{&g, beta, personalization};
}

inline TransitionModel make_transition(const Graph& g, double beta) {
  if (g.n() == 0) throw Error("validation", "empty graph has no transition model");
  return make_transition(g, beta, uniform_personalization(g.n()));
}

namespace detail {

/// Weighted out-degree per vertex (row sums of the adjacency view).
inline std::vector<double> weighted_out_degrees(const Graph& g) {
  std::vector<double> deg(g.n(), 0.0);
  for (const Edge& e : g.edges()) {
    deg[e.u] += e.weight;
    if (!g.directed() && e.u != e.v) deg[e.v] += e.weight;
  }
  return deg;
}

}  // namespace detail

/// One row of the modified transition matrix; sums to 1.
inline Eigen::VectorXd transition_row(const TransitionModel& model, std::uint32_t vertex) {
  const Graph& g = *model.graph;
  auto deg = detail::weighted_out_degrees(g);
  Eigen::VectorXd row = Eigen::VectorXd::Zero(g.n());
  if (deg[vertex] == 0) return model.personalization;
  for (const Edge& e : g.edges()) {
    if (e.u == vertex) row(e.v) += e.weight;
    if (!g.directed() && e.v == vertex && e.u != e.v) row(e.u) += e.weight;
  }
  row *= model.beta / deg[vertex];
  row += (1.0 - model.beta) * model.personalization;
  return row;
}

/// Nonnegative, L1-normalized score vector with solver metadata.
struct RankVector {
  Eigen::VectorXd scores;
  int iterations = 0;
  bool converged = true;
};

enum class Norm : std::uint8_t { kL1, kLInf };

struct ConvergenceCriterion {
  Norm norm = Norm::kL1;
  double tol = 1e-10;
  int max_iter = 10000;
};

namespace detail {

inline double vector_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Norm norm) {
  switch (norm) {
    case Norm::kL1: return (a - b).lpNorm<1>();
    case Norm::kLInf: return (a - b).lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

}  // namespace detail

/// Direct solve of lambda * (I - beta * A/outdeg) = (1 - beta) * p, with
/// dangling rows of the walk matrix replaced by p beforehand so the chain
/// matches the one the iterative solver walks. Dense; vertex count capped.
inline RankVector pagerank_algebraic(const TransitionModel& model) {
  const Graph& g = *model.graph;
  std::uint32_t n = g.n();
  if (n == 0) throw Error("validation", "empty graph");
  if (n > kDenseMatrixCap) throw Error("validation", "graph too large for the dense solver");
  if (model.beta >= 1.0)
    throw Error("solver",
                "singular system: beta = 1 zeroes the teleport term, leaving (I - P) singular; "
                "use the iterative solver");

  auto deg = detail::weighted_out_degrees(g);
  Eigen::MatrixXd walk = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    walk(e.u, e.v) += e.weight;
    if (!g.directed() && e.u != e.v) walk(e.v, e.u) += e.weight;
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    if (deg[i] > 0)
      walk.row(i) /= deg[i];
    else
      walk.row(i) = model.personalization.transpose();
  }

  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - model.beta * walk.transpose();
  Eigen::VectorXd rhs = (1.0 - model.beta) * model.personalization;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::VectorXd solution = lu.solve(rhs);
  double residual = (system * solution - rhs).lpNorm<1>();
  if (!solution.allFinite() || residual > 1e-6)
    throw Error("solver", "singular system: the chain admits no unique stationary solution");

  RankVector result{solution, 0, true};
  result.scores /= result.scores.lpNorm<1>();
  return result;
}

/// Power iteration pi <- pi * P' from the uniform start, without ever
/// materializing P': dangling mass is accumulated and redistributed through
/// the personalization vector each step.
inline RankVector pagerank_iterative(const TransitionModel& model,
                                     ConvergenceCriterion crit = {}) {
  const Graph& g = *model.graph;
  std::uint32_t n = g.n();
  if (n == 0) throw Error("validation", "empty graph");
  auto deg = detail::weighted_out_degrees(g);
  auto adj = g.out_adjacency();

  Eigen::VectorXd pi = uniform_personalization(n);
  Eigen::VectorXd next(n);
  for (int iter = 1; iter <= crit.max_iter; ++iter) {
    next.setZero();
    double dangling_mass = 0;
    for (std::uint32_t u = 0; u < n; ++u) {
      if (deg[u] == 0) {
        dangling_mass += pi(u);
        continue;
      }
      double scale = model.beta * pi(u) / deg[u];
      for (const auto& [v, w] : adj[u]) next(v) += scale * w;
    }
    double teleport = (1.0 - model.beta) * (1.0 - dangling_mass) + dangling_mass;
    next += teleport * model.personalization;
    double moved = detail::vector_distance(next, pi, crit.norm);
    pi.swap(next);
    if (moved <= crit.tol) {
      pi /= pi.lpNorm<1>();
      return RankVector{pi, iter, true};
    }
  }
  pi /= pi.lpNorm<1>();
  return RankVector{pi, crit.max_iter, false};
}

/// O(1) draws from a fixed discrete distribution (alias method).
class AliasTable {
public:
  explicit AliasTable(const std::vector<double>& weights) {
    std::size_t n = weights.size();
    if (n == 0) throw Error("validation", "alias table needs at least one weight");
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total <= 0) throw Error("validation", "alias table needs positive total weight");
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * static_cast<double>(n) / total;
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i)
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    while (!small.empty() && !large.empty()) {
      std::uint32_t s = small.back(), l = large.back();
      small.pop_back();
      large.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::uint32_t i : large) prob_[i] = 1.0;
    for (std::uint32_t i : small) prob_[i] = 1.0;
  }

  std::uint32_t draw(Rng& rng) const {
    auto slot = static_cast<std::size_t>(rng.next_below(prob_.size()));
    return rng.next_double() < prob_[slot] ? static_cast<std::uint32_t>(slot) : alias_[slot];
  }

private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// Monte Carlo solver: n walkers, one per start vertex, each take one
/// weighted step of the chain per round. Round t scales pi by t/(t+n) and
/// every walker deposits 1/(t+n) where it lands, so the L1 norm stays
/// exactly 1 round by round and pi tracks the walkers' visit ratios as the
/// walks grow longer. Stops on the same norm criterion as the iterative
/// solver. Accumulates in extended precision so the norm invariant
/// survives long runs; `round_norms`, when given, records the L1 norm
/// observed after every round.
inline RankVector pagerank_random_walk(const TransitionModel& model, ConvergenceCriterion crit,
                                       HashSeed seed,
                                       std::vector<double>* round_norms = nullptr) {
  const Graph& g = *model.graph;
  std::uint32_t n = g.n();
  if (n == 0) throw Error("validation", "empty graph");
  auto deg = detail::weighted_out_degrees(g);
  auto adj = g.out_adjacency();

  std::vector<double> teleport_weights(model.personalization.data(),
                                       model.personalization.data() + n);
  AliasTable teleport(teleport_weights);
  std::vector<AliasTable> step;
  std::vector<std::vector<std::uint32_t>> targets(n);
  step.reserve(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    std::vector<double> w;
    w.reserve(adj[u].size());
    for (const auto& [v, weight] : adj[u]) {
      targets[u].push_back(v);
      w.push_back(weight);
    }
    step.emplace_back(w.empty() ? std::vector<double>{1.0} : w);
  }

  Rng rng(seed);
  std::vector<std::uint32_t> walker(n);
  for (std::uint32_t v = 0; v < n; ++v) walker[v] = v;
  std::vector<long double> pi(n, 1.0L / n), prev(n);
  auto finish = [&](int iterations, bool converged) {
    Eigen::VectorXd out(n);
    for (std::uint32_t i = 0; i < n; ++i) out(i) = static_cast<double>(pi[i]);
    return RankVector{out, iterations, converged};
  };
  for (int t = 1; t <= crit.max_iter; ++t) {
    prev = pi;
    long double keep = static_cast<long double>(t) / (t + static_cast<long double>(n));
    long double deposit = 1.0L / (t + static_cast<long double>(n));
    for (auto& x : pi) x *= keep;
    for (std::uint32_t w = 0; w < n; ++w) {
      std::uint32_t at = walker[w];
      std::uint32_t next;
      if (deg[at] == 0) {
        next = teleport.draw(rng);
      } else if (rng.next_double() < model.beta) {
        next = targets[at][step[at].draw(rng)];
      } else {
        next = teleport.draw(rng);
      }
      walker[w] = next;
      pi[next] += deposit;
    }
    long double moved = 0, norm = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      long double d = pi[i] > prev[i] ? pi[i] - prev[i] : prev[i] - pi[i];
      moved = crit.norm == Norm::kL1 ? moved + d : std::max(moved, d);
      norm += pi[i];
    }
    if (round_norms) round_norms->push_back(static_cast<double>(norm));
    if (static_cast<double>(moved) <= crit.tol) return finish(t, true);
  }
  return finish(crit.max_iter, false);
}

/// Personalized rank basis: the stationary vector for every standard-basis
/// teleport distribution, via the iterative solver. Any personalized rank
/// is the p-weighted combination of these by linearity.
inline std::vector<RankVector> personalized_basis(const Graph& g, double beta,
                                                  ConvergenceCriterion crit = {}) {
  if (g.n() > 512) throw Error("validation", "personalized basis capped at 512 vertices");
  std::vector<RankVector> basis;
  basis.reserve(g.n());
  for (std::uint32_t i = 0; i < g.n(); ++i) {
    TransitionModel model{&g, beta, basis_personalization(g.n(), i)};
    basis.push_back(pagerank_iterative(model, crit));
  }
  return basis;
}

/// Vertices sorted by score descending, ties broken by ascending id.
/// Scores are compared at a fixed 1e-9 absolute resolution, so vertices
/// that are tied mathematically stay tied under solver-level noise and the
/// id tie-break decides deterministically across solvers.
inline std::vector<std::uint32_t> rank_order(const Eigen::VectorXd& scores) {
  std::vector<std::uint32_t> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), 0u);
  auto key = [&](std::uint32_t i) { return std::llround(scores(i) * 1e9); };
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (key(a) != key(b)) return key(a) > key(b);
    return a < b;
  });
  return order;
}

inline std::vector<std::uint32_t> rank_order(const RankVector& rank) {
  return rank_order(rank.scores);
}

/// Structural similarity scores; entries in [0, 1], diagonal pinned to 1.
struct SimRankMatrix {
  Eigen::MatrixXd scores;
  int iterations = 0;
  bool converged = true;
  double decay = 0.0;
};

/// SimRank iteration: two distinct vertices score the decayed mean
/// similarity of their in-neighbor pairs; vertices with no in-neighbors
/// score zero against everything else. Starts from the identity and is
/// entrywise nondecreasing.
inline SimRankMatrix simrank(const Graph& g, double decay, int max_iter, double tol) {
  if (decay <= 0 || decay >= 1) throw Error("validation", "decay must lie in (0, 1)");
  std::uint32_t n = g.n();
  std::vector<std::vector<std::uint32_t>> in(n);
  for (const Edge& e : g.edges()) {
    in[e.v].push_back(e.u);
    if (!g.directed() && e.u != e.v) in[e.u].push_back(e.v);
  }

  SimRankMatrix result{Eigen::MatrixXd::Identity(n, n), 0, false, decay};
  Eigen::MatrixXd next = result.scores;
  for (int iter = 1; iter <= max_iter; ++iter) {
    double moved = 0;
    for (std::uint32_t a = 0; a < n; ++a) {
      next(a, a) = 1.0;
      for (std::uint32_t b = a + 1; b < n; ++b) {
        double value = 0;
        if (!in[a].empty() && !in[b].empty()) {
          double sum = 0;
          for (std::uint32_t pa : in[a])
            for (std::uint32_t pb : in[b]) sum += result.scores(pa, pb);
          value = (1.0 - decay) * sum /
                  (static_cast<double>(in[a].size()) * static_cast<double>(in[b].size()));
        }
        moved = std::max(moved, std::abs(value - result.scores(a, b)));
        next(a, b) = value;
        next(b, a) = value;
      }
    }
    result.scores = next;
    result.iterations = iter;
    if (moved <= tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

struct HitsResult {
  Eigen::VectorXd authority;
  Eigen::VectorXd hub;
  int iterations = 0;
  bool converged = true;
};

/// HITS mutual reinforcement: a <- A^T h, h <- A a, each L2-normalized per
/// iteration; stops when both vectors move at most tol in L2. A graph with
/// no edges returns uniform vectors flagged unconverged.
inline HitsResult hits(const Graph& g, double tol = 1e-10, int max_iter = 10000) {
  std::uint32_t n = g.n();
  if (n == 0) throw Error("validation", "empty graph");
  Eigen::MatrixXd a = adjacency(g);
  double uniform = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::VectorXd authority = Eigen::VectorXd::Constant(n, uniform);
  Eigen::VectorXd hub = Eigen::VectorXd::Constant(n, uniform);
  if (g.m() == 0) return HitsResult{authority, hub, 0, false};

  for (int iter = 1; iter <= max_iter; ++iter) {
    Eigen::VectorXd new_authority = a.transpose() * hub;
    double na = new_authority.norm();
    if (na == 0) return HitsResult{authority, hub, iter, false};
    new_authority /= na;
    Eigen::VectorXd new_hub = a * new_authority;
    double nh = new_hub.norm();
    if (nh == 0) return HitsResult{new_authority, hub, iter, false};
    new_hub /= nh;
    double moved = std::max((new_authority - authority).norm(), (new_hub - hub).norm());
    authority.swap(new_authority);
    hub.swap(new_hub);
    if (moved <= tol) return HitsResult{authority, hub, iter, true};
  }
  return HitsResult{authority, hub, max_iter, false};
}

}  // namespace streamkit
