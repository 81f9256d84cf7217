#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "streamkit/graph_stream.hpp"
#include "support/oracles.hpp"
#include "support/stats.hpp"

using namespace streamkit;

// ------------------------------------------------------------- spanner

TEST_CASE("the first edge offered is always retained", "[stream][spanner]") {
  Spanner s(8, 3.0);
  CHECK(s.offer(2, 5));
  CHECK(s.retained().size() == 1);
}

TEST_CASE("alpha = 1 keeps every non-duplicate edge", "[stream][spanner]") {
  Spanner s(3, 1.0);
  CHECK(s.offer(0, 1));
  CHECK(s.offer(1, 2));
  CHECK(s.offer(0, 2));  // d_H = 2 > 1, so the closing edge is kept too
  CHECK_FALSE(s.offer(0, 1));  // duplicate: d_H = 1, not > 1
  CHECK(s.retained().size() == 3);
}

TEST_CASE("spanner is a subgraph and never shortens distances", "[stream][spanner]") {
  Graph g = testsupport::gnp_undirected(30, 0.25, 7);
  Spanner s(30, 3.0);
  std::set<std::pair<std::uint32_t, std::uint32_t>> offered;
  for (const Edge& e : g.edges()) {
    s.offer(e.u, e.v);
    offered.emplace(std::min(e.u, e.v), std::max(e.u, e.v));
  }
  for (const Edge& e : s.retained())
    CHECK(offered.count({std::min(e.u, e.v), std::max(e.u, e.v)}) == 1);

  auto dg = testsupport::all_pairs_distances(g);
  auto dh = testsupport::all_pairs_distances(s.result());
  for (std::uint32_t i = 0; i < 30; ++i)
    for (std::uint32_t j = 0; j < 30; ++j) {
      if (dg[i][j] == testsupport::kUnreachable) continue;
      REQUIRE(dh[i][j] != testsupport::kUnreachable);
      CHECK(dh[i][j] >= dg[i][j]);
    }
}

TEST_CASE("alpha = 3 stretch holds on random graphs via Floyd-Warshall", "[stream][spanner]") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    Graph g = testsupport::gnp_undirected(40, 0.3, seed + 100);
    Spanner s(40, 3.0);
    for (const Edge& e : g.edges()) s.offer(e.u, e.v);
    auto dg = testsupport::all_pairs_distances(g);
    auto dh = testsupport::all_pairs_distances(s.result());
    for (std::uint32_t i = 0; i < 40; ++i)
      for (std::uint32_t j = 0; j < 40; ++j) {
        if (dg[i][j] == testsupport::kUnreachable) continue;
        REQUIRE(dh[i][j] != testsupport::kUnreachable);
        CHECK(dh[i][j] <= 3 * dg[i][j]);
      }
  }
}

// ---------------------------------------------------------- sparsifier

TEST_CASE("keep probability clamps to one on easy instances", "[stream][sparsifier]") {
  // K16 at eps = 0.5 with its true minimum cut of 15 already clamps
  CHECK(sparsifier_keep_probability(16, 0.5, 15.0) == 1.0);
}

TEST_CASE("clamped probability returns the input graph exactly", "[stream][sparsifier]") {
  Graph g = testsupport::complete_graph(16);
  Graph h = sparsify(g, 0.5, std::nullopt, HashSeed{1});
  REQUIRE(h.m() == g.m());
  for (std::size_t i = 0; i < g.m(); ++i) {
    CHECK(h.edges()[i].u == g.edges()[i].u);
    CHECK(h.edges()[i].v == g.edges()[i].v);
    CHECK(h.edges()[i].weight == g.edges()[i].weight);
  }
}

TEST_CASE("invalid eps is rejected", "[stream][sparsifier]") {
  Graph g = testsupport::complete_graph(8);
  CHECK_THROWS_AS(sparsify(g, 0.0, std::nullopt, HashSeed{0}), Error);
  CHECK_THROWS_AS(sparsify(g, 1.0, std::nullopt, HashSeed{0}), Error);
}

TEST_CASE("kept edge count follows the binomial mean", "[stream][sparsifier]") {
  // force p < 1 through the caller-supplied cut parameter
  Graph g = testsupport::complete_graph(16);
  const double lambda = 600.0;
  double p = sparsifier_keep_probability(16, 0.5, lambda);
  REQUIRE(p < 1.0);
  const int seeds = 1000;
  double total = 0;
  for (int s = 0; s < seeds; ++s)
    total += static_cast<double>(sparsify(g, 0.5, lambda, HashSeed{static_cast<std::uint64_t>(s)}).m());
  double mean = total / seeds;
  double expected = p * static_cast<double>(g.m());
  double sigma = std::sqrt(static_cast<double>(g.m()) * p * (1 - p) / seeds);
  INFO("mean kept = " << mean << ", expected = " << expected << " +- " << 3 * sigma);
  CHECK(std::abs(mean - expected) <= 3 * sigma);
}

TEST_CASE("reweighted cuts are unbiased", "[stream][sparsifier][slow]") {
  Graph g = testsupport::complete_graph(16);
  const double lambda = 600.0;  // pushes p below 1 so sampling actually happens
  const std::uint64_t cut_mask = 0b1010110010110101;  // a fixed bipartition
  double truth = testsupport::cut_weight(g, cut_mask);
  const int seeds = 1000;
  std::vector<double> samples(seeds);
  for (int s = 0; s < seeds; ++s)
    samples[static_cast<std::size_t>(s)] = testsupport::cut_weight(
        sparsify(g, 0.5, lambda, HashSeed{static_cast<std::uint64_t>(s) + 999}), cut_mask);
  double mean = testsupport::mean(samples);
  double var = 0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= (seeds - 1);
  double sigma_mean = std::sqrt(var / seeds);
  INFO("mean = " << mean << ", truth = " << truth << ", sigma = " << sigma_mean);
  CHECK(std::abs(mean - truth) <= 3 * sigma_mean + 1e-9);
}

TEST_CASE("cuts concentrate within the relaxed band at eps = 0.5", "[stream][sparsifier][slow]") {
  // K16 with a supplied cut value large enough to sample: 50 random
  // bipartitions x 20 seeds, reweighted cut within (1 +- 0.75) of the
  // truth in at least 90% of pairs.
  Graph g = testsupport::complete_graph(16);
  const double lambda = 240.0;
  REQUIRE(sparsifier_keep_probability(16, 0.5, lambda) < 1.0);
  Rng rng(HashSeed{31337});
  int ok = 0, total = 0;
  for (int c = 0; c < 50; ++c) {
    std::uint64_t mask = 1 + rng.next_below((1 << 16) - 2);
    double truth = testsupport::cut_weight(g, mask);
    for (int s = 0; s < 20; ++s) {
      double sampled = testsupport::cut_weight(
          sparsify(g, 0.5, lambda, HashSeed{static_cast<std::uint64_t>(c * 100 + s)}), mask);
      ++total;
      ok += (sampled >= 0.25 * truth && sampled <= 1.75 * truth);
    }
  }
  INFO(ok << "/" << total << " cuts inside (1 +- 0.75)");
  CHECK(static_cast<double>(ok) / total >= 0.90);
}

TEST_CASE("Stoer-Wagner matches exhaustive minimum cut", "[stream][mincut]") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Graph g = testsupport::gnp_undirected(9, 0.45, seed + 60);
    if (g.m() == 0) continue;
    CHECK(min_cut_stoer_wagner(g) == Catch::Approx(testsupport::min_cut_exhaustive(g)));
  }
  CHECK(min_cut_stoer_wagner(testsupport::complete_graph(16)) == Catch::Approx(15.0));
}

// ------------------------------------------------------------------ cc

TEST_CASE("no edges means every vertex is its own component", "[stream][cc]") {
  auto result = cc_sketch(5, {}, HashSeed{1});
  CHECK(result.component_count == 5);
}

TEST_CASE("a path is one component", "[stream][cc]") {
  std::vector<EdgeEvent> stream{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}};
  auto result = cc_sketch(4, stream, HashSeed{2});
  CHECK(result.component_count == 1);
}

TEST_CASE("cycle minus one edge stays connected, minus two splits", "[stream][cc]") {
  std::vector<EdgeEvent> insert_all;
  for (std::uint32_t i = 0; i < 6; ++i)
    insert_all.push_back({i, (i + 1) % 6, 1});

  auto one_gone = insert_all;
  one_gone.push_back({0, 1, -1});
  auto r1 = cc_sketch(6, one_gone, HashSeed{3});
  CHECK(r1.component_count == 1);

  auto two_gone = one_gone;
  two_gone.push_back({3, 4, -1});
  auto r2 = cc_sketch(6, two_gone, HashSeed{4});
  CHECK(r2.component_count == 2);
}

TEST_CASE("sketch components agree with union-find on random streams", "[stream][cc][slow]") {
  int agree = 0;
  const int streams = 200;
  for (int t = 0; t < streams; ++t) {
    Rng rng(HashSeed{static_cast<std::uint64_t>(t) + 7000});
    std::uint32_t n = 8 + static_cast<std::uint32_t>(rng.next_below(93));
    std::vector<EdgeEvent> stream;
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> net;
    int inserts = static_cast<int>(rng.next_below(3 * n)) + 2;
    for (int i = 0; i < inserts; ++i) {
      std::uint32_t u = static_cast<std::uint32_t>(rng.next_below(n));
      std::uint32_t v = static_cast<std::uint32_t>(rng.next_below(n));
      if (u == v) continue;
      auto key = std::minmax(u, v);
      // keep multiplicities in {0, 1} so deletions are meaningful
      if (net[{key.first, key.second}] == 0) {
        stream.push_back({u, v, 1});
        net[{key.first, key.second}] = 1;
      } else if (rng.next_below(3) == 0) {
        stream.push_back({u, v, -1});
        net[{key.first, key.second}] = 0;
      }
    }

    testsupport::UnionFind uf(n);
    for (const auto& [edge, count] : net)
      if (count > 0) uf.unite(edge.first, edge.second);
    auto truth = static_cast<std::uint32_t>(uf.component_count());

    auto result = cc_sketch(n, stream, HashSeed{static_cast<std::uint64_t>(t)});
    agree += (result.component_count == truth);
    // failure mode is one-sided: merges only ever follow real edges
    CHECK(result.component_count >= truth);
    CHECK(result.component_count >= 1);

    // every merged pair must be connected in the net graph: check labels
    // against the union-find partition
    for (std::uint32_t v = 0; v < n; ++v)
      for (std::uint32_t w = v + 1; w < n; ++w)
        if (result.labels[v] == result.labels[w]) CHECK(uf.find(v) == uf.find(w));
  }
  INFO(agree << "/" << streams << " streams matched exactly");
  CHECK(agree >= 180);
}

// ------------------------------------------------------------ triangles

TEST_CASE("exact moment route counts K3 and K4", "[stream][triangles]") {
  Graph k3 = load_edge_list("0 1\n1 2\n0 2\n", false);
  CHECK(count_triangles_moments(k3, true, HashSeed{0}) == 1.0);
  Graph k4 = load_edge_list("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n", false);
  CHECK(count_triangles_moments(k4, true, HashSeed{0}) == 4.0);
  CHECK(count_triangles_bruteforce(k4) == 4);
}

TEST_CASE("stars and long cycles are triangle-free", "[stream][triangles]") {
  Graph star = load_edge_list("0 1\n0 2\n0 3\n0 4\n0 5\n", false);
  CHECK(count_triangles_moments(star, true, HashSeed{0}) == 0.0);
  CHECK(count_triangles_bruteforce(star) == 0);
  Graph c5 = load_edge_list("0 1\n1 2\n2 3\n3 4\n4 0\n", false);
  CHECK(count_triangles_bruteforce(c5) == 0);
}

TEST_CASE("graphs small enough have an exact moment identity", "[stream][triangles]") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Graph g = testsupport::gnp_undirected(8, 0.45, seed + 500);
    double via_moments = count_triangles_moments(g, true, HashSeed{seed});
    auto brute = static_cast<double>(count_triangles_bruteforce(g));
    CHECK(via_moments == brute);
  }
}

TEST_CASE("brute force agrees with trace(A^3)/6", "[stream][triangles]") {
  Graph g = testsupport::gnp_undirected(20, 0.4, 321);
  Eigen::MatrixXd a = adjacency(g);
  double trace = (a * a * a).trace();
  CHECK(static_cast<double>(count_triangles_bruteforce(g)) == Catch::Approx(trace / 6.0));
}

TEST_CASE("fewer than three vertices yields zero", "[stream][triangles]") {
  Graph g = load_edge_list("0 1\n", false);
  CHECK(count_triangles_moments(g, true, HashSeed{0}) == 0.0);
}

TEST_CASE("estimated moment route lands near the truth on a dense graph",
          "[stream][triangles]") {
  // report-only contract: no error guarantee, but on K12 the estimate
  // should be in the right ballpark
  Graph g = testsupport::complete_graph(12);
  double truth = 220.0;  // C(12,3)
  double est = count_triangles_moments(g, false, HashSeed{5});
  CHECK(est >= 0.25 * truth);
  CHECK(est <= 4.0 * truth);
}

// ----------------------------------------------------------- clustering

TEST_CASE("clustering coefficient pinned values", "[stream][clustering]") {
  Graph k3 = load_edge_list("0 1\n1 2\n0 2\n", false);
  CHECK(clustering_coefficient(k3) == 1.0);
  Graph star = load_edge_list("0 1\n0 2\n0 3\n0 4\n0 5\n", false);
  CHECK(clustering_coefficient(star) == 0.0);
  Graph c4 = load_edge_list("0 1\n1 2\n2 3\n3 0\n", false);
  CHECK(clustering_coefficient(c4) == 0.0);
}

TEST_CASE("clustering coefficient against an independent wedge count", "[stream][clustering]") {
  Graph g = testsupport::gnp_undirected(14, 0.4, 777);
  Eigen::MatrixXd a = adjacency(g);
  double expected = 0;
  for (int v = 0; v < 14; ++v) {
    double deg = a.row(v).sum();
    if (deg < 2) continue;
    double closed = 0;
    for (int i = 0; i < 14; ++i)
      for (int j = i + 1; j < 14; ++j)
        if (a(v, i) != 0 && a(v, j) != 0 && a(i, j) != 0) closed += 1;
    expected += closed / (deg * (deg - 1) / 2.0);
  }
  expected /= 14.0;
  CHECK(clustering_coefficient(g) == Catch::Approx(expected).margin(1e-12));
}
