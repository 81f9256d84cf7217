// streamkit: streaming summaries, graph reductions, and PageRank in one
// binary. Subcommands take their input from a file argument or stdin and
// write TSV to stdout; diagnostics go to stderr. A fixed --seed makes every
// run byte-identical.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "streamkit/counters.hpp"
#include "streamkit/freq_sketches.hpp"
#include "streamkit/graph.hpp"
#include "streamkit/graph_stream.hpp"
#include "streamkit/haar.hpp"
#include "streamkit/hashing.hpp"
#include "streamkit/pagerank.hpp"
#include "streamkit/samplers.hpp"
#include "streamkit/serialize.hpp"

namespace {

using namespace streamkit;

// ------------------------------------------------------------- formatting

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// ------------------------------------------------------------------ input

std::string slurp(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("parse", "cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct StreamUpdate {
  std::uint64_t item;
  std::int64_t delta;
};

// One update per line: `<item-id> [<delta>]`, delta defaulting to +1;
// `#` comment lines and blank lines skipped.
std::vector<StreamUpdate> parse_stream(const std::string& text) {
  std::vector<StreamUpdate> updates;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (eol == std::string::npos ? text.size() : eol) - pos);
    pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (detail::is_blank(line)) continue;
    auto fields = detail::split_fields(line);
    if (fields[0][0] == '#') continue;
    if (fields.size() > 2) throw ParseError(line_no, "expected `item [delta]`");
    auto item = detail::parse_u64(fields[0]);
    if (!item) throw ParseError(line_no, "item ids must be nonnegative integers");
    std::int64_t delta = 1;
    if (fields.size() == 2) {
      std::string field(fields[1]);
      std::size_t used = 0;
      long long parsed = 0;
      try {
        parsed = std::stoll(field, &used);
      } catch (const std::exception&) {
        throw ParseError(line_no, "malformed delta");
      }
      if (used != field.size()) throw ParseError(line_no, "malformed delta");
      delta = parsed;
    }
    updates.push_back(StreamUpdate{*item, delta});
  }
  return updates;
}

std::vector<EdgeEvent> parse_edge_events(const std::string& text) {
  std::vector<EdgeEvent> events;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (eol == std::string::npos ? text.size() : eol) - pos);
    pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (detail::is_blank(line)) continue;
    auto fields = detail::split_fields(line);
    if (fields[0][0] == '#') continue;
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError(line_no, "expected `u v [delta]`");
    auto u = detail::parse_u64(fields[0]);
    auto v = detail::parse_u64(fields[1]);
    if (!u || !v) throw ParseError(line_no, "vertex ids must be nonnegative integers");
    std::int32_t delta = 1;
    if (fields.size() == 3) {
      std::string field(fields[2]);
      if (field == "1" || field == "+1")
        delta = 1;
      else if (field == "-1")
        delta = -1;
      else
        throw ParseError(line_no, "turnstile delta must be +1 or -1");
    }
    events.push_back(EdgeEvent{static_cast<std::uint32_t>(*u),
                               static_cast<std::uint32_t>(*v), delta});
  }
  return events;
}

std::uint32_t event_vertex_count(const std::vector<EdgeEvent>& events, const std::string& text) {
  // honor a `# n=<N>` header on the first line, else 1 + max id
  std::size_t eol = text.find('\n');
  auto header = detail::parse_n_header(
      std::string_view(text).substr(0, eol == std::string::npos ? text.size() : eol));
  if (header) return static_cast<std::uint32_t>(*header);
  std::uint32_t n = 0;
  for (const auto& e : events) n = std::max({n, e.u + 1, e.v + 1});
  return n;
}

Eigen::VectorXd parse_personalization(const std::string& path, std::uint32_t n) {
  std::string text = slurp(path);
  std::istringstream in(text);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (values.size() != n)
    throw Error("validation", "personalization needs exactly " + std::to_string(n) + " values");
  Eigen::VectorXd p(n);
  for (std::uint32_t i = 0; i < n; ++i) p(i) = values[i];
  return p;
}

std::vector<double> parse_vector(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    if (token[0] == '#') {  // drop the rest of the line
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    try {
      std::size_t used = 0;
      double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      values.push_back(v);
    } catch (const std::exception&) {
      throw Error("parse", "malformed number: " + token);
    }
  }
  return values;
}

// ------------------------------------------------------------ subcommands

struct GlobalOptions {
  std::uint64_t seed = 0;
  bool quiet = false;
};

void note(const GlobalOptions& g, const std::string& message) {
  if (!g.quiet) std::cerr << message << "\n";
}

int run_sketch_morris(const GlobalOptions& g, const std::string& input, std::size_t copies,
                      double epsilon, const std::string& save_path,
                      const std::string& load_path) {
  if (load_path.empty() && epsilon == 0 && copies == 0)
    throw Error("usage", "--copies must be positive");
  if (epsilon != 0 && (epsilon <= 0 || epsilon >= 1))
    throw Error("usage", "--epsilon must be in (0, 1)");
  MorrisPlus sketch = load_path.empty()
                          ? (epsilon > 0 ? MorrisPlus::from_epsilon(epsilon)
                                         : MorrisPlus(copies))
                          : load_file(load_morris_plus, load_path);
  Rng rng(HashSeed{g.seed});
  if (load_path.empty() || !input.empty()) {
    for (const auto& u : parse_stream(slurp(input))) {
      if (u.delta < 0) throw Error("model", "event counts cannot decrease");
      for (std::int64_t i = 0; i < u.delta; ++i) sketch.increment(rng);
    }
  }
  if (!save_path.empty()) save_file(sketch, save_path);
  std::cout << fmt_num(sketch.estimate()) << "\n";
  return 0;
}

int run_sketch_fm(const GlobalOptions& g, const std::string& input, unsigned bits,
                  const std::string& save_path, const std::string& load_path) {
  if (load_path.empty() && (bits == 0 || bits > 63))
    throw Error("usage", "--bits must be in [1, 63]");
  FmBitmap sketch = load_path.empty() ? FmBitmap(bits, HashSeed{g.seed})
                                      : load_file(load_fm_bitmap, load_path);
  if (load_path.empty() || !input.empty())
    for (const auto& u : parse_stream(slurp(input))) sketch.update(u.item);
  if (!save_path.empty()) save_file(sketch, save_path);
  std::cout << fmt_num(sketch.estimate()) << "\n";
  return 0;
}

int run_sketch_hll(const GlobalOptions& g, const std::string& input, unsigned log2_registers,
                   const std::vector<std::string>& merge_paths, const std::string& save_path,
                   const std::string& load_path) {
  if (load_path.empty() && (log2_registers < 4 || log2_registers > 20))
    throw Error("usage", "--log2-registers must be in [4, 20]");
  HllSketch sketch = load_path.empty() ? HllSketch(log2_registers, HashSeed{g.seed})
                                       : load_file(load_hll, load_path);
  if (load_path.empty() || !input.empty())
    for (const auto& u : parse_stream(slurp(input))) sketch.update(u.item);
  for (const auto& path : merge_paths) sketch.merge(load_file(load_hll, path));
  if (!save_path.empty()) save_file(sketch, save_path);
  std::cout << fmt_num(sketch.estimate()) << "\n";
  return 0;
}

int run_sketch_bloom(const GlobalOptions& g, const std::string& input, std::size_t bits,
                     std::size_t hashes, std::size_t expected, std::uint64_t query,
                     const std::string& save_path, const std::string& load_path) {
  if (bits == 0) throw Error("usage", "--bits must be positive");
  if (expected > 0) hashes = BloomFilter::optimal_hash_count(bits, expected);
  if (hashes == 0) throw Error("usage", "--hashes must be positive");
  BloomFilter sketch = load_path.empty() ? BloomFilter(bits, hashes, HashSeed{g.seed})
                                         : load_file(load_bloom, load_path);
  if (load_path.empty() || !input.empty())
    for (const auto& u : parse_stream(slurp(input))) sketch.insert(u.item);
  if (!save_path.empty()) save_file(sketch, save_path);
  std::cout << (sketch.contains(query) ? "present" : "absent") << "\n";
  return 0;
}

int run_sketch_cm(const GlobalOptions& g, const std::string& input, double epsilon, double delta,
                  bool turnstile, std::uint64_t query, const std::string& save_path,
                  const std::string& load_path) {
  if (epsilon <= 0 || epsilon >= 1 || delta <= 0 || delta >= 1)
    throw Error("usage", "--epsilon and --delta must be in (0, 1)");
  StreamModel model = turnstile ? StreamModel::kTurnstile : StreamModel::kCashRegister;
  CmSketch sketch = load_path.empty()
                        ? CmSketch::from_error(epsilon, delta, model, HashSeed{g.seed})
                        : load_file(load_cm, load_path);
  if (load_path.empty() || !input.empty())
    for (const auto& u : parse_stream(slurp(input))) sketch.update(u.item, u.delta);
  if (!save_path.empty()) save_file(sketch, save_path);
  std::int64_t estimate = sketch.model() == StreamModel::kTurnstile
                              ? sketch.point_query_median(query)
                              : sketch.point_query(query);
  std::cout << estimate << "\n";
  return 0;
}

int run_sketch_count(const GlobalOptions& g, const std::string& input, double epsilon,
                     double delta, std::uint64_t query, const std::string& save_path,
                     const std::string& load_path) {
  if (epsilon <= 0 || epsilon >= 1 || delta <= 0 || delta >= 1)
    throw Error("usage", "--epsilon and --delta must be in (0, 1)");
  CountSketch sketch = load_path.empty()
                           ? CountSketch::from_error(epsilon, delta, HashSeed{g.seed})
                           : load_file(load_count_sketch, load_path);
  if (load_path.empty() || !input.empty())
    for (const auto& u : parse_stream(slurp(input))) sketch.update(u.item, u.delta);
  if (!save_path.empty()) save_file(sketch, save_path);
  std::cout << sketch.point_query(query) << "\n";
  return 0;
}

int run_sketch_f2(const GlobalOptions& g, const std::string& input, double epsilon,
                  double delta) {
  if (epsilon <= 0 || epsilon >= 1 || delta <= 0 || delta >= 1)
    throw Error("usage", "--epsilon and --delta must be in (0, 1)");
  CountSketch sketch = CountSketch::from_error(epsilon, delta, HashSeed{g.seed});
  for (const auto& u : parse_stream(slurp(input))) sketch.update(u.item, u.delta);
  std::cout << fmt_num(sketch.second_moment()) << "\n";
  return 0;
}

int run_sketch_fk(const GlobalOptions& g, const std::string& input, unsigned moment,
                  std::size_t copies, std::size_t groups) {
  if (moment == 0) throw Error("usage", "--moment must be at least 1 (F0 is `sketch hll`)");
  if (copies == 0 || groups == 0) throw Error("usage", "--copies and --groups must be positive");
  FkEstimator sketch(moment, copies, groups, HashSeed{g.seed});
  for (const auto& u : parse_stream(slurp(input))) {
    if (u.delta < 1) throw Error("model", "frequency moments need an insert-only stream");
    for (std::int64_t i = 0; i < u.delta; ++i) sketch.push(u.item);
  }
  std::cout << fmt_num(sketch.estimate()) << "\n";
  return 0;
}

void print_edge_list(const Graph& g, const std::vector<std::string>& extra_headers) {
  std::cout << "# n=" << g.n() << "\n";
  for (const auto& h : extra_headers) std::cout << h << "\n";
  for (const Edge& e : g.edges()) {
    std::cout << e.u << " " << e.v;
    if (e.weight != 1.0) std::cout << " " << fmt_num(e.weight);
    std::cout << "\n";
  }
}

int run_graph_spanner(const GlobalOptions&, const std::string& input, double alpha) {
  if (alpha < 1) throw Error("usage", "--alpha must be at least 1");
  Graph g = load_edge_list(slurp(input), /*directed=*/false);
  Spanner spanner(g.n(), alpha);
  for (const Edge& e : g.edges()) spanner.offer(e.u, e.v);
  print_edge_list(spanner.result(), {});
  return 0;
}

int run_graph_sparsify(const GlobalOptions& g, const std::string& input, double epsilon,
                       double min_cut) {
  if (epsilon <= 0 || epsilon >= 1) throw Error("usage", "--epsilon must be in (0, 1)");
  if (min_cut < 0) throw Error("usage", "--min-cut must be positive");
  Graph graph = load_edge_list(slurp(input), /*directed=*/false);
  std::optional<double> lambda;
  if (min_cut > 0) lambda = min_cut;
  double cut = lambda ? *lambda : min_cut_stoer_wagner(graph);
  double p = sparsifier_keep_probability(graph.n(), epsilon, cut);
  Graph sparse = sparsify(graph, epsilon, cut, HashSeed{g.seed});
  print_edge_list(sparse, {"# sparsified p=" + fmt_num(p)});
  return 0;
}

int run_graph_cc(const GlobalOptions& g, const std::string& input) {
  std::string text = slurp(input);
  auto events = parse_edge_events(text);
  std::uint32_t n = event_vertex_count(events, text);
  auto result = cc_sketch(n, events, HashSeed{g.seed});
  std::cout << result.component_count << "\n";
  for (std::uint32_t v = 0; v < n; ++v) std::cout << v << "\t" << result.labels[v] << "\n";
  return 0;
}

int run_graph_triangles(const GlobalOptions& g, const std::string& input, bool exact) {
  Graph graph = load_edge_list(slurp(input), /*directed=*/false);
  double count = count_triangles_moments(graph, exact, HashSeed{g.seed});
  if (exact)
    std::cout << static_cast<long long>(std::llround(count)) << "\n";
  else
    std::cout << fmt_num(count) << "\n";
  return 0;
}

int run_graph_clustering(const GlobalOptions&, const std::string& input) {
  Graph graph = load_edge_list(slurp(input), /*directed=*/false);
  std::cout << fmt_num(clustering_coefficient(graph)) << "\n";
  return 0;
}

void print_ranking(const RankVector& rank) {
  auto order = rank_order(rank);
  for (std::size_t r = 0; r < order.size(); ++r)
    std::cout << (r + 1) << "\t" << order[r] << "\t" << fmt_num(rank.scores(order[r])) << "\n";
}

int run_pagerank(const GlobalOptions& g, const std::string& input, const std::string& method,
                 double beta, double tol, int max_iter, const std::string& norm_name,
                 const std::string& personalize, bool strict) {
  if (beta < 0 || beta > 1) throw Error("usage", "--beta must lie in [0, 1]");
  if (tol <= 0 || max_iter < 1) throw Error("usage", "--tol and --max-iter must be positive");
  Graph graph = load_edge_list(slurp(input), /*directed=*/true);
  if (graph.n() == 0) throw Error("validation", "graph has no vertices");
  Eigen::VectorXd p = personalize.empty() ? uniform_personalization(graph.n())
                                          : parse_personalization(personalize, graph.n());
  auto model = make_transition(graph, beta, p);
  ConvergenceCriterion crit{norm_name == "linf" ? Norm::kLInf : Norm::kL1, tol, max_iter};

  RankVector rank;
  if (method == "algebraic")
    rank = pagerank_algebraic(model);
  else if (method == "walk")
    rank = pagerank_random_walk(model, crit, HashSeed{g.seed});
  else
    rank = pagerank_iterative(model, crit);

  if (!rank.converged) {
    if (strict)
      throw Error("convergence",
                  "no convergence after " + std::to_string(rank.iterations) + " iterations");
    note(g, "warning: not converged after " + std::to_string(rank.iterations) + " iterations");
  }
  print_ranking(rank);
  return 0;
}

int run_simrank(const GlobalOptions&, const std::string& input, double decay, double tol,
                int max_iter) {
  if (decay <= 0 || decay >= 1) throw Error("usage", "--decay must be in (0, 1)");
  if (tol < 0 || max_iter < 1) throw Error("usage", "--tol and --max-iter must be positive");
  Graph graph = load_edge_list(slurp(input), /*directed=*/true);
  auto sim = simrank(graph, decay, max_iter, tol);
  for (std::uint32_t i = 0; i < graph.n(); ++i) {
    for (std::uint32_t j = 0; j < graph.n(); ++j)
      std::cout << (j == 0 ? "" : "\t") << fmt_num(sim.scores(i, j));
    std::cout << "\n";
  }
  return 0;
}

int run_hits(const GlobalOptions& g, const std::string& input, double tol, int max_iter,
             bool strict) {
  if (tol <= 0 || max_iter < 1) throw Error("usage", "--tol and --max-iter must be positive");
  Graph graph = load_edge_list(slurp(input), /*directed=*/true);
  auto result = hits(graph, tol, max_iter);
  if (!result.converged) {
    if (strict) throw Error("convergence", "HITS did not converge");
    note(g, "warning: HITS did not converge");
  }
  for (std::uint32_t v = 0; v < graph.n(); ++v)
    std::cout << v << "\t" << fmt_num(result.authority(v)) << "\t" << fmt_num(result.hub(v))
              << "\n";
  return 0;
}

int run_summarize_haar(const GlobalOptions&, const std::string& input, std::size_t keep) {
  if (keep < 1) throw Error("usage", "--keep must be at least 1");
  auto values = parse_vector(slurp(input));
  auto transform = haar_forward(values);
  auto kept = haar_threshold(transform, keep);
  auto rebuilt = haar_inverse(kept);
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (i == 0 || kept.coefficients[i] != 0.0)
      std::cout << "coefficient\t" << i << "\t" << fmt_num(kept.coefficients[i]) << "\n";
  std::cout << "error_l2\t" << fmt_num(l2_error(values, rebuilt)) << "\n";
  std::cout << "error_max_abs\t" << fmt_num(max_abs_error(values, rebuilt)) << "\n";
  std::cout << "error_max_rel\t" << fmt_num(max_rel_error(values, rebuilt)) << "\n";
  return 0;
}

double kendall_tau_distance(const std::vector<std::uint32_t>& a,
                            const std::vector<std::uint32_t>& b) {
  std::size_t n = a.size();
  if (n < 2) return 0.0;
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[b[i]] = i;
  std::size_t discordant = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pos[a[i]] > pos[a[j]]) ++discordant;
  return static_cast<double>(discordant) / (static_cast<double>(n) * (n - 1) / 2.0);
}

int run_compare_pagerank_sparsified(const GlobalOptions& g, const std::string& input,
                                    double epsilon, double min_cut, double beta) {
  if (epsilon <= 0 || epsilon >= 1) throw Error("usage", "--epsilon must be in (0, 1)");
  if (beta < 0 || beta > 1) throw Error("usage", "--beta must lie in [0, 1]");
  Graph graph = load_edge_list(slurp(input), /*directed=*/false);
  std::optional<double> lambda;
  if (min_cut > 0) lambda = min_cut;
  Graph sparse = sparsify(graph, epsilon, lambda, HashSeed{g.seed});

  auto exact = pagerank_algebraic(make_transition(graph, beta));
  auto approx = pagerank_algebraic(make_transition(sparse, beta));

  std::cout << "l1\t" << fmt_num((exact.scores - approx.scores).lpNorm<1>()) << "\n";
  std::cout << "linf\t" << fmt_num((exact.scores - approx.scores).lpNorm<Eigen::Infinity>())
            << "\n";
  std::cout << "kendall_tau\t"
            << fmt_num(kendall_tau_distance(rank_order(exact), rank_order(approx))) << "\n";
  return 0;
}

int exit_code_for(const Error& e) {
  const std::string& c = e.category();
  if (c == "convergence") return 3;
  if (c == "usage" || c == "solver") return 1;
  return 2;  // parse, validation, model, merge, domain, shape: input trouble
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming summaries, graph reductions, and PageRank"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "PRNG seed (default 0)");
  app.add_flag("--quiet", global.quiet, "suppress diagnostics on stderr");

  std::string input;
  std::string save_path, load_path;
  std::vector<std::string> merge_paths;

  // ---- sketch
  auto* sketch = app.add_subcommand("sketch", "streaming sketches over an update stream");
  sketch->require_subcommand(1);

  std::size_t morris_copies = 1;
  double morris_epsilon = 0;
  auto* morris = sketch->add_subcommand("morris", "probabilistic event counting");
  morris->add_option("input", input, "stream file (default stdin)");
  morris->add_option("--copies", morris_copies, "independent counters to average");
  morris->add_option("--epsilon", morris_epsilon, "size copies as ceil(3/(2 eps^2))");
  morris->add_option("--save", save_path, "write sketch state to a file");
  morris->add_option("--load", load_path, "start from saved sketch state");

  unsigned fm_bits = 32;
  auto* fm = sketch->add_subcommand("fm", "distinct counting, single bitmap");
  fm->add_option("input", input, "stream file (default stdin)");
  fm->add_option("--bits", fm_bits, "bitmap length");
  fm->add_option("--save", save_path, "write sketch state to a file");
  fm->add_option("--load", load_path, "start from saved sketch state");

  unsigned hll_log2 = 10;
  auto* hll = sketch->add_subcommand("hll", "distinct counting, HyperLogLog");
  hll->add_option("input", input, "stream file (default stdin)");
  hll->add_option("--log2-registers", hll_log2, "register count exponent (m = 2^b)");
  hll->add_option("--merge", merge_paths, "merge saved sketches before estimating");
  hll->add_option("--save", save_path, "write sketch state to a file");
  hll->add_option("--load", load_path, "start from saved sketch state");

  std::size_t bloom_bits = 1 << 16, bloom_hashes = 4, bloom_expected = 0;
  std::uint64_t bloom_query = 0;
  auto* bloom = sketch->add_subcommand("bloom", "set membership");
  bloom->add_option("input", input, "stream file (default stdin)");
  bloom->add_option("--bits", bloom_bits, "bitmap size");
  bloom->add_option("--hashes", bloom_hashes, "hash functions");
  bloom->add_option("--expected", bloom_expected,
                    "size the hash count as round((bits/expected) ln 2)");
  bloom->add_option("--query", bloom_query, "item to test")->required();
  bloom->add_option("--save", save_path, "write sketch state to a file");
  bloom->add_option("--load", load_path, "start from saved sketch state");

  double cm_epsilon = 0.01, cm_delta = 0.01;
  bool cm_turnstile = false;
  std::uint64_t cm_query = 0;
  auto* cm = sketch->add_subcommand("cm", "frequency estimation, Count-Min");
  cm->add_option("input", input, "stream file (default stdin)");
  cm->add_option("--epsilon", cm_epsilon, "error fraction of F1");
  cm->add_option("--delta", cm_delta, "failure probability");
  cm->add_flag("--turnstile", cm_turnstile, "allow deletions; estimate by row median");
  cm->add_option("--query", cm_query, "item to estimate")->required();
  cm->add_option("--save", save_path, "write sketch state to a file");
  cm->add_option("--load", load_path, "start from saved sketch state");

  double count_epsilon = 0.05, count_delta = 0.05;
  std::uint64_t count_query = 0;
  auto* count = sketch->add_subcommand("count", "frequency estimation, Count sketch");
  count->add_option("input", input, "stream file (default stdin)");
  count->add_option("--epsilon", count_epsilon, "error fraction of sqrt(F2)");
  count->add_option("--delta", count_delta, "failure probability");
  count->add_option("--query", count_query, "item to estimate")->required();
  count->add_option("--save", save_path, "write sketch state to a file");
  count->add_option("--load", load_path, "start from saved sketch state");

  double f2_epsilon = 0.05, f2_delta = 0.05;
  auto* f2 = sketch->add_subcommand("f2", "second frequency moment (AMS)");
  f2->add_option("input", input, "stream file (default stdin)");
  f2->add_option("--epsilon", f2_epsilon, "relative error target");
  f2->add_option("--delta", f2_delta, "failure probability");

  unsigned fk_moment = 2;
  std::size_t fk_copies = 64, fk_groups = 9;
  auto* fk = sketch->add_subcommand("fk", "k-th frequency moment estimator");
  fk->add_option("input", input, "stream file (default stdin)");
  fk->add_option("--moment", fk_moment, "moment order k >= 1");
  fk->add_option("--copies", fk_copies, "averaged copies per group");
  fk->add_option("--groups", fk_groups, "median groups");

  // ---- graph
  auto* graph_cmd = app.add_subcommand("graph", "semi-streaming graph reductions");
  graph_cmd->require_subcommand(1);

  double spanner_alpha = 3.0;
  auto* spanner = graph_cmd->add_subcommand("spanner", "stretch-bounded subgraph");
  spanner->add_option("input", input, "edge-list file (default stdin)");
  spanner->add_option("--alpha", spanner_alpha, "stretch bound");

  double sparsify_epsilon = 0.5, sparsify_cut = 0;
  auto* sparsify_cmd = graph_cmd->add_subcommand("sparsify", "cut-preserving edge sample");
  sparsify_cmd->add_option("input", input, "edge-list file (default stdin)");
  sparsify_cmd->add_option("--epsilon", sparsify_epsilon, "cut distortion target");
  sparsify_cmd->add_option("--min-cut", sparsify_cut,
                           "minimum cut value (computed exactly when omitted)");

  auto* cc = graph_cmd->add_subcommand("cc", "connected components from a turnstile stream");
  cc->add_option("input", input, "edge event file `u v [+1|-1]` (default stdin)");

  bool triangles_exact = false;
  auto* triangles = graph_cmd->add_subcommand("triangles", "triangle count via moments");
  triangles->add_option("input", input, "edge-list file (default stdin)");
  triangles->add_flag("--exact", triangles_exact, "exact moment tables");

  auto* clustering = graph_cmd->add_subcommand("clustering", "global clustering coefficient");
  clustering->add_option("input", input, "edge-list file (default stdin)");

  // ---- pagerank and relatives
  std::string pr_method = "iterative", pr_norm = "l1", pr_personalize;
  double pr_beta = 0.85, pr_tol = 1e-10;
  int pr_max_iter = 10000;
  bool pr_strict = false;
  auto* pagerank = app.add_subcommand("pagerank", "stationary ranking of a directed graph");
  pagerank->add_option("input", input, "edge-list file (default stdin)");
  pagerank->add_option("--method", pr_method, "algebraic | iterative | walk")
      ->check(CLI::IsMember({"algebraic", "iterative", "walk"}));
  pagerank->add_option("--beta", pr_beta, "damping factor");
  pagerank->add_option("--tol", pr_tol, "convergence threshold");
  pagerank->add_option("--max-iter", pr_max_iter, "iteration cap");
  pagerank->add_option("--norm", pr_norm, "convergence norm: l1 | linf")
      ->check(CLI::IsMember({"l1", "linf"}));
  pagerank->add_option("--personalize", pr_personalize, "teleport weights file");
  pagerank->add_flag("--strict", pr_strict, "exit 3 when unconverged");

  double sim_decay = 0.2, sim_tol = 1e-9;
  int sim_max_iter = 100;
  auto* simrank_cmd = app.add_subcommand("simrank", "structural similarity scores");
  simrank_cmd->add_option("input", input, "edge-list file (default stdin)");
  simrank_cmd->add_option("--decay", sim_decay, "decay constant in (0,1)");
  simrank_cmd->add_option("--tol", sim_tol, "max entry change to stop");
  simrank_cmd->add_option("--max-iter", sim_max_iter, "iteration cap");

  double hits_tol = 1e-10;
  int hits_max_iter = 10000;
  bool hits_strict = false;
  auto* hits_cmd = app.add_subcommand("hits", "hub and authority scores");
  hits_cmd->add_option("input", input, "edge-list file (default stdin)");
  hits_cmd->add_option("--tol", hits_tol, "L2 movement to stop");
  hits_cmd->add_option("--max-iter", hits_max_iter, "iteration cap");
  hits_cmd->add_flag("--strict", hits_strict, "exit 3 when unconverged");

  // ---- summarize
  auto* summarize = app.add_subcommand("summarize", "vector synopses");
  summarize->require_subcommand(1);
  std::size_t haar_keep = 1;
  auto* haar = summarize->add_subcommand("haar", "Haar wavelet thresholding");
  haar->add_option("input", input, "whitespace-separated numbers (default stdin)");
  haar->add_option("--keep", haar_keep, "coefficients to keep")->required();

  // ---- compare
  auto* compare = app.add_subcommand("compare", "accuracy comparisons");
  compare->require_subcommand(1);
  double cps_epsilon = 0.5, cps_cut = 0, cps_beta = 0.85;
  auto* cps = compare->add_subcommand("pagerank-sparsified",
                                      "rank distortion caused by sparsification");
  cps->add_option("input", input, "edge-list file (default stdin)");
  cps->add_option("--epsilon", cps_epsilon, "sparsifier distortion target");
  cps->add_option("--min-cut", cps_cut, "minimum cut value (computed exactly when omitted)");
  cps->add_option("--beta", cps_beta, "damping factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    std::cerr << "error: usage: " << e.what() << "\n";
    return 1;
  }

  try {
    if (morris->parsed())
      return run_sketch_morris(global, input, morris_copies, morris_epsilon, save_path,
                               load_path);
    if (fm->parsed()) return run_sketch_fm(global, input, fm_bits, save_path, load_path);
    if (hll->parsed())
      return run_sketch_hll(global, input, hll_log2, merge_paths, save_path, load_path);
    if (bloom->parsed())
      return run_sketch_bloom(global, input, bloom_bits, bloom_hashes, bloom_expected,
                              bloom_query, save_path, load_path);
    if (cm->parsed())
      return run_sketch_cm(global, input, cm_epsilon, cm_delta, cm_turnstile, cm_query,
                           save_path, load_path);
    if (count->parsed())
      return run_sketch_count(global, input, count_epsilon, count_delta, count_query, save_path,
                              load_path);
    if (f2->parsed()) return run_sketch_f2(global, input, f2_epsilon, f2_delta);
    if (fk->parsed()) return run_sketch_fk(global, input, fk_moment, fk_copies, fk_groups);
    if (spanner->parsed()) return run_graph_spanner(global, input, spanner_alpha);
    if (sparsify_cmd->parsed())
      return run_graph_sparsify(global, input, sparsify_epsilon, sparsify_cut);
    if (cc->parsed()) return run_graph_cc(global, input);
    if (triangles->parsed()) return run_graph_triangles(global, input, triangles_exact);
    if (clustering->parsed()) return run_graph_clustering(global, input);
    if (pagerank->parsed())
      return run_pagerank(global, input, pr_method, pr_beta, pr_tol, pr_max_iter, pr_norm,
                          pr_personalize, pr_strict);
    if (simrank_cmd->parsed())
      return run_simrank(global, input, sim_decay, sim_tol, sim_max_iter);
    if (hits_cmd->parsed()) return run_hits(global, input, hits_tol, hits_max_iter, hits_strict);
    if (haar->parsed()) return run_summarize_haar(global, input, haar_keep);
    if (cps->parsed())
      return run_compare_pagerank_sparsified(global, input, cps_epsilon, cps_cut, cps_beta);
    std::cerr << "error: usage: no subcommand selected\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
