#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "streamkit/errors.hpp"
#include "streamkit/hashing.hpp"

namespace streamkit {

/// Update discipline of a frequency sketch.
enum class StreamModel : std::uint8_t {
  kCashRegister,  // nonnegative increments only
  kTurnstile,     // increments and decrements
};

/// Bloom filter: n-bit map, k independent hashes, no false negatives.
class BloomFilter {
public:
  BloomFilter(std::size_t n_bits, std::size_t hash_count, HashSeed seed)
      : n_bits_(n_bits), seed_(seed), words_((n_bits + 63) / 64, 0) {
    if (n_bits == 0) throw Error("validation", "bitmap size must be positive");
    if (hash_count == 0) throw Error("validation", "hash count must be positive");
    hashes_.reserve(hash_count);
    for (std::size_t j = 0; j < hash_count; ++j)
      hashes_.emplace_back(mix_seed(seed, j), n_bits);
  }

  /// k = round((n/expected) * ln 2), at least 1.
  static std::size_t optimal_hash_count(std::size_t n_bits, std::size_t expected_items) {
    if (expected_items == 0) return 1;
    double k = std::round(static_cast<double>(n_bits) / static_cast<double>(expected_items) *
                          std::log(2.0));
    return static_cast<std::size_t>(std::max(1.0, k));
  }

  void insert(std::uint64_t item) {
    for (const auto& h : hashes_) set_bit(h(item));
  }

  /// False positives possible; a negative answer is exact.
  bool contains(std::uint64_t item) const {
    for (const auto& h : hashes_)
      if (!get_bit(h(item))) return false;
    return true;
  }

  std::size_t bit_count() const noexcept { return n_bits_; }
  std::size_t hash_count() const noexcept { return hashes_.size(); }
  HashSeed seed() const noexcept { return seed_; }

  std::size_t popcount() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_) total += static_cast<std::size_t>(__builtin_popcountll(w));
    return total;
  }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::vector<std::uint64_t>& words() noexcept { return words_; }

  /// Expected false-positive rate (1 - e^(-k*items/n))^k.
  static double false_positive_rate(std::size_t n_bits, std::size_t hash_count,
                                    std::size_t inserted) {
    double k = static_cast<double>(hash_count);
    double fill = -k * static_cast<double>(inserted) / static_cast<double>(n_bits);
    return std::pow(1.0 - std::exp(fill), k);
  }

private:
  void set_bit(std::uint64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool get_bit(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  std::size_t n_bits_;
  HashSeed seed_;
  std::vector<CongruentialHash> hashes_;
  std::vector<std::uint64_t> words_;
};

namespace detail {

/// Deterministic median: odd count takes the middle, even count rounds the
/// mean of the two middles to nearest.
inline std::int64_t median_i64(std::vector<std::int64_t> values) {
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return std::llround((static_cast<double>(values[n / 2 - 1]) +
                       static_cast<double>(values[n / 2])) / 2.0);
}

inline double median_f64(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace detail

/// Count-Min sketch: d x w counters, one 2-universal hash per row.
/// Sized from (eps, delta) as w = ceil(2/eps), d = ceil(log2(1/delta));
/// point estimates then err by at most eps*F1 with probability 1 - delta.
class CmSketch {
public:
  CmSketch(std::size_t width, std::size_t depth, StreamModel model, HashSeed seed)
      : w_(width), d_(depth), model_(model), seed_(seed), table_(width * depth, 0) {
    if (width == 0 || depth == 0) throw Error("validation", "sketch dimensions must be positive");
    hashes_.reserve(depth);
    for (std::size_t j = 0; j < depth; ++j) hashes_.emplace_back(mix_seed(seed, j), width);
  }

  static CmSketch from_error(double eps, double delta, StreamModel model, HashSeed seed) {
    if (eps <= 0 || eps >= 1 || delta <= 0 || delta >= 1)
      throw Error("validation", "eps and delta must be in (0, 1)");
    auto w = static_cast<std::size_t>(std::ceil(2.0 / eps));
    auto d = static_cast<std::size_t>(std::ceil(std::log2(1.0 / delta)));
    return CmSketch(w, std::max<std::size_t>(d, 1), model, seed);
  }

  void update(std::uint64_t item, std::int64_t delta) {
    if (model_ == StreamModel::kCashRegister && delta < 0)
      throw Error("model", "negative update in cash-register mode");
    for (std::size_t j = 0; j < d_; ++j) table_[j * w_ + hashes_[j](item)] += delta;
  }

  /// Row minimum; cash-register only, where it upper-bounds the truth.
  std::int64_t point_query(std::uint64_t item) const {
    if (model_ != StreamModel::kCashRegister)
      throw Error("model", "min estimate requires cash-register mode");
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t j = 0; j < d_; ++j) best = std::min(best, cell(j, item));
    return best;
  }

  /// Row median; the right estimator once deletions are allowed.
  std::int64_t point_query_median(std::uint64_t item) const {
    std::vector<std::int64_t> rows(d_);
    for (std::size_t j = 0; j < d_; ++j) rows[j] = cell(j, item);
    return detail::median_i64(std::move(rows));
  }

  void merge(const CmSketch& other) {
    if (w_ != other.w_ || d_ != other.d_ || seed_.value != other.seed_.value ||
        model_ != other.model_)
      throw Error("merge", "Count-Min sketches differ in shape, seed, or model");
    for (std::size_t i = 0; i < table_.size(); ++i) table_[i] += other.table_[i];
  }

  std::size_t width() const noexcept { return w_; }
  std::size_t depth() const noexcept { return d_; }
  StreamModel model() const noexcept { return model_; }
  HashSeed seed() const noexcept { return seed_; }
  const std::vector<std::int64_t>& counters() const noexcept { return table_; }
  std::vector<std::int64_t>& counters() noexcept { return table_; }

  friend bool operator==(const CmSketch& a, const CmSketch& b) {
    return a.w_ == b.w_ && a.d_ == b.d_ && a.model_ == b.model_ &&
           a.seed_.value == b.seed_.value && a.table_ == b.table_;
  }

private:
  std::int64_t cell(std::size_t row, std::uint64_t item) const {
    return table_[row * w_ + hashes_[row](item)];
  }

  std::size_t w_, d_;
  StreamModel model_;
  HashSeed seed_;
  std::vector<CongruentialHash> hashes_;
  std::vector<std::int64_t> table_;
};

/// Count sketch (reduced, signed form): each row adds g_j(i) * delta at
/// column h_j(i); point estimate is the median of g_j(i) * S[j, h_j(i)].
/// With 4-universal row and sign hashes the row square-sums give the AMS
/// second-moment estimate.
class CountSketch {
public:
  CountSketch(std::size_t width, std::size_t depth, HashSeed seed)
      : w_(width), d_(depth), seed_(seed), table_(width * depth, 0) {
    if (width == 0 || depth == 0) throw Error("validation", "sketch dimensions must be positive");
    buckets_.reserve(depth);
    signs_.reserve(depth);
    for (std::size_t j = 0; j < depth; ++j) {
      buckets_.emplace_back(mix_seed(seed, 2 * j), width);
      signs_.emplace_back(mix_seed(seed, 2 * j + 1));
    }
  }

  /// w = ceil(3/eps^2), d = ceil(2*ln(1/delta)); point error stays within
  /// eps*sqrt(F2) with probability 1 - delta.
  static CountSketch from_error(double eps, double delta, HashSeed seed) {
    if (eps <= 0 || eps >= 1 || delta <= 0 || delta >= 1)
      throw Error("validation", "eps and delta must be in (0, 1)");
    auto w = static_cast<std::size_t>(std::ceil(3.0 / (eps * eps)));
    auto d = static_cast<std::size_t>(std::ceil(2.0 * std::log(1.0 / delta)));
    return CountSketch(w, std::max<std::size_t>(d, 1), seed);
  }

  void update(std::uint64_t item, std::int64_t delta) {
    for (std::size_t j = 0; j < d_; ++j)
      table_[j * w_ + buckets_[j](item)] += signs_[j](item) * delta;
  }

  std::int64_t point_query(std::uint64_t item) const {
    std::vector<std::int64_t> rows(d_);
    for (std::size_t j = 0; j < d_; ++j)
      rows[j] = signs_[j](item) * table_[j * w_ + buckets_[j](item)];
    return detail::median_i64(std::move(rows));
  }

  /// Per-row estimate g_j(i) * S[j, h_j(i)], unbiased for f(i).
  std::int64_t row_estimate(std::size_t row, std::uint64_t item) const {
    return signs_[row](item) * table_[row * w_ + buckets_[row](item)];
  }

  /// AMS estimate of F2: median over rows of the row's sum of squares.
  double second_moment() const {
    std::vector<double> rows(d_);
    for (std::size_t j = 0; j < d_; ++j) {
      double sum = 0;
      for (std::size_t k = 0; k < w_; ++k) {
        double v = static_cast<double>(table_[j * w_ + k]);
        sum += v * v;
      }
      rows[j] = sum;
    }
    return detail::median_f64(std::move(rows));
  }

  void merge(const CountSketch& other) {
    if (w_ != other.w_ || d_ != other.d_ || seed_.value != other.seed_.value)
      throw Error("merge", "Count sketches differ in shape or seed");
    for (std::size_t i = 0; i < table_.size(); ++i) table_[i] += other.table_[i];
  }

  std::size_t width() const noexcept { return w_; }
  std::size_t depth() const noexcept { return d_; }
  HashSeed seed() const noexcept { return seed_; }
  const std::vector<std::int64_t>& counters() const noexcept { return table_; }
  std::vector<std::int64_t>& counters() noexcept { return table_; }

  friend bool operator==(const CountSketch& a, const CountSketch& b) {
    return a.w_ == b.w_ && a.d_ == b.d_ && a.seed_.value == b.seed_.value && a.table_ == b.table_;
  }

private:
  std::size_t w_, d_;
  HashSeed seed_;
  std::vector<PolynomialHash> buckets_;
  std::vector<SignHash> signs_;
  std::vector<std::int64_t> table_;
};

/// Frequency-moment estimator for F_k = sum_i f(i)^k, k >= 1, over an
/// insert-only stream of unknown length. Each reservoir samples a stream
/// position uniformly (reservoir sampling) and counts occurrences of its
/// item from that position on; X = m * (r^k - (r-1)^k) has expectation F_k.
/// The estimate is the median over `groups` of the mean over `copies`.
class FkEstimator {
public:
  struct Reservoir {
    std::uint64_t item = 0;
    std::uint64_t tail_count = 0;  // occurrences of item since the sampled position
  };

  FkEstimator(unsigned moment, std::size_t copies, std::size_t groups, HashSeed seed)
      : k_(moment), copies_(copies), groups_(groups), rng_(seed), seed_(seed),
        reservoirs_(copies * groups) {
    if (moment == 0)
      throw Error("domain", "k = 0 is a distinct count; use a cardinality sketch");
    if (copies == 0 || groups == 0) throw Error("validation", "copies and groups must be positive");
  }

  void push(std::uint64_t item) {
    ++length_;
    for (auto& r : reservoirs_) {
      if (rng_.next_below(length_) == 0) {
        r.item = item;
        r.tail_count = 1;
      } else if (r.item == item && r.tail_count > 0) {
        ++r.tail_count;
      }
    }
  }

  template <typename Range>
  void process(const Range& items) {
    for (auto item : items) push(item);
  }

  double estimate() const {
    if (length_ == 0) return 0.0;
    std::vector<double> group_means(groups_);
    for (std::size_t g = 0; g < groups_; ++g) {
      double sum = 0;
      for (std::size_t c = 0; c < copies_; ++c)
        sum += copy_estimate(reservoirs_[g * copies_ + c]);
      group_means[g] = sum / static_cast<double>(copies_);
    }
    return detail::median_f64(std::move(group_means));
  }

  /// X = m * (r^k - (r-1)^k) for one reservoir.
  double copy_estimate(const Reservoir& r) const {
    if (r.tail_count == 0) return 0.0;
    return static_cast<double>(length_) *
           (int_pow(r.tail_count, k_) - int_pow(r.tail_count - 1, k_));
  }

  unsigned moment() const noexcept { return k_; }
  std::size_t copies() const noexcept { return copies_; }
  std::size_t groups() const noexcept { return groups_; }
  std::uint64_t length() const noexcept { return length_; }
  HashSeed seed() const noexcept { return seed_; }
  const std::vector<Reservoir>& reservoirs() const noexcept { return reservoirs_; }
  std::vector<Reservoir>& reservoirs() noexcept { return reservoirs_; }
  Rng& rng() noexcept { return rng_; }
  std::uint64_t rng_state() const noexcept { return rng_.state(); }
  void set_length(std::uint64_t m) noexcept { length_ = m; }

private:
  static double int_pow(std::uint64_t base, unsigned exp) {
    unsigned __int128 acc = 1;
    for (unsigned i = 0; i < exp; ++i) acc *= base;
    return static_cast<double>(acc);
  }

  unsigned k_;
  std::size_t copies_, groups_;
  Rng rng_;
  HashSeed seed_;
  std::vector<Reservoir> reservoirs_;
  std::uint64_t length_ = 0;
};

}  // namespace streamkit
