#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "streamkit/errors.hpp"
#include "streamkit/hashing.hpp"

namespace streamkit {

/// Index of the least-significant set bit of y, or `bits` when y == 0.
/// Requires y < 2^bits.
inline unsigned rho(std::uint64_t y, unsigned bits) {
  if (y == 0) return bits;
  unsigned k = 0;
  while ((y & 1) == 0) {
    y >>= 1;
    ++k;
  }
  return k;
}

/// Probabilistic event counter: one exponent register, incremented with
/// probability 2^-X, estimate 2^X - 1. E[2^X] after n events is n + 1.
class MorrisCounter {
public:
  void increment(Rng& rng) {
    // Accept with probability 2^-x. x = 0 always accepts.
    if (exponent_ >= 64) return;  // acceptance odds below 2^-63: saturated
    if (exponent_ == 0 || (rng.next_u64() >> (64 - exponent_)) == 0) ++exponent_;
  }

  double estimate() const { return std::ldexp(1.0, static_cast<int>(exponent_)) - 1.0; }

  unsigned exponent() const noexcept { return exponent_; }
  void set_exponent(unsigned x) noexcept { exponent_ = x; }

  friend bool operator==(const MorrisCounter&, const MorrisCounter&) = default;

private:
  unsigned exponent_ = 0;
};

/// s independent Morris counters averaged together. s > 3/(2*eps^2) brings
/// the relative error under eps with constant probability.
class MorrisPlus {
public:
  explicit MorrisPlus(std::size_t copies) : counters_(copies) {
    if (copies == 0) throw Error("validation", "MorrisPlus needs at least one copy");
  }

  static MorrisPlus from_epsilon(double eps) {
    if (eps <= 0 || eps >= 1) throw Error("validation", "epsilon must be in (0, 1)");
    return MorrisPlus(static_cast<std::size_t>(std::ceil(1.5 / (eps * eps))));
  }

  void increment(Rng& rng) {
    for (auto& c : counters_) c.increment(rng);
  }

  double estimate() const {
    double sum = 0;
    for (const auto& c : counters_) sum += c.estimate();
    return sum / static_cast<double>(counters_.size());
  }

  std::size_t copies() const noexcept { return counters_.size(); }
  const std::vector<MorrisCounter>& counters() const noexcept { return counters_; }
  std::vector<MorrisCounter>& counters() noexcept { return counters_; }

  friend bool operator==(const MorrisPlus&, const MorrisPlus&) = default;

private:
  std::vector<MorrisCounter> counters_;
};

/// Flajolet-Martin distinct counter: single bitmap of L bits, bit
/// rho(hash(x)) set per item, estimate 2^(lowest unset bitmap index).
/// Hashes by tabulation; the trailing-zero statistic needs more than
/// pairwise independence to concentrate on structured key sets.
class FmBitmap {
public:
  FmBitmap(unsigned bits, HashSeed seed)
      : bits_(bits), seed_(seed), hash_(seed, std::uint64_t{1} << bits) {
    if (bits == 0 || bits > 63) throw Error("validation", "bitmap length must be in [1, 63]");
  }

  void update(std::uint64_t item) { bitmap_ |= std::uint64_t{1} << rho(hash_(item), bits_); }

  /// Lowest bitmap index still unset (the bitmap has bits_ + 1 slots so the
  /// rho(0) = L convention lands on a real position).
  unsigned lowest_unset() const {
    unsigned k = 0;
    while (k <= bits_ && ((bitmap_ >> k) & 1)) ++k;
    return k;
  }

  double estimate() const { return std::ldexp(1.0, static_cast<int>(lowest_unset())); }

  std::uint64_t bitmap() const noexcept { return bitmap_; }
  void set_bitmap(std::uint64_t b) noexcept { bitmap_ = b; }
  unsigned bits() const noexcept { return bits_; }
  HashSeed seed() const noexcept { return seed_; }

  friend bool operator==(const FmBitmap& a, const FmBitmap& b) {
    return a.bits_ == b.bits_ && a.seed_.value == b.seed_.value && a.bitmap_ == b.bitmap_;
  }

private:
  unsigned bits_;
  HashSeed seed_;
  TabulationHash hash_;
  std::uint64_t bitmap_ = 0;
};

/// HyperLogLog with m = 2^b registers over a 64-bit hash. The first b hash
/// bits pick the register; the register keeps the maximum over items of the
/// leading-zero run of the remaining bits plus one.
class HllSketch {
public:
  HllSketch(unsigned log2_registers, HashSeed seed)
      : b_(log2_registers),
        m_(std::size_t{1} << log2_registers),
        seed_(seed),
        hash_(seed, 2),  // range unused; full() is what we read
        registers_(m_, 0) {
    if (log2_registers < 4 || log2_registers > 20)
      throw Error("validation", "log2(register count) must be in [4, 20]");
  }

  void update(std::uint64_t item) {
    std::uint64_t h = hash_.full(item);
    std::size_t j = static_cast<std::size_t>(h >> (64 - b_));
    std::uint64_t rest = h << b_;  // remaining 64 - b bits, left-aligned
    unsigned run = rest == 0 ? (64 - b_ + 1)
                             : static_cast<unsigned>(__builtin_clzll(rest)) + 1;
    registers_[j] = std::max(registers_[j], static_cast<std::uint8_t>(run));
  }

  /// Raw formula alpha_m * m^2 / sum_j 2^-M[j], no range correction.
  double raw_estimate() const {
    double inv_sum = 0;
    for (std::uint8_t r : registers_) inv_sum += std::ldexp(1.0, -static_cast<int>(r));
    return alpha(m_) * static_cast<double>(m_) * static_cast<double>(m_) / inv_sum;
  }

  /// Estimate with the small-range branch: below 5/2 * m with empty
  /// registers present, fall back to linear counting m * ln(m / V).
  double estimate() const {
    double raw = raw_estimate();
    if (raw <= 2.5 * static_cast<double>(m_)) {
      std::size_t zeros = 0;
      for (std::uint8_t r : registers_) zeros += (r == 0);
      if (zeros > 0)
        return static_cast<double>(m_) *
               std::log(static_cast<double>(m_) / static_cast<double>(zeros));
    }
    return raw;
  }

  void merge(const HllSketch& other) {
    if (m_ != other.m_ || seed_.value != other.seed_.value)
      throw Error("merge", "HyperLogLog sketches differ in register count or seed");
    for (std::size_t i = 0; i < m_; ++i) registers_[i] = std::max(registers_[i], other.registers_[i]);
  }

  static double alpha(std::size_t registers) {
    switch (registers) {
      case 16: return 0.673;
      case 32: return 0.697;
      case 64: return 0.709;
      default: return 0.7213 / (1.0 + 1.079 / static_cast<double>(registers));
    }
  }

  std::size_t register_count() const noexcept { return m_; }
  unsigned log2_registers() const noexcept { return b_; }
  HashSeed seed() const noexcept { return seed_; }
  const std::vector<std::uint8_t>& registers() const noexcept { return registers_; }
  std::vector<std::uint8_t>& registers() noexcept { return registers_; }

  friend bool operator==(const HllSketch& a, const HllSketch& b) {
    return a.b_ == b.b_ && a.seed_.value == b.seed_.value && a.registers_ == b.registers_;
  }

private:
  unsigned b_;
  std::size_t m_;
  HashSeed seed_;
  TabulationHash hash_;
  std::vector<std::uint8_t> registers_;
};

inline HllSketch merged(HllSketch a, const HllSketch& b) {
  a.merge(b);
  return a;
}

}  // namespace streamkit
