#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "streamkit/errors.hpp"
#include "streamkit/hashing.hpp"

namespace streamkit {

/// Item drawn from the nonzero-frequency support of a turnstile stream,
/// together with its net count.
struct SampleOutcome {
  std::uint64_t item;
  std::int64_t value;
};

/// L0 sampler over a turnstile stream on [0, domain): returns a uniformly
/// random item among those with nonzero net count, or fails.
///
/// Structure: `repetitions` independent ladders, each with
/// floor(log2(domain)) + 1 one-sparse recovery units. An item belongs to
/// ladder level j when its level hash is divisible by 2^j, so level j
/// subsamples the support at rate 2^-j. Each unit keeps
/// (sum c, sum c*i, sum c*r^i mod p); a level is one-sparse exactly when the
/// recovered item explains all three sums. Sampling scans each ladder from
/// the most subsampled level down and returns the first level that passes
/// the one-sparse test. The whole state is linear in the updates, so
/// same-seed samplers merge by addition and deletions cancel exactly.
///
/// A single ladder fails (no one-sparse level) on roughly a quarter of
/// supports; the independent repetitions drive that below a few percent
/// while keeping the draw uniform.
class L0Sampler {
public:
  L0Sampler(std::uint64_t domain, HashSeed seed, unsigned repetitions = 3)
      : domain_(domain), seed_(seed), reps_(repetitions) {
    if (domain == 0) throw Error("validation", "domain must be positive");
    if (repetitions == 0) throw Error("validation", "need at least one repetition");
    levels_ = 1;
    while ((std::uint64_t{1} << levels_) < domain_ && levels_ < 63) ++levels_;
    ++levels_;  // floor(log2(domain)) + 1 levels, indices 0..levels_-1
    units_.assign(static_cast<std::size_t>(reps_) * levels_, Unit{});
    chains_.reserve(reps_);
    for (unsigned c = 0; c < reps_; ++c) {
      HashSeed sub = mix_seed(seed, c);
      chains_.push_back(Chain{
          TabulationHash(mix_seed(sub, 0), 2),
          2 + Rng(mix_seed(sub, 1)).next_below(kPrime61 - 3),
      });
    }
  }

  void update(std::uint64_t item, std::int64_t delta) {
    if (item >= domain_) throw Error("domain", "item outside sampler domain");
    if (delta == 0) return;
    for (unsigned c = 0; c < reps_; ++c) {
      const Chain& chain = chains_[c];
      unsigned depth = trailing_zeros(chain.level_hash.full(item));
      if (depth >= levels_) depth = levels_ - 1;
      std::uint64_t tag = detail::pow_mod61(chain.fingerprint_base, item);
      for (unsigned j = 0; j <= depth; ++j) {
        Unit& u = unit(c, j);
        u.count += delta;
        u.weighted += static_cast<__int128>(delta) * static_cast<__int128>(item);
        u.fingerprint = add_signed_mod61(u.fingerprint, delta, tag);
      }
    }
  }

  std::optional<SampleOutcome> sample() const {
    for (unsigned c = 0; c < reps_; ++c) {
      for (unsigned j = levels_; j-- > 0;) {
        const Unit& u = unit(c, j);
        if (u.count == 0 && u.weighted == 0 && u.fingerprint == 0) continue;
        auto candidate = recover_one_sparse(u, chains_[c]);
        if (candidate) return candidate;
      }
    }
    return std::nullopt;
  }

  void merge(const L0Sampler& other) {
    if (domain_ != other.domain_ || seed_.value != other.seed_.value || reps_ != other.reps_)
      throw Error("merge", "L0 samplers differ in domain, seed, or repetitions");
    for (std::size_t i = 0; i < units_.size(); ++i) {
      units_[i].count += other.units_[i].count;
      units_[i].weighted += other.units_[i].weighted;
      units_[i].fingerprint = detail::add_mod61(units_[i].fingerprint, other.units_[i].fingerprint);
    }
  }

  std::uint64_t domain() const noexcept { return domain_; }
  HashSeed seed() const noexcept { return seed_; }
  unsigned repetitions() const noexcept { return reps_; }
  unsigned levels() const noexcept { return levels_; }

  bool empty_state() const {
    for (const Unit& u : units_)
      if (u.count != 0 || u.weighted != 0 || u.fingerprint != 0) return false;
    return true;
  }

  friend bool operator==(const L0Sampler& a, const L0Sampler& b) {
    if (a.domain_ != b.domain_ || a.seed_.value != b.seed_.value || a.reps_ != b.reps_)
      return false;
    for (std::size_t i = 0; i < a.units_.size(); ++i) {
      if (a.units_[i].count != b.units_[i].count ||
          a.units_[i].weighted != b.units_[i].weighted ||
          a.units_[i].fingerprint != b.units_[i].fingerprint)
        return false;
    }
    return true;
  }

private:
  struct Unit {
    std::int64_t count = 0;     // sum of deltas
    __int128 weighted = 0;      // sum of delta * item
    std::uint64_t fingerprint = 0;  // sum of delta * r^item mod p
  };

  struct Chain {
    TabulationHash level_hash;      // full 64-bit word decides the level depth
    std::uint64_t fingerprint_base; // r in [2, p-2]
  };

  Unit& unit(unsigned chain, unsigned level) {
    return units_[static_cast<std::size_t>(chain) * levels_ + level];
  }
  const Unit& unit(unsigned chain, unsigned level) const {
    return units_[static_cast<std::size_t>(chain) * levels_ + level];
  }

  static unsigned trailing_zeros(std::uint64_t x) {
    if (x == 0) return 64;
    return static_cast<unsigned>(__builtin_ctzll(x));
  }

  static std::uint64_t add_signed_mod61(std::uint64_t acc, std::int64_t delta, std::uint64_t tag) {
    std::uint64_t mag = detail::mul_mod61(
        static_cast<std::uint64_t>(delta < 0 ? -delta : delta) % kPrime61, tag);
    if (delta >= 0) return detail::add_mod61(acc, mag);
    return detail::add_mod61(acc, kPrime61 - mag);  // mag < p
  }

  std::optional<SampleOutcome> recover_one_sparse(const Unit& u, const Chain& chain) const {
    if (u.count == 0) return std::nullopt;
    __int128 count = u.count;
    if (u.weighted % count != 0) return std::nullopt;
    __int128 item = u.weighted / count;
    if (item < 0 || item >= static_cast<__int128>(domain_)) return std::nullopt;
    auto id = static_cast<std::uint64_t>(item);
    std::uint64_t expect = 0;
    expect = add_signed_mod61(expect, u.count, detail::pow_mod61(chain.fingerprint_base, id));
    if (expect != u.fingerprint) return std::nullopt;
    return SampleOutcome{id, u.count};
  }

  std::uint64_t domain_;
  HashSeed seed_;
  unsigned reps_;
  unsigned levels_;
  std::vector<Chain> chains_;
  std::vector<Unit> units_;
};

}  // namespace streamkit
