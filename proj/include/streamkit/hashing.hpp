#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "streamkit/errors.hpp"

namespace streamkit {

/// All modular hash arithmetic is done over the Mersenne prime 2^61 - 1,
/// which dominates every practical output range and reduces fast.
inline constexpr std::uint64_t kPrime61 = (std::uint64_t{1} << 61) - 1;

/// Seed for a hash family or PRNG stream. Identical seeds produce
/// bit-identical families and therefore bit-identical sketch state.
struct HashSeed {
  std::uint64_t value = 0;
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t avalanche64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t splitmix64(std::uint64_t x) { return avalanche64(x + kGolden); }

inline std::uint64_t mod61(std::uint64_t x) { return x % kPrime61; }

inline std::uint64_t mul_mod61(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime61);
}

inline std::uint64_t add_mod61(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;  // a, b < 2^61 so no overflow
  return s >= kPrime61 ? s - kPrime61 : s;
}

inline std::uint64_t pow_mod61(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  base = mod61(base);
  while (exp != 0) {
    if (exp & 1) result = mul_mod61(result, base);
    base = mul_mod61(base, base);
    exp >>= 1;
  }
  return result;
}

}  // namespace detail

/// Sub-seed for component `index` of a family built from `seed`.
/// Distinct indices map to distinct streams (offset is injective and the
/// avalanche is a bijection), which keeps per-row hash functions independent
/// while staying reproducible from the one master seed.
inline HashSeed mix_seed(HashSeed seed, std::uint64_t index) {
  return HashSeed{detail::splitmix64(seed.value + index * detail::kGolden)};
}

/// Deterministic uniform PRNG (splitmix64: a golden-gamma Weyl sequence
/// through a 64-bit avalanche, so nearby seeds still give well-separated
/// streams). This is the only entropy source in the library; no std::
/// distribution is used anywhere so output is identical across platforms.
class Rng {
public:
  Rng() = default;
  explicit Rng(HashSeed seed) : state_(seed.value) {}

  std::uint64_t next_u64() {
    state_ += detail::kGolden;
    return detail::avalanche64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    // Rejection-free multiply-shift (Lemire); bias is < 2^-64 per draw and
    // irrelevant at the ranges used here.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  std::uint64_t state() const noexcept { return state_; }
  void set_state(std::uint64_t s) noexcept { state_ = s; }

private:
  std::uint64_t state_ = 0;
};

/// 2-universal hash h(x) = ((a*x + b) mod p) mod m with p = 2^61 - 1.
class CongruentialHash {
public:
  CongruentialHash(HashSeed seed, std::uint64_t range) {
    if (range == 0) throw Error("validation", "hash range must be positive");
    if (range > kPrime61) throw Error("validation", "hash range exceeds modulus");
    Rng rng(seed);
    a_ = 1 + rng.next_below(kPrime61 - 1);
    b_ = rng.next_below(kPrime61);
    m_ = range;
  }

  /// Explicit parameters, mainly for tests pinning (a, b).
  CongruentialHash(std::uint64_t a, std::uint64_t b, std::uint64_t range)
      : a_(a), b_(b), m_(range) {
    if (a == 0 || a >= kPrime61 || b >= kPrime61) throw Error("validation", "hash parameters out of range");
    if (range == 0 || range > kPrime61) throw Error("validation", "hash range out of range");
  }

  std::uint64_t operator()(std::uint64_t key) const {
    return detail::add_mod61(detail::mul_mod61(a_, detail::mod61(key)), b_) % m_;
  }

  std::uint64_t multiplier() const noexcept { return a_; }
  std::uint64_t offset() const noexcept { return b_; }
  std::uint64_t range() const noexcept { return m_; }
  static constexpr std::uint64_t prime() noexcept { return kPrime61; }

private:
  std::uint64_t a_, b_, m_;
};

/// 4-universal hash via a random degree-3 polynomial mod p, reduced to the
/// output range. Used wherever a variance argument needs 4-wise independence
/// (sign hashes, second-moment rows).
class PolynomialHash {
public:
  PolynomialHash(HashSeed seed, std::uint64_t range) : m_(range) {
    if (range == 0 || range > kPrime61) throw Error("validation", "hash range out of range");
    Rng rng(seed);
    for (auto& c : coeff_) c = rng.next_below(kPrime61);
    if (coeff_[3] == 0) coeff_[3] = 1;  // keep the degree at 3
  }

  std::uint64_t operator()(std::uint64_t key) const {
    std::uint64_t x = detail::mod61(key);
    std::uint64_t acc = coeff_[3];
    for (int i = 2; i >= 0; --i) acc = detail::add_mod61(detail::mul_mod61(acc, x), coeff_[i]);
    return acc % m_;
  }

  std::uint64_t range() const noexcept { return m_; }

private:
  std::array<std::uint64_t, 4> coeff_{};
  std::uint64_t m_;
};

/// Tabulation hash over the 8 bytes of the key: XOR of one random word per
/// byte (3-universal). full() yields the whole 64-bit word; operator() the
/// value reduced to the configured range.
class TabulationHash {
public:
  static constexpr std::size_t kKeyBytes = 8;

  TabulationHash(HashSeed seed, std::uint64_t range) : m_(range) {
    if (range == 0) throw Error("validation", "hash range must be positive");
    Rng rng(seed);
    for (auto& table : tables_)
      for (auto& word : table) word = rng.next_u64();
  }

  /// Explicit tables (tests use all-zero tables).
  TabulationHash(const std::array<std::array<std::uint64_t, 256>, kKeyBytes>& tables,
                 std::uint64_t range)
      : tables_(tables), m_(range) {
    if (range == 0) throw Error("validation", "hash range must be positive");
  }

  std::uint64_t full(std::uint64_t key) const {
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < kKeyBytes; ++i)
      h ^= tables_[i][(key >> (8 * i)) & 0xff];
    return h;
  }

  std::uint64_t operator()(std::uint64_t key) const { return full(key) % m_; }

  std::uint64_t range() const noexcept { return m_; }

private:
  std::array<std::array<std::uint64_t, 256>, kKeyBytes> tables_;
  std::uint64_t m_;
};

/// Sign hash g(x) in {-1, +1}: a 4-universal polynomial hash into [0, 2)
/// mapped to signs.
class SignHash {
public:
  explicit SignHash(HashSeed seed) : hash_(seed, 2) {}

  int operator()(std::uint64_t key) const { return hash_(key) == 0 ? -1 : +1; }

private:
  PolynomialHash hash_;
};

}  // namespace streamkit
