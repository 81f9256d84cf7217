#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "streamkit/counters.hpp"
#include "streamkit/errors.hpp"
#include "streamkit/freq_sketches.hpp"

namespace streamkit {

// Self-describing binary blobs for the sketch types: 4-byte magic "SKBL",
// one type tag byte, a format version, then the sketch parameters (seed and
// shape) followed by its registers. All integers little-endian, doubles
// not stored (sketch state is integral). Stable within a major version.

namespace blob {

inline constexpr char kMagic[4] = {'S', 'K', 'B', 'L'};
inline constexpr std::uint16_t kVersion = 1;

enum class Tag : std::uint8_t {
  kMorris = 1,
  kMorrisPlus = 2,
  kFmBitmap = 3,
  kHll = 4,
  kBloom = 5,
  kCountMin = 6,
  kCountSketch = 7,
  kFkEstimator = 8,
};

inline void write_u8(std::ostream& os, std::uint8_t v) {
  os.put(static_cast<char>(v));
}

inline void write_u16(std::ostream& os, std::uint16_t v) {
  for (int i = 0; i < 2; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void write_u64(std::ostream& os, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void write_i64(std::ostream& os, std::int64_t v) {
  write_u64(os, static_cast<std::uint64_t>(v));
}

inline std::uint8_t read_u8(std::istream& is) {
  int c = is.get();
  if (c == std::char_traits<char>::eof()) throw Error("parse", "sketch blob truncated");
  return static_cast<std::uint8_t>(c);
}

inline std::uint16_t read_u16(std::istream& is) {
  std::uint16_t v = 0;
  for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(read_u8(is)) << (8 * i);
  return v;
}

inline std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(read_u8(is)) << (8 * i);
  return v;
}

inline std::int64_t read_i64(std::istream& is) {
  return static_cast<std::int64_t>(read_u64(is));
}

inline void write_header(std::ostream& os, Tag tag) {
  os.write(kMagic, 4);
  write_u8(os, static_cast<std::uint8_t>(tag));
  write_u16(os, kVersion);
}

inline Tag read_header(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (is.gcount() != 4 || magic[0] != kMagic[0] || magic[1] != kMagic[1] ||
      magic[2] != kMagic[2] || magic[3] != kMagic[3])
    throw Error("parse", "not a sketch blob (bad magic)");
  auto tag = static_cast<Tag>(read_u8(is));
  std::uint16_t version = read_u16(is);
  if (version != kVersion)
    throw Error("parse", "unsupported sketch blob version " + std::to_string(version));
  return tag;
}

inline void expect_tag(std::istream& is, Tag want) {
  Tag got = read_header(is);
  if (got != want) throw Error("parse", "sketch blob holds a different sketch type");
}

}  // namespace blob

inline void save(const MorrisCounter& c, std::ostream& os) {
  blob::write_header(os, blob::Tag::kMorris);
  blob::write_u64(os, c.exponent());
}

inline MorrisCounter load_morris(std::istream& is) {
  blob::expect_tag(is, blob::Tag::kMorris);
  MorrisCounter c;
  c.set_exponent(static_cast<unsigned>(blob::read_u64(is)));
  return c;
}

inline void save(const MorrisPlus& m, std::ostream& os) {
  blob::write_header(os, blob::Tag::kMorrisPlus);
  blob::write_u64(os, m.copies());
  for (const auto& c : m.counters()) blob::write_u64(os, c.exponent());
}

inline MorrisPlus load_morris_plus(std::istream& is) {
  blob::expect_tag(is, blob::Tag::kMorrisPlus);
  MorrisPlus m(static_cast<std::size_t>(blob::read_u64(is)));
  for (auto& c : m.counters()) c.set_exponent(static_cast<unsigned>(blob::read_u64(is)));
  return m;
}

inline void save(const FmBitmap& f, std::ostream& os) {
  blob::write_header(os, blob::Tag::kFmBitmap);
  blob::write_u64(os, f.bits());
  blob::write_u64(os, f.seed().value);
  blob::write_u64(os, f.bitmap());
}

inline FmBitmap load_fm_bitmap(std::istream& is) {
  blob::expect_tag(is, blob::Tag::kFmBitmap);
  auto bits = static_cast<unsigned>(blob::read_u64(is));
  HashSeed seed{blob::read_u64(is)};
  FmBitmap f(bits, seed);
  f.set_bitmap(blob::read_u64(is));
  return f;
}

inline void save(const HllSketch& h, std::ostream& os) {
  blob::write_header(os, blob::Tag::kHll);
  blob::write_u64(os, h.log2_registers());
  blob::write_u64(os, h.seed().value);
  for (std::uint8_t r : h.registers()) blob::write_u8(os, r);
}

inline HllSketch load_hll(std::istream& is) {
  blob::expect_tag(is, blob::Tag::kHll);
  auto b = static_cast<unsigned>(blob::read_u64(is));
  HashSeed seed{blob::read_u64(is)};
  HllSketch h(b, seed);
  for (auto& r : h.registers()) r = blob::read_u8(is);
  return h;
}

inline void save(const BloomFilter& f, std::ostream& os) {
  blob::write_header(os, blob::Tag::kBloom);
  blob::write_u64(os, f.bit_count());
  blob::write_u64(os, f.hash_count());
  blob::write_u64(os, f.seed().value);
  for (std::uint64_t w : f.words()) blob::write_u64(os, w);
}

inline BloomFilter load_bloom(std::istream& is) {
  blob::expect_tag(is, blob::Tag::kBloom);
  auto bits = static_cast<std::size_t>(blob::read_u64(is));
  auto k = static_cast<std::size_t>(blob::read_u64(is));
  HashSeed seed{blob::read_u64(is)};
  BloomFilter f(bits, k, seed);
  for (auto& w : f.words()) w = blob::read_u64(is);
  return f;
}

inline void save(const CmSketch& s, std::ostream& os) {
  blob::write_header(os, blob::Tag::kCountMin);
  blob::write_u64(os, s.width());
  blob::write_u64(os, s.depth());
  blob::write_u8(os, static_cast<std::uint8_t>(s.model()));
  blob::write_u64(os, s.seed().value);
  for (std::int64_t c : s.counters()) blob::write_i64(os, c);
}

inline CmSketch load_cm(std::istream& is) {
  blob::expect_tag(is, blob::Tag::kCountMin);
  auto w = static_cast<std::size_t>(blob::read_u64(is));
  auto d = static_cast<std::size_t>(blob::read_u64(is));
  auto model = static_cast<StreamModel>(blob::read_u8(is));
  HashSeed seed{blob::read_u64(is)};
  CmSketch s(w, d, model, seed);
  for (auto& c : s.counters()) c = blob::read_i64(is);
  return s;
}

inline void save(const CountSketch& s, std::ostream& os) {
  blob::write_header(os, blob::Tag::kCountSketch);
  blob::write_u64(os, s.width());
  blob::write_u64(os, s.depth());
  blob::write_u64(os, s.seed().value);
  for (std::int64_t c : s.counters()) blob::write_i64(os, c);
}

inline CountSketch load_count_sketch(std::istream& is) {
  blob::expect_tag(is, blob::Tag::kCountSketch);
  auto w = static_cast<std::size_t>(blob::read_u64(is));
  auto d = static_cast<std::size_t>(blob::read_u64(is));
  HashSeed seed{blob::read_u64(is)};
  CountSketch s(w, d, seed);
  for (auto& c : s.counters()) c = blob::read_i64(is);
  return s;
}

inline void save(const FkEstimator& e, std::ostream& os) {
  blob::write_header(os, blob::Tag::kFkEstimator);
  blob::write_u64(os, e.moment());
  blob::write_u64(os, e.copies());
  blob::write_u64(os, e.groups());
  blob::write_u64(os, e.seed().value);
  blob::write_u64(os, e.length());
  // the PRNG position must survive the round trip for continued streaming
  blob::write_u64(os, e.rng_state());
  for (const auto& r : e.reservoirs()) {
    blob::write_u64(os, r.item);
    blob::write_u64(os, r.tail_count);
  }
}

inline FkEstimator load_fk(std::istream& is) {
  blob::expect_tag(is, blob::Tag::kFkEstimator);
  auto k = static_cast<unsigned>(blob::read_u64(is));
  auto s1 = static_cast<std::size_t>(blob::read_u64(is));
  auto s2 = static_cast<std::size_t>(blob::read_u64(is));
  HashSeed seed{blob::read_u64(is)};
  FkEstimator e(k, s1, s2, seed);
  e.set_length(blob::read_u64(is));
  e.rng().set_state(blob::read_u64(is));
  for (auto& r : e.reservoirs()) {
    r.item = blob::read_u64(is);
    r.tail_count = blob::read_u64(is);
  }
  return e;
}

template <typename Sketch>
void save_file(const Sketch& sketch, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("parse", "cannot open file for writing: " + path);
  save(sketch, os);
  if (!os) throw Error("parse", "write failed: " + path);
}

template <typename Loader>
auto load_file(Loader loader, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("parse", "cannot open file: " + path);
  return loader(is);
}

}  // namespace streamkit
