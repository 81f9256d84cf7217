#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "streamkit/serialize.hpp"

using namespace streamkit;

namespace {

template <typename Sketch, typename Loader>
Sketch round_trip(const Sketch& sketch, Loader loader) {
  std::stringstream buffer;
  save(sketch, buffer);
  return loader(buffer);
}

}  // namespace

TEST_CASE("Morris counter round trips", "[serialize]") {
  Rng rng(HashSeed{1});
  MorrisCounter c;
  for (int i = 0; i < 500; ++i) c.increment(rng);
  CHECK(round_trip(c, load_morris) == c);
}

TEST_CASE("MorrisPlus round trips", "[serialize]") {
  Rng rng(HashSeed{2});
  MorrisPlus m(16);
  for (int i = 0; i < 200; ++i) m.increment(rng);
  CHECK(round_trip(m, load_morris_plus) == m);
}

TEST_CASE("FM bitmap round trips", "[serialize]") {
  FmBitmap f(32, HashSeed{3});
  for (std::uint64_t i = 0; i < 1000; ++i) f.update(i);
  FmBitmap loaded = round_trip(f, load_fm_bitmap);
  CHECK(loaded == f);
  // same hash family afterwards: updates keep agreeing
  loaded.update(5000);
  f.update(5000);
  CHECK(loaded == f);
}

TEST_CASE("HyperLogLog round trips and keeps merging", "[serialize]") {
  HllSketch h(8, HashSeed{4});
  for (std::uint64_t i = 0; i < 5000; ++i) h.update(i);
  HllSketch loaded = round_trip(h, load_hll);
  CHECK(loaded == h);
  CHECK(loaded.estimate() == h.estimate());
  HllSketch other(8, HashSeed{4});
  other.update(999999);
  CHECK_NOTHROW(loaded.merge(other));
}

TEST_CASE("Bloom filter round trips with its query behavior", "[serialize]") {
  BloomFilter f(1 << 12, 4, HashSeed{5});
  for (std::uint64_t i = 0; i < 300; ++i) f.insert(i * 7);
  BloomFilter loaded = round_trip(f, load_bloom);
  for (std::uint64_t i = 0; i < 300; ++i) CHECK(loaded.contains(i * 7));
  Rng rng(HashSeed{6});
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t probe = rng.next_u64();
    CHECK(loaded.contains(probe) == f.contains(probe));
  }
}

TEST_CASE("Count-Min round trips counters, mode, and seed", "[serialize]") {
  CmSketch s(100, 5, StreamModel::kTurnstile, HashSeed{7});
  Rng rng(HashSeed{8});
  for (int i = 0; i < 3000; ++i)
    s.update(rng.next_below(500), static_cast<std::int64_t>(rng.next_below(9)) - 4);
  CmSketch loaded = round_trip(s, load_cm);
  CHECK(loaded == s);
  CHECK(loaded.point_query_median(123) == s.point_query_median(123));
}

TEST_CASE("Count sketch round trips", "[serialize]") {
  CountSketch s(128, 6, HashSeed{9});
  Rng rng(HashSeed{10});
  for (int i = 0; i < 3000; ++i)
    s.update(rng.next_below(400), static_cast<std::int64_t>(rng.next_below(5)) - 2);
  CountSketch loaded = round_trip(s, load_count_sketch);
  CHECK(loaded == s);
  CHECK(loaded.second_moment() == s.second_moment());
}

TEST_CASE("Fk estimator round trips mid-stream", "[serialize]") {
  FkEstimator e(2, 4, 3, HashSeed{11});
  for (std::uint64_t i = 0; i < 400; ++i) e.push(i % 23);
  std::stringstream buffer;
  save(e, buffer);
  FkEstimator loaded = load_fk(buffer);
  // continuing both must stay in lockstep: the PRNG state round-tripped
  for (std::uint64_t i = 0; i < 400; ++i) {
    e.push(i % 31);
    loaded.push(i % 31);
  }
  CHECK(loaded.estimate() == e.estimate());
}

TEST_CASE("bad magic is rejected", "[serialize]") {
  std::stringstream buffer("NOPE....");
  CHECK_THROWS_AS(load_hll(buffer), Error);
}

TEST_CASE("wrong sketch type is rejected", "[serialize]") {
  std::stringstream buffer;
  save(MorrisCounter{}, buffer);
  CHECK_THROWS_AS(load_hll(buffer), Error);
}

TEST_CASE("truncated blobs are rejected", "[serialize]") {
  HllSketch h(8, HashSeed{12});
  std::stringstream buffer;
  save(h, buffer);
  std::string bytes = buffer.str();
  std::stringstream cut(bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_AS(load_hll(cut), Error);
}
