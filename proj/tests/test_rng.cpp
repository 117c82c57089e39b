#include <doctest.h>

#include <algorithm>
#include <cstdint>

#include "fdrot/rng.hpp"

using namespace fdrot;

TEST_CASE("xoshiro streams are deterministic per seed") {
  Xoshiro256 a(42), b(42), c(43);
  bool all_equal = true;
  bool any_differ = false;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t va = a.next();
    all_equal = all_equal && (va == b.next());
    any_differ = any_differ || (va != c.next());
  }
  CHECK(all_equal);
  CHECK(any_differ);
}

TEST_CASE("substreams differ from each other and the base stream") {
  Xoshiro256 s0 = Xoshiro256::substream(7, 0);
  Xoshiro256 s1 = Xoshiro256::substream(7, 1);
  Xoshiro256 t0 = Xoshiro256::substream(7, 0);
  CHECK(s0.next() != s1.next());
  Xoshiro256 s0b = Xoshiro256::substream(7, 0);
  CHECK(s0b.next() == t0.next());
}

TEST_CASE("uniform01 stays in [0,1) and is roughly centered") {
  Xoshiro256 rng(1234);
  double sum = 0.0;
  double lo = 1.0, hi = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    sum += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform(lo,hi) respects its interval") {
  Xoshiro256 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform(-2.0, 3.0);
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
  }
}

TEST_CASE("uniform01_open_low excludes zero") {
  Xoshiro256 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform01_open_low();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}
