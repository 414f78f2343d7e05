#include <doctest.h>

#include <cmath>
#include <set>

#include "pdmpwp/rng.hpp"

using pdmpwp::Philox4x32;

TEST_CASE("philox known-answer vectors") {
  // Random123 kat_vectors, philox4x32_10.
  auto zero = Philox4x32::bijection({0, 0, 0, 0}, {0, 0});
  CHECK(zero == Philox4x32::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  auto ones = Philox4x32::bijection({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                    {0xffffffffu, 0xffffffffu});
  CHECK(ones == Philox4x32::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  auto pi = Philox4x32::bijection({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                  {0xa4093822u, 0x299f31d0u});
  CHECK(pi == Philox4x32::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and distinct") {
  Philox4x32 a(42, pdmpwp::stream_id(3, 1)), b(42, pdmpwp::stream_id(3, 1));
  Philox4x32 c(42, pdmpwp::stream_id(3, 2)), d(43, pdmpwp::stream_id(3, 1));
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    CHECK(x == b());
    seen.insert(x);
    seen.insert(c());
    seen.insert(d());
  }
  CHECK(seen.size() == 3000);
  CHECK(pdmpwp::stream_id(3, 1) == ((3u << 8) | 1u));
}

TEST_CASE("uniform and exponential moments") {
  Philox4x32 rng(7, 0);
  const int n = 200000;
  double su = 0.0, se = 0.0, se2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double e = rng.exponential(2.0);
    se += e;
    se2 += e * e;
  }
  CHECK(std::abs(su / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(se / n - 0.5) < 4.0 * 0.5 / std::sqrt(n));
  CHECK(std::abs(se2 / n - 0.5) < 0.02);
  CHECK(std::isinf(rng.exponential(0.0)));
  CHECK(std::isinf(rng.exponential(-1.0)));
}

TEST_CASE("counter advances one block per two outputs") {
  Philox4x32 rng(1, 1);
  CHECK(rng.blocks_used() == 0);
  rng();
  rng();
  CHECK(rng.blocks_used() == 1);
  rng();
  CHECK(rng.blocks_used() == 2);
}
