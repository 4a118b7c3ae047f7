#include "lsoup/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using lsoup::Philox4x32;

TEST_CASE("philox known answers") {
  using Block = Philox4x32::Block;
  using Key = Philox4x32::Key;
  CHECK(Philox4x32::bijection(Block{0, 0, 0, 0}, Key{0, 0}) == Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::bijection(Block{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, Key{0xffffffff, 0xffffffff}) ==
        Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::bijection(Block{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, Key{0xa4093822, 0x299f31d0}) ==
        Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  auto a = lsoup::make_rng(7, {1, 2});
  auto b = lsoup::make_rng(7, {1, 2});
  auto c = lsoup::make_rng(7, {1, 3});
  auto d = lsoup::make_rng(8, {1, 2});
  int same_c = 0, same_d = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto x = a();
    CHECK(x == b());
    same_c += x == c();
    same_d += x == d();
  }
  CHECK(same_c == 0);
  CHECK(same_d == 0);
  CHECK(lsoup::stream_id({1, 2}) != lsoup::stream_id({2, 1}));
}

TEST_CASE("uniform stays in the open unit interval") {
  auto rng = lsoup::make_rng(1, {0});
  double sum = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12/n)
  CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}
