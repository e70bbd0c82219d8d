#include <random>

#include "dispersia/error.hpp"
#include "dispersia/lattice.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace dispersia;

TEST_CASE("ball enumeration small cases") {
  auto s = enumerate(1, 2, Shape::ball);
  REQUIRE(s.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(s.points[static_cast<std::size_t>(i)][0] == i - 2);

  s = enumerate(2, 1, Shape::ball);
  REQUIRE(s.size() == 5);
  CHECK(s.points[0] == LatticePoint{-1, 0});
  CHECK(s.points[2] == LatticePoint{0, 0});

  CHECK(enumerate(2, 10, Shape::ball).size() == 317);
  CHECK(oracle::ball_count(2, 10) == 317);
}

TEST_CASE("enumeration matches brute force") {
  for (int d = 1; d <= 3; ++d)
    for (double N : {0.0, 0.5, 1.0, 2.5, 3.0, 7.2, 12.0}) {
      CAPTURE(d);
      CAPTURE(N);
      CHECK(static_cast<std::int64_t>(enumerate(d, N, Shape::ball).size()) == oracle::ball_count(d, N));
    }
  const auto cube = enumerate(3, 2, Shape::cube);
  CHECK(cube.size() == 125);
  for (std::size_t i = 1; i < cube.size(); ++i) CHECK(cube.points[i - 1] < cube.points[i]);
}

TEST_CASE("shapes") {
  CHECK(enumerate(2, 5, Shape::shell).size() == 12);
  CHECK(enumerate(2, 3, Shape::annulus, 0.5).size() == 8);  // |k|^2 in {8, 9}
  // |k|^2 in {17, 18, 20, 25}
  CHECK(shell_cluster(2, 5, 1).size() == 8 + 4 + 8 + 12);
  const auto one = shell_cluster(1, 3, 1);
  REQUIRE(one.size() == 2);
  CHECK(one.points[0][0] == -3);
  CHECK(one.points[1][0] == 3);
  CHECK(shell_cluster(2, 1, 0.5).size() == 4);
}

TEST_CASE("representation counts") {
  CHECK(count_representations(1, 4) == 2);
  CHECK(count_representations(2, 25) == 12);
  CHECK(count_representations(2, 3) == 0);
  CHECK(count_representations(3, 7) == 0);
  CHECK(count_representations(2, 0) == 1);
  for (int d = 1; d <= 3; ++d)
    for (std::int64_t R = 0; R <= 200; ++R) {
      CAPTURE(d);
      CAPTURE(R);
      CHECK(static_cast<std::int64_t>(count_representations(d, R)) == oracle::reps(d, R));
    }
}

TEST_CASE("shell sums reproduce ball counts") {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> dd(1, 3);
  std::uniform_int_distribution<std::int64_t> rr(0, 10000);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = dd(gen);
    const std::int64_t R = rr(gen);
    CAPTURE(d);
    CAPTURE(R);
    const auto avg = average_representation(d, std::max<std::int64_t>(R, 1));
    const std::uint64_t total = R == 0 ? 0 : avg.total;
    CHECK(total + 1 == enumerate(d, std::sqrt(static_cast<double>(R)), Shape::ball).size());
  }
}

TEST_CASE("representation averages") {
  auto a = average_representation(2, 1);
  CHECK(a.average() == 4.0);
  CHECK(a.max == 4);

  a = average_representation(1, 10);
  CHECK(a.total == 6);
  CHECK(a.average() == doctest::Approx(0.6));
  CHECK(a.max == 2);

  a = average_representation(3, 100);
  std::int64_t total = 0, mx = 0;
  for (std::int64_t n = 1; n <= 100; ++n) {
    total += oracle::reps(3, n);
    mx = std::max(mx, oracle::reps(3, n));
  }
  CHECK(static_cast<std::int64_t>(a.total) == total);
  CHECK(static_cast<std::int64_t>(a.max) == mx);
  // Lattice-point volume: sum r_3 ~ (4 pi / 3) R^{3/2}.
  CHECK(a.average() / 10.0 == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(0.05));
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(enumerate(0, 1, Shape::ball), InvalidArgument);
  CHECK_THROWS_AS(enumerate(4, 1, Shape::ball), InvalidArgument);
  CHECK_THROWS_AS(enumerate(2, -1, Shape::ball), InvalidArgument);
  CHECK_THROWS_AS(count_representations(2, -1), InvalidArgument);
  CHECK(isqrt(99) == 9);
  CHECK(isqrt(100) == 10);
}
