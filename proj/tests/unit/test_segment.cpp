#include <doctest.h>

#include <random>

#include "tadkit/error.hpp"
#include "tadkit/fake_proposals.hpp"
#include "tadkit/segment.hpp"

using namespace tadkit;

TEST_CASE("tiou basics") {
  CHECK(tiou({3, 7}, {3, 7}) == 1.0);
  CHECK(tiou({0, 1}, {2, 3}) == 0.0);
  CHECK(tiou({0, 2}, {1, 3}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // touching segments do not overlap
  CHECK(tiou({0, 1}, {1, 2}) == 0.0);
}

TEST_CASE("tiou properties on random segments") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  for (int i = 0; i < 500; ++i) {
    double a0 = coord(rng), a1 = coord(rng), b0 = coord(rng), b1 = coord(rng);
    if (a0 == a1 || b0 == b1) continue;
    Segment a{std::min(a0, a1), std::max(a0, a1)};
    Segment b{std::min(b0, b1), std::max(b0, b1)};
    const double v = tiou(a, b);
    CHECK(v == tiou(b, a));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK((v == 1.0) == (a == b));
    // invariant under a common shift
    const double shift = coord(rng);
    Segment a2{a.start + shift, a.end + shift};
    Segment b2{b.start + shift, b.end + shift};
    CHECK(tiou(a2, b2) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("clamp_segment") {
  CHECK(clamp_segment({-1, 5}, 30) == Segment{0, 5});
  CHECK(clamp_segment({10, 50}, 30) == Segment{10, 30});
  CHECK(clamp_segment({2, 3}, 30) == Segment{2, 3});
  CHECK_THROWS_AS(clamp_segment({40, 50}, 30), Error);
  CHECK_THROWS_AS(clamp_segment({2, 3}, 0.0), Error);
}

TEST_CASE("fake proposals: zero offset reproduces the ground truth") {
  const auto fps = generate_fake_proposals({10, 20}, {0.0});
  REQUIRE(fps.size() == 1);
  CHECK(fps[0].segment == Segment{10, 20});
  CHECK(fps[0].dstart == 0.0);
  CHECK(fps[0].dend == 0.0);
}

TEST_CASE("fake proposals: 3x3 grid and a hand-checked target") {
  const auto fps = generate_fake_proposals({10, 20}, {-0.1, 0.0, 0.1});
  CHECK(fps.size() == 9);

  // pair (f_start=+0.1, f_end=0) shifts the left boundary to 11
  const auto one = generate_fake_proposals({10, 20}, {0.1});
  bool found = false;
  for (const auto& fp : fps) {
    if (fp.segment == Segment{11, 20}) {
      found = true;
      CHECK(fp.dstart == doctest::Approx(-1.0 / 9.0).epsilon(1e-12));
      CHECK(fp.dend == 0.0);
    }
  }
  CHECK(found);
  CHECK(one.size() == 1);  // single positive offset still yields a valid pair
}

TEST_CASE("fake proposals: row-major pair order") {
  const auto fps = generate_fake_proposals({0, 10}, {-0.1, 0.1});
  REQUIRE(fps.size() == 4);
  CHECK(fps[0].segment == Segment{-1, 9});    // (-0.1, -0.1)
  CHECK(fps[1].segment == Segment{-1, 11});   // (-0.1, +0.1)
  CHECK(fps[2].segment == Segment{1, 9});     // (+0.1, -0.1)
  CHECK(fps[3].segment == Segment{1, 11});    // (+0.1, +0.1)
}

TEST_CASE("fake proposals: input validation") {
  CHECK_THROWS_AS(generate_fake_proposals({0, 1}, {0.5}), Error);
  CHECK_THROWS_AS(generate_fake_proposals({0, 1}, {}), Error);
  CHECK_THROWS_AS(generate_fake_proposals({5, 5}, {0.0}), Error);
}

TEST_CASE("fake proposals: targets reconstruct the ground truth") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> start(0.0, 1000.0);
  std::uniform_real_distribution<double> len(0.01, 300.0);
  const auto offsets = default_offsets();
  for (int i = 0; i < 200; ++i) {
    Segment gt{start(rng), 0};
    gt.end = gt.start + len(rng);
    for (const auto& fp : generate_fake_proposals(gt, offsets)) {
      const double d = fp.segment.duration();
      CHECK(fp.segment.start + fp.dstart * d == doctest::Approx(gt.start).epsilon(1e-12));
      CHECK(fp.segment.end + fp.dend * d == doctest::Approx(gt.end).epsilon(1e-12));
    }
  }
}
