#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qkd/boundary.hpp"
#include "qkd/entropy.hpp"

using namespace qkd;

TEST_SUITE_BEGIN("boundary");

TEST_CASE("apply_sequence identity and yields") {
  const BellDiagonal s{0.8, 0.1, 0.0, 0.1};
  const SequenceApplication id = apply_sequence(s, "");
  CHECK(id.yield_factor == 1.0);
  CHECK(id.state.q00 == s.q00);

  const SequenceApplication one_b = apply_sequence(s, "B");
  CHECK(one_b.yield_factor == doctest::Approx(0.41).epsilon(1e-14));
  CHECK(one_b.state.q00 ==
        doctest::Approx(0.7926829268292684).epsilon(1e-14));

  const SequenceApplication two_b = apply_sequence(s, "BB");
  CHECK(two_b.yield_factor ==
        doctest::Approx(0.41 * 0.5 * 0.9759071980963712).epsilon(1e-12));

  const SequenceApplication p = apply_sequence(s, "P");
  CHECK(p.yield_factor == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  CHECK_THROWS_AS(apply_sequence(s, "BX"), std::invalid_argument);
}

TEST_CASE("security search basics") {
  const SecuritySearchResult direct = secure_with_some_sequence(0.05, 0.05, 0);
  CHECK(direct.secure);
  CHECK(direct.witness.empty());

  CHECK(secure_with_some_sequence(0.15, 0.15, 12).secure);
  CHECK_FALSE(secure_with_some_sequence(0.24, 0.25, 12).secure);

  CHECK_THROWS_AS(secure_with_some_sequence(0.3, 0.2, 2), std::domain_error);
  CHECK_THROWS_AS(secure_with_some_sequence(0.3, 0.3, 2), std::domain_error);
  CHECK_THROWS_AS(secure_with_some_sequence(0.1, 0.1, 13),
                  std::invalid_argument);
}

TEST_CASE("witness re-applies to a positive hashing rate") {
  for (double delta : {0.12, 0.14, 0.16, 0.18}) {
    const SecuritySearchResult r = secure_with_some_sequence(delta, delta, 12);
    REQUIRE(r.secure);
    const BellDiagonal start{1.0 - 2.0 * delta, delta, 0.0, delta};
    const SequenceApplication app = apply_sequence(start, r.witness);
    const ErrorRates rates = rates_of(app.state);
    CHECK(hashing_rate(rates.bit, rates.phase) > kPositiveRateFloor);
    CHECK(app.yield_factor > 0.0);
  }
}

TEST_CASE("witness is shortest, B before P") {
  // At 0.15 both two-step searches succeed; BB must be reported first.
  const SecuritySearchResult r = secure_with_some_sequence(0.15, 0.15, 12);
  CHECK(r.witness == "BB");
}

TEST_CASE("allowing more steps never shrinks the secure set") {
  for (double delta : {0.05, 0.10, 0.13, 0.16, 0.18}) {
    for (int k = 0; k < 4; ++k) {
      if (secure_with_some_sequence(delta, delta, k).secure) {
        CHECK(secure_with_some_sequence(delta, delta, k + 1).secure);
      }
    }
  }
}

TEST_CASE("diagonal thresholds") {
  // 1 - 2 H2(x) = 0 at x = 0.1100278644...
  const double t0 = diagonal_threshold(0, 1e-4);
  CHECK(std::abs(t0 - 0.1100278644) < 5e-4);
  const double t1 = diagonal_threshold(1, 1e-4);
  CHECK(std::abs(t1 - 0.138281) < 1e-3);
  CHECK(t1 > t0 + 0.01);
  CHECK_THROWS_AS(diagonal_threshold(1, 0.0), std::invalid_argument);
}

TEST_CASE("region scan respects the separability cut and refines rows") {
  const auto region = boundary_region(0.02, 2, 1e-5, 2);
  CHECK_FALSE(region.empty());
  bool has_refined = false;
  for (const RegionPoint& p : region) {
    CHECK(p.delta_b <= p.delta_p + 1e-12);
    CHECK(p.delta_b + p.delta_p < 0.5);
    if (p.refined) {
      has_refined = true;
      CHECK(p.secure);
    }
  }
  CHECK(has_refined);
  // deterministic: same call gives identical points
  const auto again = boundary_region(0.02, 2, 1e-5, 1);
  REQUIRE(again.size() == region.size());
  for (std::size_t i = 0; i < region.size(); ++i) {
    CHECK(region[i].delta_p == again[i].delta_p);
    CHECK(region[i].secure == again[i].secure);
    CHECK(region[i].witness == again[i].witness);
  }
}

TEST_SUITE_END();
