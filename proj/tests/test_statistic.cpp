#include <doctest.h>

#include <cmath>

#include "feplab/statistic.hpp"
#include "support/oracles.hpp"

using namespace feplab;

TEST_CASE("statistic on alternating and clustered words") {
  // Perfect alternation: the centred walk oscillates between 0 and 1/2.
  const auto alternating = SsepConfiguration::from_bits("10101010");
  CHECK(fluctuation_statistic(alternating) == doctest::Approx(0.5));

  // Fully clustered word: maximum at the block boundary, P(1 - P/K).
  const auto clustered = SsepConfiguration::from_bits("1110000000");
  CHECK(fluctuation_statistic(clustered) == doctest::Approx(3.0 * 0.7));
}

TEST_CASE("height walk equals the quadratic brute force") {
  Rng rng = make_rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(uniform_below(rng, 62));
    const int p = static_cast<int>(
        uniform_below(rng, static_cast<std::uint64_t>(n) + 1));
    const auto sigma = sample_uniform_ssep(n, p, rng);
    CHECK(fluctuation_statistic(sigma) ==
          doctest::Approx(testsupport::brute_force_statistic(sigma))
              .epsilon(1e-12));
    const auto eta = FepConfiguration(n, sigma.to_bytes());
    CHECK(fluctuation_statistic(eta) ==
          doctest::Approx(testsupport::brute_force_statistic(eta))
              .epsilon(1e-12));
  }
}

TEST_CASE("max deviation segment realizes the statistic") {
  Rng rng = make_rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + static_cast<int>(uniform_below(rng, 28));
    const int k = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    const auto eta = FepConfiguration(n, sample_uniform_ssep(n, k, rng).to_bytes());
    const auto segment = max_deviation_segment(eta);
    CHECK(std::abs(segment.deviation) ==
          doctest::Approx(fluctuation_statistic(eta)).epsilon(1e-12));
    // Recompute the deviation of the reported clockwise segment directly.
    int length = segment.end - segment.start;
    length = (length % n + n) % n + 1;
    int filled = 0;
    for (int j = 0; j < length; ++j)
      if (eta.occupied(segment.start + j)) ++filled;
    const double expected =
        filled - static_cast<double>(eta.particles()) / n * length;
    CHECK(segment.deviation == doctest::Approx(expected).epsilon(1e-12));
  }
}
