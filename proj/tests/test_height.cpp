#include <doctest.h>

#include "feplab/height.hpp"

using namespace feplab;

TEST_CASE("height map on the worked example") {
  const auto sigma = SsepConfiguration::from_bits("1010");
  const auto zeta = psi(0, sigma);
  CHECK(zeta.scaled_heights() == std::vector<long long>{0, 2, 0, 2, 0});

  const auto shifted = psi(3, sigma);
  CHECK(shifted.scaled_heights() ==
        std::vector<long long>{-12, -10, -12, -10, -12});
  CHECK(shifted.anchor() == 3);
}

TEST_CASE("height map round trips") {
  Rng rng = make_rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(uniform_below(rng, 30));
    const int p = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(k) + 1));
    const long long y = uniform_int(rng, -50, 50);
    const auto sigma = sample_uniform_ssep(k, p, rng);
    const auto [y_back, sigma_back] = psi_inverse(psi(y, sigma));
    CHECK(y_back == y);
    CHECK(sigma_back == sigma);
  }
}

TEST_CASE("height profiles validate their invariants") {
  // Mismatched endpoints.
  CHECK_THROWS_AS(HeightFunction(4, 2, {0, 2, 0, 2, 4}), std::invalid_argument);
  // Anchor not a multiple of K.
  CHECK_THROWS_AS(HeightFunction(4, 2, {1, 3, 1, 3, 1}), std::invalid_argument);
  // Wrong step size.
  CHECK_THROWS_AS(HeightFunction(4, 2, {0, 3, 0, 2, 0}), std::invalid_argument);
  // Wrong number of up-steps.
  CHECK_THROWS_AS(HeightFunction(4, 1, {0, 2, 0, 2, 0}), std::invalid_argument);
}
