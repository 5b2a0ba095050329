#include <doctest.h>

#include <cmath>
#include <map>

#include "feplab/configuration.hpp"
#include "feplab/mapping.hpp"
#include "support/stats.hpp"

using namespace feplab;

TEST_CASE("ergodicity predicate") {
  CHECK(is_ergodic(FepConfiguration::from_bits("110110")));
  CHECK_FALSE(is_ergodic(FepConfiguration::from_bits("110011")));
  CHECK(is_ergodic(FepConfiguration::from_bits("111111")));
  // Isolated holes wrapping the seam count as adjacent.
  CHECK_FALSE(is_ergodic(FepConfiguration::from_bits("011110")));
}

TEST_CASE("particle positions and ranks") {
  const auto eta = FepConfiguration::from_bits("110110");
  CHECK(particle_position(eta, 3) == 4);
  CHECK(particle_position(eta, 1) == 1);
  CHECK(particle_position(FepConfiguration::from_bits("011011"), 1) == 2);

  CHECK(rank_at(eta, 4) == 3);
  CHECK(rank_at(eta, 1) == 1);
  CHECK_THROWS_AS(rank_at(eta, 3), std::invalid_argument);
  CHECK_THROWS_AS(particle_position(eta, 5), std::out_of_range);
}

TEST_CASE("rank_at inverts particle_position") {
  for (const auto& eta : enumerate_configurations(7, 5, false))
    for (int k = 1; k <= 5; ++k)
      CHECK(rank_at(eta, particle_position(eta, k)) == k);
}

TEST_CASE("ergodic gaps stay within 2") {
  for (const auto& eta : enumerate_configurations(9, 6, true)) {
    const auto pos = particle_positions(eta);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const int next = pos[(i + 1) % pos.size()];
      const int gap = ((next - pos[i]) % 9 + 9) % 9 == 0
                          ? 9
                          : ((next - pos[i]) % 9 + 9) % 9;
      CHECK(gap >= 1);
      CHECK(gap <= 2);
    }
  }
}

TEST_CASE("enumeration counts and order") {
  CHECK(enumerate_configurations(6, 4, true).size() == 9);
  CHECK(enumerate_configurations(4, 4, false).size() == 1);
  CHECK(enumerate_configurations(6, 4, false).size() == 15);

  const auto all = enumerate_configurations(5, 3, false);
  // Lexicographic on the word read from site 1.
  for (std::size_t i = 1; i < all.size(); ++i)
    CHECK(all[i - 1].to_string() < all[i].to_string());

  CHECK_THROWS_AS(enumerate_configurations(21, 10, false),
                  std::invalid_argument);
}

TEST_CASE("enumeration matches the closed-form ergodic count") {
  for (int n = 2; n <= 14; ++n) {
    for (int k = n / 2 + 1; k <= n; ++k) {
      const auto count = enumerate_configurations(n, k, true).size();
      CHECK(BigInt(count) == ergodic_count(n, k));
    }
    // Strictly subcritical layers have no ergodic configuration.
    for (int k = 1; 2 * k < n; ++k)
      CHECK(enumerate_configurations(n, k, true).empty());
  }
}

TEST_CASE("uniform SSEP sampling hits the degenerate layers") {
  Rng rng = make_rng(42);
  CHECK(sample_uniform_ssep(5, 0, rng).to_string() == "00000");
  CHECK(sample_uniform_ssep(5, 5, rng).to_string() == "11111");
}

TEST_CASE("uniform SSEP sampling is exchangeable") {
  // (k=20, p=5): every site occupied with frequency 1/4 within 3 sigma.
  Rng rng = make_rng(2024);
  const int samples = 100000;
  std::vector<long> counts(20, 0);
  for (int i = 0; i < samples; ++i) {
    const auto sigma = sample_uniform_ssep(20, 5, rng);
    for (int site = 1; site <= 20; ++site)
      if (sigma.occupied(site)) ++counts[static_cast<std::size_t>(site - 1)];
  }
  const double p = 0.25;
  const double tol = 3.0 * std::sqrt(p * (1 - p) / samples);
  for (long c : counts)
    CHECK(std::abs(static_cast<double>(c) / samples - p) < tol);
}

TEST_CASE("uniform SSEP sampling is uniform over a small layer") {
  // chi-square against the uniform law on the 6-choose-2 words.
  Rng rng = make_rng(7);
  const auto layer = enumerate_configurations(6, 2, false);
  std::map<std::string, long> counts;
  const int samples = 30000;
  for (int i = 0; i < samples; ++i)
    ++counts[sample_uniform_ssep(6, 2, rng).to_string()];
  CHECK(counts.size() == layer.size());
  std::vector<long> observed;
  for (const auto& [_, c] : counts) observed.push_back(c);
  const std::vector<double> probs(layer.size(), 1.0 / layer.size());
  const double stat = testsupport::chi_square_stat(observed, probs);
  CHECK(stat < testsupport::chi_square_quantile(
                   static_cast<int>(layer.size()) - 1, 0.999));
}

TEST_CASE("packed word round trip") {
  const auto eta = FepConfiguration::from_bits("1101100101");
  CHECK(eta.to_string() == "1101100101");
  CHECK(eta.particles() == 6);
  CHECK(eta.occupied(1));
  CHECK(eta.occupied(11));  // wraps to site 1
  CHECK_FALSE(eta.occupied(0));  // wraps to site 10
}
