#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "feplab/mapping.hpp"
#include "feplab/statistic.hpp"
#include "support/stats.hpp"

using namespace feplab;

TEST_CASE("static mapping on the worked example") {
  const auto eta = FepConfiguration::from_bits("110110");
  const auto first = phi(1, eta);
  CHECK(first.position == 1);
  CHECK(first.ssep.to_string() == "1010");
  const auto second = phi(2, eta);
  CHECK(second.position == 2);
  CHECK(second.ssep.to_string() == "0101");

  const auto full = FepConfiguration::from_bits("11111");
  const auto mapped = phi(1, full);
  CHECK(mapped.position == 1);
  CHECK(mapped.ssep.to_string() == "11111");
}

TEST_CASE("phi rejects non-ergodic input") {
  CHECK_THROWS_AS(phi(1, FepConfiguration::from_bits("110011")),
                  std::invalid_argument);
}

TEST_CASE("inverse mapping on the worked example") {
  const auto [k1, eta1] = phi_inverse(1, SsepConfiguration::from_bits("1010"));
  CHECK(k1 == 1);
  CHECK(eta1.to_string() == "110110");
  const auto [k2, eta2] = phi_inverse(2, SsepConfiguration::from_bits("0101"));
  CHECK(k2 == 2);
  CHECK(eta2.to_string() == "110110");

  // sigma all-ones maps to the full circle at any tag.
  const auto [k3, eta3] = phi_inverse(4, SsepConfiguration::from_bits("11111"));
  CHECK(eta3.to_string() == "11111");
  CHECK(k3 == 4);
}

TEST_CASE("bijectivity on every small instance") {
  for (int n = 2; n <= 10; ++n) {
    for (int k = n / 2 + 1; k <= n; ++k) {
      const auto ergodic = enumerate_configurations(n, k, true);
      std::set<std::pair<int, std::string>> images;
      for (const auto& eta : ergodic) {
        for (int rank = 1; rank <= k; ++rank) {
          const auto pair = phi(rank, eta);
          CHECK(pair.ssep.particles() == 2 * k - n);
          images.emplace(pair.position, pair.ssep.to_string());
          const auto [rank_back, eta_back] =
              phi_inverse(pair.position, pair.ssep);
          CHECK(rank_back == rank);
          CHECK(eta_back == eta);
        }
      }
      // Injective and counting identity K|E| = N C(K,2K-N): image covers all.
      const auto layer = enumerate_configurations(k, 2 * k - n, false);
      CHECK(images.size() == ergodic.size() * static_cast<std::size_t>(k));
      CHECK(images.size() == layer.size() * static_cast<std::size_t>(n));
    }
  }
}

TEST_CASE("counting formula against enumeration") {
  CHECK(ergodic_count(6, 4) == 9);
  CHECK(ergodic_count(12, 12) == 1);
  // Frozen via the enumeration oracle.
  CHECK(ergodic_count(8, 5) == 16);
  CHECK(enumerate_configurations(8, 5, true).size() == 16);
  CHECK_THROWS_AS(ergodic_count(8, 4), std::invalid_argument);
}

TEST_CASE("stationary sampler lands on ergodic configurations") {
  Rng rng = make_rng(11);
  for (int i = 0; i < 200; ++i)
    CHECK(is_ergodic(sample_pi_fep(9, 6, rng)));
  CHECK(sample_pi_fep(5, 5, rng).to_string() == "11111");
}

TEST_CASE("stationary sampler is uniform over the ergodic component") {
  Rng rng = make_rng(321);
  const auto ergodic = enumerate_configurations(6, 4, true);
  std::map<std::string, long> counts;
  const int samples = 90000;
  for (int i = 0; i < samples; ++i)
    ++counts[sample_pi_fep(6, 4, rng).to_string()];
  CHECK(counts.size() == 9);
  const double expected = samples / 9.0;
  const double tol = 3.0 * std::sqrt(expected * (1.0 - 1.0 / 9.0));
  for (const auto& [word, c] : counts)
    CHECK(std::abs(static_cast<double>(c) - expected) < tol);
}

TEST_CASE("segment density identity between mapped pictures") {
  // For sigma = phi(k,eta).ssep and any sigma-segment J, the FEP segment I
  // that starts at the matching particle satisfies
  // |eta_I| - (K/N)|I| = (K/N) sum_{j in J} (sigma_j - P/K), exactly.
  for (int n : {6, 7, 9}) {
    for (int k = n / 2 + 1; k < n; ++k) {
      const int p = 2 * k - n;
      for (const auto& eta : enumerate_configurations(n, k, true)) {
        for (int rank = 1; rank <= k; ++rank) {
          const auto pair = phi(rank, eta);
          for (int a = 1; a <= k; ++a) {
            for (int len = 1; len <= k; ++len) {
              double sigma_sum = 0.0;
              int span = 0;
              for (int j = 0; j < len; ++j) {
                const bool occ = pair.ssep.occupied(a + j);
                sigma_sum += (occ ? 1.0 : 0.0) - static_cast<double>(p) / k;
                span += occ ? 1 : 2;
              }
              // I starts at the particle of rank k0 + a - 1.
              const int start =
                  particle_position(eta, (rank + a - 2) % k + 1);
              int filled = 0;
              for (int j = 0; j < span; ++j)
                if (eta.occupied(start + j)) ++filled;
              const double lhs =
                  filled - static_cast<double>(k) / n * span;
              const double rhs = static_cast<double>(k) / n * sigma_sum;
              CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            }
          }
        }
      }
    }
  }
}
