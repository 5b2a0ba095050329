#include "feplab/mapping.hpp"

#include <stdexcept>

namespace feplab {

namespace {

void check_supercritical(int n, int k) {
  if (2 * k <= n || k > n)
    throw std::invalid_argument("need N/2 < K <= N");
}

}  // namespace

MappedPair phi(int rank, const FepConfiguration& eta) {
  const int n = eta.sites();
  const int k_total = eta.particles();
  check_supercritical(n, k_total);
  if (rank < 1 || rank > k_total)
    throw std::out_of_range("rank out of range");
  if (!is_ergodic(eta))
    throw std::invalid_argument("phi requires an ergodic configuration");

  const std::vector<int> pos = particle_positions(eta);
  std::vector<std::uint8_t> sigma(static_cast<std::size_t>(k_total), 0);
  for (int l = 1; l <= k_total; ++l) {
    // Circular gap between particles of rank k+l-1 and k+l; ergodicity makes
    // it 1 or 2.
    const int hi = (rank + l - 1) % k_total;          // 0-based rank k+l
    const int lo = (rank + l - 2 + k_total) % k_total;  // 0-based rank k+l-1
    int gap = pos[static_cast<std::size_t>(hi)] - pos[static_cast<std::size_t>(lo)];
    gap = ((gap - 1) % n + n) % n + 1;  // representative in 1..N
    sigma[static_cast<std::size_t>(l - 1)] = static_cast<std::uint8_t>(2 - gap);
  }
  return MappedPair{pos[static_cast<std::size_t>(rank - 1)],
                    SsepConfiguration(k_total, sigma)};
}

std::pair<int, FepConfiguration> phi_inverse(int position,
                                             const SsepConfiguration& sigma) {
  const int k_total = sigma.sites();
  const int p = sigma.particles();
  const int n = 2 * k_total - p;  // sum of the gaps 2 - sigma_l
  check_supercritical(n, k_total);
  if (position < 1 || position > n)
    throw std::out_of_range("position out of range");

  std::vector<std::uint8_t> occ(static_cast<std::size_t>(n), 0);
  long long site = position;
  for (int l = 0; l < k_total; ++l) {
    const int idx = static_cast<int>((site - 1) % n);
    occ[static_cast<std::size_t>(idx)] = 1;
    site += 2 - (sigma.occupied(l + 1) ? 1 : 0);
  }
  FepConfiguration eta(n, occ);
  return {rank_at(eta, position), std::move(eta)};
}

BigInt ergodic_count(int n, int k) {
  if (2 * k <= n || k > n)
    throw std::invalid_argument("ergodic component is empty unless N/2 < K <= N");
  const int p = 2 * k - n;
  // C(k, p), exact at every step when multiplying/dividing in order.
  BigInt binom = 1;
  for (int i = 1; i <= p; ++i) {
    binom *= (k - p + i);
    binom /= i;
  }
  return binom * n / k;
}

FepConfiguration sample_pi_fep(int n, int k, Rng& rng) {
  check_supercritical(n, k);
  const int position =
      1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
  SsepConfiguration sigma = sample_uniform_ssep(k, 2 * k - n, rng);
  return phi_inverse(position, sigma).second;
}

}  // namespace feplab
