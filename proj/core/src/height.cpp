#include "feplab/height.hpp"

#include <stdexcept>

namespace feplab {

HeightFunction::HeightFunction(int sites, int particles,
                               std::vector<long long> scaled)
    : k_(sites), p_(particles), h_(std::move(scaled)) {
  if (k_ <= 0 || p_ < 0 || p_ > k_)
    throw std::invalid_argument("need 0 <= P <= K with K positive");
  if (h_.size() != static_cast<std::size_t>(k_) + 1)
    throw std::invalid_argument("height profile must have K+1 vertices");
  if (h_.front() != h_.back())
    throw std::invalid_argument("height profile must close up: h_0 == h_K");
  if (h_.front() % k_ != 0)
    throw std::invalid_argument("anchor height must be a multiple of K");
  int ups = 0;
  for (int j = 1; j <= k_; ++j) {
    const long long step = h_[static_cast<std::size_t>(j)] -
                           h_[static_cast<std::size_t>(j - 1)];
    if (step == k_ - p_)
      ++ups;
    else if (step != -p_)
      throw std::invalid_argument("height steps must be K-P or -P");
  }
  if (ups != p_)
    throw std::invalid_argument("height profile must have exactly P up-steps");
}

HeightFunction psi(long long anchor, const SsepConfiguration& sigma) {
  const int k = sigma.sites();
  const int p = sigma.particles();
  std::vector<long long> h(static_cast<std::size_t>(k) + 1);
  h[0] = -anchor * k;
  for (int j = 1; j <= k; ++j)
    h[static_cast<std::size_t>(j)] =
        h[static_cast<std::size_t>(j - 1)] + (sigma.occupied(j) ? k - p : -p);
  return HeightFunction(k, p, std::move(h));
}

std::pair<long long, SsepConfiguration> psi_inverse(const HeightFunction& zeta) {
  const int k = zeta.sites();
  const int p = zeta.particles();
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(k), 0);
  for (int j = 1; j <= k; ++j)
    occ[static_cast<std::size_t>(j - 1)] =
        (zeta.at(j) - zeta.at(j - 1) == k - p) ? 1 : 0;
  return {zeta.anchor(), SsepConfiguration(k, occ)};
}

}  // namespace feplab
