#ifndef FEPLAB_HEIGHT_HPP
#define FEPLAB_HEIGHT_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "feplab/configuration.hpp"

namespace feplab {

// Periodic height profile of an SSEP word with its current anchor.
//
// Heights are stored as integers scaled by K: h_j = K * zeta_j, so an
// occupied site contributes an up-step of K - P and an empty site a
// down-step of -P.  The anchor vertex carries the current:
// h_0 = h_K = -K * Y.  Storing exact integers lets couplings test equality
// of profiles without rational arithmetic.
class HeightFunction {
 public:
  HeightFunction(int sites, int particles, std::vector<long long> scaled);

  int sites() const { return k_; }      // K
  int particles() const { return p_; }  // P (number of up-steps)

  // Scaled height at vertex j, 0 <= j <= K (h_K == h_0).
  long long at(int vertex) const { return h_[static_cast<std::size_t>(vertex)]; }
  const std::vector<long long>& scaled_heights() const { return h_; }

  long long anchor() const { return -h_[0] / k_; }  // Y

  bool operator==(const HeightFunction& o) const {
    return k_ == o.k_ && p_ == o.p_ && h_ == o.h_;
  }

 private:
  int k_ = 0;
  int p_ = 0;
  std::vector<long long> h_;  // size K+1
};

// Height map: (Y, sigma) -> profile with h_0 = -K*Y and steps K*sigma_j - P.
HeightFunction psi(long long anchor, const SsepConfiguration& sigma);

// Inverse of the height map: Y = -h_0/K, sigma_j = 1 iff step j is K - P.
std::pair<long long, SsepConfiguration> psi_inverse(const HeightFunction& zeta);

}  // namespace feplab

#endif
