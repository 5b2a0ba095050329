#ifndef FEPLAB_MAPPING_HPP
#define FEPLAB_MAPPING_HPP

#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "feplab/configuration.hpp"
#include "feplab/rng.hpp"

namespace feplab {

using BigInt = boost::multiprecision::cpp_int;

// Image of the rank/configuration pair under the bijection: the tagged
// particle's position on the N-circle and an SSEP word on the K-circle with
// P = 2K - N particles.
struct MappedPair {
  int position;  // X in T_N, 1-based
  SsepConfiguration ssep;
};

// Bijection (rank, ergodic FEP) -> (position, SSEP).
//
// Site l of the output encodes the spacing after the particle of rank
// k+l-1: occupied when the next particle is adjacent (gap 1), empty when one
// hole separates them (gap 2).  Requires N/2 < K <= N and an ergodic input;
// the returned word has 2K - N particles.
MappedPair phi(int rank, const FepConfiguration& eta);

// Inverse bijection.  Rebuilds the occupied set
//   I = { x + sum_{j<=l} (2 - sigma_j) mod N : 0 <= l <= K-1 }
// and returns (rank of the particle at x, configuration).  Total on
// T_N x Gamma_{K,2K-N}.
std::pair<int, FepConfiguration> phi_inverse(int position,
                                             const SsepConfiguration& sigma);

// |E_{N,K}| = (N/K) * C(K, 2K-N), exact.  Requires n/2 < k <= n.
BigInt ergodic_count(int n, int k);

// Exact sampler of the FEP invariant law (uniform over the ergodic
// component): draws a uniform position and a uniform SSEP word and pushes the
// pair back through the inverse bijection.
FepConfiguration sample_pi_fep(int n, int k, Rng& rng);

}  // namespace feplab

#endif
