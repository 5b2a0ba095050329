#ifndef FEPLAB_RATE_MODEL_HPP
#define FEPLAB_RATE_MODEL_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "feplab/configuration.hpp"

namespace feplab {

// Probability vector indexed by an enumerated state space.
using DistributionVector = std::vector<double>;

// Sparse conservative generator: off-diagonal rates in CSR form, diagonal
// implied by the exit rates (row sums of the full generator are zero).
struct Generator {
  int num_states = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> rate;
  std::vector<double> exit;
  double uniformization_rate = 0.0;  // Lambda >= every exit rate

  double entry(int from, int to) const {
    for (int e = row_ptr[static_cast<std::size_t>(from)];
         e < row_ptr[static_cast<std::size_t>(from) + 1]; ++e)
      if (col[static_cast<std::size_t>(e)] == to)
        return rate[static_cast<std::size_t>(e)];
    return 0.0;
  }
};

// Enumerated continuous-time chain: states plus generator plus index map.
template <class State>
struct RateModel {
  std::vector<State> states;
  std::unordered_map<State, int> index;
  Generator generator;

  int index_of(const State& s) const {
    auto it = index.find(s);
    return it == index.end() ? -1 : it->second;
  }
};

// SSEP word together with the wrapped tag position on the N-circle.
struct JointState {
  int position;  // x in 1..N
  SsepConfiguration sigma;
  bool operator==(const JointState& o) const {
    return position == o.position && sigma == o.sigma;
  }
};

// FEP configuration together with the rank of the tagged particle.
struct RankedState {
  int rank;  // k in 1..K
  FepConfiguration eta;
  bool operator==(const RankedState& o) const {
    return rank == o.rank && eta == o.eta;
  }
};

}  // namespace feplab

template <>
struct std::hash<feplab::JointState> {
  std::size_t operator()(const feplab::JointState& s) const {
    return feplab::splitmix64(
        static_cast<std::uint64_t>(s.position) * 0x9e3779b97f4a7c15ULL ^
        s.sigma.hash());
  }
};
template <>
struct std::hash<feplab::RankedState> {
  std::size_t operator()(const feplab::RankedState& s) const {
    return feplab::splitmix64(
        static_cast<std::uint64_t>(s.rank) * 0x9e3779b97f4a7c15ULL ^
        s.eta.hash());
  }
};

#endif
