#include "feplab/statistic.hpp"

#include <vector>

namespace feplab {

namespace {

// Scaled centred walk S_j = sum_{i<=j} (n*occ_i - count), j = 0..n.
template <typename Config>
std::vector<long long> centred_walk(const Config& c) {
  const int n = c.sites();
  const long long count = c.particles();
  std::vector<long long> walk(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i)
    walk[static_cast<std::size_t>(i)] =
        walk[static_cast<std::size_t>(i - 1)] +
        (c.occupied(i) ? n - count : -count);
  return walk;
}

template <typename Config>
double walk_range(const Config& c) {
  const auto walk = centred_walk(c);
  long long lo = 0, hi = 0;
  for (long long v : walk) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return static_cast<double>(hi - lo) / static_cast<double>(c.sites());
}

}  // namespace

double fluctuation_statistic(const FepConfiguration& eta) {
  return walk_range(eta);
}

double fluctuation_statistic(const SsepConfiguration& sigma) {
  return walk_range(sigma);
}

SegmentStatistic max_deviation_segment(const FepConfiguration& eta) {
  const auto walk = centred_walk(eta);
  const int n = eta.sites();
  int argmin = 0, argmax = 0;
  for (int j = 1; j <= n; ++j) {
    if (walk[static_cast<std::size_t>(j)] < walk[static_cast<std::size_t>(argmin)])
      argmin = j;
    if (walk[static_cast<std::size_t>(j)] > walk[static_cast<std::size_t>(argmax)])
      argmax = j;
  }
  // Segment (argmin, argmax] when the max comes after the min (a particle
  // surplus); otherwise the deficit segment (argmax, argmin].
  const long long diff = walk[static_cast<std::size_t>(argmax)] -
                         walk[static_cast<std::size_t>(argmin)];
  if (diff == 0) return SegmentStatistic{1, n, 0.0};
  int start, end;
  double sign;
  if (argmin < argmax) {
    start = argmin + 1;
    end = argmax;
    sign = 1.0;
  } else {
    start = argmax + 1;
    end = argmin;
    sign = -1.0;
  }
  return SegmentStatistic{start, end,
                          sign * static_cast<double>(diff) /
                              static_cast<double>(n)};
}

}  // namespace feplab
