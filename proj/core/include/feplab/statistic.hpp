#ifndef FEPLAB_STATISTIC_HPP
#define FEPLAB_STATISTIC_HPP

#include "feplab/configuration.hpp"

namespace feplab {

// Maximal segment-density deviation, max over all clockwise circular
// segments I of | #particles(I) - density * |I| |.  Computed in O(size) as
// the range (max minus min) of the centred partial-sum walk; integer-exact
// internally (walk scaled by the circle size).
double fluctuation_statistic(const FepConfiguration& eta);
double fluctuation_statistic(const SsepConfiguration& sigma);

// A segment attaining the maximal deviation (clockwise [start, end], both
// 1-based), with its signed deviation.
SegmentStatistic max_deviation_segment(const FepConfiguration& eta);

}  // namespace feplab

#endif
