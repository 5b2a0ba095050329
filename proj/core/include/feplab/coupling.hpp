#ifndef FEPLAB_COUPLING_HPP
#define FEPLAB_COUPLING_HPP

#include <optional>

#include "feplab/configuration.hpp"
#include "feplab/dynamics.hpp"
#include "feplab/height.hpp"
#include "feplab/rng.hpp"

namespace feplab {

// Pointwise-ordered triple of height profiles on a common (K,P).
struct CoupledTriple {
  HeightFunction lower;
  HeightFunction middle;
  HeightFunction upper;
};

struct CoupledRunResult {
  CoupledTriple triple;
  std::optional<double> merge_time;  // first time all three profiles agree
  std::optional<double> merge_time_upper_middle;
  std::optional<double> merge_time_lower_middle;
  long long events = 0;
};

struct MonotoneOptions {
  // Full order scan after every event (testing sweeps); throws on violation.
  bool check_order = false;
  // Stop as soon as all three profiles agree instead of running to t_end
  // (after that point the triple evolves as a single profile anyway).
  bool stop_on_merge = false;
};

// Grand coupling of corner-flip dynamics.
//
// Clocks are indexed by (vertex, height level, flip direction): a ring flips
// every profile that currently sits at that level with that extremum type.
// Each marginal is plain corner-flip dynamics (a flippable vertex of one
// profile listens to exactly one clock), pointwise order is preserved, and
// vertically separated profiles evolve independently until they meet, so
// brackets anchored at different currents can actually coalesce.
CoupledRunResult run_monotone_coupled(const CoupledTriple& triple, double t_end,
                                      Rng& rng,
                                      const MonotoneOptions& options = {});

struct MergeOptions {
  // Merge budget t2 = c * K^2.  Zero selects the calibrated default, which
  // grows with the sampled anchor offset scale.
  double budget_c = 0.0;
  // Override for the relaxation time t1 (negative keeps K^2 log(Peff)/8pi^2).
  double t1_override = -1.0;
};

struct MergeReport {
  bool merged;         // all three profiles agreed within the budget
  bool sandwich_held;  // lower <= chain <= upper held at time t1
  double t1;
  double t2;
  int initial_height_mod_n;        // upper bracket anchor mod N, in 1..N
  int initial_height_lower_mod_n;  // lower bracket anchor mod N
  long long anchor_offset;         // sampled U
  double s_prime;
  std::optional<double> merge_time;               // absolute time, all three
  std::optional<double> merge_time_upper_middle;  // absolute time
};

// Calibrated default for the merge budget constant C(s', epsilon).
double default_merge_budget_c(double s_prime, int k, int peff);

// Full sandwich-and-merge pipeline from an ergodic configuration:
//  - attach a uniform rank and map to the SSEP-with-current picture,
//  - relax to t1 = K^2 log(Peff) / (8 pi^2),
//  - bracket the height profile between two profiles built from a fresh
//    stationary word anchored at Y(t1) -/+ U, with U uniform on
//    [ceil(s' sqrt(Peff)), 2 ceil(s' sqrt(Peff))] and s' = 2 s / epsilon,
//  - run the monotone coupling with budget t2 = C K^2.
// Sandwich failure is reported, not fatal.  Requires N/2 < K < N.
MergeReport run_merge_experiment(const FepConfiguration& eta, double epsilon,
                                 double s, Rng& rng,
                                 const MergeOptions& options = {});

}  // namespace feplab

#endif
