#ifndef FEPLAB_EXPERIMENT_HPP
#define FEPLAB_EXPERIMENT_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "feplab/configuration.hpp"
#include "feplab/rng.hpp"

namespace feplab {

enum class ExperimentMode {
  exact,
  tv_curve,
  merge_ub,
  statistic_lb,
  transience,
  spectral_lb,
  map,
  enumerate_states,
};

struct ExperimentConfig {
  int n = 0;
  int k = 0;
  std::vector<double> times;
  double epsilon = 0.25;
  double s = 0.0;        // 0 selects empirical calibration
  double s_prime = 0.0;  // 0 derives the mode's default from s and epsilon
  int replicates = 1000;
  std::uint64_t seed = 1;
  std::string output_path;
  ExperimentMode mode = ExperimentMode::tv_curve;
  int threads = 0;  // 0: FEPLAB_THREADS, else hardware concurrency
  double budget_c = 0.0;
  int calibration_samples = 4000;
  double pi_tail = 0.04;  // target invariant mass of the distinguishing event
};

// One row of a TV-bound table.  The first five fields are the CSV contract;
// the rest are diagnostics carried along in extra columns.
struct TvBoundReport {
  double time = 0.0;
  double lower_bound = 0.0;
  double lower_se = 0.0;
  double upper_bound = 1.0;
  double upper_se = 0.0;
  double hit_rate = 0.0;       // P(eta(t) in A_s) estimate
  double pi_mass = 0.0;        // pi(A_s) estimate
  double merge_fail = 1.0;     // P(upper bracket differs from chain at t)
  double merge_fail_se = 0.0;
  double sandwich_fail = 0.0;
  double allowance = 0.0;      // initial-height allowance folded into upper
  double init_height_tv = 0.0; // empirical TV of the bracket anchor to uniform
  long replicates_lower = 0;
  long replicates_upper = 0;
};

// min(2K - N, N - K): the particle count after the particle/hole swap that
// keeps the sparse species in the SSEP picture.
int effective_particles(int n, int k);

// The fully clustered ergodic configuration: 2K-N particles in one block
// followed by alternating particle/hole pairs.
FepConfiguration clustered_configuration(int n, int k);

// Worst transient start used by the Monte Carlo transience mode: all K
// particles in one block.
FepConfiguration block_configuration(int n, int k);

// Empirical quantile calibration of the deviation scale s: the returned s
// satisfies P(statistic >= s sqrt(Peff)) ~ tail under the invariant law.
double calibrate_s_fep(int n, int k, double tail, int samples, Rng& rng);
double calibrate_s_ssep(int k, int p, int peff, double tail, int samples,
                        Rng& rng);

// Distinguishing-statistic lower bound: from the clustered start, the
// frequency of the deviation event minus its invariant mass.
std::vector<TvBoundReport> estimate_tv_lower(const ExperimentConfig& config);

// Sandwich-and-merge upper bound: merge-failure frequency of the upper
// bracket plus the calibrated initial-height allowance.  Every requested
// time must be at or past t1; earlier times are refused.
std::vector<TvBoundReport> estimate_tv_upper(const ExperimentConfig& config);

// Statistic lower bound and merge upper bound on one grid; times before t1
// carry the trivial upper bound 1.
std::vector<TvBoundReport> mc_bracket_profile(const ExperimentConfig& config);

// Exact TV rows when the state space fits the exact-analysis guard, the
// Monte Carlo bracket otherwise.
std::vector<TvBoundReport> cutoff_profile(const ExperimentConfig& config);

// Monte Carlo transient-mass frequency from a transient start.
struct TransienceRow {
  double time;
  double transient_mass;
  double se;
};
std::vector<TransienceRow> estimate_transient_mass(const ExperimentConfig& config,
                                                   const FepConfiguration& start);

// Geometric time grid around the spectral prediction log(K/sqrt(Peff))/lambda_1.
std::vector<double> default_time_grid(int n, int k, int points);

// Crossing times of the lower-bound curve after an isotonic (non-increasing)
// fit; the window ratio is (t(0.1) - t(0.9)) / t(0.25).
struct WindowEstimate {
  double t90 = 0.0;
  double t25 = 0.0;
  double t10 = 0.0;
  double ratio = 0.0;
};
std::optional<WindowEstimate> mixing_window_from_lower(
    const std::vector<TvBoundReport>& rows);

std::string tv_reports_to_csv(const std::vector<TvBoundReport>& rows);
std::vector<TvBoundReport> tv_reports_from_csv(const std::string& csv);

// Worker-pool width: explicit request, else FEPLAB_THREADS, else hardware.
int worker_threads(int requested);

// Runs fn(i) for i in [0, count) across the pool; results must be written to
// index-distinct slots so scheduling cannot change outputs.
void parallel_for_index(int count, int threads,
                        const std::function<void(int)>& fn);

}  // namespace feplab

#endif
