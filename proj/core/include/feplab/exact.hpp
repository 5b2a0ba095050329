#ifndef FEPLAB_EXACT_HPP
#define FEPLAB_EXACT_HPP

#include "feplab/rate_model.hpp"

namespace feplab {

// Hard ceiling for every exact-analysis builder.
inline constexpr int kExactStateGuard = 20000;

// Whether the (n,k) layer fits under the state guard.
bool exact_fep_feasible(int n, int k);

// FEP generator on all of Gamma_{n,k}: jump eta -> eta^{x,x+z} at rate 1
// whenever eta_{x-z} eta_x (1 - eta_{x+z}) = 1.  Lambda = 2N.
RateModel<FepConfiguration> build_fep_generator(int n, int k);

// Rank-augmented FEP on T_K x E_{N,K}: the configuration moves as the FEP
// restricted to its ergodic component, and the rank shifts by the signed
// crossing of edge (N,1), whichever particle moves.
RateModel<RankedState> build_tagged_fep_generator(int n, int k);

// Joint chain on T_N x Gamma_{K,2K-N}: interior swaps at rate 1, and the
// origin-edge swap also moves the position by sigma_K - sigma_1.
RateModel<JointState> build_joint_generator(int n, int k);

// mu0 * exp(tL) by uniformization with Poisson truncation below 1e-12.
DistributionVector distribution_at(const Generator& generator,
                                   const DistributionVector& mu0, double t);

// Total variation distance (1/2) sum |mu_i - nu_i|.
double tv_distance(const DistributionVector& mu, const DistributionVector& nu);

// Uniform law on the ergodic states, as a vector over the model's states.
DistributionVector stationary_fep_distribution(
    const RateModel<FepConfiguration>& model);

// Exact in/out flow balance of the uniform ergodic law, checked in integer
// arithmetic: every ergodic state has in-degree equal to out-degree within
// the ergodic component, and no rate leaves it.
bool uniform_ergodic_stationary(const RateModel<FepConfiguration>& model);

// Same integer balance check for the uniform law of the joint chain.
bool uniform_joint_stationary(const RateModel<JointState>& model);

// TV distance to the FEP invariant law at each requested time, from one
// initial configuration.  Times must be non-decreasing.
std::vector<double> tv_curve_exact(const RateModel<FepConfiguration>& model,
                                   const FepConfiguration& start,
                                   const std::vector<double>& times);

// Worst-case eps-mixing time over all initial states (bisection over the
// monotone worst-TV curve, relative tolerance 1e-6).
double mixing_time(int n, int k, double eps);
double mixing_time(const RateModel<FepConfiguration>& model, double eps);

// Mixing time with the supremum restricted to ergodic initial states.
double ergodic_mixing_time(int n, int k, double eps);
double ergodic_mixing_time(const RateModel<FepConfiguration>& model, double eps);

// Worst-case time for the transient mass to fall below eps.
double transience_time(int n, int k, double eps);
double transience_time(const RateModel<FepConfiguration>& model, double eps);

}  // namespace feplab

#endif
