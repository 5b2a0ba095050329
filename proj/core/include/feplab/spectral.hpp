#ifndef FEPLAB_SPECTRAL_HPP
#define FEPLAB_SPECTRAL_HPP

#include <vector>

namespace feplab {

// Eigenbasis of the discrete Laplacian on the K-circle, orthonormal under
// <f,g> = (1/K) sum f(k) g(k).
//
// Ordering: chi_0 is the constant function with eigenvalue 0; for l >= 1,
// chi_{2l-1} and chi_{2l} are the cosine and sine modes of frequency l with
// the shared eigenvalue mu_l = 2(1 - cos(2 pi l / K)), so lambda_1 = mu_1.
// For even K the sine mode of the top frequency vanishes identically and is
// dropped, and the surviving alternating cosine carries unit (not sqrt(2))
// normalisation.
struct EigenBasis {
  int k = 0;
  std::vector<double> eigenvalues;             // lambda_0..lambda_{K-1}
  std::vector<std::vector<double>> functions;  // functions[l][site], site 0-based
};

EigenBasis build_eigenbasis(int k);

// Coefficient expansion of the lattice heat equation du/dt = Delta u:
// u_k(t) = sum_l c_l exp(-lambda_l t) chi_l(k) with c_l = <chi_l, u(0)>.
class HeatSolution {
 public:
  HeatSolution(EigenBasis basis, std::vector<double> coefficients);

  std::vector<double> evaluate(double t) const;
  const std::vector<double>& coefficients() const { return coefficients_; }
  const EigenBasis& basis() const { return basis_; }

  // sum_l c_l^2, equal to <u(0), u(0)> by completeness.
  double coefficient_energy() const;

 private:
  EigenBasis basis_;
  std::vector<double> coefficients_;
};

HeatSolution heat_solution(int k, const std::vector<double>& u0);

// Expected occupancy of the initial block J = [1,P] at time t when the SSEP
// starts from the fully clustered word 1_J:
//   E|sigma_J(t)| = P^2/K + K sum_{l>=1} c_l^2 exp(-lambda_l t).
// Strictly decreasing in t, from P at t = 0 down to P^2/K.
double expected_segment_occupancy(int k, int p, double t);

// Unique t* with E|sigma_J(t*)| = P^2/K + s' sqrt(P); requires the target to
// sit below the initial value P.  Relative tolerance 1e-9.
double solve_t_star(int k, int p, double s_prime);

// One-sided Cantelli bound with the variance replaced by the mean (valid for
// sums of negatively dependent indicators): for lambda < 0,
//   P(X - E X >= lambda) >= lambda^2 / (lambda^2 + E X).
double cantelli_lower_bound(double lambda, double mean);

// Certified time below which the clustered start is still distinguishable:
// (1/lambda_1) log(K c_1^2 / (s' sqrt(Peff))) for the block initial data,
// with Peff = min(2K-N, N-K).  The parameters must satisfy the separation
// inequality (s' - s)^2 > (eps+eps')/(1-eps-eps') (1 + s') with
// eps' = min(eps, (1-eps)/2).
double lb_time_estimate(int n, int k, double eps, double s, double s_prime);

}  // namespace feplab

#endif
