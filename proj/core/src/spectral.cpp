#include "feplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace feplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> block_indicator(int k, int p) {
  std::vector<double> u0(static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < p; ++i) u0[static_cast<std::size_t>(i)] = 1.0;
  return u0;
}

}  // namespace

EigenBasis build_eigenbasis(int k) {
  if (k < 2) throw std::invalid_argument("eigenbasis needs K >= 2");
  EigenBasis basis;
  basis.k = k;
  basis.eigenvalues.reserve(static_cast<std::size_t>(k));
  basis.functions.reserve(static_cast<std::size_t>(k));

  basis.eigenvalues.push_back(0.0);
  basis.functions.emplace_back(static_cast<std::size_t>(k), 1.0);

  const double sqrt2 = std::sqrt(2.0);
  for (int l = 1; 2 * l <= k; ++l) {
    const double mu = 2.0 * (1.0 - std::cos(kTwoPi * l / k));
    const bool top_even_mode = (2 * l == k);
    // cos(pi * site) alternates with unit norm; every other mode needs
    // sqrt(2) to be orthonormal under the averaged inner product.
    const double amp = top_even_mode ? 1.0 : sqrt2;
    std::vector<double> cosine(static_cast<std::size_t>(k));
    for (int site = 0; site < k; ++site)
      cosine[static_cast<std::size_t>(site)] =
          amp * std::cos(kTwoPi * l * site / k);
    basis.eigenvalues.push_back(mu);
    basis.functions.push_back(std::move(cosine));
    if (top_even_mode) break;  // the matching sine mode vanishes identically
    std::vector<double> sine(static_cast<std::size_t>(k));
    for (int site = 0; site < k; ++site)
      sine[static_cast<std::size_t>(site)] =
          sqrt2 * std::sin(kTwoPi * l * site / k);
    basis.eigenvalues.push_back(mu);
    basis.functions.push_back(std::move(sine));
  }
  return basis;
}

HeatSolution::HeatSolution(EigenBasis basis, std::vector<double> coefficients)
    : basis_(std::move(basis)), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != basis_.functions.size())
    throw std::invalid_argument("coefficient count must match the basis");
}

std::vector<double> HeatSolution::evaluate(double t) const {
  const int k = basis_.k;
  std::vector<double> u(static_cast<std::size_t>(k), 0.0);
  for (std::size_t l = 0; l < coefficients_.size(); ++l) {
    const double w = coefficients_[l] * std::exp(-basis_.eigenvalues[l] * t);
    if (w == 0.0) continue;
    const auto& chi = basis_.functions[l];
    for (int site = 0; site < k; ++site)
      u[static_cast<std::size_t>(site)] += w * chi[static_cast<std::size_t>(site)];
  }
  return u;
}

double HeatSolution::coefficient_energy() const {
  double sum = 0.0;
  for (double c : coefficients_) sum += c * c;
  return sum;
}

HeatSolution heat_solution(int k, const std::vector<double>& u0) {
  if (static_cast<int>(u0.size()) != k)
    throw std::invalid_argument("initial data length must equal K");
  EigenBasis basis = build_eigenbasis(k);
  std::vector<double> coeffs(basis.functions.size(), 0.0);
  for (std::size_t l = 0; l < basis.functions.size(); ++l) {
    double dot = 0.0;
    for (int site = 0; site < k; ++site)
      dot += basis.functions[l][static_cast<std::size_t>(site)] *
             u0[static_cast<std::size_t>(site)];
    coeffs[l] = dot / k;
  }
  return HeatSolution(std::move(basis), std::move(coeffs));
}

double expected_segment_occupancy(int k, int p, double t) {
  if (p < 1 || p >= k) throw std::invalid_argument("need 1 <= P < K");
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const HeatSolution sol = heat_solution(k, block_indicator(k, p));
  const auto& c = sol.coefficients();
  const auto& lambda = sol.basis().eigenvalues;
  double sum = static_cast<double>(p) * p / k;  // constant mode, c_0^2 K = P^2/K
  for (std::size_t l = 1; l < c.size(); ++l)
    sum += k * c[l] * c[l] * std::exp(-lambda[l] * t);
  return sum;
}

double solve_t_star(int k, int p, double s_prime) {
  if (s_prime <= 0.0) throw std::invalid_argument("s' must be positive");
  const double target =
      static_cast<double>(p) * p / k + s_prime * std::sqrt(static_cast<double>(p));
  if (target > static_cast<double>(p) * (1.0 + 1e-12))
    throw std::invalid_argument(
        "no solution: target occupancy above the initial value P");
  if (target >= static_cast<double>(p)) return 0.0;

  double lo = 0.0, hi = 1.0;
  while (expected_segment_occupancy(k, p, hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("t* failed to bracket");
  }
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (expected_segment_occupancy(k, p, mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double cantelli_lower_bound(double lambda, double mean) {
  if (!(lambda < 0.0)) throw std::invalid_argument("lambda must be negative");
  if (!(mean >= 0.0)) throw std::invalid_argument("mean must be nonnegative");
  return lambda * lambda / (lambda * lambda + mean);
}

double lb_time_estimate(int n, int k, double eps, double s, double s_prime) {
  if (2 * k <= n || k >= n) throw std::invalid_argument("need N/2 < K < N");
  if (eps <= 0.0 || eps >= 1.0)
    throw std::invalid_argument("epsilon must lie in (0,1)");
  if (s <= 0.0 || s_prime < s)
    throw std::invalid_argument("need 0 < s <= s'");
  const double eps_prime = std::min(eps, (1.0 - eps) / 2.0);
  const double gap = s_prime - s;
  if (!(gap * gap >
        (eps + eps_prime) / (1.0 - eps - eps_prime) * (1.0 + s_prime)))
    throw std::invalid_argument(
        "parameters violate the separation inequality (s'-s)^2 > "
        "(eps+eps')/(1-eps-eps') (1+s')");

  const int peff = std::min(2 * k - n, n - k);
  const HeatSolution sol = heat_solution(k, block_indicator(k, peff));
  const double c1 = sol.coefficients()[1];
  const double lambda1 = sol.basis().eigenvalues[1];
  return std::log(k * c1 * c1 / (s_prime * std::sqrt(static_cast<double>(peff)))) /
         lambda1;
}

}  // namespace feplab
