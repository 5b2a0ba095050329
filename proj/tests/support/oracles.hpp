#ifndef FEPLAB_TESTS_SUPPORT_ORACLES_HPP
#define FEPLAB_TESTS_SUPPORT_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <vector>

namespace feplab::testsupport {

// O(size^2) maximal segment-density deviation over every clockwise circular
// segment, straight from the definition.
template <typename Config>
double brute_force_statistic(const Config& c) {
  const int n = c.sites();
  const double density = static_cast<double>(c.particles()) / n;
  double best = 0.0;
  for (int start = 1; start <= n; ++start) {
    int filled = 0;
    for (int len = 1; len <= n; ++len) {
      if (c.occupied(start + len - 1)) ++filled;
      best = std::max(best, std::abs(filled - density * len));
    }
  }
  return best;
}

// Classical RK4 for the lattice heat equation du/dt = Delta u on the circle;
// independent of the spectral solver it checks.
inline std::vector<double> rk4_heat(std::vector<double> u, double t_end,
                                    double dt) {
  const int k = static_cast<int>(u.size());
  const auto laplacian = [k](const std::vector<double>& v) {
    std::vector<double> out(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const int prev = (i + k - 1) % k, next = (i + 1) % k;
      out[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(prev)] -
                                         2.0 * v[static_cast<std::size_t>(i)] +
                                         v[static_cast<std::size_t>(next)];
    }
    return out;
  };
  double t = 0.0;
  std::vector<double> k1, k2, k3, k4, tmp(static_cast<std::size_t>(k));
  while (t < t_end - 1e-15) {
    const double h = std::min(dt, t_end - t);
    k1 = laplacian(u);
    for (int i = 0; i < k; ++i)
      tmp[static_cast<std::size_t>(i)] =
          u[static_cast<std::size_t>(i)] + 0.5 * h * k1[static_cast<std::size_t>(i)];
    k2 = laplacian(tmp);
    for (int i = 0; i < k; ++i)
      tmp[static_cast<std::size_t>(i)] =
          u[static_cast<std::size_t>(i)] + 0.5 * h * k2[static_cast<std::size_t>(i)];
    k3 = laplacian(tmp);
    for (int i = 0; i < k; ++i)
      tmp[static_cast<std::size_t>(i)] =
          u[static_cast<std::size_t>(i)] + h * k3[static_cast<std::size_t>(i)];
    k4 = laplacian(tmp);
    for (int i = 0; i < k; ++i)
      u[static_cast<std::size_t>(i)] +=
          h / 6.0 *
          (k1[static_cast<std::size_t>(i)] + 2.0 * k2[static_cast<std::size_t>(i)] +
           2.0 * k3[static_cast<std::size_t>(i)] + k4[static_cast<std::size_t>(i)]);
    t += h;
  }
  return u;
}

}  // namespace feplab::testsupport

#endif
