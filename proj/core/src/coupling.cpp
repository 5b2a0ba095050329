#include "feplab/coupling.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "feplab/detail/index_set.hpp"
#include "feplab/mapping.hpp"

namespace feplab {

namespace {

inline int wrap(int i, int n) { return i >= n ? i - n : (i < 0 ? i + n : i); }

// Three corner-flip profiles under the level-indexed grand coupling.
// Profile order: 0 = lower, 1 = middle, 2 = upper.
class TripleCoupler {
 public:
  TripleCoupler(const CoupledTriple& triple)
      : k_(triple.lower.sites()), p_(triple.lower.particles()),
        key_count_(static_cast<std::size_t>(k_), 0),
        keys_(static_cast<std::size_t>(k_)), active_(3 * k_) {
    const HeightFunction* profiles[3] = {&triple.lower, &triple.middle,
                                         &triple.upper};
    for (int i = 0; i < 3; ++i) {
      if (profiles[i]->sites() != k_ || profiles[i]->particles() != p_)
        throw std::invalid_argument("coupled profiles must share (K,P)");
      const auto& scaled = profiles[i]->scaled_heights();
      h_[static_cast<std::size_t>(i)].assign(scaled.begin(), scaled.end() - 1);
    }
    for (int v = 0; v < k_; ++v) rebuild(v);
    for (int pair = 0; pair < 3; ++pair) diff_[static_cast<std::size_t>(pair)] = 0;
    for (int v = 0; v < k_; ++v) {
      if (h_[0][static_cast<std::size_t>(v)] != h_[1][static_cast<std::size_t>(v)]) ++diff_[0];
      if (h_[1][static_cast<std::size_t>(v)] != h_[2][static_cast<std::size_t>(v)]) ++diff_[1];
      if (h_[0][static_cast<std::size_t>(v)] != h_[2][static_cast<std::size_t>(v)]) ++diff_[2];
    }
  }

  int total_rate() const { return active_.size(); }

  // Executes the clock with the given active index.
  void fire(int index) {
    const int id = active_.at(index);
    const int v = id / 3;
    const Key key = keys_[static_cast<std::size_t>(v)][static_cast<std::size_t>(id % 3)];
    const int prev = wrap(v - 1, k_), next = wrap(v + 1, k_);
    const bool eq01 = h_[0][static_cast<std::size_t>(v)] == h_[1][static_cast<std::size_t>(v)];
    const bool eq12 = h_[1][static_cast<std::size_t>(v)] == h_[2][static_cast<std::size_t>(v)];
    const bool eq02 = h_[0][static_cast<std::size_t>(v)] == h_[2][static_cast<std::size_t>(v)];
    for (int i = 0; i < 3; ++i) {
      if (!(key.mask & (1u << i))) continue;
      auto& hv = h_[static_cast<std::size_t>(i)];
      hv[static_cast<std::size_t>(v)] = hv[static_cast<std::size_t>(prev)] +
                                        hv[static_cast<std::size_t>(next)] -
                                        hv[static_cast<std::size_t>(v)];
    }
    diff_[0] += static_cast<int>(h_[0][static_cast<std::size_t>(v)] != h_[1][static_cast<std::size_t>(v)]) - static_cast<int>(!eq01);
    diff_[1] += static_cast<int>(h_[1][static_cast<std::size_t>(v)] != h_[2][static_cast<std::size_t>(v)]) - static_cast<int>(!eq12);
    diff_[2] += static_cast<int>(h_[0][static_cast<std::size_t>(v)] != h_[2][static_cast<std::size_t>(v)]) - static_cast<int>(!eq02);
    rebuild(prev);
    rebuild(v);
    rebuild(next);
  }

  bool lower_middle_equal() const { return diff_[0] == 0; }
  bool upper_middle_equal() const { return diff_[1] == 0; }
  bool all_equal() const { return diff_[0] == 0 && diff_[1] == 0; }

  void check_order() const {
    for (int v = 0; v < k_; ++v) {
      if (h_[0][static_cast<std::size_t>(v)] > h_[1][static_cast<std::size_t>(v)] ||
          h_[1][static_cast<std::size_t>(v)] > h_[2][static_cast<std::size_t>(v)])
        throw std::logic_error("monotone coupling violated pointwise order");
    }
  }

  HeightFunction profile(int i) const {
    std::vector<long long> out(h_[static_cast<std::size_t>(i)]);
    out.push_back(out[0]);
    return HeightFunction(k_, p_, std::move(out));
  }

 private:
  struct Key {
    long long level;
    signed char dir;  // +1: valley flips up, -1: peak flips down
    unsigned char mask;
  };

  void rebuild(int v) {
    const int prev = wrap(v - 1, k_), next = wrap(v + 1, k_);
    int count = 0;
    auto& ks = keys_[static_cast<std::size_t>(v)];
    for (int i = 0; i < 3; ++i) {
      const auto& hv = h_[static_cast<std::size_t>(i)];
      const long long a = hv[static_cast<std::size_t>(prev)];
      const long long b = hv[static_cast<std::size_t>(v)];
      const long long c = hv[static_cast<std::size_t>(next)];
      if (a + c == 2 * b) continue;  // monotone through v: no flip
      const signed char dir = a > b ? +1 : -1;
      bool found = false;
      for (int j = 0; j < count; ++j) {
        if (ks[static_cast<std::size_t>(j)].level == b &&
            ks[static_cast<std::size_t>(j)].dir == dir) {
          ks[static_cast<std::size_t>(j)].mask |= static_cast<unsigned char>(1u << i);
          found = true;
          break;
        }
      }
      if (!found)
        ks[static_cast<std::size_t>(count++)] =
            Key{b, dir, static_cast<unsigned char>(1u << i)};
    }
    key_count_[static_cast<std::size_t>(v)] = count;
    for (int slot = 0; slot < 3; ++slot)
      active_.set(3 * v + slot, slot < count);
  }

  int k_;
  int p_;
  std::array<std::vector<long long>, 3> h_;
  std::vector<int> key_count_;
  std::vector<std::array<Key, 3>> keys_;
  detail::IndexSet active_;
  std::array<int, 3> diff_;  // (lower,middle), (middle,upper), (lower,upper)
};

void require_ordered(const CoupledTriple& triple) {
  const int k = triple.lower.sites();
  if (triple.middle.sites() != k || triple.upper.sites() != k)
    throw std::invalid_argument("coupled profiles must share the circle size");
  for (int v = 0; v <= k; ++v) {
    if (triple.lower.at(v) > triple.middle.at(v) ||
        triple.middle.at(v) > triple.upper.at(v))
      throw std::invalid_argument("coupled triple must satisfy lower <= middle <= upper");
  }
}

}  // namespace

CoupledRunResult run_monotone_coupled(const CoupledTriple& triple, double t_end,
                                      Rng& rng,
                                      const MonotoneOptions& options) {
  require_ordered(triple);
  TripleCoupler coupler(triple);
  CoupledRunResult result{triple, std::nullopt, std::nullopt, std::nullopt, 0};

  auto note_merges = [&](double t) {
    if (!result.merge_time_lower_middle && coupler.lower_middle_equal())
      result.merge_time_lower_middle = t;
    if (!result.merge_time_upper_middle && coupler.upper_middle_equal())
      result.merge_time_upper_middle = t;
    if (!result.merge_time && coupler.all_equal()) result.merge_time = t;
  };
  note_merges(0.0);

  double t = 0.0;
  while (true) {
    const int rate = coupler.total_rate();
    if (rate == 0) break;  // flat triple (P in {0,K}): nothing ever moves
    t += exponential(rng, static_cast<double>(rate));
    if (t > t_end) break;
    coupler.fire(static_cast<int>(
        uniform_below(rng, static_cast<std::uint64_t>(rate))));
    ++result.events;
    if (options.check_order) coupler.check_order();
    note_merges(t);
    if (options.stop_on_merge && result.merge_time) break;
  }
  result.triple = CoupledTriple{coupler.profile(0), coupler.profile(1),
                                coupler.profile(2)};
  return result;
}

double default_merge_budget_c(double s_prime, int k, int peff) {
  // Diffusive estimate for closing the worst anchor separation
  // 2 * U_max = 4 * ceil(s' sqrt(Peff)), plus a coalescence allowance.
  // The factors are pinned by the calibration runs in the test suite.
  const double u_max = 2.0 * std::ceil(s_prime * std::sqrt(static_cast<double>(peff)));
  const double gap = 2.0 * u_max;
  return 3.0 * gap * gap / (static_cast<double>(k) * static_cast<double>(k)) + 8.0;
}

MergeReport run_merge_experiment(const FepConfiguration& eta, double epsilon,
                                 double s, Rng& rng,
                                 const MergeOptions& options) {
  const int n = eta.sites();
  const int k = eta.particles();
  if (2 * k <= n || k >= n)
    throw std::invalid_argument("merge experiment needs N/2 < K < N");
  if (!is_ergodic(eta))
    throw std::invalid_argument("merge experiment needs an ergodic start");
  if (epsilon <= 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("epsilon must lie in (0,1)");
  if (s <= 0.0) throw std::invalid_argument("s must be positive");

  const int p = 2 * k - n;
  const int peff = std::min(p, k - p);

  // Uniform rank, mapped to the SSEP-with-current picture.
  const int rank =
      1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(k)));
  const MappedPair mapped = phi(rank, eta);
  TaggedSsepState chain{mapped.position, mapped.ssep};

  const double t1 =
      options.t1_override >= 0.0
          ? options.t1_override
          : static_cast<double>(k) * static_cast<double>(k) *
                std::log(static_cast<double>(peff)) /
                (8.0 * std::numbers::pi * std::numbers::pi);
  chain = run_ssep_with_current(chain, t1, rng);

  const double s_prime = 2.0 * s / epsilon;
  const long long u_lo = static_cast<long long>(
      std::ceil(s_prime * std::sqrt(static_cast<double>(peff))));
  const long long u = uniform_int(rng, u_lo, 2 * u_lo);

  const SsepConfiguration fresh = sample_uniform_ssep(k, p, rng);
  const HeightFunction middle = psi(chain.anchor, chain.config);
  const HeightFunction upper = psi(chain.anchor - u, fresh);
  const HeightFunction lower = psi(chain.anchor + u, fresh);

  bool sandwich = true;
  for (int v = 0; v <= k && sandwich; ++v)
    sandwich = lower.at(v) <= middle.at(v) && middle.at(v) <= upper.at(v);

  const double budget_c = options.budget_c > 0.0
                              ? options.budget_c
                              : default_merge_budget_c(s_prime, k, peff);
  const double t2 = budget_c * static_cast<double>(k) * static_cast<double>(k);

  MonotoneOptions mono;
  mono.stop_on_merge = true;
  // The coupler runs regardless of the sandwich outcome; the bracket
  // marginals stay exact either way.
  CoupledRunResult run =
      run_monotone_coupled(CoupledTriple{lower, middle, upper}, t2, rng, mono);

  auto wrap_site = [&](long long y) {
    long long m = y % n;
    if (m <= 0) m += n;
    return static_cast<int>(m);
  };

  MergeReport report;
  report.merged = run.merge_time.has_value();
  report.sandwich_held = sandwich;
  report.t1 = t1;
  report.t2 = t2;
  report.initial_height_mod_n = wrap_site(chain.anchor - u);
  report.initial_height_lower_mod_n = wrap_site(chain.anchor + u);
  report.anchor_offset = u;
  report.s_prime = s_prime;
  if (run.merge_time) report.merge_time = t1 + *run.merge_time;
  if (run.merge_time_upper_middle)
    report.merge_time_upper_middle = t1 + *run.merge_time_upper_middle;
  return report;
}

}  // namespace feplab
