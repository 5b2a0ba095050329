#include "feplab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "feplab/coupling.hpp"
#include "feplab/dynamics.hpp"
#include "feplab/exact.hpp"
#include "feplab/io.hpp"
#include "feplab/mapping.hpp"
#include "feplab/statistic.hpp"

namespace feplab {

namespace {

constexpr std::uint64_t kCalibrationSalt = 0x5ca1ab1e00000001ULL;
constexpr std::uint64_t kPiSalt = 0x5ca1ab1e00000002ULL;
constexpr std::uint64_t kLowerSalt = 0x10ad00000000000ULL;
constexpr std::uint64_t kUpperSalt = 0x20ad00000000000ULL;
constexpr std::uint64_t kTransienceSalt = 0x30ad00000000000ULL;

void require_supercritical_strict(int n, int k) {
  if (2 * k <= n || k >= n)
    throw std::invalid_argument("need N/2 < K < N");
}

std::vector<double> sorted_times(const ExperimentConfig& config) {
  std::vector<double> times = config.times;
  if (times.empty()) throw std::invalid_argument("no times requested");
  std::sort(times.begin(), times.end());
  if (times.front() < 0.0)
    throw std::invalid_argument("times must be nonnegative");
  return times;
}

int wrap_position(long long y, int n) {
  long long m = y % n;
  if (m <= 0) m += n;
  return static_cast<int>(m);
}

double binomial_se(double p, long n) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

double relaxation_time_t1(int k, int peff) {
  return static_cast<double>(k) * static_cast<double>(k) *
         std::log(static_cast<double>(peff)) /
         (8.0 * std::numbers::pi * std::numbers::pi);
}

double quantile_scale(std::vector<double> values, double tail) {
  if (values.empty()) throw std::invalid_argument("no calibration samples");
  std::sort(values.begin(), values.end());
  const auto idx = static_cast<std::size_t>(
      std::min<double>(static_cast<double>(values.size()) - 1.0,
                       std::ceil((1.0 - tail) * static_cast<double>(values.size()))));
  return values[idx];
}

}  // namespace

int effective_particles(int n, int k) {
  require_supercritical_strict(n, k);
  return std::min(2 * k - n, n - k);
}

FepConfiguration clustered_configuration(int n, int k) {
  if (2 * k <= n || k > n) throw std::invalid_argument("need N/2 < K <= N");
  std::vector<std::uint8_t> occ;
  occ.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < 2 * k - n; ++i) occ.push_back(1);
  for (int i = 0; i < n - k; ++i) {
    occ.push_back(1);
    occ.push_back(0);
  }
  return FepConfiguration(n, occ);
}

FepConfiguration block_configuration(int n, int k) {
  if (k < 1 || k > n) throw std::invalid_argument("need 1 <= K <= N");
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < k; ++i) occ[static_cast<std::size_t>(i)] = 1;
  return FepConfiguration(n, occ);
}

double calibrate_s_fep(int n, int k, double tail, int samples, Rng& rng) {
  const double scale = std::sqrt(static_cast<double>(effective_particles(n, k)));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i)
    values.push_back(fluctuation_statistic(sample_pi_fep(n, k, rng)) / scale);
  return quantile_scale(std::move(values), tail);
}

double calibrate_s_ssep(int k, int p, int peff, double tail, int samples,
                        Rng& rng) {
  const double scale = std::sqrt(static_cast<double>(peff));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i)
    values.push_back(fluctuation_statistic(sample_uniform_ssep(k, p, rng)) /
                     scale);
  return quantile_scale(std::move(values), tail);
}

std::vector<TvBoundReport> estimate_tv_lower(const ExperimentConfig& config) {
  const int n = config.n, k = config.k;
  require_supercritical_strict(n, k);
  const std::vector<double> times = sorted_times(config);
  const int peff = effective_particles(n, k);
  const double scale = std::sqrt(static_cast<double>(peff));

  Rng cal_rng = replicate_rng(config.seed, kCalibrationSalt);
  const double s =
      config.s > 0.0
          ? config.s
          : calibrate_s_fep(n, k, config.pi_tail, config.calibration_samples,
                            cal_rng);
  const double threshold = s * scale - 1e-12;

  // Invariant mass of the deviation event, by exact stationary sampling.
  Rng pi_rng = replicate_rng(config.seed, kPiSalt);
  const int pi_samples = std::max(config.calibration_samples, 2000);
  long pi_hits = 0;
  for (int i = 0; i < pi_samples; ++i)
    if (fluctuation_statistic(sample_pi_fep(n, k, pi_rng)) >= threshold)
      ++pi_hits;
  const double pi_mass = static_cast<double>(pi_hits) / pi_samples;
  const double pi_se = binomial_se(pi_mass, pi_samples);

  const FepConfiguration start = clustered_configuration(n, k);
  const MappedPair mapped = phi(1, start);

  const int replicates = config.replicates;
  const std::size_t grid = times.size();
  std::vector<std::uint8_t> hits(static_cast<std::size_t>(replicates) * grid, 0);

  parallel_for_index(replicates, worker_threads(config.threads), [&](int r) {
    Rng rng = replicate_rng(config.seed,
                            kLowerSalt ^ static_cast<std::uint64_t>(r));
    TaggedSsepState state{mapped.position, mapped.ssep};
    double t_prev = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
      state = run_ssep_with_current(state, times[j] - t_prev, rng);
      t_prev = times[j];
      const FepConfiguration eta =
          phi_inverse(wrap_position(state.anchor, n), state.config).second;
      hits[static_cast<std::size_t>(r) * grid + j] =
          fluctuation_statistic(eta) >= threshold ? 1 : 0;
    }
  });

  std::vector<TvBoundReport> rows(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    long count = 0;
    for (int r = 0; r < replicates; ++r)
      count += hits[static_cast<std::size_t>(r) * grid + j];
    const double p_hat = static_cast<double>(count) / replicates;
    const double p_se = binomial_se(p_hat, replicates);
    TvBoundReport& row = rows[j];
    row.time = times[j];
    row.hit_rate = p_hat;
    row.pi_mass = pi_mass;
    row.lower_bound = std::max(0.0, p_hat - pi_mass);
    row.lower_se = std::sqrt(p_se * p_se + pi_se * pi_se);
    row.upper_bound = 1.0;
    row.upper_se = 0.0;
    row.replicates_lower = replicates;
  }
  return rows;
}

std::vector<TvBoundReport> estimate_tv_upper(const ExperimentConfig& config) {
  const int n = config.n, k = config.k;
  require_supercritical_strict(n, k);
  const std::vector<double> times = sorted_times(config);
  const int p = 2 * k - n;
  const int peff = effective_particles(n, k);
  const double t1 = relaxation_time_t1(k, peff);
  if (times.front() < t1 - 1e-9)
    throw std::invalid_argument(
        "merge upper bound is undefined before t1 = K^2 log(Peff) / (8 pi^2)");

  Rng cal_rng = replicate_rng(config.seed, kCalibrationSalt);
  const double s =
      config.s > 0.0
          ? config.s
          : calibrate_s_ssep(k, p, peff, config.epsilon / 4.0,
                             config.calibration_samples, cal_rng);

  // The coupler must cover the whole grid, not just the nominal budget.
  MergeOptions options;
  options.budget_c = std::max(
      config.budget_c,
      (times.back() - t1) / (static_cast<double>(k) * static_cast<double>(k)) +
          0.5);

  const FepConfiguration start = clustered_configuration(n, k);
  const int replicates = config.replicates;
  std::vector<double> merge_times(static_cast<std::size_t>(replicates), -1.0);
  std::vector<std::uint8_t> sandwich_ok(static_cast<std::size_t>(replicates), 0);
  std::vector<int> anchor_sites(static_cast<std::size_t>(replicates), 0);

  parallel_for_index(replicates, worker_threads(config.threads), [&](int r) {
    Rng rng = replicate_rng(config.seed,
                            kUpperSalt ^ static_cast<std::uint64_t>(r));
    const MergeReport report =
        run_merge_experiment(start, config.epsilon, s, rng, options);
    if (report.merge_time_upper_middle)
      merge_times[static_cast<std::size_t>(r)] = *report.merge_time_upper_middle;
    sandwich_ok[static_cast<std::size_t>(r)] = report.sandwich_held ? 1 : 0;
    anchor_sites[static_cast<std::size_t>(r)] = report.initial_height_mod_n;
  });

  long sandwich_fails = 0;
  for (auto ok : sandwich_ok) sandwich_fails += ok ? 0 : 1;
  const double sandwich_fail_rate =
      static_cast<double>(sandwich_fails) / replicates;

  std::vector<long> site_counts(static_cast<std::size_t>(n), 0);
  for (int site : anchor_sites) ++site_counts[static_cast<std::size_t>(site - 1)];
  double anchor_tv = 0.0;
  for (long c : site_counts)
    anchor_tv += std::abs(static_cast<double>(c) / replicates - 1.0 / n);
  anchor_tv *= 0.5;

  std::vector<TvBoundReport> rows(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    long failed = 0;
    for (int r = 0; r < replicates; ++r) {
      const double mt = merge_times[static_cast<std::size_t>(r)];
      if (mt < 0.0 || mt > times[j]) ++failed;
    }
    const double fail_rate = static_cast<double>(failed) / replicates;
    const double fail_se = binomial_se(fail_rate, replicates);
    TvBoundReport& row = rows[j];
    row.time = times[j];
    row.merge_fail = fail_rate;
    row.merge_fail_se = fail_se;
    row.allowance = config.epsilon;
    row.upper_bound = std::min(1.0, fail_rate + config.epsilon);
    row.upper_se = fail_se;
    row.sandwich_fail = sandwich_fail_rate;
    row.init_height_tv = anchor_tv;
    row.lower_bound = 0.0;
    row.lower_se = 0.0;
    row.replicates_upper = replicates;
  }
  return rows;
}

std::vector<TvBoundReport> mc_bracket_profile(const ExperimentConfig& config) {
  const int n = config.n, k = config.k;
  require_supercritical_strict(n, k);
  ExperimentConfig cfg = config;
  if (cfg.times.empty()) cfg.times = default_time_grid(n, k, 20);
  const std::vector<double> times = sorted_times(cfg);

  ExperimentConfig lower_cfg = cfg;
  lower_cfg.times = times;
  std::vector<TvBoundReport> rows = estimate_tv_lower(lower_cfg);

  const double t1 = relaxation_time_t1(k, effective_particles(n, k));
  ExperimentConfig upper_cfg = cfg;
  upper_cfg.times.clear();
  for (double t : times)
    if (t >= t1 - 1e-9) upper_cfg.times.push_back(t);
  if (!upper_cfg.times.empty()) {
    const auto upper_rows = estimate_tv_upper(upper_cfg);
    std::size_t u = 0;
    for (auto& row : rows) {
      if (row.time < t1 - 1e-9) continue;  // keep the trivial upper bound 1
      const TvBoundReport& ub = upper_rows[u++];
      row.upper_bound = ub.upper_bound;
      row.upper_se = ub.upper_se;
      row.merge_fail = ub.merge_fail;
      row.merge_fail_se = ub.merge_fail_se;
      row.sandwich_fail = ub.sandwich_fail;
      row.allowance = ub.allowance;
      row.init_height_tv = ub.init_height_tv;
      row.replicates_upper = ub.replicates_upper;
    }
  }
  return rows;
}

std::vector<TvBoundReport> cutoff_profile(const ExperimentConfig& config) {
  const int n = config.n, k = config.k;
  require_supercritical_strict(n, k);
  ExperimentConfig cfg = config;
  if (cfg.times.empty()) cfg.times = default_time_grid(n, k, 20);
  const std::vector<double> times = sorted_times(cfg);

  if (exact_fep_feasible(n, k)) {
    const auto model = build_fep_generator(n, k);
    const auto tv = tv_curve_exact(model, clustered_configuration(n, k), times);
    std::vector<TvBoundReport> rows(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
      rows[j].time = times[j];
      rows[j].lower_bound = tv[j];
      rows[j].upper_bound = tv[j];
    }
    return rows;
  }
  cfg.times = times;
  return mc_bracket_profile(cfg);
}

std::vector<TransienceRow> estimate_transient_mass(
    const ExperimentConfig& config, const FepConfiguration& start) {
  const std::vector<double> times = sorted_times(config);
  const int replicates = config.replicates;
  const std::size_t grid = times.size();
  std::vector<std::uint8_t> transient(static_cast<std::size_t>(replicates) * grid,
                                      0);
  parallel_for_index(replicates, worker_threads(config.threads), [&](int r) {
    Rng rng = replicate_rng(config.seed,
                            kTransienceSalt ^ static_cast<std::uint64_t>(r));
    FepConfiguration state = start;
    double t_prev = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
      state = run_fep(state, times[j] - t_prev, rng);
      t_prev = times[j];
      transient[static_cast<std::size_t>(r) * grid + j] =
          is_ergodic(state) ? 0 : 1;
    }
  });
  std::vector<TransienceRow> rows(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    long count = 0;
    for (int r = 0; r < replicates; ++r)
      count += transient[static_cast<std::size_t>(r) * grid + j];
    const double mass = static_cast<double>(count) / replicates;
    rows[j] = TransienceRow{times[j], mass, binomial_se(mass, replicates)};
  }
  return rows;
}

std::vector<double> default_time_grid(int n, int k, int points) {
  require_supercritical_strict(n, k);
  if (points < 2) throw std::invalid_argument("need at least two grid points");
  const int peff = effective_particles(n, k);
  const double lambda1 = 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi / k));
  const double t_mid =
      std::log(static_cast<double>(k) / std::sqrt(static_cast<double>(peff))) /
      lambda1;
  const double lo = t_mid / 8.0, hi = t_mid * 4.0;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] =
        lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  return grid;
}

std::optional<WindowEstimate> mixing_window_from_lower(
    const std::vector<TvBoundReport>& rows) {
  if (rows.size() < 3) return std::nullopt;
  const std::size_t m = rows.size();
  // Isotonic non-increasing fit (pool adjacent violators).
  std::vector<double> mean, weight;
  for (const auto& row : rows) {
    mean.push_back(row.lower_bound);
    weight.push_back(1.0);
    while (mean.size() > 1 && mean[mean.size() - 2] < mean.back()) {
      const double w = weight[weight.size() - 2] + weight.back();
      const double v = (mean[mean.size() - 2] * weight[weight.size() - 2] +
                        mean.back() * weight.back()) /
                       w;
      mean.pop_back();
      weight.pop_back();
      mean.back() = v;
      weight.back() = w;
    }
  }
  std::vector<double> fit;
  fit.reserve(m);
  for (std::size_t b = 0; b < mean.size(); ++b)
    for (int i = 0; i < static_cast<int>(weight[b]); ++i) fit.push_back(mean[b]);

  const auto crossing = [&](double q) -> std::optional<double> {
    if (fit.front() < q) return std::nullopt;  // never above the level
    for (std::size_t i = 0; i < m; ++i) {
      if (fit[i] <= q) {
        if (i == 0) return rows[0].time;
        const double f0 = fit[i - 1], f1 = fit[i];
        const double t0 = rows[i - 1].time, t1 = rows[i].time;
        if (f0 == f1) return t1;
        return t0 + (f0 - q) / (f0 - f1) * (t1 - t0);
      }
    }
    return std::nullopt;  // never decays to the level on this grid
  };

  const auto t90 = crossing(0.9);
  const auto t25 = crossing(0.25);
  const auto t10 = crossing(0.1);
  if (!t90 || !t25 || !t10 || *t25 <= 0.0) return std::nullopt;
  WindowEstimate w;
  w.t90 = *t90;
  w.t25 = *t25;
  w.t10 = *t10;
  w.ratio = (*t10 - *t90) / *t25;
  return w;
}

namespace {

const char* kCsvHeader =
    "t,lower,lower_se,upper,upper_se,hit_rate,pi_mass,merge_fail,"
    "merge_fail_se,sandwich_fail,allowance,init_height_tv,replicates_lower,"
    "replicates_upper";

}  // namespace

std::string tv_reports_to_csv(const std::vector<TvBoundReport>& rows) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : rows) {
    out << format_double(r.time) << ',' << format_double(r.lower_bound) << ','
        << format_double(r.lower_se) << ',' << format_double(r.upper_bound)
        << ',' << format_double(r.upper_se) << ',' << format_double(r.hit_rate)
        << ',' << format_double(r.pi_mass) << ',' << format_double(r.merge_fail)
        << ',' << format_double(r.merge_fail_se) << ','
        << format_double(r.sandwich_fail) << ',' << format_double(r.allowance)
        << ',' << format_double(r.init_height_tv) << ',' << r.replicates_lower
        << ',' << r.replicates_upper << "\n";
  }
  return out.str();
}

std::vector<TvBoundReport> tv_reports_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("empty CSV");
  if (line != kCsvHeader)
    throw std::invalid_argument("unrecognized CSV header: " + line);
  std::vector<TvBoundReport> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    std::vector<std::string> values;
    while (std::getline(fields, field, ',')) values.push_back(field);
    if (values.size() != 14)
      throw std::invalid_argument("malformed CSV row: " + line);
    TvBoundReport r;
    r.time = std::stod(values[0]);
    r.lower_bound = std::stod(values[1]);
    r.lower_se = std::stod(values[2]);
    r.upper_bound = std::stod(values[3]);
    r.upper_se = std::stod(values[4]);
    r.hit_rate = std::stod(values[5]);
    r.pi_mass = std::stod(values[6]);
    r.merge_fail = std::stod(values[7]);
    r.merge_fail_se = std::stod(values[8]);
    r.sandwich_fail = std::stod(values[9]);
    r.allowance = std::stod(values[10]);
    r.init_height_tv = std::stod(values[11]);
    r.replicates_lower = std::stol(values[12]);
    r.replicates_upper = std::stol(values[13]);
    rows.push_back(r);
  }
  return rows;
}

int worker_threads(int requested) {
  if (requested > 0) return std::min(requested, 64);
  if (const char* env = std::getenv("FEPLAB_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return std::min(parsed, 64);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 16u));
}

void parallel_for_index(int count, int threads,
                        const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace feplab
