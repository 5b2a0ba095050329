#include "feplab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace feplab {

namespace {

constexpr double kPoissonTail = 1e-13;

inline int wrap(int i, int n) { return i >= n ? i - n : (i < 0 ? i + n : i); }

struct TripletBuilder {
  int num_states;
  std::vector<std::vector<std::pair<int, double>>> rows;

  explicit TripletBuilder(int n) : num_states(n), rows(static_cast<std::size_t>(n)) {}

  void add(int from, int to, double rate) {
    rows[static_cast<std::size_t>(from)].emplace_back(to, rate);
  }

  Generator compress(double lambda) const {
    Generator g;
    g.num_states = num_states;
    g.row_ptr.assign(static_cast<std::size_t>(num_states) + 1, 0);
    g.exit.assign(static_cast<std::size_t>(num_states), 0.0);
    std::size_t nnz = 0;
    for (const auto& r : rows) nnz += r.size();
    g.col.reserve(nnz);
    g.rate.reserve(nnz);
    for (int i = 0; i < num_states; ++i) {
      // Merge duplicate targets so off-diagonal entries are unique.
      auto row = rows[static_cast<std::size_t>(i)];
      std::sort(row.begin(), row.end());
      for (std::size_t j = 0; j < row.size();) {
        double total = row[j].second;
        std::size_t j2 = j + 1;
        while (j2 < row.size() && row[j2].first == row[j].first)
          total += row[j2++].second;
        g.col.push_back(row[j].first);
        g.rate.push_back(total);
        g.exit[static_cast<std::size_t>(i)] += total;
        j = j2;
      }
      g.row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<int>(g.col.size());
    }
    for (double e : g.exit)
      if (e > lambda)
        throw std::logic_error("uniformization constant below an exit rate");
    g.uniformization_rate = lambda;
    return g;
  }
};

std::uint64_t binomial_guarded(int n, int k) {
  std::uint64_t b = 1;
  for (int i = 1; i <= k; ++i) {
    b = b * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    if (b > 100'000'000ULL) return b;  // way past any guard
  }
  return b;
}

// Row-major batch of distributions evolved under exp(tL) by uniformization.
// Layout is state-major (data[state * rows + r]) so the inner loops stream
// over contiguous memory.
class SemigroupBatch {
 public:
  SemigroupBatch(const Generator& g, int rows)
      : g_(&g), rows_(rows),
        data_(static_cast<std::size_t>(g.num_states) * static_cast<std::size_t>(rows), 0.0) {}

  double& at(int state, int row) {
    return data_[static_cast<std::size_t>(state) * static_cast<std::size_t>(rows_) +
                 static_cast<std::size_t>(row)];
  }
  double at(int state, int row) const {
    return data_[static_cast<std::size_t>(state) * static_cast<std::size_t>(rows_) +
                 static_cast<std::size_t>(row)];
  }
  int rows() const { return rows_; }
  int states() const { return g_->num_states; }

  void evolve(double dt) {
    if (dt == 0.0) return;
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw std::invalid_argument("time increment must be finite and nonnegative");
    const double lt = g_->uniformization_rate * dt;
    const std::size_t total = data_.size();
    std::vector<double> result(total, 0.0);
    std::vector<double> next(total, 0.0);
    const int max_terms =
        static_cast<int>(lt + 40.0 * std::sqrt(lt + 10.0) + 100.0);
    double cumulative = 0.0;
    for (int m = 0; m <= max_terms; ++m) {
      const double logw =
          -lt + m * std::log(lt) - std::lgamma(static_cast<double>(m) + 1.0);
      const double w = std::exp(logw);
      if (w > 0.0) {
        for (std::size_t i = 0; i < total; ++i) result[i] += w * data_[i];
        cumulative += w;
      }
      if (m >= lt && 1.0 - cumulative < kPoissonTail) break;
      step(next);
      data_.swap(next);
    }
    data_.swap(result);
  }

 private:
  // data <- data * P with P = I + L / Lambda.
  void step(std::vector<double>& out) {
    const Generator& g = *g_;
    const double inv_lambda = 1.0 / g.uniformization_rate;
    const int R = rows_;
    std::fill(out.begin(), out.end(), 0.0);
    for (int i = 0; i < g.num_states; ++i) {
      const double stay = 1.0 - g.exit[static_cast<std::size_t>(i)] * inv_lambda;
      const double* src = &data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(R)];
      double* dst = &out[static_cast<std::size_t>(i) * static_cast<std::size_t>(R)];
      for (int r = 0; r < R; ++r) dst[r] += stay * src[r];
      for (int e = g.row_ptr[static_cast<std::size_t>(i)];
           e < g.row_ptr[static_cast<std::size_t>(i) + 1]; ++e) {
        const double w = g.rate[static_cast<std::size_t>(e)] * inv_lambda;
        double* tgt = &out[static_cast<std::size_t>(g.col[static_cast<std::size_t>(e)]) *
                           static_cast<std::size_t>(R)];
        for (int r = 0; r < R; ++r) tgt[r] += w * src[r];
      }
    }
  }

  const Generator* g_;
  int rows_;
  std::vector<double> data_;
};

// Worst score over batch rows; score maps one distribution row to a real.
template <class Score>
double worst_score(const SemigroupBatch& batch, const Score& score) {
  double worst = 0.0;
  std::vector<double> mu(static_cast<std::size_t>(batch.states()));
  for (int r = 0; r < batch.rows(); ++r) {
    for (int s = 0; s < batch.states(); ++s)
      mu[static_cast<std::size_t>(s)] = batch.at(s, r);
    worst = std::max(worst, score(mu));
  }
  return worst;
}

// First time the (monotone non-increasing) worst score falls to eps, by
// doubling then bisection at relative tolerance 1e-6.
template <class Score>
double worst_decay_time(const Generator& g, const std::vector<int>& starts,
                        const Score& score, double eps) {
  SemigroupBatch batch(g, static_cast<int>(starts.size()));
  for (int r = 0; r < static_cast<int>(starts.size()); ++r)
    batch.at(starts[static_cast<std::size_t>(r)], r) = 1.0;

  if (worst_score(batch, score) <= eps) return 0.0;

  double lo = 0.0, hi = 1.0;
  SemigroupBatch at_lo = batch;
  SemigroupBatch probe = batch;
  probe.evolve(hi);
  while (worst_score(probe, score) > eps) {
    at_lo = probe;
    lo = hi;
    hi *= 2.0;
    probe.evolve(hi - lo);
    if (hi > 1e12)
      throw std::runtime_error("worst-case decay time failed to bracket");
  }
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    SemigroupBatch trial = at_lo;
    trial.evolve(mid - lo);
    if (worst_score(trial, score) <= eps) {
      hi = mid;
    } else {
      at_lo = std::move(trial);
      lo = mid;
    }
  }
  return hi;
}

void check_distribution(const DistributionVector& mu, int states) {
  if (static_cast<int>(mu.size()) != states)
    throw std::invalid_argument("distribution length does not match state space");
  double sum = 0.0;
  for (double x : mu) {
    if (x < 0.0) throw std::invalid_argument("distribution entries must be nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("distribution must sum to 1 within 1e-12");
}

std::vector<int> all_rows(int n) {
  std::vector<int> rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
  return rows;
}

}  // namespace

bool exact_fep_feasible(int n, int k) {
  return n <= 20 && k >= 0 && k <= n &&
         binomial_guarded(n, k) <= static_cast<std::uint64_t>(kExactStateGuard);
}

RateModel<FepConfiguration> build_fep_generator(int n, int k) {
  if (!exact_fep_feasible(n, k))
    throw std::invalid_argument("state space exceeds the exact-analysis guard");
  RateModel<FepConfiguration> model;
  model.states = enumerate_configurations(n, k, false);
  for (int i = 0; i < static_cast<int>(model.states.size()); ++i)
    model.index.emplace(model.states[static_cast<std::size_t>(i)], i);

  TripletBuilder builder(static_cast<int>(model.states.size()));
  for (int i = 0; i < builder.num_states; ++i) {
    const auto occ = model.states[static_cast<std::size_t>(i)].to_bytes();
    for (int x = 0; x < n; ++x) {
      if (!occ[static_cast<std::size_t>(x)]) continue;
      for (int z : {-1, 1}) {
        const int from_nbr = wrap(x - z, n), target = wrap(x + z, n);
        if (!occ[static_cast<std::size_t>(from_nbr)] ||
            occ[static_cast<std::size_t>(target)])
          continue;
        auto next = occ;
        next[static_cast<std::size_t>(x)] = 0;
        next[static_cast<std::size_t>(target)] = 1;
        builder.add(i, model.index.at(FepConfiguration(n, next)), 1.0);
      }
    }
  }
  model.generator = builder.compress(2.0 * n);
  return model;
}

RateModel<RankedState> build_tagged_fep_generator(int n, int k) {
  const auto ergodic = enumerate_configurations(n, k, true);
  if (static_cast<std::uint64_t>(ergodic.size()) * static_cast<std::uint64_t>(k) >
      static_cast<std::uint64_t>(kExactStateGuard))
    throw std::invalid_argument("state space exceeds the exact-analysis guard");

  RateModel<RankedState> model;
  for (int rank = 1; rank <= k; ++rank)
    for (const auto& eta : ergodic)
      model.states.push_back(RankedState{rank, eta});
  for (int i = 0; i < static_cast<int>(model.states.size()); ++i)
    model.index.emplace(model.states[static_cast<std::size_t>(i)], i);

  TripletBuilder builder(static_cast<int>(model.states.size()));
  for (int i = 0; i < builder.num_states; ++i) {
    const auto& state = model.states[static_cast<std::size_t>(i)];
    const auto occ = state.eta.to_bytes();
    for (int x = 0; x < n; ++x) {
      if (!occ[static_cast<std::size_t>(x)]) continue;
      for (int z : {-1, 1}) {
        const int from_nbr = wrap(x - z, n), target = wrap(x + z, n);
        if (!occ[static_cast<std::size_t>(from_nbr)] ||
            occ[static_cast<std::size_t>(target)])
          continue;
        auto next = occ;
        next[static_cast<std::size_t>(x)] = 0;
        next[static_cast<std::size_t>(target)] = 1;
        int cross = 0;
        if (x == n - 1 && target == 0) cross = 1;
        if (x == 0 && target == n - 1) cross = -1;
        const int rank2 = (state.rank - 1 + cross + k) % k + 1;
        builder.add(i,
                    model.index.at(RankedState{rank2, FepConfiguration(n, next)}),
                    1.0);
      }
    }
  }
  model.generator = builder.compress(2.0 * n);
  return model;
}

RateModel<JointState> build_joint_generator(int n, int k) {
  if (2 * k <= n || k > n)
    throw std::invalid_argument("need N/2 < K <= N");
  const int p = 2 * k - n;
  // Enumerate Gamma_{K,P} through the shared layer enumerator.
  const auto layer = enumerate_configurations(k, p, false);
  if (static_cast<std::uint64_t>(layer.size()) * static_cast<std::uint64_t>(n) >
      static_cast<std::uint64_t>(kExactStateGuard))
    throw std::invalid_argument("state space exceeds the exact-analysis guard");

  RateModel<JointState> model;
  for (int x = 1; x <= n; ++x)
    for (const auto& word : layer)
      model.states.push_back(JointState{x, SsepConfiguration::from_bits(word.to_string())});
  for (int i = 0; i < static_cast<int>(model.states.size()); ++i)
    model.index.emplace(model.states[static_cast<std::size_t>(i)], i);

  TripletBuilder builder(static_cast<int>(model.states.size()));
  for (int i = 0; i < builder.num_states; ++i) {
    const auto& state = model.states[static_cast<std::size_t>(i)];
    const auto occ = state.sigma.to_bytes();
    for (int e = 0; e < k; ++e) {
      const int f = wrap(e + 1, k);
      if (occ[static_cast<std::size_t>(e)] == occ[static_cast<std::size_t>(f)])
        continue;  // self-loop contributes nothing to the generator
      auto next = occ;
      std::swap(next[static_cast<std::size_t>(e)], next[static_cast<std::size_t>(f)]);
      int x2 = state.position;
      if (e == k - 1) {
        const int delta = occ[static_cast<std::size_t>(e)] ? 1 : -1;
        x2 = (state.position - 1 + delta + n) % n + 1;
      }
      builder.add(i, model.index.at(JointState{x2, SsepConfiguration(k, next)}),
                  1.0);
    }
  }
  model.generator = builder.compress(2.0 * n);
  return model;
}

DistributionVector distribution_at(const Generator& generator,
                                   const DistributionVector& mu0, double t) {
  if (!std::isfinite(t) || t < 0.0)
    throw std::invalid_argument("time must be finite and nonnegative");
  check_distribution(mu0, generator.num_states);
  SemigroupBatch batch(generator, 1);
  for (int s = 0; s < generator.num_states; ++s)
    batch.at(s, 0) = mu0[static_cast<std::size_t>(s)];
  batch.evolve(t);
  DistributionVector out(static_cast<std::size_t>(generator.num_states));
  for (int s = 0; s < generator.num_states; ++s)
    out[static_cast<std::size_t>(s)] = batch.at(s, 0);
  return out;
}

double tv_distance(const DistributionVector& mu, const DistributionVector& nu) {
  if (mu.size() != nu.size())
    throw std::invalid_argument("tv_distance needs matching index sets");
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) sum += std::abs(mu[i] - nu[i]);
  return 0.5 * sum;
}

DistributionVector stationary_fep_distribution(
    const RateModel<FepConfiguration>& model) {
  DistributionVector pi(model.states.size(), 0.0);
  int ergodic = 0;
  for (const auto& eta : model.states)
    if (is_ergodic(eta)) ++ergodic;
  for (std::size_t i = 0; i < model.states.size(); ++i)
    if (is_ergodic(model.states[i])) pi[i] = 1.0 / ergodic;
  return pi;
}

bool uniform_ergodic_stationary(const RateModel<FepConfiguration>& model) {
  const int s = static_cast<int>(model.states.size());
  std::vector<char> ergodic(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i)
    ergodic[static_cast<std::size_t>(i)] = is_ergodic(model.states[static_cast<std::size_t>(i)]);
  std::vector<long long> in_degree(static_cast<std::size_t>(s), 0);
  std::vector<long long> out_degree(static_cast<std::size_t>(s), 0);
  const Generator& g = model.generator;
  for (int i = 0; i < s; ++i) {
    for (int e = g.row_ptr[static_cast<std::size_t>(i)];
         e < g.row_ptr[static_cast<std::size_t>(i) + 1]; ++e) {
      const int j = g.col[static_cast<std::size_t>(e)];
      const long long r = std::llround(g.rate[static_cast<std::size_t>(e)]);
      if (ergodic[static_cast<std::size_t>(i)]) {
        if (!ergodic[static_cast<std::size_t>(j)]) return false;  // leak out of E
        out_degree[static_cast<std::size_t>(i)] += r;
        in_degree[static_cast<std::size_t>(j)] += r;
      }
    }
  }
  for (int i = 0; i < s; ++i)
    if (ergodic[static_cast<std::size_t>(i)] &&
        in_degree[static_cast<std::size_t>(i)] != out_degree[static_cast<std::size_t>(i)])
      return false;
  return true;
}

bool uniform_joint_stationary(const RateModel<JointState>& model) {
  const int s = static_cast<int>(model.states.size());
  std::vector<long long> in_degree(static_cast<std::size_t>(s), 0);
  const Generator& g = model.generator;
  for (int i = 0; i < s; ++i)
    for (int e = g.row_ptr[static_cast<std::size_t>(i)];
         e < g.row_ptr[static_cast<std::size_t>(i) + 1]; ++e)
      in_degree[static_cast<std::size_t>(g.col[static_cast<std::size_t>(e)])] +=
          std::llround(g.rate[static_cast<std::size_t>(e)]);
  for (int i = 0; i < s; ++i)
    if (in_degree[static_cast<std::size_t>(i)] !=
        std::llround(g.exit[static_cast<std::size_t>(i)]))
      return false;
  return true;
}

std::vector<double> tv_curve_exact(const RateModel<FepConfiguration>& model,
                                   const FepConfiguration& start,
                                   const std::vector<double>& times) {
  const int idx = model.index_of(start);
  if (idx < 0) throw std::invalid_argument("start state not in the model");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] < times[i - 1])
      throw std::invalid_argument("times must be non-decreasing");
  const DistributionVector pi = stationary_fep_distribution(model);
  SemigroupBatch batch(model.generator, 1);
  batch.at(idx, 0) = 1.0;
  std::vector<double> out;
  double t = 0.0;
  DistributionVector mu(model.states.size());
  for (double target : times) {
    batch.evolve(target - t);
    t = target;
    for (int sidx = 0; sidx < batch.states(); ++sidx)
      mu[static_cast<std::size_t>(sidx)] = batch.at(sidx, 0);
    out.push_back(tv_distance(mu, pi));
  }
  return out;
}

double mixing_time(const RateModel<FepConfiguration>& model, double eps) {
  const DistributionVector pi = stationary_fep_distribution(model);
  const auto score = [&pi](const DistributionVector& mu) {
    return tv_distance(mu, pi);
  };
  return worst_decay_time(model.generator,
                          all_rows(static_cast<int>(model.states.size())), score,
                          eps);
}

double mixing_time(int n, int k, double eps) {
  if (2 * k <= n || k > n)
    throw std::invalid_argument("mixing time needs N/2 < K <= N");
  return mixing_time(build_fep_generator(n, k), eps);
}

double ergodic_mixing_time(const RateModel<FepConfiguration>& model,
                           double eps) {
  const DistributionVector pi = stationary_fep_distribution(model);
  std::vector<int> starts;
  for (int i = 0; i < static_cast<int>(model.states.size()); ++i)
    if (is_ergodic(model.states[static_cast<std::size_t>(i)])) starts.push_back(i);
  const auto score = [&pi](const DistributionVector& mu) {
    return tv_distance(mu, pi);
  };
  return worst_decay_time(model.generator, starts, score, eps);
}

double ergodic_mixing_time(int n, int k, double eps) {
  if (2 * k <= n || k > n)
    throw std::invalid_argument("mixing time needs N/2 < K <= N");
  return ergodic_mixing_time(build_fep_generator(n, k), eps);
}

double transience_time(const RateModel<FepConfiguration>& model, double eps) {
  std::vector<char> transient(model.states.size());
  for (std::size_t i = 0; i < model.states.size(); ++i)
    transient[i] = !is_ergodic(model.states[i]);
  const auto score = [&transient](const DistributionVector& mu) {
    double mass = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (transient[i]) mass += mu[i];
    return mass;
  };
  return worst_decay_time(model.generator,
                          all_rows(static_cast<int>(model.states.size())), score,
                          eps);
}

double transience_time(int n, int k, double eps) {
  if (2 * k <= n || k >= n)
    throw std::invalid_argument("transience time needs N/2 < K < N");
  return transience_time(build_fep_generator(n, k), eps);
}

}  // namespace feplab
