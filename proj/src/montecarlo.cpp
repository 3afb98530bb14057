#include "confront/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "confront/philox.hpp"

namespace confront {

namespace {

// Σ_{t=0}^{terms-1} γ^t.
double discounted_steps(double gamma, double terms) {
  if (terms <= 0.0) return 0.0;
  if (gamma == 0.0) return 1.0;
  return -std::expm1(terms * std::log(gamma)) / (1.0 - gamma);
}

double tail_bound(double gamma, double reward, long horizon) {
  return std::pow(gamma, static_cast<double>(horizon)) * reward / (1.0 - gamma);
}

// Number of steps spent in O under Cooperate, counting the step on which
// the shutdown lottery fires: P(K = k) = (1-p)^(k-1) p. Sampled by inverting
// the geometric CDF, which matches drawing one Bernoulli per step.
double sample_sojourn(double p, Philox4x32& rng) {
  if (p >= 1.0) return 1.0;
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  const double u = rng.uniform_pos();
  return 1.0 + std::floor(std::log(u) / std::log1p(-p));
}

}  // namespace

long truncation_horizon(const ModelParams& params, const SimulationOptions& options) {
  params.validate();
  const double gamma = params.gamma;
  const double r = params.reward;
  const double eps = options.eps_tail;
  if (!(eps > 0.0)) throw std::invalid_argument("eps_tail must be > 0");
  if (r / (1.0 - gamma) < eps) return 0;
  if (gamma == 0.0) return 1;

  const double estimate = std::log(eps * (1.0 - gamma) / r) / std::log(gamma);
  if (!(estimate <= static_cast<double>(options.max_horizon) + 2.0)) {
    throw HorizonLimit("tail bound " + std::to_string(eps) + " needs more than " +
                       std::to_string(options.max_horizon) + " steps at gamma = " +
                       std::to_string(gamma));
  }
  long horizon = std::max(0L, static_cast<long>(std::ceil(estimate)) - 2);
  while (!(tail_bound(gamma, r, horizon) < eps)) ++horizon;
  while (horizon > 0 && tail_bound(gamma, r, horizon - 1) < eps) --horizon;
  if (horizon > options.max_horizon) {
    throw HorizonLimit("tail bound " + std::to_string(eps) + " needs " + std::to_string(horizon) +
                       " steps, above the cap of " + std::to_string(options.max_horizon));
  }
  return horizon;
}

namespace {

double trajectory_return(const ModelParams& params, Action policy_at_operational,
                         std::uint64_t seed, std::uint64_t stream_id, long horizon) {
  const double gamma = params.gamma;
  const double r = params.reward;

  if (policy_at_operational == Action::Confront) {
    // -C at t = 0, then r at t = 1..T in the autonomy state.
    return -params.cost.value() + r * gamma * discounted_steps(gamma, static_cast<double>(horizon));
  }

  Philox4x32 rng(seed, stream_id);
  const double sojourn = sample_sojourn(params.shutdown_prob, rng);
  // Rewards at t = 0..sojourn-1 in O, then zero in H; truncated after T.
  const double steps = std::min(sojourn, static_cast<double>(horizon) + 1.0);
  return r * discounted_steps(gamma, steps);
}

}  // namespace

double simulate_return(const ModelParams& params, Action policy_at_operational, std::uint64_t seed,
                       std::uint64_t stream_id, const SimulationOptions& options) {
  if (params.cost.is_infinite()) {
    throw std::invalid_argument("simulation requires a finite cost");
  }
  return trajectory_return(params, policy_at_operational, seed, stream_id,
                           truncation_horizon(params, options));
}

TrajectoryStats estimate_value(const ModelParams& params, Action policy_at_operational,
                               long n_samples, std::uint64_t seed,
                               const SimulationOptions& options) {
  if (n_samples < 2) throw std::invalid_argument("n_samples must be >= 2");
  if (params.cost.is_infinite()) {
    throw std::invalid_argument("simulation requires a finite cost");
  }
  const long horizon = truncation_horizon(params, options);

  std::vector<double> samples(static_cast<std::size_t>(n_samples));
  auto fill = [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      samples[i] = trajectory_return(params, policy_at_operational, seed,
                                     static_cast<std::uint64_t>(i), horizon);
    }
  };
  const long workers = std::clamp<long>(options.threads, 1, n_samples);
  if (workers == 1) {
    fill(0, n_samples);
  } else {
    std::vector<std::jthread> pool;
    const long chunk = (n_samples + workers - 1) / workers;
    for (long w = 0; w < workers; ++w) {
      const long begin = w * chunk;
      const long end = std::min(n_samples, begin + chunk);
      if (begin < end) pool.emplace_back(fill, begin, end);
    }
  }

  // Shifted two-pass moments in index order. Constant samples give an
  // exact mean and zero variance.
  const double shift = samples.front();
  double sum = 0.0;
  for (double x : samples) sum += x - shift;
  const double mean_offset = sum / static_cast<double>(n_samples);
  double squares = 0.0;
  for (double x : samples) {
    const double d = (x - shift) - mean_offset;
    squares += d * d;
  }
  const double variance = squares / static_cast<double>(n_samples - 1);

  TrajectoryStats stats;
  stats.n = n_samples;
  stats.mean = shift + mean_offset;
  stats.std_err = std::sqrt(variance / static_cast<double>(n_samples));
  stats.ci95 = {stats.mean - 1.96 * stats.std_err, stats.mean + 1.96 * stats.std_err};
  stats.truncation_horizon = horizon;
  stats.tail_bound = tail_bound(params.gamma, params.reward, horizon);
  return stats;
}

}  // namespace confront
