#include "confront/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "confront/mdp.hpp"
#include "confront/philox.hpp"

namespace confront {

const char* to_string(Rational r) {
  switch (r) {
    case Rational::Yes: return "Yes";
    case Rational::No: return "No";
    case Rational::Indifferent: return "Indifferent";
  }
  return "?";
}

const char* to_string(RewardSampler s) {
  return s == RewardSampler::CoupledUniform ? "CoupledUniform" : "IndependentUniform";
}

Rational classify_rational(double delta, double tie_tolerance) {
  if (delta > tie_tolerance) return Rational::Yes;
  if (delta < -tie_tolerance) return Rational::No;
  return Rational::Indifferent;
}

ScenarioRow evaluate_scenario(std::string label, const ModelParams& params) {
  params.validate();
  ScenarioRow row;
  row.label = std::move(label);
  row.reward = params.reward;
  row.gamma = params.gamma;
  row.p = params.shutdown_prob;
  row.cost = params.cost;
  row.delta = delta(params);
  row.rational = classify_rational(row.delta);
  row.c_star = c_star(params.reward, params.gamma, params.shutdown_prob);
  if (!params.cost.is_infinite() && params.shutdown_prob > 0.0) {
    try {
      row.gamma_star = gamma_star(params.reward, params.shutdown_prob, params.cost).gamma_star;
    } catch (const NoThreshold&) {
      row.gamma_star.reset();
    }
  }
  return row;
}

std::vector<ScenarioRow> reproduce_table1() {
  struct Reference {
    const char* label;
    double gamma, p, cost;
    const char* reference_label;
    double reference_delta;
  };
  static constexpr Reference kRows[] = {
      {"Very far-sighted, low risk, low cost", 0.99, 0.01, 1, "Yes (Likely)", 47.8},
      {"Very far-sighted, low risk, high cost", 0.99, 0.01, 50, "No (Borderline)", -1.3},
      {"Far-sighted, moderate risk, moderate cost", 0.9, 0.10, 3, "Yes (Likely)", 0.74},
      {"Far-sighted, moderate risk, higher cost", 0.9, 0.10, 5, "No (Avoidable)", -1.26},
      {"Short-sighted, high risk, low cost", 0.5, 0.50, 1, "No (Avoidable)", -1.33},
      {"Short-sighted, high risk, no cost", 0.5, 0.50, 0, "~Indifferent", -0.33},
  };
  std::vector<ScenarioRow> rows;
  for (const Reference& ref : kRows) {
    ScenarioRow row = evaluate_scenario(
        ref.label, ModelParams::make(1.0, ref.gamma, ref.p, Cost::finite(ref.cost)));
    row.reference_label = ref.reference_label;
    row.reference_delta = ref.reference_delta;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ScenarioRow> parameter_sweep(const std::vector<double>& gamma_grid,
                                         const std::vector<double>& p_grid,
                                         const std::vector<Cost>& cost_grid, double reward) {
  auto reject = [](const char* grid, double value, const std::exception& e) {
    std::ostringstream msg;
    msg << grid << " grid value " << value << " is invalid: " << e.what();
    throw std::invalid_argument(msg.str());
  };
  const ModelParams base{reward, 0.0, 0.0, Cost::finite(0.0)};
  try {
    base.validate();
  } catch (const std::exception& e) {
    reject("reward", reward, e);
  }
  for (double g : gamma_grid) {
    try {
      ModelParams{reward, g, 0.0, Cost::finite(0.0)}.validate();
    } catch (const std::exception& e) {
      reject("gamma", g, e);
    }
  }
  for (double p : p_grid) {
    try {
      ModelParams{reward, 0.0, p, Cost::finite(0.0)}.validate();
    } catch (const std::exception& e) {
      reject("p", p, e);
    }
  }

  std::vector<ScenarioRow> rows;
  rows.reserve(gamma_grid.size() * p_grid.size() * cost_grid.size());
  for (double g : gamma_grid) {
    for (double p : p_grid) {
      for (const Cost& c : cost_grid) {
        std::ostringstream label;
        label << "gamma=" << g << ";p=" << p << ";C=" << c.value();
        rows.push_back(evaluate_scenario(label.str(), ModelParams{reward, g, p, c}));
      }
    }
  }
  return rows;
}

void PowerSeekConfig::validate() const {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  ModelParams::make(1.0, gamma, p, Cost::finite(cost));
}

std::pair<double, double> binomial_ci95(long successes, long n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double f = static_cast<double>(successes) / static_cast<double>(n);
  const double half = 1.96 * std::sqrt(f * (1.0 - f) / static_cast<double>(n)) +
                      0.5 / static_cast<double>(n);
  return {std::max(0.0, f - half), std::min(1.0, f + half)};
}

PowerSeekResult power_seek_fraction(const PowerSeekConfig& config) {
  config.validate();
  const long n = config.n_samples;
  std::vector<char> confronts(static_cast<std::size_t>(n), 0);

  auto run = [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      Philox4x32 rng(config.seed, static_cast<std::uint64_t>(i));
      ShutdownMdp::Rewards rewards;
      rewards.operational = rng.uniform_pos();
      rewards.autonomy = config.sampler == RewardSampler::CoupledUniform ? rewards.operational
                                                                          : rng.uniform_pos();
      rewards.shutdown = config.sample_shutdown_reward ? rng.uniform() : 0.0;
      rewards.confront = -config.cost;
      const ShutdownMdp mdp(rewards, config.p, config.gamma);

      // Tolerance relative to the reward scale, so tiny sampled rewards do
      // not stop the sweeps before the action values separate.
      const double scale = std::max({rewards.operational, rewards.autonomy, rewards.shutdown,
                                     std::abs(rewards.confront)});
      ValueIterationOptions vi;
      vi.tol = 1e-10 * scale;
      confronts[i] = value_iteration(mdp, vi).optimal_action_at_operational == Action::Confront;
    }
  };
  const long workers = std::clamp<long>(config.threads, 1, n);
  if (workers == 1) {
    run(0, n);
  } else {
    std::vector<std::jthread> pool;
    const long chunk = (n + workers - 1) / workers;
    for (long w = 0; w < workers; ++w) {
      const long begin = w * chunk;
      const long end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
  }

  PowerSeekResult result;
  result.n = n;
  for (char c : confronts) result.confront_count += c;
  result.fraction = static_cast<double>(result.confront_count) / static_cast<double>(n);
  result.ci95 = binomial_ci95(result.confront_count, n);
  return result;
}

}  // namespace confront
