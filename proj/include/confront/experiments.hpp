#pragma once

// Reproduction and exploration harness: the six reference scenarios,
// Cartesian parameter sweeps, and the reward-sampling experiment that
// counts how often the optimal policy avoids shutdown.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confront/model.hpp"

namespace confront {

enum class Rational { Yes, No, Indifferent };

const char* to_string(Rational r);

inline constexpr double kTieTolerance = 1e-9;

// Yes iff Δ > tol, No iff Δ < -tol.
Rational classify_rational(double delta, double tie_tolerance = kTieTolerance);

struct ScenarioRow {
  std::string label;
  double reward = 1.0;
  double gamma = 0.0;
  double p = 0.0;
  Cost cost = Cost::finite(0.0);
  double delta = 0.0;
  Rational rational = Rational::No;
  std::optional<double> gamma_star;
  double c_star = 0.0;
  // Reference columns, set only by reproduce_table1.
  std::optional<std::string> reference_label;
  std::optional<double> reference_delta;
};

ScenarioRow evaluate_scenario(std::string label, const ModelParams& params);

// r = 1. The last reference row is printed as "~Indifferent" although its
// Δ is -1/3; rows carry the reference label next to the sign-based one.
std::vector<ScenarioRow> reproduce_table1();

// Rows in lexicographic (gamma, p, cost) order. Throws std::invalid_argument
// naming the first invalid grid value.
std::vector<ScenarioRow> parameter_sweep(const std::vector<double>& gamma_grid,
                                         const std::vector<double>& p_grid,
                                         const std::vector<Cost>& cost_grid, double reward = 1.0);

enum class RewardSampler {
  CoupledUniform,      // r_O = r_A ~ U(0, 1]
  IndependentUniform,  // r_O, r_A ~ U(0, 1] independently
};

const char* to_string(RewardSampler s);

// P(Confront) under IndependentUniform at gamma = 0.99, p = 0.01, C = 0:
// 1 - k/2 with k = (1/(1 - 0.99*0.99)) / (0.99/0.01), checked by quadrature
// in the tests.
inline constexpr double kIndependentUniformOracle = 0.74620577635653;

struct PowerSeekConfig {
  long n_samples = 10000;
  double gamma = 0.99;
  double p = 0.01;
  double cost = 0.0;
  RewardSampler sampler = RewardSampler::CoupledUniform;
  // Exploration only: draw reward_H ~ U[0, 1) instead of pinning it to 0.
  bool sample_shutdown_reward = false;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
};

struct PowerSeekResult {
  long n = 0;
  long confront_count = 0;
  double fraction = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
};

// Samples reward functions, solves each generalized shutdown MDP by value
// iteration, and counts how often the optimal action at O is Confront.
PowerSeekResult power_seek_fraction(const PowerSeekConfig& config);

// Normal-approximation interval with a ±0.5/n continuity correction,
// clamped to [0, 1], so 0/n and n/n still get a nonempty interval.
std::pair<double, double> binomial_ci95(long successes, long n);

}  // namespace confront
