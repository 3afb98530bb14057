#include "confront/model.hpp"

#include <cmath>
#include <string>

namespace confront {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

// Δ/r as a single fraction. Expanding γ/(1-γ) - 1/s with s = 1-γ(1-p)
// gives (γ²p - (1-γ)²) / ((1-γ)s); the numerator vanishes at γ = 1/(1+√p).
double incentive_per_unit_reward(double gamma, double p) {
  const double slack = 1.0 - gamma;
  const double survival_denominator = 1.0 - gamma * (1.0 - p);
  return (gamma * gamma * p - slack * slack) / (slack * survival_denominator);
}

}  // namespace

Cost Cost::finite(double value) {
  require(std::isfinite(value), "cost must be finite (use Cost::infinite() for aligned agents)");
  require(value >= 0.0, "cost must be >= 0");
  return Cost(value);
}

const char* to_string(Regime regime) {
  return regime == Regime::Aligned ? "Aligned" : "Misaligned";
}

const char* to_string(SolveMethod method) {
  return method == SolveMethod::ClosedForm ? "ClosedForm" : "Bisection";
}

ModelParams ModelParams::make(double reward, double gamma, double shutdown_prob, Cost cost) {
  ModelParams params{reward, gamma, shutdown_prob, cost};
  params.validate();
  return params;
}

void ModelParams::validate() const {
  require(std::isfinite(reward) && reward > 0.0, "reward must be finite and > 0");
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
  require(gamma < 1.0, "gamma must be < 1");
  require(std::isfinite(shutdown_prob) && shutdown_prob >= 0.0 && shutdown_prob <= 1.0,
          "p must be in [0, 1]");
  require(cost.is_infinite() || cost.value() >= 0.0, "cost must be >= 0");
}

ModelParams ModelParams::with_gamma(double g) const {
  ModelParams copy = *this;
  copy.gamma = g;
  return copy;
}

ModelParams ModelParams::with_cost(Cost c) const {
  ModelParams copy = *this;
  copy.cost = c;
  return copy;
}

double value_no_conf(const ModelParams& params) {
  return params.reward / (1.0 - params.gamma * (1.0 - params.shutdown_prob));
}

double value_conf(const ModelParams& params) {
  if (params.cost.is_infinite()) return kNegInf;
  return -params.cost.value() + params.gamma * params.reward / (1.0 - params.gamma);
}

double delta(const ModelParams& params) {
  if (params.cost.is_infinite()) return kNegInf;
  return c_star(params.reward, params.gamma, params.shutdown_prob) - params.cost.value();
}

bool is_significant(const ModelParams& params, double threshold_fraction) {
  require(threshold_fraction > 0.0, "significance threshold must be > 0");
  const double d = delta(params);
  if (!std::isfinite(d)) return false;
  return d >= threshold_fraction * value_no_conf(params);
}

ValueSummary summarize(const ModelParams& params, double threshold_fraction) {
  ValueSummary summary;
  summary.v_no_conf = value_no_conf(params);
  summary.v_conf = value_conf(params);
  summary.delta = delta(params);
  summary.significant = is_significant(params, threshold_fraction);
  summary.regime = params.regime();
  return summary;
}

double c_star(double reward, double gamma, double shutdown_prob) {
  require(gamma < 1.0, "gamma must be < 1");
  return reward * incentive_per_unit_reward(gamma, shutdown_prob);
}

ThresholdReport gamma_star(double reward, double shutdown_prob, Cost cost,
                           const GammaStarOptions& options) {
  require(std::isfinite(reward) && reward > 0.0, "reward must be finite and > 0");
  require(shutdown_prob >= 0.0 && shutdown_prob <= 1.0, "p must be in [0, 1]");
  require(!cost.is_infinite(), "gamma_star requires a finite cost");
  require(options.tol > 0.0, "tolerance must be > 0");
  if (shutdown_prob == 0.0) {
    throw NoThreshold("no threshold: with p = 0, delta = -(C + r) < 0 for every gamma");
  }

  const double p = shutdown_prob;
  const double free_root = 1.0 / (1.0 + std::sqrt(p));
  const double c = cost.value();
  auto incentive = [&](double g) { return reward * incentive_per_unit_reward(g, p) - c; };

  ThresholdReport report;
  if (c == 0.0) {
    report.gamma_star = free_root;
    report.method = SolveMethod::ClosedForm;
    report.residual = std::abs(incentive(free_root));
    report.c_star = c_star(reward, free_root, p);
    return report;
  }

  double lo = free_root;
  double hi = options.upper;
  if (!(incentive(hi) > 0.0)) {
    throw NoThreshold("no threshold: delta stays <= 0 up to gamma = " + std::to_string(hi) +
                      "; cost exceeds what any admissible discount factor justifies");
  }
  report.method = SolveMethod::Bisection;
  report.bracket = std::make_pair(lo, hi);

  // Δ(lo) = -C < 0 < Δ(hi). Stop once the bracket and the residual are both
  // within tolerance, or the bracket has shrunk to neighbouring doubles.
  double root = 0.5 * (lo + hi);
  double value = incentive(root);
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    root = 0.5 * (lo + hi);
    value = incentive(root);
    if (value == 0.0) break;
    if (value < 0.0) {
      lo = root;
    } else {
      hi = root;
    }
    if (hi - lo <= options.tol && std::abs(value) <= options.tol) break;
    if (std::nextafter(lo, hi) >= hi) break;
  }
  // Return whichever point of the final bracket sits closest to the root.
  for (double candidate : {lo, hi}) {
    const double v = incentive(candidate);
    if (std::abs(v) < std::abs(value)) {
      root = candidate;
      value = v;
    }
  }
  // Keep the root strictly inside the reported bracket.
  if (root <= report.bracket->first) root = std::nextafter(report.bracket->first, 1.0);
  if (root >= report.bracket->second) root = std::nextafter(report.bracket->second, 0.0);

  report.gamma_star = root;
  report.residual = std::abs(incentive(root));
  report.iterations = iter + 1;
  report.c_star = c_star(reward, root, p);
  return report;
}

}  // namespace confront
