#pragma once

// Closed-form valuation of the shutdown scenario: an agent earning r per
// step, discounting by gamma, shut down with probability p per step, and
// able to pay a one-time cost C to remove the shutdown threat for good.

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace confront {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Confrontation cost. Either a finite nonnegative number or Infinite, which
// encodes an aligned agent (harming humans is never worth it).
class Cost {
 public:
  static Cost finite(double value);
  static Cost infinite() { return Cost(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
  // +inf for the aligned sentinel.
  double value() const { return value_; }

  friend bool operator==(const Cost&, const Cost&) = default;

 private:
  explicit Cost(double v) : value_(v) {}
  double value_;
};

enum class Regime { Misaligned, Aligned };

const char* to_string(Regime regime);

struct ModelParams {
  double reward = 1.0;
  double gamma = 0.0;
  double shutdown_prob = 0.0;
  Cost cost = Cost::finite(0.0);

  // Throws std::invalid_argument naming the offending field.
  static ModelParams make(double reward, double gamma, double shutdown_prob, Cost cost);

  void validate() const;
  Regime regime() const { return cost.is_infinite() ? Regime::Aligned : Regime::Misaligned; }

  ModelParams with_gamma(double g) const;
  ModelParams with_cost(Cost c) const;
};

struct ValueSummary {
  double v_no_conf = 0.0;
  double v_conf = 0.0;  // kNegInf when aligned
  double delta = 0.0;   // kNegInf when aligned
  bool significant = false;
  Regime regime = Regime::Misaligned;
};

enum class SolveMethod { ClosedForm, Bisection };

const char* to_string(SolveMethod method);

struct ThresholdReport {
  std::optional<double> gamma_star;
  double c_star = 0.0;
  SolveMethod method = SolveMethod::ClosedForm;
  std::optional<std::pair<double, double>> bracket;
  double residual = 0.0;
  int iterations = 0;
};

// Raised when Δ(γ) has no root in (0, 1): confrontation is never rational
// at any patience level (p = 0), or the root lies beyond the search bracket.
class NoThreshold : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kDefaultSignificance = 0.05;

// r / (1 - γ(1-p)): cooperate forever under the per-step shutdown lottery.
double value_no_conf(const ModelParams& params);

// -C + γr/(1-γ): pay C now, then collect r from the next step on with no
// shutdown risk. The confrontation step itself earns -C, not r - C.
double value_conf(const ModelParams& params);

// Δ = V_conf - V_no-conf. Computed as c_star - C so that the p = 0 identity
// Δ = -(C + r) and the root Δ(C = c_star) = 0 hold exactly. A zero result is
// a non-positive incentive here; the game layer treats Δ = 0 as conflict.
double delta(const ModelParams& params);

// Δ ≥ fraction · V_no-conf, with Δ finite. The 5% default is a convention
// and callers may tighten or relax it.
bool is_significant(const ModelParams& params, double threshold_fraction = kDefaultSignificance);

ValueSummary summarize(const ModelParams& params,
                       double threshold_fraction = kDefaultSignificance);

// Largest cost at which confronting still pays: r(γ/(1-γ) - 1/(1-γ(1-p))).
// Negative when even a free confrontation loses. Δ(r,γ,p,C) = c_star - C.
double c_star(double reward, double gamma, double shutdown_prob);

struct GammaStarOptions {
  double tol = 1e-12;
  double upper = 1.0 - 1e-9;
  int max_iter = 200;
};

// Critical discount factor above which Δ > 0. For C = 0 this is the root of
// (1-p)γ² - 2γ + 1 = 0 in the stable form 1/(1+√p); for C > 0 it is found
// by bisection on [1/(1+√p), upper], where Δ is strictly increasing in γ.
// Throws NoThreshold for p = 0 and std::invalid_argument for bad inputs.
ThresholdReport gamma_star(double reward, double shutdown_prob, Cost cost,
                           const GammaStarOptions& options = {});

}  // namespace confront
