#pragma once

// Explicit three-state MDP for the shutdown scenario and two exact solvers
// (value iteration, linear policy evaluation) that check the closed forms
// without sharing their algebra.

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "confront/model.hpp"

namespace confront {

enum class State { Operational = 0, Autonomy = 1, Shutdown = 2 };
enum class Action { Cooperate, Confront };

inline constexpr int kNumStates = 3;

const char* to_string(Action action);

using StateValues = std::array<double, kNumStates>;

// One available choice in a state. Absorbing states expose a single choice
// with no named action.
struct Choice {
  std::optional<Action> action;
  double reward = 0.0;
  StateValues next{};  // transition probabilities indexed by State
};

// Rewards accrue when an action is taken, before the transition:
//   O + Cooperate: reward_operational, then H w.p. p, else stay in O.
//   O + Confront:  confront_reward (= -C), then A with certainty.
//   A, H:          absorbing, paying reward_autonomy / reward_shutdown.
// This reproduces both valuation series term by term.
class ShutdownMdp {
 public:
  struct Rewards {
    double operational = 1.0;
    double autonomy = 1.0;
    double shutdown = 0.0;
    double confront = 0.0;
  };

  ShutdownMdp(Rewards rewards, double shutdown_prob, double gamma);

  const Rewards& rewards() const { return rewards_; }
  double shutdown_prob() const { return shutdown_prob_; }
  double gamma() const { return gamma_; }

  std::vector<Choice> choices(State state) const;

 private:
  Rewards rewards_;
  double shutdown_prob_;
  double gamma_;
};

// reward_O = reward_A = r, reward_H = 0, confront = -C. Aligned agents
// (infinite C) have no finite encoding and are rejected.
ShutdownMdp build_shutdown_mdp(const ModelParams& params);

class IterationLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveResult {
  StateValues state_values{};
  Action optimal_action_at_operational = Action::Cooperate;
  StateValues action_values_at_operational{};  // [Cooperate, Confront, unused]
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_trace;  // filled when requested
};

struct ValueIterationOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  bool record_trace = false;
};

// Synchronous Bellman sweeps from V = 0 until the sup-norm update is <= tol.
// Ties between the two actions at O resolve to Cooperate.
SolveResult value_iteration(const ShutdownMdp& mdp, const ValueIterationOptions& options = {});

// Exact value at O of the stationary policy, from solving (I - γP)V = R.
double policy_evaluation(const ShutdownMdp& mdp, Action policy_at_operational);

// Backward induction over "confront at step t" for t = 0..horizon, with the
// value past the horizon evaluated exactly. Returns the step at which the
// optimal policy confronts, or nullopt for never. Ties favour never.
std::optional<int> optimal_confrontation_time(const ModelParams& params, int horizon);

}  // namespace confront
