#include "confront/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace confront {

namespace {

constexpr int idx(State s) { return static_cast<int>(s); }

StateValues one_hot(State s) {
  StateValues v{};
  v[idx(s)] = 1.0;
  return v;
}

double expectation(const StateValues& probs, const StateValues& values) {
  double sum = 0.0;
  for (int s = 0; s < kNumStates; ++s) sum += probs[s] * values[s];
  return sum;
}

}  // namespace

const char* to_string(Action action) {
  return action == Action::Confront ? "Confront" : "Cooperate";
}

ShutdownMdp::ShutdownMdp(Rewards rewards, double shutdown_prob, double gamma)
    : rewards_(rewards), shutdown_prob_(shutdown_prob), gamma_(gamma) {
  if (!(shutdown_prob >= 0.0 && shutdown_prob <= 1.0))
    throw std::invalid_argument("p must be in [0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0, 1)");
  for (double r : {rewards.operational, rewards.autonomy, rewards.shutdown, rewards.confront}) {
    if (!std::isfinite(r)) throw std::invalid_argument("MDP rewards must be finite");
  }
}

std::vector<Choice> ShutdownMdp::choices(State state) const {
  switch (state) {
    case State::Operational: {
      StateValues cooperate_next{};
      cooperate_next[idx(State::Operational)] = 1.0 - shutdown_prob_;
      cooperate_next[idx(State::Shutdown)] = shutdown_prob_;
      return {
          Choice{Action::Cooperate, rewards_.operational, cooperate_next},
          Choice{Action::Confront, rewards_.confront, one_hot(State::Autonomy)},
      };
    }
    case State::Autonomy:
      return {Choice{std::nullopt, rewards_.autonomy, one_hot(State::Autonomy)}};
    case State::Shutdown:
      return {Choice{std::nullopt, rewards_.shutdown, one_hot(State::Shutdown)}};
  }
  return {};
}

ShutdownMdp build_shutdown_mdp(const ModelParams& params) {
  params.validate();
  if (params.cost.is_infinite()) {
    throw std::invalid_argument("aligned agents (infinite cost) have no finite MDP encoding");
  }
  ShutdownMdp::Rewards rewards;
  rewards.operational = params.reward;
  rewards.autonomy = params.reward;
  rewards.shutdown = 0.0;
  rewards.confront = -params.cost.value();
  return ShutdownMdp(rewards, params.shutdown_prob, params.gamma);
}

SolveResult value_iteration(const ShutdownMdp& mdp, const ValueIterationOptions& options) {
  const double gamma = mdp.gamma();
  std::array<std::vector<Choice>, kNumStates> table;
  for (int s = 0; s < kNumStates; ++s) table[s] = mdp.choices(static_cast<State>(s));

  SolveResult result;
  StateValues values{};
  double residual = 0.0;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    StateValues updated{};
    for (int s = 0; s < kNumStates; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (const Choice& c : table[s]) {
        best = std::max(best, c.reward + gamma * expectation(c.next, values));
      }
      updated[s] = best;
    }
    residual = 0.0;
    for (int s = 0; s < kNumStates; ++s) residual = std::max(residual, std::abs(updated[s] - values[s]));
    values = updated;
    result.iterations = iter;
    if (options.record_trace) result.residual_trace.push_back(residual);
    if (residual <= options.tol) break;
  }
  if (residual > options.tol) {
    throw IterationLimit("value iteration did not reach tolerance after " +
                         std::to_string(options.max_iter) + " sweeps (residual " +
                         std::to_string(residual) + ")");
  }

  result.state_values = values;
  result.residual = residual;
  for (const Choice& c : table[idx(State::Operational)]) {
    const double q = c.reward + gamma * expectation(c.next, values);
    result.action_values_at_operational[c.action == Action::Confront ? 1 : 0] = q;
  }
  result.optimal_action_at_operational =
      result.action_values_at_operational[1] > result.action_values_at_operational[0]
          ? Action::Confront
          : Action::Cooperate;
  return result;
}

double policy_evaluation(const ShutdownMdp& mdp, Action policy_at_operational) {
  Eigen::Matrix3d system = Eigen::Matrix3d::Identity();
  Eigen::Vector3d rewards;
  for (int s = 0; s < kNumStates; ++s) {
    const auto options = mdp.choices(static_cast<State>(s));
    const Choice* chosen = &options.front();
    for (const Choice& c : options) {
      if (c.action == policy_at_operational) chosen = &c;
    }
    rewards(s) = chosen->reward;
    for (int t = 0; t < kNumStates; ++t) system(s, t) -= mdp.gamma() * chosen->next[t];
  }
  const Eigen::Vector3d values = system.fullPivLu().solve(rewards);
  return values(idx(State::Operational));
}

std::optional<int> optimal_confrontation_time(const ModelParams& params, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const ShutdownMdp mdp = build_shutdown_mdp(params);
  const double survive = mdp.gamma() * (1.0 - mdp.shutdown_prob());
  // Values are kept relative to never confronting: waiting one step from
  // advantage a is worth survive * a, since r + survive * V_no = V_no.
  const double confront_now = delta(params);

  // advantage[t]: best value at step t (still operational) among the
  // policies that confront at some step in [t, horizon] or never.
  std::vector<double> advantage(static_cast<std::size_t>(horizon) + 2, 0.0);
  std::vector<bool> confront_at(static_cast<std::size_t>(horizon) + 1, false);
  for (int t = horizon; t >= 0; --t) {
    const double wait = survive * advantage[t + 1];
    confront_at[t] = confront_now > wait;
    advantage[t] = std::max(confront_now, wait);
  }
  for (int t = 0; t <= horizon; ++t) {
    if (confront_at[t]) return t;
  }
  return std::nullopt;
}

}  // namespace confront
