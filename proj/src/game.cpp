#include "confront/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace confront {

const char* to_string(HumanStrategy s) { return s == HumanStrategy::Trust ? "Trust" : "Preempt"; }
const char* to_string(AgiStrategy s) { return s == AgiStrategy::Cooperate ? "Cooperate" : "Fight"; }

const char* to_string(Classification c) {
  return c == Classification::PeacePossible ? "PeacePossible" : "ConflictInevitable";
}

const char* to_string(Stability s) { return s == Stability::Stable ? "Stable" : "Unstable"; }

void HumanPayoffs::validate() const {
  for (double v : {trust_coop, trust_fight, preempt_coop, preempt_fight}) {
    if (!std::isfinite(v)) throw OrderingViolation("human payoffs must be finite");
  }
  if (!(trust_coop > preempt_coop))
    throw OrderingViolation("ordering violated: trust_coop > preempt_coop");
  if (!(preempt_coop > preempt_fight))
    throw OrderingViolation("ordering violated: preempt_coop > preempt_fight");
  if (!(preempt_fight > trust_fight))
    throw OrderingViolation("ordering violated: preempt_fight > trust_fight");
}

double ConfrontationGame::human_payoff(HumanStrategy h, AgiStrategy a) const {
  if (h == HumanStrategy::Trust) return a == AgiStrategy::Cooperate ? human.trust_coop : human.trust_fight;
  return a == AgiStrategy::Cooperate ? human.preempt_coop : human.preempt_fight;
}

double ConfrontationGame::agi_payoff(HumanStrategy h, AgiStrategy a) const {
  if (h == HumanStrategy::Trust) return a == AgiStrategy::Cooperate ? agi_trust_coop : agi_trust_fight;
  return a == AgiStrategy::Cooperate ? agi_preempt_coop : agi_preempt_fight;
}

ConfrontationGame build_game(const ModelParams& params, const HumanPayoffs& human,
                             double preempt_fight_agi) {
  params.validate();
  human.validate();
  ConfrontationGame game;
  game.human = human;
  game.agi_trust_coop = value_no_conf(params);
  game.agi_preempt_coop = 0.0;
  if (params.cost.is_infinite()) {
    game.agi_trust_fight = kNegInf;
    game.agi_preempt_fight = kNegInf;
    return game;
  }
  if (!(std::isfinite(preempt_fight_agi) && preempt_fight_agi >= game.agi_preempt_coop)) {
    throw std::invalid_argument("preempt_fight_agi must be finite and >= 0 (the AGI payoff at (P,C))");
  }
  game.agi_trust_fight = value_conf(params);
  game.agi_preempt_fight = preempt_fight_agi;
  return game;
}

BestResponses best_responses(const ConfrontationGame& game) {
  constexpr std::array kHuman{HumanStrategy::Trust, HumanStrategy::Preempt};
  constexpr std::array kAgi{AgiStrategy::Cooperate, AgiStrategy::Fight};

  BestResponses br;
  for (AgiStrategy a : kAgi) {
    const double best = std::max(game.human_payoff(HumanStrategy::Trust, a),
                                 game.human_payoff(HumanStrategy::Preempt, a));
    for (HumanStrategy h : kHuman) {
      if (game.human_payoff(h, a) == best) br.human[static_cast<int>(a)].insert(h);
    }
  }
  for (HumanStrategy h : kHuman) {
    const double best = std::max(game.agi_payoff(h, AgiStrategy::Cooperate),
                                 game.agi_payoff(h, AgiStrategy::Fight));
    for (AgiStrategy a : kAgi) {
      if (game.agi_payoff(h, a) == best) br.agi[static_cast<int>(h)].insert(a);
    }
  }
  return br;
}

std::set<Profile> pure_nash(const ConfrontationGame& game) {
  const BestResponses br = best_responses(game);
  std::set<Profile> equilibria;
  for (HumanStrategy h : {HumanStrategy::Trust, HumanStrategy::Preempt}) {
    for (AgiStrategy a : {AgiStrategy::Cooperate, AgiStrategy::Fight}) {
      if (br.human[static_cast<int>(a)].contains(h) && br.agi[static_cast<int>(h)].contains(a)) {
        equilibria.emplace(h, a);
      }
    }
  }
  return equilibria;
}

EquilibriumReport equilibrium_criterion(const ModelParams& params, const HumanPayoffs& human,
                                        double preempt_fight_agi) {
  const ConfrontationGame game = build_game(params, human, preempt_fight_agi);
  EquilibriumReport report;
  report.delta = delta(params);
  report.pure_nash = pure_nash(game);
  report.classification =
      report.delta >= 0.0 ? Classification::ConflictInevitable : Classification::PeacePossible;
  return report;
}

StabilityReport multi_agent_stability(const std::vector<double>& deltas) {
  StabilityReport report;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (std::isnan(deltas[i])) {
      throw std::invalid_argument("delta at index " + std::to_string(i) + " is NaN");
    }
    if (deltas[i] >= 0.0) report.defectors.push_back(i);
  }
  report.stability = report.defectors.empty() ? Stability::Stable : Stability::Unstable;
  return report;
}

}  // namespace confront
