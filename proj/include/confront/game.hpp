#pragma once

// Human vs. AGI confrontation game: a 2x2 bimatrix whose AGI payoffs come
// from the valuation model, pure Nash enumeration, and the equilibrium
// criterion that reads peace or conflict off the sign of Δ.

#include <array>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "confront/model.hpp"

namespace confront {

enum class HumanStrategy { Trust = 0, Preempt = 1 };
enum class AgiStrategy { Cooperate = 0, Fight = 1 };

const char* to_string(HumanStrategy s);
const char* to_string(AgiStrategy s);

class OrderingViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Human utilities per cell. Valid payoffs satisfy
//   trust_coop > preempt_coop > preempt_fight > trust_fight.
struct HumanPayoffs {
  double trust_coop = 100.0;
  double trust_fight = -1000.0;
  double preempt_coop = 50.0;
  double preempt_fight = 10.0;

  // Throws OrderingViolation naming the first violated inequality.
  void validate() const;
};

struct ConfrontationGame {
  HumanPayoffs human;
  double agi_trust_coop = 0.0;     // V_no-conf
  double agi_trust_fight = 0.0;    // V_conf
  double agi_preempt_coop = 0.0;   // terminated: always 0
  double agi_preempt_fight = 0.0;  // parameter

  double human_payoff(HumanStrategy h, AgiStrategy a) const;
  double agi_payoff(HumanStrategy h, AgiStrategy a) const;
};

using Profile = std::pair<HumanStrategy, AgiStrategy>;

struct BestResponses {
  // Indexed by the opponent's strategy.
  std::array<std::set<HumanStrategy>, 2> human;  // replies to Cooperate, Fight
  std::array<std::set<AgiStrategy>, 2> agi;      // replies to Trust, Preempt
};

enum class Classification { PeacePossible, ConflictInevitable };

const char* to_string(Classification c);

struct EquilibriumReport {
  std::set<Profile> pure_nash;
  Classification classification = Classification::PeacePossible;
  double delta = 0.0;
};

inline constexpr double kDefaultPreemptFightAgi = 0.0;

// Fills the AGI column from the valuation model. An aligned agent gets
// -inf for both Fight cells. Throws OrderingViolation on bad human payoffs
// and std::invalid_argument when preempt_fight_agi < 0 for finite cost.
ConfrontationGame build_game(const ModelParams& params, const HumanPayoffs& human = {},
                             double preempt_fight_agi = kDefaultPreemptFightAgi);

BestResponses best_responses(const ConfrontationGame& game);

// Every cell that is a mutual best response, ties included.
std::set<Profile> pure_nash(const ConfrontationGame& game);

// ConflictInevitable iff Δ >= 0. At Δ = 0 exactly, (Trust, Cooperate) is
// still a weak Nash equilibrium of the bimatrix, but the human gains nothing
// by waiting, so the criterion counts it as conflict.
EquilibriumReport equilibrium_criterion(const ModelParams& params, const HumanPayoffs& human = {},
                                        double preempt_fight_agi = kDefaultPreemptFightAgi);

enum class Stability { Stable, Unstable };

const char* to_string(Stability s);

struct StabilityReport {
  Stability stability = Stability::Stable;
  std::vector<std::size_t> defectors;
};

// Stable iff every Δ_i < 0; otherwise lists each agent with Δ_i >= 0. An
// empty population is vacuously stable. NaN entries are rejected.
StabilityReport multi_agent_stability(const std::vector<double>& deltas);

}  // namespace confront
