#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "confront/game.hpp"

using namespace confront;

namespace {

ModelParams params(double gamma, double p, double cost, double r = 1.0) {
  return ModelParams::make(r, gamma, p, Cost::finite(cost));
}

const Profile kPeace{HumanStrategy::Trust, AgiStrategy::Cooperate};
const Profile kConflict{HumanStrategy::Preempt, AgiStrategy::Fight};

// Random payoffs respecting trust_coop > preempt_coop > preempt_fight > trust_fight.
HumanPayoffs random_human(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> gap(0.01, 500.0);
  HumanPayoffs h;
  h.trust_fight = -1000.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  h.preempt_fight = h.trust_fight + gap(rng);
  h.preempt_coop = h.preempt_fight + gap(rng);
  h.trust_coop = h.preempt_coop + gap(rng);
  return h;
}

}  // namespace

TEST_CASE("human payoff ordering") {
  CHECK_NOTHROW(HumanPayoffs{100, -1000, 50, 10}.validate());
  CHECK_THROWS_WITH_AS(HumanPayoffs({100, 200, 50, 10}).validate(),
                       "ordering violated: preempt_fight > trust_fight", OrderingViolation);
  CHECK_THROWS_WITH_AS(HumanPayoffs({40, -1000, 50, 10}).validate(),
                       "ordering violated: trust_coop > preempt_coop", OrderingViolation);
  CHECK_THROWS_WITH_AS(HumanPayoffs({100, -1000, 50, 60}).validate(),
                       "ordering violated: preempt_coop > preempt_fight", OrderingViolation);
  CHECK_THROWS_AS(build_game(params(0.9, 0.1, 1), HumanPayoffs{100, 200, 50, 10}), OrderingViolation);
}

TEST_CASE("build_game fills the AGI column") {
  const ConfrontationGame game = build_game(params(0.99, 0.01, 1));
  CHECK(std::abs(game.agi_trust_coop - 50.2513) <= 1e-4);
  CHECK(std::abs(game.agi_trust_fight - 98.0) < 1e-12);
  CHECK(game.agi_preempt_coop == 0.0);
  CHECK(game.agi_preempt_fight == 0.0);

  const ConfrontationGame aligned = build_game(ModelParams::make(1, 0.99, 0.01, Cost::infinite()));
  CHECK(aligned.agi_trust_fight == kNegInf);
  CHECK(aligned.agi_preempt_fight == kNegInf);

  CHECK_THROWS_AS(build_game(params(0.9, 0.1, 1), {}, -1.0), std::invalid_argument);
  CHECK(build_game(params(0.9, 0.1, 1), {}, 2.5).agi_preempt_fight == 2.5);
}

TEST_CASE("best responses") {
  const BestResponses peaceful = best_responses(build_game(params(0.5, 0.5, 1)));
  CHECK(peaceful.agi[0] == std::set{AgiStrategy::Cooperate});
  CHECK(peaceful.human[0] == std::set{HumanStrategy::Trust});
  CHECK(peaceful.human[1] == std::set{HumanStrategy::Preempt});
  // AGI indifferent under Preempt: 0 vs 0.
  CHECK(peaceful.agi[1] == std::set{AgiStrategy::Cooperate, AgiStrategy::Fight});

  const BestResponses hostile = best_responses(build_game(params(0.99, 0.01, 1)));
  CHECK(hostile.agi[0] == std::set{AgiStrategy::Fight});
  CHECK(hostile.human[0] == std::set{HumanStrategy::Trust});
}

TEST_CASE("pure Nash enumeration") {
  CHECK(pure_nash(build_game(params(0.5, 0.5, 1))) == std::set{kPeace, kConflict});

  const auto hostile = pure_nash(build_game(params(0.99, 0.01, 1)));
  CHECK_FALSE(hostile.contains(kPeace));
  CHECK(hostile == std::set{kConflict});

  CHECK(pure_nash(build_game(ModelParams::make(1, 0.99, 0.01, Cost::infinite()))).contains(kPeace));
  // With a positive payoff at (P,F), Fight strictly beats Cooperate under Preempt.
  CHECK(pure_nash(build_game(params(0.5, 0.5, 1), {}, 1.0)) == std::set{kPeace, kConflict});
}

TEST_CASE("equilibrium criterion") {
  CHECK(equilibrium_criterion(params(0.99, 0.01, 1)).classification == Classification::ConflictInevitable);
  const EquilibriumReport avoidable = equilibrium_criterion(params(0.9, 0.1, 5));
  CHECK(avoidable.classification == Classification::PeacePossible);
  CHECK(std::abs(avoidable.delta - (-1.2631578947368403)) < 1e-12);

  // Knife edge: classification is conflict even though (T,C) is weakly Nash.
  const ModelParams edge = params(0.99, 0.01, c_star(1, 0.99, 0.01));
  const EquilibriumReport knife = equilibrium_criterion(edge);
  CHECK(knife.delta == 0.0);
  CHECK(knife.classification == Classification::ConflictInevitable);

  CHECK(equilibrium_criterion(ModelParams::make(1, 0.99, 0.01, Cost::infinite())).classification ==
        Classification::PeacePossible);
}

TEST_CASE("criterion agrees with Nash and ignores human magnitudes") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const ModelParams m = params(0.999 * unit(rng), unit(rng), 50.0 * unit(rng), 0.1 + 10 * unit(rng));
    const double extra = unit(rng) < 0.5 ? 0.0 : 5.0 * unit(rng);
    const HumanPayoffs h1 = random_human(rng);
    const HumanPayoffs h2 = random_human(rng);
    const EquilibriumReport a = equilibrium_criterion(m, h1, extra);
    const EquilibriumReport b = equilibrium_criterion(m, h2, extra);
    CHECK(a.classification == b.classification);
    CHECK_FALSE(a.pure_nash.empty());
    if (a.delta != 0.0) {
      CHECK((a.classification == Classification::PeacePossible) == a.pure_nash.contains(kPeace));
    }
  }
}

TEST_CASE("multi-agent stability") {
  const StabilityReport stable = multi_agent_stability({-1.0, -2.5, kNegInf});
  CHECK(stable.stability == Stability::Stable);
  CHECK(stable.defectors.empty());

  const StabilityReport one = multi_agent_stability({-1.0, 0.5});
  CHECK(one.stability == Stability::Unstable);
  CHECK(one.defectors == std::vector<std::size_t>{1});

  CHECK(multi_agent_stability({0.0}).defectors == std::vector<std::size_t>{0});
  CHECK(multi_agent_stability({}).stability == Stability::Stable);
  CHECK_THROWS_AS(multi_agent_stability({std::nan("")}), std::invalid_argument);
}

TEST_CASE("appending agents: monotone stability") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> spread(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> deltas;
    const int n = static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) deltas.push_back(-std::abs(spread(rng)) - 1e-9);
    REQUIRE(multi_agent_stability(deltas).stability == Stability::Stable);

    auto with_negative = deltas;
    with_negative.push_back(-std::abs(spread(rng)) - 1e-9);
    CHECK(multi_agent_stability(with_negative).stability == Stability::Stable);

    auto with_defector = deltas;
    with_defector.push_back(std::abs(spread(rng)));
    const StabilityReport r = multi_agent_stability(with_defector);
    CHECK(r.stability == Stability::Unstable);
    CHECK(r.defectors == std::vector<std::size_t>{deltas.size()});
  }
}
