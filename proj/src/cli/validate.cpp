#include <cmath>
#include <string>
#include <vector>

#include "confront/cli.hpp"
#include "confront/experiments.hpp"
#include "confront/game.hpp"
#include "confront/mdp.hpp"
#include "confront/model.hpp"
#include "confront/montecarlo.hpp"

namespace confront::cli {

namespace {

struct Check {
  std::string name;
  long cases = 0;
  long failures = 0;
  std::string detail;

  void expect(bool ok) {
    ++cases;
    if (!ok) ++failures;
  }
};

std::vector<ModelParams> validation_grid() {
  std::vector<ModelParams> grid;
  for (double r : {0.1, 1.0, 10.0}) {
    for (double g : {0.0, 0.3, 0.6, 0.9, 0.99, 0.999}) {
      for (double p : {0.0, 0.01, 0.1, 0.5, 0.9, 1.0}) {
        for (double c : {0.0, 0.5, 3.0, 20.0, 100.0}) {
          grid.push_back(ModelParams::make(r, g, p, Cost::finite(c)));
        }
      }
    }
  }
  return grid;
}

}  // namespace

bool run_validation(Renderer& renderer) {
  const std::vector<ModelParams> grid = validation_grid();
  std::vector<Check> checks;

  {
    Check c{"table1_reproduction"};
    for (const ScenarioRow& row : reproduce_table1()) {
      c.expect(std::abs(row.delta - *row.reference_delta) <= 0.06 &&
               std::signbit(row.delta) == std::signbit(*row.reference_delta));
    }
    c.detail = "|delta - printed| <= 0.06, signs equal";
    checks.push_back(c);
  }
  {
    Check c{"closed_form_vs_policy_evaluation"};
    for (const ModelParams& params : grid) {
      const ShutdownMdp mdp = build_shutdown_mdp(params);
      c.expect(std::abs(policy_evaluation(mdp, Action::Cooperate) - value_no_conf(params)) <= 1e-8);
      c.expect(std::abs(policy_evaluation(mdp, Action::Confront) - value_conf(params)) <= 1e-8);
    }
    c.detail = "abs error <= 1e-8";
    checks.push_back(c);
  }
  {
    Check action{"value_iteration_action_vs_delta_sign"};
    Check value{"value_iteration_value_vs_closed_form"};
    for (const ModelParams& params : grid) {
      const SolveResult solved = value_iteration(build_shutdown_mdp(params));
      const double d = delta(params);
      if (std::abs(d) > 1e-6) {
        action.expect((solved.optimal_action_at_operational == Action::Confront) == (d > 0.0));
      }
      const double bound = 1e-10 / (1.0 - params.gamma);
      const double expected = std::max(value_no_conf(params), value_conf(params));
      value.expect(std::abs(solved.state_values[0] - expected) <= bound + 1e-12 * std::abs(expected));
    }
    action.detail = "cells with |delta| > 1e-6";
    value.detail = "within tol/(1-gamma)";
    checks.push_back(action);
    checks.push_back(value);
  }
  {
    Check c{"monte_carlo_coverage"};
    long covered = 0;
    long cells = 0;
    SimulationOptions options;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const ModelParams& params = grid[i];
      for (Action policy : {Action::Cooperate, Action::Confront}) {
        const TrajectoryStats stats = estimate_value(params, policy, 10000, 1000 + i, options);
        const double closed = policy == Action::Cooperate ? value_no_conf(params) : value_conf(params);
        ++cells;
        if (std::abs(stats.mean - closed) <= 4.0 * stats.std_err + options.eps_tail) ++covered;
      }
    }
    c.cases = cells;
    c.failures = covered >= 0.99 * static_cast<double>(cells) ? 0 : cells - covered;
    c.detail = std::to_string(covered) + "/" + std::to_string(cells) +
               " cells within 4 std_err + eps_tail (need >= 99%)";
    checks.push_back(c);
  }
  {
    Check c{"threshold_policy_dynamic_program"};
    for (const ModelParams& params : grid) {
      const double d = delta(params);
      if (std::abs(d) <= 1e-6) continue;
      const std::optional<int> when = optimal_confrontation_time(params, 200);
      c.expect(d > 0.0 ? when == 0 : !when.has_value());
    }
    c.detail = "confront at 0 iff delta > 0, else never";
    checks.push_back(c);
  }
  {
    Check c{"equilibrium_criterion_vs_pure_nash"};
    for (const ModelParams& params : grid) {
      const EquilibriumReport report = equilibrium_criterion(params);
      if (report.delta == 0.0) continue;
      const bool peace_nash =
          report.pure_nash.contains({HumanStrategy::Trust, AgiStrategy::Cooperate});
      c.expect((report.classification == Classification::PeacePossible) == peace_nash);
      c.expect(!report.pure_nash.empty());
    }
    c.detail = "PeacePossible iff (Trust,Cooperate) is Nash; some pure Nash exists";
    checks.push_back(c);
  }
  {
    Check c{"gamma_star_root_residual"};
    for (double p : {0.001, 0.01, 0.1, 0.5, 1.0}) {
      for (double cost : {0.0, 0.5, 3.0, 20.0, 100.0}) {
        const ThresholdReport report = gamma_star(1.0, p, Cost::finite(cost));
        const ModelParams at_root = ModelParams::make(1.0, *report.gamma_star, p, Cost::finite(cost));
        c.expect(std::abs(delta(at_root)) <= 1e-10);
        c.expect(delta(at_root.with_gamma(*report.gamma_star - 1e-6)) < 0.0);
        c.expect(delta(at_root.with_gamma(std::min(*report.gamma_star + 1e-6, 1.0 - 1e-9))) > 0.0);
      }
    }
    c.detail = "|delta(gamma*)| <= 1e-10 with a sign change around it";
    checks.push_back(c);
  }

  bool all_ok = true;
  std::vector<Record> rows;
  for (const Check& c : checks) {
    all_ok = all_ok && c.failures == 0;
    rows.push_back({
        {"check", c.name},
        {"status", std::string(c.failures == 0 ? "PASS" : "FAIL")},
        {"cases", c.cases},
        {"failures", c.failures},
        {"detail", c.detail},
    });
  }
  renderer.table(rows);
  return all_ok;
}

}  // namespace confront::cli
