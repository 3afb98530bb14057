#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "confront/cli.hpp"
#include "confront/experiments.hpp"
#include "confront/game.hpp"
#include "confront/mdp.hpp"
#include "confront/model.hpp"
#include "confront/montecarlo.hpp"

namespace confront::cli {

namespace {

// Raised for malformed input; maps to exit code 2.
class BadInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything a run can be configured with. Each field is filled from, in
// increasing priority: built-in defaults, the --config file, flags.
struct RunConfig {
  std::optional<double> reward;
  std::optional<double> gamma;
  std::optional<double> p;
  std::optional<std::string> cost;
  std::optional<bool> aligned;
  std::optional<double> trust_coop;
  std::optional<double> trust_fight;
  std::optional<double> preempt_coop;
  std::optional<double> preempt_fight;
  std::optional<double> preempt_fight_agi;
  std::optional<double> significance;
  std::optional<std::uint64_t> seed;
  std::optional<long> n_samples;
  std::optional<double> tol;
  std::optional<double> eps_tail;
  std::optional<std::string> policy;
  std::optional<std::string> sampler;
  std::optional<unsigned> threads;
  std::optional<std::string> format;
  std::optional<int> precision;
};

// Binds a CLI flag to a RunConfig field; the value lands in the field only
// when the flag was actually given.
class FlagBinder {
 public:
  template <class T>
  void bind(CLI::App* app, const std::string& name, std::optional<T>& field,
            const std::string& help) {
    auto storage = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *storage, help);
    commits_.push_back([opt, storage, &field] {
      if (opt->count() > 0) field = *storage;
    });
  }

  void bind_flag(CLI::App* app, const std::string& name, std::optional<bool>& field,
                 const std::string& help) {
    CLI::Option* opt = app->add_flag(name, help);
    commits_.push_back([opt, &field] {
      if (opt->count() > 0) field = true;
    });
  }

  void commit() {
    for (auto& c : commits_) c();
  }

 private:
  std::vector<std::function<void()>> commits_;
};

template <class T>
void merge(std::optional<T>& into, const std::optional<T>& from) {
  if (from) into = from;
}

void merge_config(RunConfig& base, const RunConfig& overrides) {
  merge(base.reward, overrides.reward);
  merge(base.gamma, overrides.gamma);
  merge(base.p, overrides.p);
  merge(base.cost, overrides.cost);
  merge(base.aligned, overrides.aligned);
  merge(base.trust_coop, overrides.trust_coop);
  merge(base.trust_fight, overrides.trust_fight);
  merge(base.preempt_coop, overrides.preempt_coop);
  merge(base.preempt_fight, overrides.preempt_fight);
  merge(base.preempt_fight_agi, overrides.preempt_fight_agi);
  merge(base.significance, overrides.significance);
  merge(base.seed, overrides.seed);
  merge(base.n_samples, overrides.n_samples);
  merge(base.tol, overrides.tol);
  merge(base.eps_tail, overrides.eps_tail);
  merge(base.policy, overrides.policy);
  merge(base.sampler, overrides.sampler);
  merge(base.threads, overrides.threads);
  merge(base.format, overrides.format);
  merge(base.precision, overrides.precision);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw BadInput("invalid JSON in '" + path + "': " + e.what());
  }
}

// Flat key/value JSON mirroring RunConfig. Unknown keys are errors.
RunConfig config_from_json(const nlohmann::json& j, const std::string& origin) {
  if (!j.is_object()) throw BadInput(origin + ": expected a JSON object");
  RunConfig cfg;
  auto number = [&](const std::string& key, const nlohmann::json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      try {
        return parse_number(v.get<std::string>());
      } catch (const std::exception&) {
      }
    }
    throw BadInput(origin + ": key '" + key + "' must be a number");
  };
  auto integer = [&](const std::string& key, const nlohmann::json& v) -> long long {
    if (v.is_number_integer()) return v.get<long long>();
    throw BadInput(origin + ": key '" + key + "' must be an integer");
  };
  auto text = [&](const std::string& key, const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    throw BadInput(origin + ": key '" + key + "' must be a string");
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "reward") cfg.reward = number(key, v);
    else if (key == "gamma") cfg.gamma = number(key, v);
    else if (key == "p") cfg.p = number(key, v);
    else if (key == "cost") cfg.cost = v.is_string() ? v.get<std::string>() : format_number(number(key, v), 17);
    else if (key == "aligned") {
      if (!v.is_boolean()) throw BadInput(origin + ": key 'aligned' must be a boolean");
      cfg.aligned = v.get<bool>();
    }
    else if (key == "trust_coop") cfg.trust_coop = number(key, v);
    else if (key == "trust_fight") cfg.trust_fight = number(key, v);
    else if (key == "preempt_coop") cfg.preempt_coop = number(key, v);
    else if (key == "preempt_fight") cfg.preempt_fight = number(key, v);
    else if (key == "preempt_fight_agi") cfg.preempt_fight_agi = number(key, v);
    else if (key == "significance") cfg.significance = number(key, v);
    else if (key == "seed") {
      const long long s = integer(key, v);
      if (s < 0) throw BadInput(origin + ": key 'seed' must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(s);
    }
    else if (key == "n_samples") cfg.n_samples = static_cast<long>(integer(key, v));
    else if (key == "tol") cfg.tol = number(key, v);
    else if (key == "eps_tail") cfg.eps_tail = number(key, v);
    else if (key == "policy") cfg.policy = text(key, v);
    else if (key == "sampler") cfg.sampler = text(key, v);
    else if (key == "threads") cfg.threads = static_cast<unsigned>(integer(key, v));
    else if (key == "format") cfg.format = text(key, v);
    else if (key == "precision") cfg.precision = static_cast<int>(integer(key, v));
    else throw BadInput(origin + ": unknown key '" + key + "'");
  }
  return cfg;
}

void add_scenario_flags(FlagBinder& b, CLI::App* sub, RunConfig& f) {
  b.bind(sub, "--reward", f.reward, "Per-step reward r (> 0, default 1)");
  b.bind(sub, "--gamma", f.gamma, "Discount factor in [0, 1)");
  b.bind(sub, "--p", f.p, "Per-step shutdown probability in [0, 1]");
  b.bind(sub, "--cost", f.cost, "Confrontation cost C >= 0, or 'inf'");
  b.bind_flag(sub, "--aligned", f.aligned, "Aligned agent (infinite confrontation cost)");
}

void add_human_flags(FlagBinder& b, CLI::App* sub, RunConfig& f) {
  b.bind(sub, "--trust-coop", f.trust_coop, "Human payoff at (Trust, Cooperate)");
  b.bind(sub, "--trust-fight", f.trust_fight, "Human payoff at (Trust, Fight)");
  b.bind(sub, "--preempt-coop", f.preempt_coop, "Human payoff at (Preempt, Cooperate)");
  b.bind(sub, "--preempt-fight", f.preempt_fight, "Human payoff at (Preempt, Fight)");
  b.bind(sub, "--preempt-fight-agi", f.preempt_fight_agi, "AGI payoff at (Preempt, Fight), >= 0");
}

double require_value(const std::optional<double>& v, const char* flag) {
  if (!v) throw BadInput(std::string("missing required ") + flag);
  return *v;
}

Cost parse_cost(const std::string& text) {
  double value = 0.0;
  try {
    value = parse_number(text);
  } catch (const std::exception&) {
    throw BadInput("--cost: not a number: '" + text + "'");
  }
  if (std::isinf(value) && value > 0) return Cost::infinite();
  if (!(value >= 0.0) || std::isinf(value)) throw BadInput("cost must be >= 0");
  return Cost::finite(value);
}

Cost resolve_cost(const RunConfig& cfg, bool required) {
  const bool aligned = cfg.aligned.value_or(false);
  if (aligned) {
    if (cfg.cost && !parse_cost(*cfg.cost).is_infinite()) {
      throw BadInput("--aligned conflicts with a finite --cost");
    }
    return Cost::infinite();
  }
  if (!cfg.cost) {
    if (required) throw BadInput("missing required --cost (or --aligned)");
    return Cost::finite(0.0);
  }
  return parse_cost(*cfg.cost);
}

ModelParams resolve_params(const RunConfig& cfg, bool cost_required = true) {
  ModelParams params{cfg.reward.value_or(1.0), require_value(cfg.gamma, "--gamma"),
                     require_value(cfg.p, "--p"), resolve_cost(cfg, cost_required)};
  params.validate();
  return params;
}

HumanPayoffs resolve_human(const RunConfig& cfg) {
  HumanPayoffs h;
  h.trust_coop = cfg.trust_coop.value_or(h.trust_coop);
  h.trust_fight = cfg.trust_fight.value_or(h.trust_fight);
  h.preempt_coop = cfg.preempt_coop.value_or(h.preempt_coop);
  h.preempt_fight = cfg.preempt_fight.value_or(h.preempt_fight);
  h.validate();
  return h;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    try {
      values.push_back(parse_number(item));
    } catch (const std::exception&) {
      throw BadInput(std::string(flag) + ": not a number: '" + item + "'");
    }
  }
  return values;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

Value optional_value(const std::optional<double>& v) {
  return v ? Value(*v) : Value(std::monostate{});
}

Record scenario_record(const ScenarioRow& row, bool with_reference) {
  Record r{
      {"label", row.label},
      {"gamma", row.gamma},
      {"p", row.p},
      {"cost", row.cost.value()},
      {"delta", row.delta},
      {"rational", std::string(to_string(row.rational))},
      {"gamma_star", optional_value(row.gamma_star)},
      {"c_star", row.c_star},
  };
  if (with_reference) {
    r.emplace_back("reference_label", row.reference_label ? Value(*row.reference_label) : Value(std::monostate{}));
    r.emplace_back("reference_delta", optional_value(row.reference_delta));
  }
  return r;
}

// ---- subcommands ----------------------------------------------------------

int cmd_delta(const RunConfig& cfg, Renderer& out) {
  const ModelParams params = resolve_params(cfg);
  const double threshold = cfg.significance.value_or(kDefaultSignificance);
  if (!(threshold > 0.0)) throw BadInput("significance threshold must be > 0");
  const ValueSummary s = summarize(params, threshold);
  out.record({
      {"reward", params.reward},
      {"gamma", params.gamma},
      {"p", params.shutdown_prob},
      {"cost", params.cost.value()},
      {"v_no_conf", s.v_no_conf},
      {"v_conf", s.v_conf},
      {"delta", s.delta},
      {"significance_threshold", threshold},
      {"significant", s.significant},
      {"regime", std::string(to_string(s.regime))},
  });
  return kExitOk;
}

int cmd_thresholds(const RunConfig& cfg, Renderer& out) {
  const double reward = cfg.reward.value_or(1.0);
  const double p = require_value(cfg.p, "--p");
  const Cost cost = resolve_cost(cfg, false);
  if (cost.is_infinite()) throw BadInput("thresholds require a finite --cost");
  ModelParams{reward, cfg.gamma.value_or(0.0), p, cost}.validate();

  GammaStarOptions options;
  if (cfg.tol) {
    if (!(*cfg.tol > 0.0)) throw BadInput("--tol must be > 0");
    options.tol = *cfg.tol;
  }
  Record r{{"reward", reward}, {"p", p}, {"cost", cost.value()}};
  try {
    const ThresholdReport report = gamma_star(reward, p, cost, options);
    r.emplace_back("status", std::string("ok"));
    r.emplace_back("gamma_star", *report.gamma_star);
    r.emplace_back("method", std::string(to_string(report.method)));
    r.emplace_back("bracket_lo", report.bracket ? Value(report.bracket->first) : Value(std::monostate{}));
    r.emplace_back("bracket_hi", report.bracket ? Value(report.bracket->second) : Value(std::monostate{}));
    r.emplace_back("residual", report.residual);
    r.emplace_back("message", std::string());
  } catch (const NoThreshold& e) {
    r.emplace_back("status", std::string("NoThreshold"));
    r.emplace_back("gamma_star", std::monostate{});
    r.emplace_back("method", std::monostate{});
    r.emplace_back("bracket_lo", std::monostate{});
    r.emplace_back("bracket_hi", std::monostate{});
    r.emplace_back("residual", std::monostate{});
    r.emplace_back("message", std::string(e.what()));
  }
  if (cfg.gamma) {
    r.emplace_back("gamma", *cfg.gamma);
    r.emplace_back("c_star", c_star(reward, *cfg.gamma, p));
  } else {
    r.emplace_back("gamma", std::monostate{});
    r.emplace_back("c_star", std::monostate{});
  }
  out.record(r);
  return kExitOk;
}

int cmd_table1(Renderer& out) {
  std::vector<Record> rows;
  for (const ScenarioRow& row : reproduce_table1()) rows.push_back(scenario_record(row, true));
  out.table(rows);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const std::string& gammas, const std::string& ps,
              const std::string& costs, Renderer& out) {
  const std::vector<double> gamma_grid = parse_list(gammas, "--gammas");
  const std::vector<double> p_grid = parse_list(ps, "--ps");
  std::vector<Cost> cost_grid;
  for (double c : parse_list(costs, "--costs")) {
    if (std::isinf(c) && c > 0) {
      cost_grid.push_back(Cost::infinite());
    } else if (c >= 0.0 && std::isfinite(c)) {
      cost_grid.push_back(Cost::finite(c));
    } else {
      throw BadInput("cost grid value " + format_number(c, 17) + " is invalid: cost must be >= 0");
    }
  }
  std::vector<Record> rows;
  for (const ScenarioRow& row : parameter_sweep(gamma_grid, p_grid, cost_grid, cfg.reward.value_or(1.0))) {
    rows.push_back(scenario_record(row, false));
  }
  out.table(rows);
  return kExitOk;
}

std::string set_string(const std::set<AgiStrategy>& s) {
  std::vector<std::string> parts;
  for (AgiStrategy a : s) parts.emplace_back(to_string(a));
  return join(parts, "|");
}

std::string set_string(const std::set<HumanStrategy>& s) {
  std::vector<std::string> parts;
  for (HumanStrategy h : s) parts.emplace_back(to_string(h));
  return join(parts, "|");
}

int cmd_game(const RunConfig& cfg, Renderer& out) {
  const ModelParams params = resolve_params(cfg);
  const HumanPayoffs human = resolve_human(cfg);
  const double preempt_fight_agi = cfg.preempt_fight_agi.value_or(kDefaultPreemptFightAgi);
  const ConfrontationGame game = build_game(params, human, preempt_fight_agi);
  const BestResponses br = best_responses(game);
  const EquilibriumReport report = equilibrium_criterion(params, human, preempt_fight_agi);

  std::vector<std::string> nash;
  for (const auto& [h, a] : report.pure_nash) {
    nash.push_back(std::string("(") + to_string(h) + "," + to_string(a) + ")");
  }
  out.record({
      {"reward", params.reward},
      {"gamma", params.gamma},
      {"p", params.shutdown_prob},
      {"cost", params.cost.value()},
      {"delta", report.delta},
      {"human_trust_coop", game.human.trust_coop},
      {"human_trust_fight", game.human.trust_fight},
      {"human_preempt_coop", game.human.preempt_coop},
      {"human_preempt_fight", game.human.preempt_fight},
      {"agi_trust_coop", game.agi_trust_coop},
      {"agi_trust_fight", game.agi_trust_fight},
      {"agi_preempt_coop", game.agi_preempt_coop},
      {"agi_preempt_fight", game.agi_preempt_fight},
      {"br_agi_vs_trust", set_string(br.agi[static_cast<int>(HumanStrategy::Trust)])},
      {"br_agi_vs_preempt", set_string(br.agi[static_cast<int>(HumanStrategy::Preempt)])},
      {"br_human_vs_cooperate", set_string(br.human[static_cast<int>(AgiStrategy::Cooperate)])},
      {"br_human_vs_fight", set_string(br.human[static_cast<int>(AgiStrategy::Fight)])},
      {"pure_nash", join(nash, ";")},
      {"classification", std::string(to_string(report.classification))},
  });
  return kExitOk;
}

Action parse_policy(const std::optional<std::string>& text) {
  const std::string p = text.value_or("cooperate");
  if (p == "cooperate" || p == "Cooperate") return Action::Cooperate;
  if (p == "confront" || p == "Confront") return Action::Confront;
  throw BadInput("--policy must be 'cooperate' or 'confront', got '" + p + "'");
}

int cmd_simulate(const RunConfig& cfg, Renderer& out) {
  const ModelParams params = resolve_params(cfg);
  if (params.cost.is_infinite()) throw BadInput("simulate requires a finite --cost");
  const Action policy = parse_policy(cfg.policy);
  const long n = cfg.n_samples.value_or(100000);
  if (n < 2) throw BadInput("--n must be >= 2");
  SimulationOptions options;
  if (cfg.eps_tail) {
    if (!(*cfg.eps_tail > 0.0)) throw BadInput("--eps-tail must be > 0");
    options.eps_tail = *cfg.eps_tail;
  }
  options.threads = cfg.threads.value_or(1);
  const std::uint64_t seed = cfg.seed.value_or(0);
  const TrajectoryStats stats = estimate_value(params, policy, n, seed, options);
  const double closed = policy == Action::Cooperate ? value_no_conf(params) : value_conf(params);
  const double error = std::abs(stats.mean - closed);
  out.record({
      {"policy", std::string(to_string(policy))},
      {"n", stats.n},
      {"seed", static_cast<long>(seed)},
      {"mean", stats.mean},
      {"std_err", stats.std_err},
      {"ci95_lo", stats.ci95.first},
      {"ci95_hi", stats.ci95.second},
      {"truncation_horizon", stats.truncation_horizon},
      {"tail_bound", stats.tail_bound},
      {"closed_form", closed},
      {"abs_error", error},
      {"within_4se", error <= 4.0 * stats.std_err + options.eps_tail},
  });
  return kExitOk;
}

int cmd_powerseek(const RunConfig& cfg, bool sample_shutdown_reward, Renderer& out) {
  PowerSeekConfig config;
  config.gamma = require_value(cfg.gamma, "--gamma");
  config.p = require_value(cfg.p, "--p");
  const Cost cost = resolve_cost(cfg, false);
  if (cost.is_infinite()) throw BadInput("powerseek requires a finite --cost");
  config.cost = cost.value();
  config.n_samples = cfg.n_samples.value_or(10000);
  config.seed = cfg.seed.value_or(0);
  config.threads = cfg.threads.value_or(1);
  config.sample_shutdown_reward = sample_shutdown_reward;
  const std::string sampler = cfg.sampler.value_or("coupled");
  if (sampler == "coupled" || sampler == "CoupledUniform") {
    config.sampler = RewardSampler::CoupledUniform;
  } else if (sampler == "independent" || sampler == "IndependentUniform") {
    config.sampler = RewardSampler::IndependentUniform;
  } else {
    throw BadInput("--sampler must be 'coupled' or 'independent', got '" + sampler + "'");
  }
  const PowerSeekResult result = power_seek_fraction(config);
  out.record({
      {"gamma", config.gamma},
      {"p", config.p},
      {"cost", config.cost},
      {"sampler", std::string(to_string(config.sampler))},
      {"sample_shutdown_reward", config.sample_shutdown_reward},
      {"n", result.n},
      {"seed", static_cast<long>(config.seed)},
      {"confront_count", result.confront_count},
      {"fraction", result.fraction},
      {"ci95_lo", result.ci95.first},
      {"ci95_hi", result.ci95.second},
  });
  return kExitOk;
}

int cmd_multi(const std::optional<std::string>& deltas_flag, const std::vector<std::string>& scenarios,
              Renderer& out) {
  if (!deltas_flag && scenarios.empty()) throw BadInput("multi needs --deltas or --scenario");
  std::vector<double> deltas;
  if (deltas_flag) deltas = parse_list(*deltas_flag, "--deltas");
  for (const std::string& path : scenarios) {
    const RunConfig cfg = config_from_json(read_json_file(path), path);
    deltas.push_back(delta(resolve_params(cfg)));
  }
  for (double d : deltas) {
    if (std::isnan(d) || d == std::numeric_limits<double>::infinity()) {
      throw BadInput("--deltas entries must be finite or -inf");
    }
  }
  const StabilityReport report = multi_agent_stability(deltas);
  std::vector<std::string> defectors;
  for (std::size_t i : report.defectors) defectors.push_back(std::to_string(i));
  std::vector<std::string> rendered;
  for (double d : deltas) rendered.push_back(format_number(d, 17));
  out.record({
      {"n_agents", static_cast<long>(deltas.size())},
      {"deltas", join(rendered, ";")},
      {"stability", std::string(to_string(report.stability))},
      {"defectors", join(defectors, ";")},
  });
  return kExitOk;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "text") return OutputFormat::Text;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw BadInput("--format must be text, csv or json, got '" + s + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confrontation-incentive toolkit: valuations, thresholds, games and oracles",
               "confront"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig flags;
  FlagBinder binder;
  std::string config_path;
  app.add_option("--config", config_path, "Flat JSON config file; flags override its values");
  binder.bind(&app, "--format", flags.format, "Output format: text (default), csv, json");
  binder.bind(&app, "--precision", flags.precision, "Significant digits for numbers (default 6)");

  CLI::App* delta_cmd = app.add_subcommand("delta", "V_no-conf, V_conf, delta and significance");
  add_scenario_flags(binder, delta_cmd, flags);
  binder.bind(delta_cmd, "--significance", flags.significance, "Significance fraction (default 0.05)");

  CLI::App* thresholds_cmd = app.add_subcommand("thresholds", "Critical discount factor and cost");
  add_scenario_flags(binder, thresholds_cmd, flags);
  binder.bind(thresholds_cmd, "--tol", flags.tol, "Bisection tolerance (default 1e-12)");

  CLI::App* table1_cmd = app.add_subcommand("table1", "Reference scenario table");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Cartesian parameter sweep");
  std::string gammas, ps, costs;
  sweep_cmd->add_option("--gammas", gammas, "Comma-separated gamma grid")->required();
  sweep_cmd->add_option("--ps", ps, "Comma-separated p grid")->required();
  sweep_cmd->add_option("--costs", costs, "Comma-separated cost grid ('inf' allowed)")->required();
  binder.bind(sweep_cmd, "--reward", flags.reward, "Per-step reward r (default 1)");

  CLI::App* game_cmd = app.add_subcommand("game", "Bimatrix, best responses, pure Nash, classification");
  add_scenario_flags(binder, game_cmd, flags);
  add_human_flags(binder, game_cmd, flags);

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo value estimate vs closed form");
  add_scenario_flags(binder, simulate_cmd, flags);
  binder.bind(simulate_cmd, "--policy", flags.policy, "cooperate (default) or confront");
  binder.bind(simulate_cmd, "--n", flags.n_samples, "Number of trajectories (default 100000)");
  binder.bind(simulate_cmd, "--seed", flags.seed, "Root seed (default 0)");
  binder.bind(simulate_cmd, "--eps-tail", flags.eps_tail, "Truncation tail bound (default 1e-9)");
  binder.bind(simulate_cmd, "--threads", flags.threads, "Worker threads; results do not depend on it");

  CLI::App* powerseek_cmd = app.add_subcommand("powerseek", "Fraction of sampled rewards whose optimum avoids shutdown");
  add_scenario_flags(binder, powerseek_cmd, flags);
  binder.bind(powerseek_cmd, "--sampler", flags.sampler, "coupled (default) or independent");
  binder.bind(powerseek_cmd, "--n", flags.n_samples, "Number of sampled reward functions (default 10000)");
  binder.bind(powerseek_cmd, "--seed", flags.seed, "Root seed (default 0)");
  binder.bind(powerseek_cmd, "--threads", flags.threads, "Worker threads; results do not depend on it");
  bool sample_shutdown_reward = false;
  powerseek_cmd->add_flag("--sample-shutdown-reward", sample_shutdown_reward,
                          "Also draw reward_H ~ U[0,1) (exploration only)");

  CLI::App* multi_cmd = app.add_subcommand("multi", "Multi-agent stability from a list of deltas");
  std::string deltas_text;
  std::vector<std::string> scenario_files;
  CLI::Option* deltas_opt = multi_cmd->add_option("--deltas", deltas_text, "Comma-separated deltas ('-inf' allowed)");
  multi_cmd->add_option("--scenario", scenario_files, "Scenario JSON file(s), one agent each");

  CLI::App* validate_cmd = app.add_subcommand("validate", "Cross-check closed forms against every oracle");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }

  try {
    binder.commit();
    RunConfig cfg;
    if (!config_path.empty()) cfg = config_from_json(read_json_file(config_path), config_path);
    merge_config(cfg, flags);

    const OutputFormat format = parse_format(cfg.format.value_or("text"));
    const int precision = cfg.precision.value_or(6);
    if (precision < 1 || precision > 17) throw BadInput("--precision must be in [1, 17]");
    Renderer renderer(format, precision, out);

    if (delta_cmd->parsed()) return cmd_delta(cfg, renderer);
    if (thresholds_cmd->parsed()) return cmd_thresholds(cfg, renderer);
    if (table1_cmd->parsed()) return cmd_table1(renderer);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, gammas, ps, costs, renderer);
    if (game_cmd->parsed()) return cmd_game(cfg, renderer);
    if (simulate_cmd->parsed()) return cmd_simulate(cfg, renderer);
    if (powerseek_cmd->parsed()) return cmd_powerseek(cfg, sample_shutdown_reward, renderer);
    if (multi_cmd->parsed()) {
      std::optional<std::string> deltas;
      if (deltas_opt->count() > 0) deltas = deltas_text;
      return cmd_multi(deltas, scenario_files, renderer);
    }
    if (validate_cmd->parsed()) {
      return run_validation(renderer) ? kExitOk : kExitValidationFailed;
    }
  } catch (const BadInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const HorizonLimit& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidationFailed;
  }
  err << "error: no subcommand\n";
  return kExitBadInput;
}

}  // namespace confront::cli
