// questmc: single-game traces and batch experiments from the command line.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "questmc/experiments.hpp"

namespace {

using namespace questmc;

struct Options {
  std::string cards = std::string(QUESTMC_DATA_DIR) + "/cards.json";
  std::string scenario = std::string(QUESTMC_DATA_DIR) + "/scenarios/mirkwood.json";
  std::string difficulty = "medium";
  std::string agents = "planning=expert,commit=expert,defense=expert";
  std::uint64_t seed = 1;
  int round_cap = 200;
  bool trace = false;
  int games = 1000;
  int workers = 1;
  double z = kDefaultZ;
  std::string out = "-";
  std::string format = "csv";
  std::vector<int> budgets{5, 10, 20, 40, 80};
  std::string choices;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--cards", o.cards, "Card database (JSON)")->capture_default_str();
  cmd->add_option("--scenario", o.scenario, "Scenario file (JSON)")->capture_default_str();
  cmd->add_option("--difficulty", o.difficulty, "Encounter deck variant")->capture_default_str();
  cmd->add_option("--agents", o.agents, "planning=A,commit=B,defense=C[,attack=D]")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--round-cap", o.round_cap, "Rounds before a game counts as lost")
      ->capture_default_str();
}

void add_batch(CLI::App* cmd, Options& o) {
  cmd->add_option("--games", o.games, "Games per configuration")->capture_default_str();
  cmd->add_option("--workers", o.workers, "Parallel worker threads")->capture_default_str();
  cmd->add_option("--z", o.z, "z value of the confidence interval")->capture_default_str();
  cmd->add_option("--out", o.out, "Output file, '-' for standard output")->capture_default_str();
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

ExperimentConfig make_config(const Options& o) {
  ExperimentConfig config;
  config.games = o.games;
  config.master_seed = o.seed;
  config.cards_path = o.cards;
  config.scenario_path = o.scenario;
  config.difficulty = o.difficulty;
  config.policy_map = parse_stage_policy_map(o.agents);
  config.workers = o.workers;
  config.z = o.z;
  config.round_cap = o.round_cap;
  validate(config);
  return config;
}

void emit(const Options& o, const nlohmann::json& config, const std::vector<RunStats>& rows) {
  std::ostringstream text;
  if (o.format == "json") {
    text << results_json(config, rows).dump(2) << '\n';
  } else {
    write_csv(text, config, rows);
  }
  if (o.out == "-") {
    std::cout << text.str();
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + o.out + "'");
  file << text.str();
}

int run_play(const Options& o) {
  ExperimentConfig config = make_config(o);
  const auto scenario = load_experiment_scenario(config);
  if (!scenario->has_difficulty(config.difficulty))
    throw DataError("scenario has no difficulty '" + config.difficulty + "'");
  nlohmann::json meta = config.to_json();
  meta.erase("games");
  std::cout << "# config: " << meta.dump() << '\n';
  // Same seed as game 0 of `simulate`.
  std::vector<std::string> trace;
  const GameRecord record = play_game(scenario, config.difficulty, config.policy_map,
                                      seed_for_game(config.master_seed, 0), config.round_cap,
                                      o.trace ? &trace : nullptr);
  for (const auto& line : trace) std::cout << line << '\n';
  std::cout << "RESULT outcome=" << to_string(record.outcome) << " rounds=" << record.rounds
            << '\n';
  return 0;
}

int run_simulate(const Options& o) {
  const ExperimentConfig config = make_config(o);
  const RunStats stats = run_games(config);
  emit(o, config.to_json(), {stats});
  return 0;
}

int run_sweep(const Options& o) {
  const ExperimentConfig config = make_config(o);
  nlohmann::json meta = config.to_json();
  meta["budgets"] = o.budgets;
  std::vector<RunStats> rows;
  for (auto& [budget, stats] : budget_sweep(config, o.budgets)) rows.push_back(std::move(stats));
  emit(o, meta, rows);
  return 0;
}

int run_grid(const Options& o) {
  const ExperimentConfig config = make_config(o);
  const StageChoices choices = parse_stage_choices(o.choices);
  nlohmann::json meta = config.to_json();
  meta["choices"] = o.choices;
  std::vector<RunStats> rows;
  for (auto& [map, stats] : combination_grid(config, choices)) rows.push_back(std::move(stats));
  emit(o, meta, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rules engine, agents and experiment harness for a multistage co-op card game"};
  app.require_subcommand(1);
  Options o;

  auto* play = app.add_subcommand("play", "Play and trace a single game");
  add_common(play, o);
  play->add_flag("--trace", o.trace, "Print one line per stage");

  auto* simulate = app.add_subcommand("simulate", "Run a batch of games");
  add_common(simulate, o);
  add_batch(simulate, o);

  auto* sweep = app.add_subcommand("sweep", "Winrate as a function of the playout budget");
  add_common(sweep, o);
  add_batch(sweep, o);
  sweep->add_option("--budgets", o.budgets, "Comma-separated playout budgets")
      ->delimiter(',')
      ->capture_default_str();

  auto* grid = app.add_subcommand("grid", "Winrate of every per-stage agent combination");
  add_common(grid, o);
  add_batch(grid, o);
  grid->add_option("--choices", o.choices, "planning=a,b;commit=c,d;defense=e,f")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (play->parsed()) return run_play(o);
    if (simulate->parsed()) return run_simulate(o);
    if (sweep->parsed()) return run_sweep(o);
    return run_grid(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
