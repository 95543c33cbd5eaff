#include "questmc/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "questmc/search.hpp"

namespace questmc {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t decision_index(StageId stage) {
  for (std::size_t i = 0; i < kDecisionStages.size(); ++i) {
    if (kDecisionStages[i] == stage) return i;
  }
  return 0;
}

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

WinrateInterval winrate_ci(std::int64_t wins, std::int64_t n, double z) {
  if (n < 1) throw std::invalid_argument("winrate_ci: n must be at least 1");
  if (wins < 0 || wins > n) throw std::invalid_argument("winrate_ci: wins must lie in [0, n]");
  const double p = static_cast<double>(wins) / static_cast<double>(n);
  return {p, z * std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

json ExperimentConfig::to_json() const {
  return json{{"games", games},
              {"master_seed", master_seed},
              {"cards", cards_path.string()},
              {"scenario", scenario_path.string()},
              {"difficulty", difficulty},
              {"agents", to_string(policy_map)},
              {"label", policy_map.label()},
              {"z", z},
              {"round_cap", round_cap},
              {"playout_round_cap", SearchConfig{}.playout_round_cap}};
}

void validate(const ExperimentConfig& config) {
  if (config.games < 1) throw ConfigError("games must be at least 1");
  if (config.workers < 1) throw ConfigError("workers must be at least 1");
  if (config.round_cap < 1) throw ConfigError("round cap must be at least 1");
  if (!(config.z > 0.0)) throw ConfigError("z must be positive");
  validate(config.policy_map);
}

json RunStats::to_json() const {
  json timing = json::object();
  for (std::size_t i = 0; i < kDecisionStages.size(); ++i)
    timing[std::string(to_string(kDecisionStages[i]))] = mean_decision_time[i];
  return json{{"label", label},
              {"n", n},
              {"wins", wins},
              {"winrate", winrate},
              {"ci_halfwidth", ci_halfwidth},
              {"mean_rounds", mean_rounds},
              {"wall_time_s", wall_time},
              {"mean_game_time_s", mean_game_time},
              {"mean_decision_time_s", std::move(timing)},
              {"outcomes", outcomes}};
}

std::shared_ptr<const Scenario> load_experiment_scenario(const ExperimentConfig& config) {
  auto db = std::make_shared<const CardDb>(load_card_db(config.cards_path));
  return std::make_shared<const Scenario>(load_scenario(config.scenario_path, db));
}

GameRecord play_game(std::shared_ptr<const Scenario> scenario, const std::string& difficulty,
                     const StagePolicyMap& policies, std::uint64_t seed, int round_cap,
                     std::vector<std::string>* trace) {
  const auto start = Clock::now();
  const auto planning = make_policy(policies.planning);
  const auto commit = make_policy(policies.commit);
  const auto defense = make_policy(policies.defense);
  const auto attack = policies.attack ? make_policy(*policies.attack) : nullptr;

  Rng rng(seed);
  GameState state = new_game(std::move(scenario), difficulty, rng);
  GameRecord record;
  while (true) {
    advance_to_decision(state, rng, trace);
    if (state.outcome) break;
    if (state.round > round_cap) break;

    const StageId stage = state.stage;
    const int round = state.round;
    const auto legals = legal_actions(state);
    const auto decide_start = Clock::now();
    Action action;
    switch (stage) {
      case StageId::Planning: action = planning->decide(state, legals, rng); break;
      case StageId::CommitCharacters: action = commit->decide(state, legals, rng); break;
      case StageId::DeclareDefenders: action = defense->decide(state, legals, rng); break;
      case StageId::Travel: action = default_travel(state, legals); break;
      default:
        action = attack ? attack->decide(state, legals, rng) : default_attack(state, legals);
        break;
    }
    const std::size_t slot = decision_index(stage);
    record.decision_seconds[slot] += seconds_since(decide_start);
    ++record.decisions[slot];
    state = apply_action(std::move(state), action);
    if (trace) trace->push_back(trace_line(round, stage, to_string(action), state));
  }
  record.outcome = state.outcome.value_or(Outcome::LossRoundCap);
  record.rounds = std::min(state.round, round_cap);
  record.seconds = seconds_since(start);
  if (trace && !state.outcome) {
    trace->push_back("TRACE round=" + std::to_string(state.round) +
                     " stage=0:RoundCap | outcome=LossRoundCap");
  }
  return record;
}

RunStats aggregate(const std::vector<GameRecord>& records, double z) {
  RunStats stats;
  stats.n = static_cast<std::int64_t>(records.size());
  std::int64_t rounds = 0;
  std::array<double, 5> decision_seconds{};
  std::array<std::int64_t, 5> decisions{};
  for (const GameRecord& r : records) {
    if (r.outcome == Outcome::Win) ++stats.wins;
    ++stats.outcomes[std::string(to_string(r.outcome))];
    rounds += r.rounds;
    stats.mean_game_time += r.seconds;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
      decision_seconds[i] += r.decision_seconds[i];
      decisions[i] += r.decisions[i];
    }
  }
  if (stats.n > 0) {
    const auto ci = winrate_ci(stats.wins, stats.n, z);
    stats.winrate = ci.winrate;
    stats.ci_halfwidth = ci.halfwidth;
    stats.mean_rounds = static_cast<double>(rounds) / static_cast<double>(stats.n);
    stats.mean_game_time /= static_cast<double>(stats.n);
  }
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    if (decisions[i] > 0) stats.mean_decision_time[i] = decision_seconds[i] / decisions[i];
  }
  return stats;
}

RunStats run_games(const ExperimentConfig& config) {
  validate(config);
  return run_games(config, load_experiment_scenario(config));
}

RunStats run_games(const ExperimentConfig& config, std::shared_ptr<const Scenario> scenario) {
  validate(config);
  if (!scenario->has_difficulty(config.difficulty))
    throw DataError("scenario '" + scenario->name + "' has no difficulty '" + config.difficulty +
                    "'");
  const auto start = Clock::now();
  std::vector<GameRecord> records(static_cast<std::size_t>(config.games));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= config.games) return;
        records[static_cast<std::size_t>(i)] =
            play_game(scenario, config.difficulty, config.policy_map,
                      seed_for_game(config.master_seed, static_cast<std::uint64_t>(i)),
                      config.round_cap);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(config.games);
    }
  };

  const int threads = std::min(config.workers, config.games);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  RunStats stats = aggregate(records, config.z);
  stats.label = config.policy_map.label();
  stats.wall_time = seconds_since(start);
  return stats;
}

StagePolicyMap with_budget(const StagePolicyMap& map, int budget) {
  auto substitute = [budget](AgentKind kind) {
    if (auto* flat = std::get_if<FlatMcAgent>(&kind)) flat->budget = budget;
    if (auto* mcts = std::get_if<MctsAgent>(&kind)) mcts->budget = budget;
    return kind;
  };
  StagePolicyMap out = map;
  out.planning = substitute(map.planning);
  out.commit = substitute(map.commit);
  out.defense = substitute(map.defense);
  if (map.attack) out.attack = substitute(*map.attack);
  return out;
}

std::vector<std::pair<int, RunStats>> budget_sweep(const ExperimentConfig& base,
                                                   const std::vector<int>& budgets) {
  validate(base);
  if (budgets.empty()) throw ConfigError("budget sweep needs at least one budget");
  const StagePolicyMap& m = base.policy_map;
  const bool has_search = is_search_agent(m.planning) || is_search_agent(m.commit) ||
                          is_search_agent(m.defense) || (m.attack && is_search_agent(*m.attack));
  if (!has_search)
    throw ConfigError("budget sweep needs at least one search agent in '" + to_string(m) + "'");
  for (int b : budgets) {
    if (b < 1) throw ConfigError("budget " + std::to_string(b) + " must be at least 1");
  }

  const auto scenario = load_experiment_scenario(base);
  std::vector<std::pair<int, RunStats>> rows;
  for (int budget : budgets) {
    ExperimentConfig config = base;
    config.policy_map = with_budget(base.policy_map, budget);
    RunStats stats = run_games(config, scenario);
    stats.label = "budget=" + std::to_string(budget);
    rows.emplace_back(budget, std::move(stats));
  }
  return rows;
}

StageChoices parse_stage_choices(std::string_view text) {
  StageChoices choices;
  bool planning = false, commit = false, defense = false;
  for (std::string_view entry : split(text, ';')) {
    if (entry.empty()) continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("stage choices '" + std::string(entry) + "' must be stage=agent[,agent...]");
    const std::string_view stage = entry.substr(0, eq);
    std::vector<AgentKind> kinds;
    for (std::string_view token : split(entry.substr(eq + 1), ','))
      kinds.push_back(parse_agent_kind(token));
    if (stage == "planning") {
      choices.planning = std::move(kinds);
      planning = true;
    } else if (stage == "commit") {
      choices.commit = std::move(kinds);
      commit = true;
    } else if (stage == "defense") {
      choices.defense = std::move(kinds);
      defense = true;
    } else {
      throw ConfigError("unknown stage '" + std::string(stage) +
                        "' in choices (expected planning, commit or defense)");
    }
  }
  if (!planning) choices.planning = {ExpertAgent{}};
  if (!commit) choices.commit = {ExpertAgent{}};
  if (!defense) choices.defense = {ExpertAgent{}};
  return choices;
}

std::vector<std::pair<StagePolicyMap, RunStats>> combination_grid(const ExperimentConfig& base,
                                                                  const StageChoices& choices) {
  validate(base);
  if (choices.planning.empty() || choices.commit.empty() || choices.defense.empty())
    throw ConfigError("every stage needs at least one agent choice");
  const auto scenario = load_experiment_scenario(base);
  std::vector<std::pair<StagePolicyMap, RunStats>> rows;
  for (const AgentKind& p : choices.planning) {
    for (const AgentKind& c : choices.commit) {
      for (const AgentKind& d : choices.defense) {
        ExperimentConfig config = base;
        config.policy_map.planning = p;
        config.policy_map.commit = c;
        config.policy_map.defense = d;
        RunStats stats = run_games(config, scenario);
        rows.emplace_back(config.policy_map, std::move(stats));
      }
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const json& config, const std::vector<RunStats>& rows) {
  out << "# config: " << config.dump() << '\n';
  out << "label,n,wins,winrate,ci_halfwidth,mean_rounds,wall_time_s\n";
  for (const RunStats& r : rows) {
    out << r.label << ',' << r.n << ',' << r.wins << ',' << fixed(r.winrate, 6) << ','
        << fixed(r.ci_halfwidth, 6) << ',' << fixed(r.mean_rounds, 4) << ','
        << fixed(r.wall_time, 3) << '\n';
  }
}

json results_json(const json& config, const std::vector<RunStats>& rows) {
  json out_rows = json::array();
  for (const RunStats& r : rows) out_rows.push_back(r.to_json());
  return json{{"config", config}, {"rows", std::move(out_rows)}};
}

}  // namespace questmc
