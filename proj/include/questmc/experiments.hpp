#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "questmc/agents.hpp"
#include "questmc/game.hpp"

namespace questmc {

inline constexpr double kDefaultZ = 1.96;

struct WinrateInterval {
  double winrate = 0.0;
  double halfwidth = 0.0;
};

/// Normal-approximation binomial interval: p = wins / n and
/// halfwidth = z * sqrt(p (1 - p) / n). Requires n >= 1 and 0 <= wins <= n.
WinrateInterval winrate_ci(std::int64_t wins, std::int64_t n, double z = kDefaultZ);

/// The five decision stages, in round order, used to index timing tables.
inline constexpr std::array<StageId, 5> kDecisionStages{
    StageId::Planning, StageId::CommitCharacters, StageId::Travel, StageId::DeclareDefenders,
    StageId::DeclareAttackers};

struct ExperimentConfig {
  int games = 1000;
  std::uint64_t master_seed = 1;
  std::filesystem::path cards_path;
  std::filesystem::path scenario_path;
  std::string difficulty = "medium";
  StagePolicyMap policy_map;
  int workers = 1;
  double z = kDefaultZ;
  int round_cap = 200;  // games still running after this many rounds end as LossRoundCap

  /// Everything that determines the results; the worker count is left out.
  nlohmann::json to_json() const;
};

void validate(const ExperimentConfig& config);

/// Result of one complete game.
struct GameRecord {
  Outcome outcome = Outcome::LossRoundCap;
  int rounds = 0;
  double seconds = 0.0;
  std::array<double, 5> decision_seconds{};  // indexed like kDecisionStages
  std::array<int, 5> decisions{};
};

struct RunStats {
  std::string label;
  std::int64_t n = 0;
  std::int64_t wins = 0;
  double winrate = 0.0;
  double ci_halfwidth = 0.0;
  double mean_rounds = 0.0;
  double wall_time = 0.0;       // seconds for the whole batch
  double mean_game_time = 0.0;  // seconds per game, summed over workers
  std::array<double, 5> mean_decision_time{};  // seconds per decision, by stage
  std::map<std::string, std::int64_t> outcomes;  // outcome name -> games

  double ci_low() const { return winrate - ci_halfwidth; }
  double ci_high() const { return winrate + ci_halfwidth; }
  nlohmann::json to_json() const;
};

/// Loads the card database and scenario named by a config.
std::shared_ptr<const Scenario> load_experiment_scenario(const ExperimentConfig& config);

/// Plays one game with the given stage policies. Decision-stage timings are
/// recorded per stage. When `trace` is set every stage appends one line.
GameRecord play_game(std::shared_ptr<const Scenario> scenario, const std::string& difficulty,
                     const StagePolicyMap& policies, std::uint64_t seed, int round_cap = 200,
                     std::vector<std::string>* trace = nullptr);

/// Aggregates game records in index order.
RunStats aggregate(const std::vector<GameRecord>& records, double z = kDefaultZ);

/// Plays config.games games, game i seeded with seed_for_game(master_seed, i),
/// spread over config.workers threads. Everything except the timing fields
/// is independent of the worker count.
RunStats run_games(const ExperimentConfig& config);
RunStats run_games(const ExperimentConfig& config, std::shared_ptr<const Scenario> scenario);

/// Substitutes `budget` into every search agent of a map.
StagePolicyMap with_budget(const StagePolicyMap& map, int budget);

/// One run per budget; every row uses the same per-game seeds.
std::vector<std::pair<int, RunStats>> budget_sweep(const ExperimentConfig& base,
                                                   const std::vector<int>& budgets);

struct StageChoices {
  std::vector<AgentKind> planning;
  std::vector<AgentKind> commit;
  std::vector<AgentKind> defense;
};

/// Parses `planning=a,b;commit=c;defense=d,e`. Stages not named get the
/// expert agent only.
StageChoices parse_stage_choices(std::string_view text);

/// One run per element of planning x commit x defense, in that nesting
/// order, each labelled like "4-2-4".
std::vector<std::pair<StagePolicyMap, RunStats>> combination_grid(const ExperimentConfig& base,
                                                                  const StageChoices& choices);

/// CSV with a `# config:` provenance line, a header row and one row per stats
/// entry. Columns: label,n,wins,winrate,ci_halfwidth,mean_rounds,wall_time_s.
void write_csv(std::ostream& out, const nlohmann::json& config, const std::vector<RunStats>& rows);
nlohmann::json results_json(const nlohmann::json& config, const std::vector<RunStats>& rows);

}  // namespace questmc
