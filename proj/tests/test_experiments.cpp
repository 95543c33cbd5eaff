#include <cmath>
#include <sstream>

#include "doctest.h"
#include "questmc/experiments.hpp"
#include "support.hpp"

using namespace questmc;

namespace {

// Reference SplitMix64 written out independently of the library.
std::uint64_t splitmix_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ExperimentConfig small_config(const std::string& agents, int games = 40) {
  ExperimentConfig c;
  c.games = games;
  c.master_seed = 3;
  c.cards_path = test::reference_cards();
  c.scenario_path = test::reference_scenario_path();
  c.policy_map = parse_stage_policy_map(agents);
  return c;
}

std::string csv_without_wall_time(const ExperimentConfig& config, const std::vector<RunStats>& rows) {
  std::ostringstream out;
  write_csv(out, config.to_json(), rows);
  std::istringstream in(out.str());
  std::string line, result;
  while (std::getline(in, line)) {
    if (line.rfind("# config:", 0) == 0) {
      result += line + "\n";
      continue;
    }
    result += line.substr(0, line.rfind(',')) + "\n";
  }
  return result;
}

}  // namespace

TEST_CASE("confidence interval against a hand evaluation") {
  // 1.96 * sqrt(0.5 * 0.5 / 1000) = 1.96 * 0.015811388300841896...
  const double expected = 1.96 * 0.0158113883008418966599944677;
  const auto ci = winrate_ci(500, 1000, 1.96);
  CHECK(ci.winrate == 0.5);
  CHECK(std::fabs(ci.halfwidth - expected) < 1e-9);
  CHECK(ci.halfwidth == doctest::Approx(0.0309903211).epsilon(1e-9));
  CHECK(winrate_ci(0, 40).halfwidth == 0.0);
  CHECK(winrate_ci(40, 40).halfwidth == 0.0);
  CHECK(winrate_ci(40, 40).winrate == 1.0);
  CHECK_THROWS_AS(winrate_ci(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(winrate_ci(5, 4), std::invalid_argument);
  CHECK_THROWS_AS(winrate_ci(-1, 4), std::invalid_argument);
}

TEST_CASE("confidence interval against a reimplementation") {
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const auto n = static_cast<std::int64_t>(1 + uniform_index(rng, 5000));
    const auto wins = static_cast<std::int64_t>(uniform_index(rng, static_cast<std::size_t>(n) + 1));
    const double z = 1.0 + static_cast<double>(uniform_index(rng, 200)) / 100.0;
    const long double p = static_cast<long double>(wins) / n;
    const long double half = z * std::sqrt(p * (1 - p) / n);
    const auto ci = winrate_ci(wins, n, z);
    CHECK(std::fabs(ci.winrate - static_cast<double>(p)) < 1e-12);
    CHECK(std::fabs(ci.halfwidth - static_cast<double>(half)) < 1e-12);
  }
}

TEST_CASE("per-game seeds follow the SplitMix64 stream") {
  for (std::uint64_t master : {0ULL, 1ULL, 42ULL, 0xffffffffffffffffULL}) {
    std::uint64_t state = master;
    for (std::uint64_t i = 0; i < 50; ++i) CHECK(seed_for_game(master, i) == splitmix_next(state));
  }
  CHECK(seed_for_game(0, 0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("config validation") {
  ExperimentConfig c = small_config("planning=expert");
  c.games = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.games = 1;
  c.workers = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.workers = 1;
  c.z = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.z = 1.96;
  c.difficulty = "nightmare";
  CHECK_THROWS_AS(run_games(c), DataError);
  c.difficulty = "medium";
  c.cards_path = "/nonexistent.json";
  CHECK_THROWS_AS(run_games(c), DataError);
}

TEST_CASE("run_games is independent of the worker count") {
  ExperimentConfig one = small_config("planning=flat:4:expert,commit=mcts:4:0.7:random", 24);
  ExperimentConfig many = one;
  many.workers = 4;
  const RunStats a = run_games(one);
  const RunStats b = run_games(many);
  CHECK(a.n == 24);
  CHECK(a.wins == b.wins);
  CHECK(a.mean_rounds == b.mean_rounds);
  CHECK(a.outcomes == b.outcomes);
  CHECK(a.label == "3-4-2");
  CHECK(csv_without_wall_time(one, {a}) == csv_without_wall_time(many, {b}));
  CHECK(a.wall_time > 0.0);
  CHECK(a.mean_game_time > 0.0);
  // Planning and Commit are searched here; Defend is the expert.
  CHECK(a.mean_decision_time[0] > 0.0);
  CHECK(a.mean_decision_time[1] > a.mean_decision_time[3]);
}

TEST_CASE("wins over any partition of the games add up to the batch") {
  const auto scenario = test::reference_scenario();
  std::vector<GameRecord> records;
  for (std::uint64_t i = 0; i < 30; ++i)
    records.push_back(play_game(scenario, "medium", StagePolicyMap{}, seed_for_game(9, i)));
  const RunStats total = aggregate(records);
  for (std::size_t cut : {1u, 7u, 15u, 29u}) {
    const RunStats left = aggregate({records.begin(), records.begin() + static_cast<long>(cut)});
    const RunStats right = aggregate({records.begin() + static_cast<long>(cut), records.end()});
    CHECK(left.wins + right.wins == total.wins);
    CHECK(left.n + right.n == total.n);
  }
}

TEST_CASE("aggregate counts outcomes in order") {
  std::vector<GameRecord> records(4);
  records[0].outcome = Outcome::Win;
  records[0].rounds = 10;
  records[1].outcome = Outcome::LossThreat;
  records[1].rounds = 6;
  records[2].outcome = Outcome::Win;
  records[2].rounds = 8;
  records[3].outcome = Outcome::LossHeroesDead;
  records[3].rounds = 4;
  records[3].decisions[0] = 2;
  records[3].decision_seconds[0] = 0.5;
  const RunStats s = aggregate(records);
  CHECK(s.n == 4);
  CHECK(s.wins == 2);
  CHECK(s.winrate == 0.5);
  CHECK(s.mean_rounds == 7.0);
  CHECK(s.outcomes.at("Win") == 2);
  CHECK(s.outcomes.at("LossThreat") == 1);
  CHECK(s.mean_decision_time[0] == 0.25);
  CHECK(s.ci_low() < 0.5);
  CHECK(s.ci_high() > 0.5);
}

TEST_CASE("play_game traces every stage and stops at the round cap") {
  const auto scenario = test::reference_scenario();
  std::vector<std::string> trace;
  const GameRecord r =
      play_game(scenario, "medium", StagePolicyMap{}, seed_for_game(1, 0), 200, &trace);
  REQUIRE_FALSE(trace.empty());
  CHECK(trace.back().find("outcome=" + std::string(to_string(r.outcome))) != std::string::npos);
  int decisions = 0;
  for (int n : r.decisions) decisions += n;
  // Every completed round has five decisions; the last one may stop early.
  CHECK(decisions <= r.rounds * 5);
  CHECK(decisions >= (r.rounds - 1) * 5);

  const GameRecord capped = play_game(scenario, "medium", StagePolicyMap{}, 5, 1);
  CHECK(capped.rounds <= 1);
  if (capped.outcome == Outcome::LossRoundCap) CHECK(capped.rounds == 1);
}

TEST_CASE("budget sweeps substitute the budget and share seeds") {
  ExperimentConfig c = small_config("commit=mcts:40:0.7:expert", 12);
  const auto rows = budget_sweep(c, {1, 3});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].first == 1);
  CHECK(rows[0].second.label == "budget=1");
  CHECK(rows[1].second.n == 12);

  const StagePolicyMap m = with_budget(c.policy_map, 7);
  CHECK(std::get<MctsAgent>(m.commit).budget == 7);
  CHECK(std::get<MctsAgent>(m.commit).exploration_c == 0.7);
  CHECK_THROWS_AS(budget_sweep(small_config("planning=expert"), {5}), ConfigError);
  CHECK_THROWS_AS(budget_sweep(c, {}), ConfigError);
  CHECK_THROWS_AS(budget_sweep(c, {0}), ConfigError);
}

TEST_CASE("combination grid nests planning, commit, defense") {
  const StageChoices choices = parse_stage_choices("planning=expert,random;defense=expert,random");
  CHECK(choices.commit.size() == 1);
  const auto rows = combination_grid(small_config("planning=expert", 6), choices);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].second.label == "2-2-2");
  CHECK(rows[1].second.label == "2-2-1");
  CHECK(rows[2].second.label == "1-2-2");
  CHECK(rows[3].second.label == "1-2-1");
  CHECK_THROWS_AS(parse_stage_choices("attack=random"), ConfigError);
  CHECK_THROWS_AS(parse_stage_choices("planning"), ConfigError);
  CHECK_THROWS_AS(parse_stage_choices("planning=smart"), ConfigError);
}

TEST_CASE("csv and json layouts") {
  RunStats r;
  r.label = "4-2-4";
  r.n = 10;
  r.wins = 7;
  r.winrate = 0.7;
  r.ci_halfwidth = 0.284;
  r.mean_rounds = 12.5;
  r.wall_time = 1.25;
  std::ostringstream out;
  write_csv(out, nlohmann::json{{"games", 10}}, {r});
  CHECK(out.str() ==
        "# config: {\"games\":10}\n"
        "label,n,wins,winrate,ci_halfwidth,mean_rounds,wall_time_s\n"
        "4-2-4,10,7,0.700000,0.284000,12.5000,1.250\n");
  const auto j = results_json(nlohmann::json{{"games", 10}}, {r});
  CHECK(j["rows"][0]["label"] == "4-2-4");
  CHECK(j["rows"][0]["wins"] == 7);
  CHECK(j["config"]["games"] == 10);
  CHECK(j["rows"][0]["mean_decision_time_s"].contains("Planning"));
}
