#include <algorithm>
#include <optional>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "questmc/experiments.hpp"
#include "questmc/search.hpp"

namespace py = pybind11;
using namespace questmc;

namespace {

// An empty string leaves every stage to the expert.
StagePolicyMap parse_agents(const std::string& agents) {
  return agents.empty() ? StagePolicyMap{} : parse_stage_policy_map(agents);
}

ExperimentConfig make_config(const std::string& cards, const std::string& scenario,
                             const std::string& difficulty, const std::string& agents, int games,
                             std::uint64_t seed, int workers, double z, int round_cap) {
  ExperimentConfig c;
  c.cards_path = cards;
  c.scenario_path = scenario;
  c.difficulty = difficulty;
  c.policy_map = parse_agents(agents);
  c.games = games;
  c.master_seed = seed;
  c.workers = workers;
  c.z = z;
  c.round_cap = round_cap;
  return c;
}

// Results cross the boundary as JSON text; the Python side decodes it.
std::string rows_json(const ExperimentConfig& c, const std::vector<RunStats>& rows) {
  return results_json(c.to_json(), rows).dump();
}

// A single game driven step by step from Python. Ruled and random stages are
// resolved automatically; the caller only sees decision stages.
class Game {
 public:
  Game(const std::string& cards, const std::string& scenario, const std::string& difficulty,
       std::uint64_t seed)
      : rng_(seed) {
    auto db = std::make_shared<const CardDb>(load_card_db(cards));
    auto sc = std::make_shared<const Scenario>(load_scenario(scenario, db));
    state_ = new_game(sc, difficulty, rng_);
    advance_to_decision(state_, rng_);
  }

  std::vector<std::string> legal_actions() const {
    std::vector<std::string> out;
    if (state_.outcome) return out;
    for (const Action& a : questmc::legal_actions(state_)) out.push_back(to_string(a));
    return out;
  }

  // Index into legal_actions() chosen by an agent given as an agent string.
  std::size_t choose(const std::string& agent) {
    if (state_.outcome) throw StageError("game is over");
    const auto legals = questmc::legal_actions(state_);
    const Action a = make_policy(parse_agent_kind(agent))->decide(state_, legals, rng_);
    return static_cast<std::size_t>(std::find(legals.begin(), legals.end(), a) - legals.begin());
  }

  void apply(std::size_t index) {
    if (state_.outcome) throw StageError("game is over");
    const auto legals = questmc::legal_actions(state_);
    if (index >= legals.size()) throw py::index_error("action index out of range");
    state_ = apply_action(std::move(state_), legals[index]);
    advance_to_decision(state_, rng_);
  }

  std::string stage() const { return std::string(to_string(state_.stage)); }
  std::optional<std::string> outcome() const {
    if (!state_.outcome) return std::nullopt;
    return std::string(to_string(*state_.outcome));
  }
  int round() const { return state_.round; }
  int threat() const { return state_.threat_level; }
  int quest_progress() const { return state_.total_quest_progress(); }
  std::vector<std::string> invariant_violations() const { return check_invariants(state_); }

 private:
  Rng rng_;
  GameState state_;
};

}  // namespace

PYBIND11_MODULE(_questmc, m) {
  m.doc() = "Monte Carlo agents for a cooperative card game";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<StageError>(m, "StageError", PyExc_RuntimeError);

  m.def("ucb_score", &ucb_score, py::arg("wins"), py::arg("visits"), py::arg("parent_visits"),
        py::arg("c"));
  m.def(
      "winrate_ci",
      [](std::int64_t wins, std::int64_t n, double z) {
        const auto ci = winrate_ci(wins, n, z);
        return std::make_pair(ci.winrate, ci.halfwidth);
      },
      py::arg("wins"), py::arg("n"), py::arg("z") = kDefaultZ);
  m.def("seed_for_game", &seed_for_game, py::arg("master_seed"), py::arg("game_index"));
  m.def("flat_allocation", &flat_allocation, py::arg("budget"), py::arg("actions"));
  m.def(
      "canonical_agent", [](const std::string& text) { return to_string(parse_agent_kind(text)); },
      py::arg("text"));
  m.def(
      "policy_label", [](const std::string& agents) { return parse_stage_policy_map(agents).label(); },
      py::arg("agents"));

  m.def(
      "simulate",
      [](const std::string& cards, const std::string& scenario, const std::string& difficulty,
         const std::string& agents, int games, std::uint64_t seed, int workers, double z,
         int round_cap) {
        const auto c = make_config(cards, scenario, difficulty, agents, games, seed, workers, z, round_cap);
        py::gil_scoped_release release;
        return rows_json(c, {run_games(c)});
      },
      py::arg("cards"), py::arg("scenario"), py::arg("difficulty"), py::arg("agents"),
      py::arg("games"), py::arg("seed"), py::arg("workers"), py::arg("z"), py::arg("round_cap"));

  m.def(
      "sweep",
      [](const std::string& cards, const std::string& scenario, const std::string& difficulty,
         const std::string& agents, const std::vector<int>& budgets, int games, std::uint64_t seed,
         int workers, double z, int round_cap) {
        const auto c = make_config(cards, scenario, difficulty, agents, games, seed, workers, z, round_cap);
        py::gil_scoped_release release;
        std::vector<RunStats> rows;
        for (auto& [budget, stats] : budget_sweep(c, budgets)) rows.push_back(std::move(stats));
        return rows_json(c, rows);
      },
      py::arg("cards"), py::arg("scenario"), py::arg("difficulty"), py::arg("agents"),
      py::arg("budgets"), py::arg("games"), py::arg("seed"), py::arg("workers"), py::arg("z"),
      py::arg("round_cap"));

  m.def(
      "grid",
      [](const std::string& cards, const std::string& scenario, const std::string& difficulty,
         const std::string& choices, int games, std::uint64_t seed, int workers, double z,
         int round_cap) {
        const auto c = make_config(cards, scenario, difficulty, "", games, seed, workers, z, round_cap);
        const StageChoices parsed = parse_stage_choices(choices);
        py::gil_scoped_release release;
        std::vector<RunStats> rows;
        for (auto& [map, stats] : combination_grid(c, parsed)) rows.push_back(std::move(stats));
        return rows_json(c, rows);
      },
      py::arg("cards"), py::arg("scenario"), py::arg("difficulty"), py::arg("choices"),
      py::arg("games"), py::arg("seed"), py::arg("workers"), py::arg("z"), py::arg("round_cap"));

  m.def(
      "play",
      [](const std::string& cards, const std::string& scenario, const std::string& difficulty,
         const std::string& agents, std::uint64_t seed, int round_cap) {
        auto db = std::make_shared<const CardDb>(load_card_db(cards));
        auto sc = std::make_shared<const Scenario>(load_scenario(scenario, db));
        std::vector<std::string> trace;
        const GameRecord r = play_game(sc, difficulty, parse_agents(agents), seed, round_cap, &trace);
        return py::make_tuple(std::string(to_string(r.outcome)), r.rounds, trace);
      },
      py::arg("cards"), py::arg("scenario"), py::arg("difficulty"), py::arg("agents"),
      py::arg("seed"), py::arg("round_cap"));

  py::class_<Game>(m, "Game")
      .def(py::init<const std::string&, const std::string&, const std::string&, std::uint64_t>(),
           py::arg("cards"), py::arg("scenario"), py::arg("difficulty"), py::arg("seed"))
      .def("legal_actions", &Game::legal_actions)
      .def("choose", &Game::choose, py::arg("agent"))
      .def("apply", &Game::apply, py::arg("index"))
      .def_property_readonly("stage", &Game::stage)
      .def_property_readonly("outcome", &Game::outcome)
      .def_property_readonly("round", &Game::round)
      .def_property_readonly("threat", &Game::threat)
      .def_property_readonly("quest_progress", &Game::quest_progress)
      .def("invariant_violations", &Game::invariant_violations);
}
