#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "questmc/search.hpp"
#include "support.hpp"

using namespace questmc;
using test::put;

namespace {

// Seeded states at decision stages with at least two legal actions, taken
// from expert games on the reference data.
std::vector<GameState> sample_states(std::size_t count, std::uint64_t seed) {
  std::vector<GameState> out;
  Rng rng(seed);
  while (out.size() < count) {
    GameState s = new_game(test::reference_scenario(), "medium", rng);
    while (out.size() < count) {
      advance_to_decision(s, rng);
      if (s.outcome) break;
      const auto legals = legal_actions(s);
      if (legals.size() >= 2 && s.stage != StageId::Travel && uniform_index(rng, 3) == 0)
        out.push_back(s);
      s = apply_action(std::move(s), expert_choice(s));
    }
  }
  return out;
}

// Last quest, one point from winning, one threat from losing.
GameState knife_edge() {
  GameState s = test::blank_game(3);
  for (int i = 0; i < 2; ++i) test::place(s, s.zone(Zone::QuestDeck).front(), Zone::CompletedQuests);
  s.quest_index = 2;
  s.quest_progress = 3;
  s.threat_level = s.threat_limit() - 1;
  s.stage = StageId::CommitCharacters;
  return s;
}

// Visits and wins are consistent at every node of the tree.
void check_tree(const SearchNode& node) {
  CHECK(node.wins <= node.visits);
  int child_visits = 0;
  for (const SearchNode& c : node.children) {
    child_visits += c.visits;
    check_tree(c);
  }
  CHECK(child_visits <= node.visits);
}

}  // namespace

TEST_CASE("ucb score against a hand evaluation") {
  // ln 100 = 2 ln 10 = 4.605170185988091368...
  const long double ln100 = 4.605170185988091368L;
  const long double expected = 6.0L / 10.0L + 0.7L * std::sqrt(2.0L * ln100 / 10.0L);
  CHECK(std::fabs(ucb_score(6, 10, 100, 0.7) - static_cast<double>(expected)) < 1e-9);
  CHECK(ucb_score(6, 10, 100, 0.7) == doctest::Approx(1.2717936277).epsilon(1e-10));

  CHECK(ucb_score(6, 10, 100, 0.0) == 6.0 / 10.0);
  CHECK(ucb_score(1, 3, 50, 0.0) == 1.0 / 3.0);
  CHECK(ucb_score(3, 4, 1, 0.7) == 0.75);  // ln 1 = 0
  CHECK(ucb_score(0, 1, 2, 1.0) > ucb_score(0, 2, 2, 1.0));
}

TEST_CASE("flat allocation splits evenly with the remainder first") {
  CHECK(flat_allocation(10, 3) == std::vector<int>{4, 3, 3});
  CHECK(flat_allocation(15, 3) == std::vector<int>{5, 5, 5});
  CHECK(flat_allocation(2, 5) == std::vector<int>{1, 1, 0, 0, 0});
  CHECK(flat_allocation(7, 1) == std::vector<int>{7});
  CHECK(flat_allocation(5, 0).empty());
  for (int budget = 1; budget <= 60; budget += 7) {
    for (std::size_t k = 1; k <= 12; ++k) {
      const auto a = flat_allocation(budget, k);
      CHECK(std::accumulate(a.begin(), a.end(), 0) == budget);
      CHECK(*std::max_element(a.begin(), a.end()) - *std::min_element(a.begin(), a.end()) <= 1);
      CHECK(std::is_sorted(a.rbegin(), a.rend()));
    }
  }
}

TEST_CASE("every search decision spends exactly its playout budget") {
  const auto states = sample_states(12, 21);
  for (int budget : {1, 7, 40}) {
    for (PlayoutPolicy policy : {PlayoutPolicy::Expert, PlayoutPolicy::Random}) {
      SearchConfig config;
      config.playout_budget = budget;
      config.playout_policy = policy;
      for (const GameState& s : states) {
        const auto legals = legal_actions(s);
        Rng rng(budget);
        SearchTelemetry flat, mcts;
        flat_mc_decide(s, legals, config, rng, &flat);
        mcts_decide(s, legals, config, rng, &mcts);
        CHECK(flat.decisions == 1);
        CHECK(flat.playouts == budget);
        CHECK(mcts.decisions == 1);
        CHECK(mcts.playouts == budget);
        CHECK(mcts.iterations == budget);
      }
    }
  }
}

TEST_CASE("mcts root statistics") {
  const auto states = sample_states(8, 5);
  for (const GameState& s : states) {
    const auto legals = legal_actions(s);
    SearchConfig config;
    config.playout_budget = 40;
    Rng rng(1);
    const SearchNode root = mcts_search(s, legals, config, rng);
    CHECK(root.visits == 40);
    int visits = 0, wins = 0;
    for (const SearchNode& c : root.children) {
      visits += c.visits;
      wins += c.wins;
      CHECK(c.visits >= 1);
      CHECK(c.wins <= c.visits);
      CHECK(std::find(legals.begin(), legals.end(), *c.action) != legals.end());
    }
    CHECK(visits == 40);
    CHECK(wins == root.wins);
    CHECK(root.children.size() == std::min<std::size_t>(legals.size(), 40));
    check_tree(root);
  }
}

TEST_CASE("flat and mcts agree on how a first sweep visits the children") {
  // With budget equal to the number of actions MCTS expands each root child
  // once in legal order, which is the flat allocation of one playout each.
  const auto states = sample_states(20, 77);
  for (const GameState& s : states) {
    const auto legals = legal_actions(s);
    SearchConfig config;
    config.playout_budget = static_cast<int>(legals.size());
    Rng rng(9);
    const SearchNode root = mcts_search(s, legals, config, rng);
    const auto allocation = flat_allocation(config.playout_budget, legals.size());
    REQUIRE(root.children.size() == legals.size());
    for (std::size_t i = 0; i < legals.size(); ++i) {
      CHECK(*root.children[i].action == legals[i]);
      CHECK(root.children[i].visits == allocation[i]);
    }
  }
}

TEST_CASE("search agents find the winning commitment") {
  const GameState s = knife_edge();
  const auto legals = legal_actions(s);
  REQUIRE(legals.back() == Action{Commit{}});
  SearchConfig config;
  config.playout_budget = 60;
  Rng rng(12);
  const SearchNode root = mcts_search(s, legals, config, rng);
  for (const SearchNode& c : root.children) {
    if (*c.action == Action{Commit{}}) {
      CHECK(c.wins == 0);
    }
  }
  CHECK_FALSE(robust_child(root).action == Action{Commit{}});
  CHECK(robust_child(root).wins > 0);
  CHECK_FALSE(flat_mc_decide(s, legals, config, rng) == Action{Commit{}});
}

TEST_CASE("flat mc breaks ties toward the earliest action") {
  // Nothing can win: the quest cannot be finished this round and the next
  // refresh crosses the threat limit.
  GameState s = test::blank_game(3);
  s.threat_level = s.threat_limit() - 1;
  s.stage = StageId::CommitCharacters;
  const auto legals = legal_actions(s);
  SearchConfig config;
  config.playout_budget = 24;
  Rng rng(1);
  CHECK(flat_mc_decide(s, legals, config, rng) == legals.front());
}

TEST_CASE("flat choice is unchanged when every count is scaled") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> wins(2 + uniform_index(rng, 8));
    for (int& w : wins) w = static_cast<int>(uniform_index(rng, 6));
    const std::size_t best = flat_best_child(wins);
    CHECK(wins[best] == *std::max_element(wins.begin(), wins.end()));
    CHECK(std::find(wins.begin(), wins.end(), wins[best]) - wins.begin() == static_cast<long>(best));
    for (int k : {2, 3, 10}) {
      std::vector<int> scaled = wins;
      for (int& w : scaled) w *= k;
      CHECK(flat_best_child(scaled) == best);
    }
  }
}

TEST_CASE("robust child prefers visits, then wins, then order") {
  SearchNode root;
  root.children.push_back({PlayCards{{1}}, 3, 5, {}, false});
  root.children.push_back({PlayCards{{2}}, 4, 5, {}, false});
  root.children.push_back({PlayCards{{3}}, 4, 5, {}, false});
  root.children.push_back({PlayCards{{4}}, 0, 2, {}, false});
  CHECK(*robust_child(root).action == Action{PlayCards{{2}}});
  root.children[3].visits = 6;
  CHECK(*robust_child(root).action == Action{PlayCards{{4}}});
}

TEST_CASE("playouts are pure functions of the seed and leave the state alone") {
  const auto states = sample_states(6, 31);
  for (const GameState& s : states) {
    const GameState before = s;
    Rng a(8), b(8);
    CHECK(playout(s, PlayoutPolicy::Random, a) == playout(s, PlayoutPolicy::Random, b));
    CHECK(s == before);
    Rng c(3);
    CHECK(playout(s, PlayoutPolicy::Expert, c, 0) == Outcome::LossRoundCap);

    const auto legals = legal_actions(s);
    SearchConfig config;
    config.playout_budget = 30;
    Rng x(4), y(4);
    CHECK(mcts_decide(s, legals, config, x) == mcts_decide(s, legals, config, y));
    CHECK(flat_mc_decide(s, legals, config, x) == flat_mc_decide(s, legals, config, y));
  }
}

TEST_CASE("a single legal action is returned without search") {
  GameState s = test::blank_game();
  s.stage = StageId::Travel;
  const auto legals = legal_actions(s);
  REQUIRE(legals.size() == 1);
  SearchTelemetry t;
  Rng rng(1);
  CHECK(mcts_decide(s, legals, SearchConfig{}, rng, &t) == legals.front());
  CHECK(t.playouts == 0);
}

TEST_CASE("policy factory builds the requested agents") {
  for (const char* text : {"random", "expert", "flat:12:random", "mcts:9:0.3:expert"}) {
    const AgentKind kind = parse_agent_kind(text);
    CHECK(make_policy(kind)->kind() == kind);
  }
  CHECK_THROWS_AS(make_policy(FlatMcAgent{0, PlayoutPolicy::Expert}), ConfigError);
}
