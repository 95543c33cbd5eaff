#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "questmc/agents.hpp"
#include "questmc/game.hpp"

namespace questmc {

struct SearchConfig {
  int playout_budget = 40;
  double exploration_c = 0.7;
  PlayoutPolicy playout_policy = PlayoutPolicy::Expert;
  int playout_round_cap = 100;  // rounds per playout; hitting it counts as a loss
  int max_tree_depth = 0;       // MCTS only; 0 = unlimited
};

/// Counting hook for tests and instrumentation.
struct SearchTelemetry {
  std::int64_t decisions = 0;
  std::int64_t playouts = 0;
  std::int64_t iterations = 0;
};

struct SearchNode {
  std::optional<Action> action;  // none at the root
  int wins = 0;
  int visits = 0;
  std::vector<SearchNode> children;
  bool expanded = false;  // every legal action seen on the last visit has a child
};

/// Upper confidence bound: wins/visits + c * sqrt(2 ln(parent_visits) / visits).
/// Requires visits >= 1 and parent_visits >= 1.
double ucb_score(int wins, int visits, int parent_visits, double c);

/// Plays a determinized copy of `state` to the end with the given policy.
/// Returns LossRoundCap if `round_cap` rounds pass first.
Outcome playout(const GameState& state, PlayoutPolicy policy, Rng& rng, int round_cap = 100);

/// Continues `state` in place (no determinization) until terminal or cap.
Outcome rollout(GameState& state, PlayoutPolicy policy, Rng& rng, int round_cap);

/// Playouts granted to each of `children` under an even split, remainder to
/// the earliest children.
std::vector<int> flat_allocation(int budget, std::size_t children);

/// Index of the largest win count, the earliest on ties.
std::size_t flat_best_child(std::span<const int> wins);

Action flat_mc_decide(const GameState& state, std::span<const Action> legals,
                      const SearchConfig& config, Rng& rng, SearchTelemetry* telemetry = nullptr);

/// Runs `config.playout_budget` MCTS iterations and returns the search tree.
SearchNode mcts_search(const GameState& state, std::span<const Action> legals,
                       const SearchConfig& config, Rng& rng, SearchTelemetry* telemetry = nullptr);

/// Most visited root child; ties broken by wins, then legal-action order.
const SearchNode& robust_child(const SearchNode& root);

Action mcts_decide(const GameState& state, std::span<const Action> legals,
                   const SearchConfig& config, Rng& rng, SearchTelemetry* telemetry = nullptr);

class FlatMcPolicy final : public DecisionPolicy {
 public:
  explicit FlatMcPolicy(SearchConfig config) : config_(config) {}
  Action decide(const GameState& state, std::span<const Action> legals, Rng& rng) const override {
    return flat_mc_decide(state, legals, config_, rng);
  }
  AgentKind kind() const override { return FlatMcAgent{config_.playout_budget, config_.playout_policy}; }

 private:
  SearchConfig config_;
};

class MctsPolicy final : public DecisionPolicy {
 public:
  explicit MctsPolicy(SearchConfig config) : config_(config) {}
  Action decide(const GameState& state, std::span<const Action> legals, Rng& rng) const override {
    return mcts_decide(state, legals, config_, rng);
  }
  AgentKind kind() const override {
    return MctsAgent{config_.playout_budget, config_.exploration_c, config_.playout_policy};
  }

 private:
  SearchConfig config_;
};

std::unique_ptr<DecisionPolicy> make_policy(const AgentKind& kind);

}  // namespace questmc
