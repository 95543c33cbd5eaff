#include "questmc/search.hpp"

#include <algorithm>
#include <cmath>

namespace questmc {

namespace {

bool branches_at(StageId stage) {
  return stage == StageId::Planning || stage == StageId::CommitCharacters ||
         stage == StageId::DeclareDefenders;
}

// Moves the simulation to the next stage the tree branches on. Travel and
// DeclareAttackers inside the tree follow the fixed rules.
void advance_to_branch(GameState& sim, Rng& rng) {
  while (true) {
    advance_to_decision(sim, rng);
    if (sim.outcome || branches_at(sim.stage)) return;
    sim = apply_action(std::move(sim), playout_decide(PlayoutPolicy::Expert, sim, rng));
  }
}

}  // namespace

double ucb_score(int wins, int visits, int parent_visits, double c) {
  const double mean = static_cast<double>(wins) / visits;
  if (c == 0.0) return mean;
  return mean + c * std::sqrt(2.0 * std::log(static_cast<double>(parent_visits)) / visits);
}

Outcome rollout(GameState& sim, PlayoutPolicy policy, Rng& rng, int round_cap) {
  const int start_round = sim.round;
  while (true) {
    advance_to_decision(sim, rng);
    if (sim.outcome) return *sim.outcome;
    if (sim.round - start_round >= round_cap) return Outcome::LossRoundCap;
    sim = apply_action(std::move(sim), playout_decide(policy, sim, rng));
  }
}

Outcome playout(const GameState& state, PlayoutPolicy policy, Rng& rng, int round_cap) {
  if (state.outcome) return *state.outcome;
  GameState sim = snapshot(state);
  determinize(sim, rng);
  return rollout(sim, policy, rng, round_cap);
}

std::vector<int> flat_allocation(int budget, std::size_t children) {
  std::vector<int> out(children, 0);
  if (children == 0) return out;
  const int n = static_cast<int>(children);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = budget / n + (i < budget % n ? 1 : 0);
  return out;
}

std::size_t flat_best_child(std::span<const int> wins) {
  return static_cast<std::size_t>(std::max_element(wins.begin(), wins.end()) - wins.begin());
}

Action flat_mc_decide(const GameState& state, std::span<const Action> legals,
                      const SearchConfig& config, Rng& rng, SearchTelemetry* telemetry) {
  if (telemetry) ++telemetry->decisions;
  if (legals.size() == 1) return legals.front();
  const auto allocation = flat_allocation(config.playout_budget, legals.size());
  std::vector<int> wins(legals.size(), 0);
  for (std::size_t i = 0; i < legals.size(); ++i) {
    for (int p = 0; p < allocation[i]; ++p) {
      GameState sim = snapshot(state);
      determinize(sim, rng);
      sim = apply_action(std::move(sim), legals[i]);
      if (rollout(sim, config.playout_policy, rng, config.playout_round_cap) == Outcome::Win) ++wins[i];
      if (telemetry) ++telemetry->playouts;
    }
  }
  return legals[flat_best_child(wins)];
}

SearchNode mcts_search(const GameState& state, std::span<const Action> legals,
                       const SearchConfig& config, Rng& rng, SearchTelemetry* telemetry) {
  SearchNode root;
  std::vector<SearchNode*> path;
  std::vector<Action> level_legals;

  for (int iteration = 0; iteration < config.playout_budget; ++iteration) {
    GameState sim = snapshot(state);
    determinize(sim, rng);
    path.assign(1, &root);
    SearchNode* node = &root;
    int depth = 0;

    while (!sim.outcome) {
      if (config.max_tree_depth > 0 && depth >= config.max_tree_depth) break;
      std::span<const Action> here = legals;
      if (node != &root) {
        level_legals = legal_actions(sim);
        here = level_legals;
      }

      // Children whose action is legal in this sample, indexed by legal order.
      std::vector<SearchNode*> available;
      const Action* untried = nullptr;
      for (const Action& a : here) {
        auto it = std::find_if(node->children.begin(), node->children.end(),
                               [&](const SearchNode& c) { return *c.action == a; });
        if (it == node->children.end()) {
          if (!untried) untried = &a;
        } else {
          available.push_back(&*it);
        }
      }

      if (untried) {
        node->children.push_back(SearchNode{*untried, 0, 0, {}, false});
        SearchNode* child = &node->children.back();
        node->expanded = available.size() + 1 == here.size();
        sim = apply_action(std::move(sim), *child->action);
        advance_to_branch(sim, rng);
        path.push_back(child);
        break;
      }
      node->expanded = true;

      SearchNode* best = available.front();
      double best_score = ucb_score(best->wins, best->visits, node->visits, config.exploration_c);
      for (std::size_t i = 1; i < available.size(); ++i) {
        const double score =
            ucb_score(available[i]->wins, available[i]->visits, node->visits, config.exploration_c);
        if (score > best_score) {
          best_score = score;
          best = available[i];
        }
      }
      sim = apply_action(std::move(sim), *best->action);
      advance_to_branch(sim, rng);
      path.push_back(best);
      node = best;
      ++depth;
    }

    const Outcome outcome = sim.outcome ? *sim.outcome
                                        : rollout(sim, config.playout_policy, rng,
                                                  config.playout_round_cap);
    const int win = outcome == Outcome::Win ? 1 : 0;
    for (SearchNode* n : path) {
      ++n->visits;
      n->wins += win;
    }
    if (telemetry) {
      ++telemetry->iterations;
      ++telemetry->playouts;
    }
  }
  return root;
}

const SearchNode& robust_child(const SearchNode& root) {
  const SearchNode* best = &root.children.front();
  for (const SearchNode& c : root.children) {
    if (c.visits > best->visits || (c.visits == best->visits && c.wins > best->wins)) best = &c;
  }
  return *best;
}

Action mcts_decide(const GameState& state, std::span<const Action> legals,
                   const SearchConfig& config, Rng& rng, SearchTelemetry* telemetry) {
  if (telemetry) ++telemetry->decisions;
  if (legals.size() == 1) return legals.front();
  const SearchNode root = mcts_search(state, legals, config, rng, telemetry);
  return *robust_child(root).action;
}

std::unique_ptr<DecisionPolicy> make_policy(const AgentKind& kind) {
  struct Visitor {
    std::unique_ptr<DecisionPolicy> operator()(const RandomAgent&) const {
      return std::make_unique<RandomPolicy>();
    }
    std::unique_ptr<DecisionPolicy> operator()(const ExpertAgent&) const {
      return std::make_unique<ExpertPolicy>();
    }
    std::unique_ptr<DecisionPolicy> operator()(const FlatMcAgent& a) const {
      SearchConfig config;
      config.playout_budget = a.budget;
      config.playout_policy = a.playout;
      return std::make_unique<FlatMcPolicy>(config);
    }
    std::unique_ptr<DecisionPolicy> operator()(const MctsAgent& a) const {
      SearchConfig config;
      config.playout_budget = a.budget;
      config.exploration_c = a.exploration_c;
      config.playout_policy = a.playout;
      return std::make_unique<MctsPolicy>(config);
    }
  };
  validate(kind);
  return std::visit(Visitor{}, kind);
}

}  // namespace questmc
