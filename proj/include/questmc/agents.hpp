#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "questmc/game.hpp"

namespace questmc {

enum class PlayoutPolicy : std::uint8_t { Random, Expert };

std::string_view to_string(PlayoutPolicy policy);

struct RandomAgent {
  bool operator==(const RandomAgent&) const = default;
};

struct ExpertAgent {
  bool operator==(const ExpertAgent&) const = default;
};

struct FlatMcAgent {
  int budget = 40;
  PlayoutPolicy playout = PlayoutPolicy::Expert;
  bool operator==(const FlatMcAgent&) const = default;
};

struct MctsAgent {
  int budget = 40;
  double exploration_c = 0.7;
  PlayoutPolicy playout = PlayoutPolicy::Expert;
  bool operator==(const MctsAgent&) const = default;
};

/// Which decision algorithm handles a stage.
using AgentKind = std::variant<RandomAgent, ExpertAgent, FlatMcAgent, MctsAgent>;

/// Thrown for malformed agent strings and inconsistent stage maps.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses `random`, `expert`, `flat:<budget>:<playout>` or
/// `mcts:<budget>:<C>:<playout>`, with `<playout>` one of random/expert.
AgentKind parse_agent_kind(std::string_view text);
/// Canonical string form; parse_agent_kind(to_string(k)) == k.
std::string to_string(const AgentKind& kind);
/// Agent number 1 (random) .. 4 (MCTS-UCB).
int agent_number(const AgentKind& kind);
bool is_search_agent(const AgentKind& kind);
/// Validates budget >= 1 and 0 <= C <= 1.
void validate(const AgentKind& kind);

/// Per-stage assignment of decision algorithms. Travel always uses the fixed
/// rule; DeclareAttackers uses the fixed rule unless `attack` overrides it
/// with an MCTS agent.
struct StagePolicyMap {
  AgentKind planning = ExpertAgent{};
  AgentKind commit = ExpertAgent{};
  AgentKind defense = ExpertAgent{};
  std::optional<AgentKind> attack;

  const AgentKind* for_stage(StageId stage) const;
  /// "4-2-4" style label over (planning, commit, defense).
  std::string label() const;
  bool operator==(const StagePolicyMap&) const = default;
};

void validate(const StagePolicyMap& map);
/// Parses `planning=A,commit=B,defense=C[,attack=D]`. Stages not named keep
/// the expert default.
StagePolicyMap parse_stage_policy_map(std::string_view text);
std::string to_string(const StagePolicyMap& map);

/// Behavioral interface of every agent. decide() returns a member of `legals`.
class DecisionPolicy {
 public:
  virtual ~DecisionPolicy() = default;
  virtual Action decide(const GameState& state, std::span<const Action> legals, Rng& rng) const = 0;
  virtual AgentKind kind() const = 0;
};

/// Uniform choice over the legal actions.
Action random_decide(const GameState& state, std::span<const Action> legals, Rng& rng);

/// Rule-based choice; ignores `rng`.
Action expert_decide(const GameState& state, std::span<const Action> legals, Rng& rng);

/// The expert's preferred action, computed directly from the state. Equal to
/// expert_decide(state, legal_actions(state), rng) for every decision stage.
Action expert_choice(const GameState& state);

/// Fixed Travel rule: highest-threat staging location when nothing is active.
Action default_travel(const GameState& state, std::span<const Action> legals);
/// Fixed attack rule: everyone ready hits the engaged enemy with the fewest
/// remaining hit points.
Action default_attack(const GameState& state, std::span<const Action> legals);

Action default_travel_choice(const GameState& state);
Action default_attack_choice(const GameState& state);

/// Card id the expert always buys and commits first when it can.
inline constexpr std::string_view kExpertFavourite = "gandalf";
/// Cards at or below this cost count as cheap purchases for the expert.
inline constexpr int kExpertCheapCost = 2;

class RandomPolicy final : public DecisionPolicy {
 public:
  Action decide(const GameState& state, std::span<const Action> legals, Rng& rng) const override {
    return random_decide(state, legals, rng);
  }
  AgentKind kind() const override { return RandomAgent{}; }
};

class ExpertPolicy final : public DecisionPolicy {
 public:
  Action decide(const GameState& state, std::span<const Action> legals, Rng& rng) const override {
    return expert_decide(state, legals, rng);
  }
  AgentKind kind() const override { return ExpertAgent{}; }
};

/// Rollout decision used inside playouts: the playout policy at Planning,
/// CommitCharacters and DeclareDefenders, the fixed rules elsewhere. Legal
/// actions are only enumerated when the policy needs them.
Action playout_decide(PlayoutPolicy policy, const GameState& state, Rng& rng);

}  // namespace questmc
