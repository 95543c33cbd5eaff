#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "questmc/cards.hpp"
#include "questmc/rng.hpp"

namespace questmc {

// One round is 13 stages in 7 phases. Values are the 1-based stage numbers.
enum class StageId : std::uint8_t {
  GainResourcesAndDraw = 1,
  Planning,
  CommitCharacters,
  Staging,
  QuestResolution,
  Travel,
  EngagementChecks,
  DealShadowCards,
  DeclareDefenders,
  ResolveEnemyAttacks,
  DeclareAttackers,
  ResolvePlayerAttacks,
  Refresh,
};

inline constexpr int kStageCount = 13;

enum class StageKind : std::uint8_t { Ruled, Random, Decision };
enum class Phase : std::uint8_t { Resource, Planning, Quest, Travel, Encounter, Combat, Refresh };

StageKind stage_kind(StageId stage);
Phase phase_of(StageId stage);
/// Next stage in round order; Refresh wraps to GainResourcesAndDraw.
StageId next_stage(StageId stage);
std::string_view to_string(StageId stage);
std::string_view to_string(StageKind kind);
std::optional<StageId> parse_stage(std::string_view name);

enum class Zone : std::uint8_t {
  PlayerDeck,
  Hand,
  PlayArea,
  StagingArea,
  EncounterDeck,
  EngagementArea,
  ActiveLocation,
  PlayerDiscard,
  EncounterDiscard,
  CompletedQuests,
  QuestDeck,    // quest cards not yet completed; the front one is active
  ShadowCards,  // face-down encounter cards dealt to engaged enemies
};

inline constexpr std::size_t kZoneCount = 12;
std::string_view to_string(Zone zone);

enum class Outcome : std::uint8_t { Win, LossThreat, LossHeroesDead, LossDeckEmpty, LossRoundCap };
std::string_view to_string(Outcome outcome);

using InstanceId = std::int32_t;

struct CardInstance {
  InstanceId id = 0;
  const CardDef* def = nullptr;
  Zone zone = Zone::PlayerDeck;
  int damage = 0;
  bool exhausted = false;
  int resource_pool = 0;  // heroes only
  bool committed = false;
  std::optional<InstanceId> shadow_card;  // engaged enemies during combat
  std::optional<InstanceId> attached_to;  // items: the hero carrying them
  int progress = 0;                       // active location only

  bool operator==(const CardInstance&) const = default;
};

// Stage-tagged decision payloads. Id lists are kept sorted ascending so that
// equal decisions compare equal.
struct PlayCards {
  std::vector<InstanceId> cards;
  bool operator==(const PlayCards&) const = default;
};

struct Commit {
  std::vector<InstanceId> characters;
  bool operator==(const Commit&) const = default;
};

struct TravelTo {
  std::optional<InstanceId> location;
  bool operator==(const TravelTo&) const = default;
};

struct DefenseAssignment {
  InstanceId enemy = 0;
  std::optional<InstanceId> defender;
  bool operator==(const DefenseAssignment&) const = default;
};

/// One entry per engaged enemy, ascending by enemy id.
struct Defend {
  std::vector<DefenseAssignment> assignments;
  bool operator==(const Defend&) const = default;
};

struct AttackAssignment {
  InstanceId enemy = 0;
  std::vector<InstanceId> attackers;
  bool operator==(const AttackAssignment&) const = default;
};

/// Only enemies with at least one attacker are listed, ascending by enemy id.
struct Attack {
  std::vector<AttackAssignment> assignments;
  bool operator==(const Attack&) const = default;
};

using Action = std::variant<PlayCards, Commit, TravelTo, Defend, Attack>;

StageId stage_of(const Action& action);
std::string to_string(const Action& action);

/// Calling a stage operation on a stage of the wrong kind, or on a finished game.
class StageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An action that breaks a game rule; the message names the rule.
class IllegalAction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GameState {
  std::shared_ptr<const Scenario> scenario;
  std::string difficulty;
  int round = 1;
  StageId stage = StageId::GainResourcesAndDraw;
  int threat_level = 0;
  int quest_index = 0;
  int quest_progress = 0;
  std::vector<CardInstance> cards;  // indexed by instance id
  // Ordered zone contents. For decks the back is the top card.
  std::array<std::vector<InstanceId>, kZoneCount> zones;
  std::optional<Defend> declared_defense;
  std::optional<Attack> declared_attack;
  std::optional<Outcome> outcome;

  const CardInstance& card(InstanceId id) const { return cards.at(static_cast<std::size_t>(id)); }
  CardInstance& card(InstanceId id) { return cards.at(static_cast<std::size_t>(id)); }
  const std::vector<InstanceId>& zone(Zone z) const { return zones[static_cast<std::size_t>(z)]; }
  std::vector<InstanceId>& zone(Zone z) { return zones[static_cast<std::size_t>(z)]; }

  int threat_limit() const { return scenario->threat_limit; }
  /// Quest points of the active quest card; 0 once every quest is done.
  int current_quest_points() const;
  /// Printed stat plus bonuses of attached items.
  int stat(InstanceId id, Stat which) const;
  /// Summed threat of enemies and locations in the staging area.
  int staging_threat() const;
  /// Heroes and allies in play that are not exhausted, ascending by id.
  std::vector<InstanceId> ready_characters() const;
  std::vector<InstanceId> heroes_in_play() const;
  /// Sum of completed quests' points plus current progress.
  int total_quest_progress() const;

  bool operator==(const GameState&) const = default;
};

/// Shuffles both decks, sets threat to the heroes' summed threat cost and
/// draws the six-card opening hand.
GameState new_game(std::shared_ptr<const Scenario> scenario, const std::string& difficulty, Rng& rng);

/// All decisions available at a decision stage. Never empty: the stage's
/// pass action (empty play, empty commit, no travel, nobody defends, nobody
/// attacks) is always last. Commitments are listed by ascending total
/// willpower; at the other stages larger selections come first.
std::vector<Action> legal_actions(const GameState& state);

/// Maximum number of purchase subsets enumerated at Planning and attacker
/// partitions enumerated at DeclareAttackers before falling back to
/// single-card choices.
inline constexpr std::size_t kEnumerationCap = 64;

/// Rule check used by apply_action. Returns a description of the violated
/// rule, or nothing if the action is allowed.
std::optional<std::string> check_action(const GameState& state, const Action& action);

GameState apply_action(GameState state, const Action& action);
GameState advance_ruled_stage(GameState state, std::string* event = nullptr);
GameState resolve_random_stage(GameState state, Rng& rng, std::string* event = nullptr);
std::optional<Outcome> is_terminal(const GameState& state);
GameState snapshot(const GameState& state);

/// Re-randomizes what the player cannot see: the player deck order and the
/// pool of encounter deck plus face-down shadow cards. Visible zones and the
/// set of enemies holding shadow cards are untouched.
void determinize(GameState& state, Rng& rng);

/// Runs ruled and random stages until a decision stage or a terminal state.
void advance_to_decision(GameState& state, Rng& rng, std::vector<std::string>* trace = nullptr);

/// One plain-text trace line for a stage that ran in `round`, with the
/// threat and quest progress of the resulting state.
std::string trace_line(int round, StageId stage, std::string_view event, const GameState& after);

/// Checks conservation, zone bookkeeping and per-card invariants. Returns one
/// message per violation.
std::vector<std::string> check_invariants(const GameState& state);

}  // namespace questmc
