#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "questmc/cards.hpp"
#include "questmc/game.hpp"
#include "questmc/rng.hpp"

namespace questmc::test {

inline std::string data_dir() { return QUESTMC_DATA_DIR; }
inline std::string reference_cards() { return data_dir() + "/cards.json"; }
inline std::string reference_scenario_path() { return data_dir() + "/scenarios/mirkwood.json"; }

inline std::shared_ptr<const Scenario> reference_scenario() {
  static const auto scenario = [] {
    auto db = std::make_shared<const CardDb>(load_card_db(reference_cards()));
    return std::make_shared<const Scenario>(load_scenario(reference_scenario_path(), db));
  }();
  return scenario;
}

// Small hand-built card pool with round numbers, used where a test needs
// exact control over the stats in play.
inline nlohmann::json tiny_cards_json() {
  return nlohmann::json::parse(R"({"cards": [
    {"id": "h-spirit", "name": "Spirit Hero", "kind": "hero", "sphere": "spirit",
     "threat_cost": 8, "willpower": 2, "attack": 1, "defense": 1, "hit_points": 4},
    {"id": "h-tactics", "name": "Tactics Hero", "kind": "hero", "sphere": "tactics",
     "threat_cost": 9, "willpower": 2, "attack": 3, "defense": 2, "hit_points": 5},
    {"id": "h-lore", "name": "Lore Hero", "kind": "hero", "sphere": "lore",
     "threat_cost": 7, "willpower": 1, "attack": 1, "defense": 1, "hit_points": 3},
    {"id": "gandalf", "name": "Gandalf", "kind": "ally", "sphere": "neutral",
     "cost": 4, "willpower": 4, "attack": 4, "defense": 4, "hit_points": 4},
    {"id": "wandering-took", "name": "Wandering Took", "kind": "ally", "sphere": "spirit",
     "cost": 2, "willpower": 1, "attack": 1, "defense": 1, "hit_points": 2},
    {"id": "gondorian-spearman", "name": "Gondorian Spearman", "kind": "ally", "sphere": "tactics",
     "cost": 2, "willpower": 0, "attack": 1, "defense": 1, "hit_points": 1},
    {"id": "veteran-axehand", "name": "Veteran Axehand", "kind": "ally", "sphere": "tactics",
     "cost": 2, "willpower": 0, "attack": 2, "defense": 1, "hit_points": 2},
    {"id": "blade", "name": "Blade", "kind": "item", "sphere": "tactics", "cost": 1,
     "bonus": "attack"},
    {"id": "stone", "name": "Stone", "kind": "item", "sphere": "spirit", "cost": 1,
     "bonus": "willpower"},
    {"id": "greeting", "name": "Greeting", "kind": "event-player", "sphere": "spirit",
     "cost": 1, "effect": "lower_threat", "amount": 3},
    {"id": "hasten", "name": "Hasten", "kind": "event-player", "sphere": "lore",
     "cost": 1, "effect": "add_progress", "amount": 2},
    {"id": "q1", "name": "Quest One", "kind": "quest", "quest_points": 4},
    {"id": "q2", "name": "Quest Two", "kind": "quest", "quest_points": 4},
    {"id": "q3", "name": "Quest Three", "kind": "quest", "quest_points": 4},
    {"id": "spider", "name": "Spider", "kind": "enemy", "engagement_cost": 20, "threat": 2,
     "attack": 2, "defense": 1, "hit_points": 2, "shadow_attack_bonus": 1},
    {"id": "orc", "name": "Orc", "kind": "enemy", "engagement_cost": 40, "threat": 3,
     "attack": 3, "defense": 0, "hit_points": 3, "shadow_attack_bonus": 2},
    {"id": "road", "name": "Road", "kind": "location", "threat": 1, "quest_points": 2,
     "shadow_attack_bonus": 0},
    {"id": "marsh", "name": "Marsh", "kind": "location", "threat": 3, "quest_points": 3,
     "shadow_attack_bonus": 1},
    {"id": "whisper", "name": "Whisper", "kind": "event-encounter", "effect": "raise_threat",
     "amount": 2, "shadow_attack_bonus": 1},
    {"id": "web", "name": "Web", "kind": "event-encounter", "effect": "damage_committed",
     "amount": 1, "shadow_attack_bonus": 0}
  ]})");
}

inline nlohmann::json tiny_scenario_json() {
  return nlohmann::json::parse(R"({
    "name": "tiny",
    "quest_line": ["q1", "q2", "q3"],
    "heroes": ["h-spirit", "h-tactics", "h-lore"],
    "player_deck": {"gandalf": 1, "wandering-took": 3, "gondorian-spearman": 3,
                    "veteran-axehand": 3, "blade": 2, "stone": 2, "greeting": 2, "hasten": 2},
    "encounter_decks": {
      "easy": {"spider": 2, "road": 2, "whisper": 1},
      "medium": {"spider": 4, "orc": 3, "road": 3, "marsh": 2, "whisper": 3, "web": 2}
    },
    "threat_limit": 50
  })");
}

inline std::shared_ptr<const Scenario> tiny_scenario() {
  static const auto scenario = [] {
    auto db = std::make_shared<const CardDb>(parse_card_db(tiny_cards_json()));
    return std::make_shared<const Scenario>(parse_scenario(tiny_scenario_json(), db));
  }();
  return scenario;
}

// Moves a card between zones keeping both zone lists and the card tag in step.
inline void place(GameState& s, InstanceId id, Zone to) {
  CardInstance& c = s.card(id);
  auto& from = s.zone(c.zone);
  from.erase(std::find(from.begin(), from.end(), id));
  s.zone(to).push_back(id);
  c.zone = to;
}

// Lowest-id copy of a card definition currently in `zone`.
inline InstanceId take(const GameState& s, std::string_view card_id, Zone zone) {
  auto ids = s.zone(zone);
  std::sort(ids.begin(), ids.end());
  for (InstanceId id : ids) {
    if (s.card(id).def->id == card_id) return id;
  }
  throw std::runtime_error("no '" + std::string(card_id) + "' in zone " +
                           std::string(to_string(zone)));
}

inline InstanceId put(GameState& s, std::string_view card_id, Zone from, Zone to) {
  const InstanceId id = take(s, card_id, from);
  place(s, id, to);
  return id;
}

// Fresh tiny game with the opening hand returned to the deck, so that tests
// start from a known, empty hand.
inline GameState blank_game(std::uint64_t seed = 7, const std::string& difficulty = "medium") {
  Rng rng(seed);
  GameState s = new_game(tiny_scenario(), difficulty, rng);
  auto hand = s.zone(Zone::Hand);
  for (InstanceId id : hand) place(s, id, Zone::PlayerDeck);
  return s;
}

inline std::vector<InstanceId> heroes(const GameState& s) { return s.heroes_in_play(); }

// Random-agent game that records every intermediate state.
template <typename Visit>
Outcome walk_random_game(std::shared_ptr<const Scenario> scenario, const std::string& difficulty,
                         std::uint64_t seed, int round_cap, Visit&& visit) {
  Rng rng(seed);
  GameState s = new_game(std::move(scenario), difficulty, rng);
  visit(s);
  while (!s.outcome && s.round <= round_cap) {
    const StageKind kind = stage_kind(s.stage);
    if (kind == StageKind::Ruled) {
      s = advance_ruled_stage(std::move(s));
    } else if (kind == StageKind::Random) {
      s = resolve_random_stage(std::move(s), rng);
    } else {
      const auto legals = legal_actions(s);
      const Action& a = legals[uniform_index(rng, legals.size())];
      s = apply_action(std::move(s), a);
    }
    visit(s);
  }
  return s.outcome.value_or(Outcome::LossRoundCap);
}

struct FuzzReport {
  int games = 0;
  int transitions = 0;
  std::vector<std::string> problems;
};

// Drives random games stage by stage and checks the engine's contracts after
// every transition.
inline FuzzReport fuzz_random_games(std::shared_ptr<const Scenario> scenario, const std::string& difficulty,
                int games, std::uint64_t master) {
  FuzzReport report;
  for (int g = 0; g < games; ++g) {
    Rng rng(seed_for_game(master, static_cast<std::uint64_t>(g)));
    GameState s = new_game(scenario, difficulty, rng);
    const std::size_t cards = s.cards.size();
    auto note = [&](const std::string& what) {
      if (report.problems.size() < 20)
        report.problems.push_back("game " + std::to_string(g) + " round " +
                                  std::to_string(s.round) + ": " + what);
    };
    while (!s.outcome && s.round <= 200) {
      const StageId before = s.stage;
      const int round = s.round;
      const int quests_done = static_cast<int>(s.zone(Zone::CompletedQuests).size());
      const int progress = s.total_quest_progress();
      switch (stage_kind(before)) {
        case StageKind::Ruled: s = advance_ruled_stage(std::move(s)); break;
        case StageKind::Random: s = resolve_random_stage(std::move(s), rng); break;
        case StageKind::Decision: {
          const auto legals = legal_actions(s);
          if (legals.empty()) note("no legal actions");
          for (const Action& a : legals) {
            if (stage_of(a) != before) note("action typed for another stage");
            if (auto why = check_action(s, a)) note("listed action rejected: " + *why);
          }
          const Action& a = legals[uniform_index(rng, legals.size())];
          if (const auto* c = std::get_if<Commit>(&a); c && !c->characters.empty()) {
            int w = 0;
            for (InstanceId id : c->characters) w += s.stat(id, Stat::Willpower);
            if (w <= s.staging_threat()) note("commitment does not exceed staging threat");
          }
          s = apply_action(std::move(s), a);
          break;
        }
      }
      ++report.transitions;
      for (const auto& p : check_invariants(s)) note(p);
      if (s.cards.size() != cards) note("card count changed");
      if (static_cast<int>(s.zone(Zone::CompletedQuests).size()) < quests_done)
        note("completed quests went backwards");
      if (s.total_quest_progress() < progress) note("quest progress went backwards");
      if (!s.outcome) {
        if (s.stage != next_stage(before)) note("stage skipped");
        if (s.round != round + (before == StageId::Refresh ? 1 : 0)) note("round out of step");
      }
    }
    if (!s.outcome) note("no outcome within 200 rounds");
    ++report.games;
  }
  return report;
}

}  // namespace questmc::test
