#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace questmc {

enum class CardKind : std::uint8_t {
  Hero,
  Ally,
  Enemy,
  Location,
  PlayerEvent,
  EncounterEvent,
  Item,
  Quest,
};

enum class Sphere : std::uint8_t { Spirit, Leadership, Tactics, Lore, Neutral, None };

// Stat an item raises on the hero it is attached to.
enum class Stat : std::uint8_t { Willpower, Attack, Defense, HitPoints };

// Effects available to event cards. Encounter events use RaiseThreat and
// DamageCommitted, player events use LowerThreat and AddProgress.
enum class EventEffect : std::uint8_t { RaiseThreat, DamageCommitted, LowerThreat, AddProgress };

std::string_view to_string(CardKind kind);
std::string_view to_string(Sphere sphere);
std::string_view to_string(Stat stat);
std::string_view to_string(EventEffect effect);

/// Thrown for malformed or inconsistent card and scenario files. The message
/// always names the offending card or scenario id and the field.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable statistics of one card. Only the stats relevant to `kind` are
/// meaningful; the loader rejects files that omit any of them or that set
/// stats the kind does not use.
struct CardDef {
  std::string id;
  std::string name;
  CardKind kind = CardKind::Ally;
  Sphere sphere = Sphere::None;
  int cost = 0;
  int willpower = 0;
  int attack = 0;
  int defense = 0;
  int hit_points = 0;
  int threat = 0;
  int threat_cost = 0;
  int engagement_cost = 0;
  int quest_points = 0;
  int shadow_attack_bonus = 0;
  std::optional<Stat> bonus;           // items
  std::optional<EventEffect> effect;   // events
  int effect_amount = 0;               // events
  std::string note;                    // free-form designer note, optional

  bool is_character() const { return kind == CardKind::Hero || kind == CardKind::Ally; }
  bool is_player_card() const {
    return kind == CardKind::Ally || kind == CardKind::PlayerEvent || kind == CardKind::Item;
  }
  bool is_encounter_card() const {
    return kind == CardKind::Enemy || kind == CardKind::Location ||
           kind == CardKind::EncounterEvent;
  }
};

/// Validated, immutable set of card definitions keyed by id.
class CardDb {
 public:
  CardDb() = default;
  explicit CardDb(std::vector<CardDef> cards);

  const CardDef* find(std::string_view id) const;
  const CardDef& at(std::string_view id) const;
  const std::vector<CardDef>& cards() const { return cards_; }
  std::size_t size() const { return cards_.size(); }

 private:
  std::vector<CardDef> cards_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Multiset of card ids, stored as id -> copies.
using DeckList = std::map<std::string, int>;

struct Scenario {
  std::string name;
  std::vector<std::string> quest_line;  // exactly three quest card ids
  std::vector<std::string> heroes;      // exactly three hero ids
  DeckList player_deck;
  std::map<std::string, DeckList> encounter_decks;  // difficulty -> deck
  int threat_limit = 50;
  std::shared_ptr<const CardDb> db;

  const CardDef& card(std::string_view id) const { return db->at(id); }
  bool has_difficulty(std::string_view difficulty) const;
};

CardDef parse_card(const nlohmann::json& j);
nlohmann::json card_to_json(const CardDef& card);

/// Parses and validates a whole card database document.
CardDb parse_card_db(const nlohmann::json& doc);
nlohmann::json card_db_to_json(const CardDb& db);

Scenario parse_scenario(const nlohmann::json& doc, std::shared_ptr<const CardDb> db);
nlohmann::json scenario_to_json(const Scenario& scenario);

CardDb load_card_db(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path, std::shared_ptr<const CardDb> db);

}  // namespace questmc
