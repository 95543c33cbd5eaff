#include "questmc/cards.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

namespace questmc {

using nlohmann::json;

namespace {

template <typename Enum, std::size_t N>
using NameTable = std::array<std::pair<Enum, std::string_view>, N>;

constexpr NameTable<CardKind, 8> kKindNames{{
    {CardKind::Hero, "hero"},
    {CardKind::Ally, "ally"},
    {CardKind::Enemy, "enemy"},
    {CardKind::Location, "location"},
    {CardKind::PlayerEvent, "event-player"},
    {CardKind::EncounterEvent, "event-encounter"},
    {CardKind::Item, "item"},
    {CardKind::Quest, "quest"},
}};

constexpr NameTable<Sphere, 6> kSphereNames{{
    {Sphere::Spirit, "spirit"},
    {Sphere::Leadership, "leadership"},
    {Sphere::Tactics, "tactics"},
    {Sphere::Lore, "lore"},
    {Sphere::Neutral, "neutral"},
    {Sphere::None, "none"},
}};

constexpr NameTable<Stat, 4> kStatNames{{
    {Stat::Willpower, "willpower"},
    {Stat::Attack, "attack"},
    {Stat::Defense, "defense"},
    {Stat::HitPoints, "hit_points"},
}};

constexpr NameTable<EventEffect, 4> kEffectNames{{
    {EventEffect::RaiseThreat, "raise_threat"},
    {EventEffect::DamageCommitted, "damage_committed"},
    {EventEffect::LowerThreat, "lower_threat"},
    {EventEffect::AddProgress, "add_progress"},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(const NameTable<Enum, N>& table, Enum value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
std::optional<Enum> value_of(const NameTable<Enum, N>& table, std::string_view name) {
  for (const auto& [e, n] : table) {
    if (n == name) return e;
  }
  return std::nullopt;
}

// Integer stat fields and the minimum value each accepts.
struct IntField {
  std::string_view key;
  int CardDef::*member;
  int minimum;
};

constexpr std::array<IntField, 11> kIntFields{{
    {"cost", &CardDef::cost, 0},
    {"willpower", &CardDef::willpower, 0},
    {"attack", &CardDef::attack, 0},
    {"defense", &CardDef::defense, 0},
    {"hit_points", &CardDef::hit_points, 1},
    {"threat", &CardDef::threat, 0},
    {"threat_cost", &CardDef::threat_cost, 1},
    {"engagement_cost", &CardDef::engagement_cost, 0},
    {"quest_points", &CardDef::quest_points, 1},
    {"shadow_attack_bonus", &CardDef::shadow_attack_bonus, 0},
    {"amount", &CardDef::effect_amount, 1},
}};

// Stat groups required by each kind, beyond id/name/kind.
std::vector<std::string_view> required_fields(CardKind kind) {
  switch (kind) {
    case CardKind::Hero:
      return {"sphere", "threat_cost", "willpower", "attack", "defense", "hit_points"};
    case CardKind::Ally:
      return {"sphere", "cost", "willpower", "attack", "defense", "hit_points"};
    case CardKind::Enemy:
      return {"engagement_cost", "threat", "attack", "defense", "hit_points",
              "shadow_attack_bonus"};
    case CardKind::Location:
      return {"threat", "quest_points", "shadow_attack_bonus"};
    case CardKind::EncounterEvent:
      return {"effect", "amount", "shadow_attack_bonus"};
    case CardKind::PlayerEvent:
      return {"sphere", "cost", "effect", "amount"};
    case CardKind::Item:
      return {"sphere", "cost", "bonus"};
    case CardKind::Quest:
      return {"quest_points"};
  }
  return {};
}

[[noreturn]] void fail(std::string_view card_id, std::string_view field, std::string_view what) {
  std::ostringstream os;
  os << "card '" << card_id << "', field '" << field << "': " << what;
  throw DataError(os.str());
}

const std::string& require_string(const json& j, std::string_view owner, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end()) fail(owner, key, "missing");
  if (!it->is_string()) fail(owner, key, "expected a string");
  return it->get_ref<const std::string&>();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_document(const std::filesystem::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw DataError("parse error in '" + path.string() + "': " + e.what());
  }
}

DeckList parse_deck_list(const json& j, std::string_view owner, std::string_view field,
                         const CardDb& db) {
  if (!j.is_object()) fail(owner, field, "expected an object of id -> copies");
  DeckList deck;
  for (const auto& [id, copies] : j.items()) {
    if (!copies.is_number_integer() || copies.get<int>() < 1)
      fail(owner, field, "copies of '" + id + "' must be a positive integer");
    if (db.find(id) == nullptr) fail(owner, field, "unresolved card id '" + id + "'");
    deck[id] = copies.get<int>();
  }
  return deck;
}

}  // namespace

std::string_view to_string(CardKind kind) { return name_of(kKindNames, kind); }
std::string_view to_string(Sphere sphere) { return name_of(kSphereNames, sphere); }
std::string_view to_string(Stat stat) { return name_of(kStatNames, stat); }
std::string_view to_string(EventEffect effect) { return name_of(kEffectNames, effect); }

CardDb::CardDb(std::vector<CardDef> cards) : cards_(std::move(cards)) {
  for (std::size_t i = 0; i < cards_.size(); ++i) {
    if (!index_.emplace(cards_[i].id, i).second) fail(cards_[i].id, "id", "duplicate id");
  }
}

const CardDef* CardDb::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &cards_[it->second];
}

const CardDef& CardDb::at(std::string_view id) const {
  if (const CardDef* def = find(id)) return *def;
  throw DataError("unknown card id '" + std::string(id) + "'");
}

bool Scenario::has_difficulty(std::string_view difficulty) const {
  return encounter_decks.find(std::string(difficulty)) != encounter_decks.end();
}

CardDef parse_card(const json& j) {
  if (!j.is_object()) throw DataError("card entry is not an object");
  CardDef card;
  card.id = require_string(j, "<unnamed>", "id");
  if (card.id.empty()) fail("<unnamed>", "id", "must not be empty");
  card.name = require_string(j, card.id, "name");

  const std::string& kind_name = require_string(j, card.id, "kind");
  auto kind = value_of(kKindNames, kind_name);
  if (!kind) fail(card.id, "kind", "unknown kind '" + kind_name + "'");
  card.kind = *kind;

  const auto required = required_fields(card.kind);
  auto is_required = [&](std::string_view key) {
    return std::find(required.begin(), required.end(), key) != required.end();
  };

  for (const auto& [key, value] : j.items()) {
    if (key == "id" || key == "name" || key == "kind") continue;
    if (key == "note") {
      if (!value.is_string()) fail(card.id, key, "expected a string");
      card.note = value.get<std::string>();
      continue;
    }
    if (!is_required(key)) fail(card.id, key, "not applicable to kind '" + kind_name + "'");
  }
  for (std::string_view key : required) {
    if (!j.contains(key)) fail(card.id, key, "missing (required for kind '" + kind_name + "')");
  }

  for (const IntField& field : kIntFields) {
    if (!is_required(field.key)) continue;
    const json& v = j.at(std::string(field.key));
    if (!v.is_number_integer()) fail(card.id, field.key, "expected an integer");
    const int value = v.get<int>();
    if (value < field.minimum)
      fail(card.id, field.key, "must be >= " + std::to_string(field.minimum));
    card.*field.member = value;
  }

  if (is_required("sphere")) {
    const std::string& s = require_string(j, card.id, "sphere");
    auto sphere = value_of(kSphereNames, s);
    if (!sphere || *sphere == Sphere::None) fail(card.id, "sphere", "unknown sphere '" + s + "'");
    if (card.kind == CardKind::Hero && *sphere == Sphere::Neutral)
      fail(card.id, "sphere", "heroes cannot be neutral");
    card.sphere = *sphere;
  }
  if (is_required("bonus")) {
    const std::string& s = require_string(j, card.id, "bonus");
    auto stat = value_of(kStatNames, s);
    if (!stat) fail(card.id, "bonus", "unknown stat '" + s + "'");
    card.bonus = *stat;
  }
  if (is_required("effect")) {
    const std::string& s = require_string(j, card.id, "effect");
    auto effect = value_of(kEffectNames, s);
    if (!effect) fail(card.id, "effect", "unknown effect '" + s + "'");
    const bool encounter_effect =
        *effect == EventEffect::RaiseThreat || *effect == EventEffect::DamageCommitted;
    if (encounter_effect != (card.kind == CardKind::EncounterEvent))
      fail(card.id, "effect", "effect '" + s + "' not available to kind '" + kind_name + "'");
    card.effect = *effect;
  }
  return card;
}

json card_to_json(const CardDef& card) {
  json j;
  j["id"] = card.id;
  j["name"] = card.name;
  j["kind"] = std::string(to_string(card.kind));
  for (std::string_view key : required_fields(card.kind)) {
    if (key == "sphere") {
      j["sphere"] = std::string(to_string(card.sphere));
    } else if (key == "bonus") {
      j["bonus"] = std::string(to_string(*card.bonus));
    } else if (key == "effect") {
      j["effect"] = std::string(to_string(*card.effect));
    } else {
      for (const IntField& field : kIntFields) {
        if (field.key == key) j[std::string(key)] = card.*field.member;
      }
    }
  }
  if (!card.note.empty()) j["note"] = card.note;
  return j;
}

CardDb parse_card_db(const json& doc) {
  if (!doc.is_object() || !doc.contains("cards") || !doc["cards"].is_array())
    throw DataError("card database must be an object with a 'cards' array");
  std::vector<CardDef> cards;
  cards.reserve(doc["cards"].size());
  for (const json& entry : doc["cards"]) cards.push_back(parse_card(entry));
  return CardDb(std::move(cards));
}

json card_db_to_json(const CardDb& db) {
  json cards = json::array();
  for (const CardDef& card : db.cards()) cards.push_back(card_to_json(card));
  return json{{"cards", std::move(cards)}};
}

Scenario parse_scenario(const json& doc, std::shared_ptr<const CardDb> db) {
  if (!doc.is_object()) throw DataError("scenario document must be an object");
  Scenario s;
  s.db = std::move(db);
  s.name = require_string(doc, "<scenario>", "name");
  const std::string& owner = s.name;

  static const std::set<std::string> kKeys{"name",        "quest_line",      "heroes",
                                           "player_deck", "encounter_decks", "threat_limit"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.count(key)) fail(owner, key, "unknown scenario field");
  }

  auto id_list = [&](std::string_view key, CardKind kind) {
    auto it = doc.find(key);
    if (it == doc.end()) fail(owner, key, "missing");
    if (!it->is_array()) fail(owner, key, "expected an array of card ids");
    std::vector<std::string> ids;
    for (const json& v : *it) {
      if (!v.is_string()) fail(owner, key, "expected card id strings");
      const auto id = v.get<std::string>();
      const CardDef* def = s.db->find(id);
      if (def == nullptr) fail(owner, key, "unresolved card id '" + id + "'");
      if (def->kind != kind)
        fail(owner, key, "card '" + id + "' is not of kind '" + std::string(to_string(kind)) + "'");
      ids.push_back(id);
    }
    if (ids.size() != 3)
      fail(owner, key, "must list exactly 3 cards, found " + std::to_string(ids.size()));
    return ids;
  };
  s.quest_line = id_list("quest_line", CardKind::Quest);
  s.heroes = id_list("heroes", CardKind::Hero);
  if (std::set<std::string>(s.heroes.begin(), s.heroes.end()).size() != 3)
    fail(owner, "heroes", "heroes must be distinct");

  if (!doc.contains("player_deck")) fail(owner, "player_deck", "missing");
  s.player_deck = parse_deck_list(doc["player_deck"], owner, "player_deck", *s.db);
  for (const auto& [id, copies] : s.player_deck) {
    if (!s.db->at(id).is_player_card())
      fail(owner, "player_deck", "card '" + id + "' is not a player deck card");
  }

  if (!doc.contains("encounter_decks")) fail(owner, "encounter_decks", "missing");
  const json& decks = doc["encounter_decks"];
  if (!decks.is_object() || decks.empty())
    fail(owner, "encounter_decks", "expected a non-empty object of difficulty -> deck");
  for (const auto& [difficulty, deck_json] : decks.items()) {
    const std::string field = "encounter_decks." + difficulty;
    DeckList deck = parse_deck_list(deck_json, owner, field, *s.db);
    if (deck.empty()) fail(owner, field, "encounter deck is empty");
    for (const auto& [id, copies] : deck) {
      if (!s.db->at(id).is_encounter_card())
        fail(owner, field, "card '" + id + "' is not an encounter card");
    }
    s.encounter_decks[difficulty] = std::move(deck);
  }

  if (!doc.contains("threat_limit")) fail(owner, "threat_limit", "missing");
  if (!doc["threat_limit"].is_number_integer() || doc["threat_limit"].get<int>() < 1)
    fail(owner, "threat_limit", "expected a positive integer");
  s.threat_limit = doc["threat_limit"].get<int>();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json decks = json::object();
  for (const auto& [difficulty, deck] : s.encounter_decks) decks[difficulty] = deck;
  return json{{"name", s.name},
              {"quest_line", s.quest_line},
              {"heroes", s.heroes},
              {"player_deck", s.player_deck},
              {"encounter_decks", std::move(decks)},
              {"threat_limit", s.threat_limit}};
}

CardDb load_card_db(const std::filesystem::path& path) { return parse_card_db(parse_document(path)); }

Scenario load_scenario(const std::filesystem::path& path, std::shared_ptr<const CardDb> db) {
  return parse_scenario(parse_document(path), std::move(db));
}

}  // namespace questmc
