#include <functional>

#include "doctest.h"
#include "support.hpp"

using namespace questmc;
using nlohmann::json;

namespace {

json card_with(std::string_view key, json value) {
  json j = test::tiny_cards_json()["cards"][0];
  j[std::string(key)] = std::move(value);
  return j;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("reference data loads and carries the named cards") {
  const auto scenario = test::reference_scenario();
  const CardDb& db = *scenario->db;

  const CardDef& gandalf = db.at("gandalf");
  CHECK(gandalf.kind == CardKind::Ally);
  CHECK(gandalf.cost == 4);
  CHECK(gandalf.willpower == 4);
  CHECK(gandalf.attack == 4);
  CHECK(gandalf.defense == 4);
  CHECK(gandalf.hit_points == 4);

  CHECK(db.at("wandering-took").cost == 2);
  CHECK(db.at("wandering-took").willpower == 1);
  CHECK(db.at("gondorian-spearman").cost == 2);
  CHECK(db.at("gondorian-spearman").attack == 1);
  CHECK(db.at("veteran-axehand").cost == 2);
  CHECK(db.at("veteran-axehand").attack == 2);
}

TEST_CASE("reference deck sizes") {
  const auto scenario = test::reference_scenario();
  auto count = [](const DeckList& deck) {
    int n = 0;
    for (const auto& [id, copies] : deck) n += copies;
    return n;
  };
  CHECK(count(scenario->player_deck) >= 25);
  CHECK(count(scenario->player_deck) <= 40);
  REQUIRE(scenario->has_difficulty("medium"));
  REQUIRE(scenario->has_difficulty("hard"));
  for (const auto& [difficulty, deck] : scenario->encounter_decks) {
    CAPTURE(difficulty);
    CHECK(count(deck) >= 20);
    CHECK(count(deck) <= 35);
  }
  CHECK(scenario->heroes.size() == 3);
  CHECK(scenario->quest_line.size() == 3);
}

TEST_CASE("every card of the reference database survives a JSON round trip") {
  const CardDb& db = *test::reference_scenario()->db;
  const CardDb again = parse_card_db(card_db_to_json(db));
  REQUIRE(again.size() == db.size());
  for (const CardDef& card : db.cards()) {
    CAPTURE(card.id);
    CHECK(card_to_json(again.at(card.id)) == card_to_json(card));
  }
  const Scenario& s = *test::reference_scenario();
  const Scenario s2 = parse_scenario(scenario_to_json(s), s.db);
  CHECK(scenario_to_json(s2) == scenario_to_json(s));
}

TEST_CASE("card parsing rejects malformed entries with the id and field named") {
  CHECK(error_of([] { parse_card(card_with("willpower", "two")); })
            .find("'h-spirit', field 'willpower'") != std::string::npos);
  CHECK(error_of([] { parse_card(card_with("cost", 2)); }).find("field 'cost'") !=
        std::string::npos);
  CHECK(error_of([] { parse_card(card_with("sphere", "neutral")); }).find("neutral") !=
        std::string::npos);
  CHECK(error_of([] { parse_card(card_with("kind", "dragon")); }).find("unknown kind") !=
        std::string::npos);
  CHECK(error_of([] { parse_card(card_with("hit_points", 0)); }).find(">= 1") !=
        std::string::npos);

  json missing = test::tiny_cards_json()["cards"][0];
  missing.erase("defense");
  CHECK(error_of([&] { parse_card(missing); }).find("field 'defense': missing") !=
        std::string::npos);

  json wrong_effect = test::tiny_cards_json()["cards"][9];  // player event
  wrong_effect["effect"] = "raise_threat";
  CHECK(error_of([&] { parse_card(wrong_effect); }).find("not available") != std::string::npos);
}

TEST_CASE("card database rejects duplicate ids") {
  json doc = test::tiny_cards_json();
  doc["cards"].push_back(doc["cards"][0]);
  CHECK_THROWS_AS(parse_card_db(doc), DataError);
  CHECK_THROWS_AS(parse_card_db(json::array()), DataError);
}

TEST_CASE("scenario parsing validates references") {
  auto db = std::make_shared<const CardDb>(parse_card_db(test::tiny_cards_json()));

  json unresolved = test::tiny_scenario_json();
  unresolved["player_deck"]["palantir"] = 1;
  CHECK(error_of([&] { parse_scenario(unresolved, db); }).find("palantir") != std::string::npos);

  json wrong_kind = test::tiny_scenario_json();
  wrong_kind["encounter_decks"]["medium"]["gandalf"] = 1;
  CHECK(error_of([&] { parse_scenario(wrong_kind, db); }).find("not an encounter card") !=
        std::string::npos);

  json two_heroes = test::tiny_scenario_json();
  two_heroes["heroes"] = json::array({"h-spirit", "h-lore"});
  CHECK(error_of([&] { parse_scenario(two_heroes, db); }).find("exactly 3") != std::string::npos);

  json repeated = test::tiny_scenario_json();
  repeated["heroes"] = json::array({"h-spirit", "h-lore", "h-lore"});
  CHECK_THROWS_AS(parse_scenario(repeated, db), DataError);

  json extra = test::tiny_scenario_json();
  extra["weather"] = "rain";
  CHECK_THROWS_AS(parse_scenario(extra, db), DataError);

  json zero_copies = test::tiny_scenario_json();
  zero_copies["player_deck"]["gandalf"] = 0;
  CHECK_THROWS_AS(parse_scenario(zero_copies, db), DataError);
}

TEST_CASE("missing files raise DataError") {
  CHECK_THROWS_AS(load_card_db("/nonexistent/cards.json"), DataError);
}
