#include "questmc/game.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace questmc {

namespace {

struct StageInfo {
  StageId id;
  std::string_view name;
  StageKind kind;
  Phase phase;
};

constexpr std::array<StageInfo, kStageCount> kStages{{
    {StageId::GainResourcesAndDraw, "GainResourcesAndDraw", StageKind::Ruled, Phase::Resource},
    {StageId::Planning, "Planning", StageKind::Decision, Phase::Planning},
    {StageId::CommitCharacters, "CommitCharacters", StageKind::Decision, Phase::Quest},
    {StageId::Staging, "Staging", StageKind::Random, Phase::Quest},
    {StageId::QuestResolution, "QuestResolution", StageKind::Ruled, Phase::Quest},
    {StageId::Travel, "Travel", StageKind::Decision, Phase::Travel},
    {StageId::EngagementChecks, "EngagementChecks", StageKind::Ruled, Phase::Encounter},
    {StageId::DealShadowCards, "DealShadowCards", StageKind::Random, Phase::Combat},
    {StageId::DeclareDefenders, "DeclareDefenders", StageKind::Decision, Phase::Combat},
    {StageId::ResolveEnemyAttacks, "ResolveEnemyAttacks", StageKind::Ruled, Phase::Combat},
    {StageId::DeclareAttackers, "DeclareAttackers", StageKind::Decision, Phase::Combat},
    {StageId::ResolvePlayerAttacks, "ResolvePlayerAttacks", StageKind::Ruled, Phase::Combat},
    {StageId::Refresh, "Refresh", StageKind::Ruled, Phase::Refresh},
}};

const StageInfo& info(StageId stage) { return kStages[static_cast<std::size_t>(stage) - 1]; }

constexpr std::array<std::string_view, kZoneCount> kZoneNames{
    "player_deck",  "hand",           "play_area",         "staging_area",
    "encounter_deck", "engagement_area", "active_location", "player_discard",
    "encounter_discard", "completed_quests", "quest_deck",   "shadow_cards"};

void erase_id(std::vector<InstanceId>& v, InstanceId id) {
  auto it = std::find(v.begin(), v.end(), id);
  if (it != v.end()) v.erase(it);
}

bool leaves_play(Zone z) {
  return z == Zone::PlayerDiscard || z == Zone::EncounterDiscard || z == Zone::PlayerDeck ||
         z == Zone::EncounterDeck || z == Zone::CompletedQuests;
}

void move_card(GameState& s, InstanceId id, Zone to) {
  CardInstance& c = s.card(id);
  erase_id(s.zone(c.zone), id);
  s.zone(to).push_back(id);
  c.zone = to;
  if (leaves_play(to)) {
    c.damage = 0;
    c.exhausted = false;
    c.resource_pool = 0;
    c.committed = false;
    c.shadow_card.reset();
    c.attached_to.reset();
    c.progress = 0;
  }
}

void set_outcome(GameState& s, Outcome o) {
  if (!s.outcome) s.outcome = o;
}

void advance_stage(GameState& s) {
  if (s.outcome) return;
  if (s.stage == StageId::Refresh) ++s.round;
  s.stage = next_stage(s.stage);
}

void raise_threat(GameState& s, int amount) {
  s.threat_level += amount;
  if (s.threat_level >= s.threat_limit()) set_outcome(s, Outcome::LossThreat);
}

// Places progress on the active location first (when asked), then on the
// quest, rolling completed quest cards forward.
void add_progress(GameState& s, int amount, bool location_first) {
  if (amount <= 0) return;
  if (location_first && !s.zone(Zone::ActiveLocation).empty()) {
    const InstanceId loc = s.zone(Zone::ActiveLocation).front();
    CardInstance& c = s.card(loc);
    const int needed = c.def->quest_points - c.progress;
    const int placed = std::min(needed, amount);
    c.progress += placed;
    amount -= placed;
    if (c.progress >= c.def->quest_points) move_card(s, loc, Zone::EncounterDiscard);
  }
  s.quest_progress += amount;
  while (!s.outcome && s.quest_progress >= s.current_quest_points()) {
    s.quest_progress -= s.current_quest_points();
    move_card(s, s.zone(Zone::QuestDeck).front(), Zone::CompletedQuests);
    ++s.quest_index;
    if (s.zone(Zone::QuestDeck).empty()) set_outcome(s, Outcome::Win);
  }
}

void destroy_character(GameState& s, InstanceId id) {
  std::vector<InstanceId> items;
  for (InstanceId other : s.zone(Zone::PlayArea)) {
    if (s.card(other).attached_to == id) items.push_back(other);
  }
  for (InstanceId item : items) move_card(s, item, Zone::PlayerDiscard);
  const bool hero = s.card(id).def->kind == CardKind::Hero;
  move_card(s, id, Zone::PlayerDiscard);
  if (hero && s.heroes_in_play().empty()) set_outcome(s, Outcome::LossHeroesDead);
}

void damage_character(GameState& s, InstanceId id, int amount) {
  if (amount <= 0) return;
  CardInstance& c = s.card(id);
  c.damage += amount;
  if (c.damage >= s.stat(id, Stat::HitPoints)) destroy_character(s, id);
}

void destroy_enemy(GameState& s, InstanceId id) {
  if (auto shadow = s.card(id).shadow_card) move_card(s, *shadow, Zone::EncounterDiscard);
  move_card(s, id, Zone::EncounterDiscard);
}

std::optional<InstanceId> draw_encounter_card(GameState& s, Rng& rng) {
  auto& deck = s.zone(Zone::EncounterDeck);
  if (deck.empty()) {
    auto discard = s.zone(Zone::EncounterDiscard);
    std::sort(discard.begin(), discard.end());
    std::shuffle(discard.begin(), discard.end(), rng);
    for (InstanceId id : discard) move_card(s, id, Zone::EncounterDeck);
  }
  if (deck.empty()) return std::nullopt;
  return deck.back();
}

// Payment order: sphere cards from matching heroes, then neutral cards from
// any hero, lowest hero id first in both passes.
void pay_for(GameState& s, const std::vector<InstanceId>& cards) {
  const auto heroes = s.heroes_in_play();
  auto pay = [&](int cost, auto&& eligible) {
    for (InstanceId h : heroes) {
      if (cost == 0) break;
      CardInstance& hero = s.card(h);
      if (!eligible(hero)) continue;
      const int take = std::min(cost, hero.resource_pool);
      hero.resource_pool -= take;
      cost -= take;
    }
  };
  for (InstanceId id : cards) {
    const CardDef& def = *s.card(id).def;
    if (def.sphere == Sphere::Neutral) continue;
    pay(def.cost, [&](const CardInstance& hero) { return hero.def->sphere == def.sphere; });
  }
  for (InstanceId id : cards) {
    const CardDef& def = *s.card(id).def;
    if (def.sphere != Sphere::Neutral) continue;
    pay(def.cost, [](const CardInstance&) { return true; });
  }
}

InstanceId item_target(const GameState& s, const CardDef& item) {
  const auto heroes = s.heroes_in_play();
  for (InstanceId h : heroes) {
    if (s.card(h).def->sphere == item.sphere) return h;
  }
  return heroes.front();
}

void play_card(GameState& s, InstanceId id) {
  const CardDef& def = *s.card(id).def;
  switch (def.kind) {
    case CardKind::Ally:
      move_card(s, id, Zone::PlayArea);
      break;
    case CardKind::Item: {
      const InstanceId target = item_target(s, def);
      move_card(s, id, Zone::PlayArea);
      s.card(id).attached_to = target;
      break;
    }
    case CardKind::PlayerEvent:
      if (def.effect == EventEffect::LowerThreat) {
        s.threat_level = std::max(0, s.threat_level - def.effect_amount);
      } else if (def.effect == EventEffect::AddProgress) {
        add_progress(s, def.effect_amount, false);
      }
      move_card(s, id, Zone::PlayerDiscard);
      break;
    default:
      break;
  }
}

std::string id_list(const std::vector<InstanceId>& ids) {
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  return out + "]";
}

std::string describe_card(const GameState& s, InstanceId id) {
  return s.card(id).def->id + "#" + std::to_string(id);
}

void require_stage_kind(const GameState& s, StageKind kind, std::string_view op) {
  if (s.outcome) throw StageError(std::string(op) + ": game is already over");
  if (stage_kind(s.stage) != kind) {
    throw StageError(std::string(op) + ": stage " + std::string(to_string(s.stage)) + " is " +
                     std::string(to_string(stage_kind(s.stage))) + ", not " +
                     std::string(to_string(kind)));
  }
}

}  // namespace

StageKind stage_kind(StageId stage) { return info(stage).kind; }
Phase phase_of(StageId stage) { return info(stage).phase; }

StageId next_stage(StageId stage) {
  return stage == StageId::Refresh ? StageId::GainResourcesAndDraw
                                   : static_cast<StageId>(static_cast<int>(stage) + 1);
}

std::string_view to_string(StageId stage) { return info(stage).name; }

std::string_view to_string(StageKind kind) {
  switch (kind) {
    case StageKind::Ruled: return "ruled";
    case StageKind::Random: return "random";
    case StageKind::Decision: return "decision";
  }
  return "?";
}

std::optional<StageId> parse_stage(std::string_view name) {
  for (const StageInfo& s : kStages) {
    if (s.name == name) return s.id;
  }
  return std::nullopt;
}

std::string_view to_string(Zone zone) { return kZoneNames[static_cast<std::size_t>(zone)]; }

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Win: return "Win";
    case Outcome::LossThreat: return "LossThreat";
    case Outcome::LossHeroesDead: return "LossHeroesDead";
    case Outcome::LossDeckEmpty: return "LossDeckEmpty";
    case Outcome::LossRoundCap: return "LossRoundCap";
  }
  return "?";
}

StageId stage_of(const Action& action) {
  constexpr std::array<StageId, 5> kStageByIndex{StageId::Planning, StageId::CommitCharacters,
                                                 StageId::Travel, StageId::DeclareDefenders,
                                                 StageId::DeclareAttackers};
  return kStageByIndex[action.index()];
}

std::string to_string(const Action& action) {
  struct Visitor {
    std::string operator()(const PlayCards& a) const { return "play " + id_list(a.cards); }
    std::string operator()(const Commit& a) const { return "commit " + id_list(a.characters); }
    std::string operator()(const TravelTo& a) const {
      return a.location ? "travel " + std::to_string(*a.location) : std::string("travel none");
    }
    std::string operator()(const Defend& a) const {
      std::string out = "defend {";
      for (std::size_t i = 0; i < a.assignments.size(); ++i) {
        if (i) out += ',';
        const auto& d = a.assignments[i];
        out += std::to_string(d.enemy) + ":" + (d.defender ? std::to_string(*d.defender) : "-");
      }
      return out + "}";
    }
    std::string operator()(const Attack& a) const {
      std::string out = "attack {";
      for (std::size_t i = 0; i < a.assignments.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(a.assignments[i].enemy) + ":" + id_list(a.assignments[i].attackers);
      }
      return out + "}";
    }
  };
  return std::visit(Visitor{}, action);
}

int GameState::current_quest_points() const {
  const auto& quests = zone(Zone::QuestDeck);
  return quests.empty() ? 0 : card(quests.front()).def->quest_points;
}

int GameState::stat(InstanceId id, Stat which) const {
  const CardDef& def = *card(id).def;
  int value = 0;
  switch (which) {
    case Stat::Willpower: value = def.willpower; break;
    case Stat::Attack: value = def.attack; break;
    case Stat::Defense: value = def.defense; break;
    case Stat::HitPoints: value = def.hit_points; break;
  }
  if (def.kind != CardKind::Hero) return value;
  for (InstanceId other : zone(Zone::PlayArea)) {
    const CardInstance& c = card(other);
    if (c.attached_to == id && c.def->bonus == which) ++value;
  }
  return value;
}

int GameState::staging_threat() const {
  int total = 0;
  for (InstanceId id : zone(Zone::StagingArea)) total += card(id).def->threat;
  return total;
}

std::vector<InstanceId> GameState::ready_characters() const {
  std::vector<InstanceId> out;
  for (InstanceId id : zone(Zone::PlayArea)) {
    const CardInstance& c = card(id);
    if (c.def->is_character() && !c.exhausted) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<InstanceId> GameState::heroes_in_play() const {
  std::vector<InstanceId> out;
  for (InstanceId id : zone(Zone::PlayArea)) {
    if (card(id).def->kind == CardKind::Hero) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int GameState::total_quest_progress() const {
  int total = quest_progress;
  for (InstanceId id : zone(Zone::CompletedQuests)) total += card(id).def->quest_points;
  return total;
}

GameState new_game(std::shared_ptr<const Scenario> scenario, const std::string& difficulty,
                   Rng& rng) {
  if (!scenario->has_difficulty(difficulty))
    throw DataError("scenario '" + scenario->name + "' has no encounter deck for difficulty '" +
                    difficulty + "'");
  GameState s;
  s.scenario = scenario;
  s.difficulty = difficulty;

  auto add = [&](const std::string& card_id, Zone zone) {
    const auto id = static_cast<InstanceId>(s.cards.size());
    CardInstance c;
    c.id = id;
    c.def = &scenario->card(card_id);
    c.zone = zone;
    s.cards.push_back(c);
    s.zone(zone).push_back(id);
    return id;
  };

  for (const auto& hero : scenario->heroes) {
    add(hero, Zone::PlayArea);
    s.threat_level += scenario->card(hero).threat_cost;
  }
  for (const auto& quest : scenario->quest_line) add(quest, Zone::QuestDeck);
  for (const auto& [card_id, copies] : scenario->player_deck) {
    for (int i = 0; i < copies; ++i) add(card_id, Zone::PlayerDeck);
  }
  for (const auto& [card_id, copies] : scenario->encounter_decks.at(difficulty)) {
    for (int i = 0; i < copies; ++i) add(card_id, Zone::EncounterDeck);
  }
  std::shuffle(s.zone(Zone::PlayerDeck).begin(), s.zone(Zone::PlayerDeck).end(), rng);
  std::shuffle(s.zone(Zone::EncounterDeck).begin(), s.zone(Zone::EncounterDeck).end(), rng);

  for (int i = 0; i < 6 && !s.zone(Zone::PlayerDeck).empty(); ++i)
    move_card(s, s.zone(Zone::PlayerDeck).back(), Zone::Hand);
  return s;
}

GameState apply_action(GameState s, const Action& action) {
  require_stage_kind(s, StageKind::Decision, "apply_action");
  if (auto violation = check_action(s, action)) throw IllegalAction(*violation);

  struct Visitor {
    GameState& s;
    void operator()(const PlayCards& a) const {
      pay_for(s, a.cards);
      for (InstanceId id : a.cards) {
        if (s.outcome) break;
        play_card(s, id);
      }
    }
    void operator()(const Commit& a) const {
      for (InstanceId id : a.characters) {
        s.card(id).committed = true;
        s.card(id).exhausted = true;
      }
    }
    void operator()(const TravelTo& a) const {
      if (a.location) move_card(s, *a.location, Zone::ActiveLocation);
    }
    void operator()(const Defend& a) const {
      for (const auto& d : a.assignments) {
        if (d.defender) s.card(*d.defender).exhausted = true;
      }
      s.declared_defense = a;
    }
    void operator()(const Attack& a) const {
      for (const auto& assignment : a.assignments) {
        for (InstanceId id : assignment.attackers) s.card(id).exhausted = true;
      }
      s.declared_attack = a;
    }
  };
  std::visit(Visitor{s}, action);
  advance_stage(s);
  return s;
}

GameState advance_ruled_stage(GameState s, std::string* event) {
  require_stage_kind(s, StageKind::Ruled, "advance_ruled_stage");
  std::ostringstream log;
  switch (s.stage) {
    case StageId::GainResourcesAndDraw: {
      for (InstanceId h : s.heroes_in_play()) ++s.card(h).resource_pool;
      auto& deck = s.zone(Zone::PlayerDeck);
      if (deck.empty()) {
        set_outcome(s, Outcome::LossDeckEmpty);
        if (event) log << "player deck empty";
      } else {
        const InstanceId drawn = deck.back();
        move_card(s, drawn, Zone::Hand);
        if (event) log << "draw " << describe_card(s, drawn);
      }
      break;
    }
    case StageId::QuestResolution: {
      int willpower = 0;
      for (InstanceId id : s.zone(Zone::PlayArea)) {
        if (s.card(id).committed) willpower += s.stat(id, Stat::Willpower);
      }
      const int threat = s.staging_threat();
      if (event) log << "willpower " << willpower << " vs threat " << threat;
      if (willpower > threat) {
        add_progress(s, willpower - threat, true);
      } else if (willpower < threat) {
        raise_threat(s, threat - willpower);
      }
      break;
    }
    case StageId::EngagementChecks: {
      // Engagement never changes the threat level, so one pass reaches the fixpoint.
      std::vector<InstanceId> engaging;
      for (InstanceId id : s.zone(Zone::StagingArea)) {
        const CardInstance& c = s.card(id);
        if (c.def->kind == CardKind::Enemy && c.def->engagement_cost <= s.threat_level)
          engaging.push_back(id);
      }
      std::sort(engaging.begin(), engaging.end());
      for (InstanceId id : engaging) move_card(s, id, Zone::EngagementArea);
      if (event) log << "engaged " << id_list(engaging);
      break;
    }
    case StageId::ResolveEnemyAttacks: {
      auto enemies = s.zone(Zone::EngagementArea);
      std::sort(enemies.begin(), enemies.end());
      for (InstanceId enemy : enemies) {
        if (s.outcome) break;
        const CardInstance& e = s.card(enemy);
        int strength = e.def->attack;
        if (e.shadow_card) strength += s.card(*e.shadow_card).def->shadow_attack_bonus;
        std::optional<InstanceId> defender;
        if (s.declared_defense) {
          for (const auto& d : s.declared_defense->assignments) {
            if (d.enemy == enemy) defender = d.defender;
          }
        }
        if (defender && s.card(*defender).zone != Zone::PlayArea) defender.reset();
        if (defender) {
          const int dmg = std::max(0, strength - s.stat(*defender, Stat::Defense));
          if (event) log << enemy << "->" << *defender << ":" << dmg << ' ';
          damage_character(s, *defender, dmg);
        } else {
          const InstanceId target = s.heroes_in_play().front();
          if (event) log << enemy << "->hero " << target << ":" << strength << ' ';
          damage_character(s, target, strength);
        }
      }
      s.declared_defense.reset();
      break;
    }
    case StageId::ResolvePlayerAttacks: {
      if (s.declared_attack) {
        for (const auto& a : s.declared_attack->assignments) {
          if (s.card(a.enemy).zone != Zone::EngagementArea) continue;
          int strength = 0;
          for (InstanceId id : a.attackers) {
            if (s.card(id).zone == Zone::PlayArea) strength += s.stat(id, Stat::Attack);
          }
          const int dmg = std::max(0, strength - s.card(a.enemy).def->defense);
          CardInstance& e = s.card(a.enemy);
          e.damage += dmg;
          const bool destroyed = e.damage >= e.def->hit_points;
          if (event) log << a.enemy << ":" << dmg << (destroyed ? "(destroyed) " : " ");
          if (destroyed) destroy_enemy(s, a.enemy);
        }
      }
      s.declared_attack.reset();
      break;
    }
    case StageId::Refresh: {
      for (InstanceId id : s.zone(Zone::PlayArea)) {
        s.card(id).exhausted = false;
        s.card(id).committed = false;
      }
      for (InstanceId id : s.zone(Zone::EngagementArea)) s.card(id).shadow_card.reset();
      auto shadows = s.zone(Zone::ShadowCards);
      for (InstanceId id : shadows) move_card(s, id, Zone::EncounterDiscard);
      raise_threat(s, 1);
      if (event) log << "ready all, threat +1";
      break;
    }
    default:
      break;
  }
  if (event) *event = log.str();
  advance_stage(s);
  return s;
}

GameState resolve_random_stage(GameState s, Rng& rng, std::string* event) {
  require_stage_kind(s, StageKind::Random, "resolve_random_stage");
  std::ostringstream log;
  if (s.stage == StageId::Staging) {
    if (auto revealed = draw_encounter_card(s, rng)) {
      const CardDef& def = *s.card(*revealed).def;
      if (event) log << "reveal " << describe_card(s, *revealed);
      if (def.kind == CardKind::EncounterEvent) {
        move_card(s, *revealed, Zone::EncounterDiscard);
        if (def.effect == EventEffect::RaiseThreat) {
          raise_threat(s, def.effect_amount);
        } else if (def.effect == EventEffect::DamageCommitted) {
          std::vector<InstanceId> committed;
          for (InstanceId id : s.zone(Zone::PlayArea)) {
            if (s.card(id).committed) committed.push_back(id);
          }
          std::sort(committed.begin(), committed.end());
          for (InstanceId id : committed) {
            if (s.outcome) break;
            damage_character(s, id, def.effect_amount);
          }
        }
      } else {
        move_card(s, *revealed, Zone::StagingArea);
      }
    } else if (event) {
      log << "encounter deck exhausted";
    }
  } else {
    auto enemies = s.zone(Zone::EngagementArea);
    std::sort(enemies.begin(), enemies.end());
    if (event) log << "shadows";
    for (InstanceId enemy : enemies) {
      auto shadow = draw_encounter_card(s, rng);
      if (!shadow) break;
      move_card(s, *shadow, Zone::ShadowCards);
      s.card(enemy).shadow_card = *shadow;
      if (event) log << ' ' << enemy << ":" << describe_card(s, *shadow);
    }
  }
  if (event) *event = log.str();
  advance_stage(s);
  return s;
}

std::optional<Outcome> is_terminal(const GameState& state) { return state.outcome; }

GameState snapshot(const GameState& state) { return state; }

void determinize(GameState& s, Rng& rng) {
  auto& player_deck = s.zone(Zone::PlayerDeck);
  std::sort(player_deck.begin(), player_deck.end());
  std::shuffle(player_deck.begin(), player_deck.end(), rng);

  std::vector<InstanceId> holders;
  for (InstanceId id : s.zone(Zone::EngagementArea)) {
    if (s.card(id).shadow_card) holders.push_back(id);
  }
  std::sort(holders.begin(), holders.end());

  std::vector<InstanceId> pool = s.zone(Zone::EncounterDeck);
  const auto& shadows = s.zone(Zone::ShadowCards);
  pool.insert(pool.end(), shadows.begin(), shadows.end());
  std::sort(pool.begin(), pool.end());
  std::shuffle(pool.begin(), pool.end(), rng);

  auto& deck = s.zone(Zone::EncounterDeck);
  auto& shadow_zone = s.zone(Zone::ShadowCards);
  deck.clear();
  shadow_zone.clear();
  for (InstanceId holder : holders) {
    const InstanceId shadow = pool.back();
    pool.pop_back();
    shadow_zone.push_back(shadow);
    s.card(shadow).zone = Zone::ShadowCards;
    s.card(holder).shadow_card = shadow;
  }
  for (InstanceId id : pool) {
    deck.push_back(id);
    s.card(id).zone = Zone::EncounterDeck;
  }
}

void advance_to_decision(GameState& s, Rng& rng, std::vector<std::string>* trace) {
  std::string event;
  std::string* sink = trace ? &event : nullptr;
  while (!s.outcome) {
    const StageId stage = s.stage;
    const int round = s.round;
    const StageKind kind = stage_kind(stage);
    if (kind == StageKind::Decision) return;
    if (kind == StageKind::Ruled) {
      s = advance_ruled_stage(std::move(s), sink);
    } else {
      s = resolve_random_stage(std::move(s), rng, sink);
    }
    if (trace) trace->push_back(trace_line(round, stage, event, s));
  }
}

std::string trace_line(int round, StageId stage, std::string_view event, const GameState& after) {
  std::ostringstream os;
  os << "TRACE round=" << round << " stage=" << static_cast<int>(stage) << ':' << to_string(stage)
     << " threat=" << after.threat_level << " quest=" << after.quest_index
     << " progress=" << after.quest_progress << " | " << event;
  if (after.outcome) os << " | outcome=" << to_string(*after.outcome);
  return os.str();
}

std::vector<std::string> check_invariants(const GameState& s) {
  std::vector<std::string> problems;
  auto report = [&](const std::string& msg) { problems.push_back(msg); };

  std::vector<int> seen(s.cards.size(), 0);
  for (std::size_t z = 0; z < kZoneCount; ++z) {
    for (InstanceId id : s.zones[z]) {
      if (id < 0 || static_cast<std::size_t>(id) >= s.cards.size()) {
        report("zone " + std::string(to_string(static_cast<Zone>(z))) + " holds unknown id " +
               std::to_string(id));
        continue;
      }
      ++seen[static_cast<std::size_t>(id)];
      if (s.card(id).zone != static_cast<Zone>(z))
        report("card " + std::to_string(id) + " listed in " +
               std::string(to_string(static_cast<Zone>(z))) + " but tagged " +
               std::string(to_string(s.card(id).zone)));
    }
  }
  for (std::size_t i = 0; i < s.cards.size(); ++i) {
    const CardInstance& c = s.cards[i];
    if (seen[i] != 1)
      report("card " + std::to_string(i) + " appears in " + std::to_string(seen[i]) + " zones");
    if (c.id != static_cast<InstanceId>(i)) report("card " + std::to_string(i) + " has wrong id");
    const bool in_play = c.zone == Zone::PlayArea || c.zone == Zone::EngagementArea ||
                         c.zone == Zone::StagingArea;
    if (in_play && (c.def->is_character() || c.def->kind == CardKind::Enemy) &&
        c.damage >= s.stat(c.id, Stat::HitPoints))
      report("card " + std::to_string(i) + " survives with lethal damage");
    if (c.damage < 0) report("card " + std::to_string(i) + " has negative damage");
    if (c.resource_pool < 0 || (c.resource_pool > 0 && c.def->kind != CardKind::Hero))
      report("card " + std::to_string(i) + " has an invalid resource pool");
    if (c.committed && (c.zone != Zone::PlayArea || !c.def->is_character()))
      report("card " + std::to_string(i) + " committed outside play");
    if (c.attached_to) {
      const CardInstance& hero = s.card(*c.attached_to);
      if (c.zone != Zone::PlayArea || hero.zone != Zone::PlayArea ||
          hero.def->kind != CardKind::Hero)
        report("item " + std::to_string(i) + " attached to an invalid target");
    }
    if (c.shadow_card) {
      if (c.zone != Zone::EngagementArea || s.card(*c.shadow_card).zone != Zone::ShadowCards)
        report("enemy " + std::to_string(i) + " holds an invalid shadow card");
    }
  }
  if (s.zone(Zone::ActiveLocation).size() > 1) report("more than one active location");
  if (!s.outcome) {
    if (s.threat_level >= s.threat_limit()) report("threat at limit without an outcome");
    if (s.quest_progress >= s.current_quest_points()) report("quest progress not rolled over");
    if (s.quest_index != static_cast<int>(s.zone(Zone::CompletedQuests).size()))
      report("quest index out of step with completed quests");
  }
  return problems;
}

}  // namespace questmc
