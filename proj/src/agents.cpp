#include "questmc/agents.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <tuple>

namespace questmc {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

int parse_budget(std::string_view token, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ConfigError("agent '" + std::string(whole) + "': budget '" + std::string(token) +
                      "' is not an integer");
  return value;
}

double parse_exploration(std::string_view token, std::string_view whole) {
  try {
    std::size_t used = 0;
    const double value = std::stod(std::string(token), &used);
    if (used != token.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw ConfigError("agent '" + std::string(whole) + "': exploration constant '" +
                      std::string(token) + "' is not a number");
  }
}

PlayoutPolicy parse_playout(std::string_view token, std::string_view whole) {
  if (token == "random") return PlayoutPolicy::Random;
  if (token == "expert") return PlayoutPolicy::Expert;
  throw ConfigError("agent '" + std::string(whole) + "': playout policy '" + std::string(token) +
                    "' must be random or expert");
}

std::string format_c(double c) {
  std::ostringstream os;
  os << c;
  return os.str();
}

const Action& require_member(const Action& action, std::span<const Action> legals) {
  auto it = std::find(legals.begin(), legals.end(), action);
  if (it == legals.end())
    throw std::logic_error("rule-based choice '" + to_string(action) + "' is not a legal action");
  return *it;
}

// Remaining resources per sphere, mirroring the payment rule.
struct Purse {
  std::array<int, 6> by_sphere{};
  int total = 0;

  explicit Purse(const GameState& s) {
    for (InstanceId h : s.heroes_in_play()) {
      const CardInstance& hero = s.card(h);
      by_sphere[static_cast<std::size_t>(hero.def->sphere)] += hero.resource_pool;
      total += hero.resource_pool;
    }
  }
  bool affords(const CardDef& def) const {
    if (def.cost > total) return false;
    return def.sphere == Sphere::Neutral || def.cost <= by_sphere[static_cast<std::size_t>(def.sphere)];
  }
  void spend(const CardDef& def) {
    if (def.sphere != Sphere::Neutral) by_sphere[static_cast<std::size_t>(def.sphere)] -= def.cost;
    total -= def.cost;
  }
};

// Greedy purchase order. Sphere cards are charged to their own sphere at
// once; neutral cards only draw on the shared total, which stays exact
// because sphere charges never exceed the per-sphere pools.
std::vector<InstanceId> expert_purchases(const GameState& s) {
  Purse purse(s);
  auto hand = s.zone(Zone::Hand);
  std::sort(hand.begin(), hand.end());
  std::vector<InstanceId> bought;
  auto by_id = [&](InstanceId a, InstanceId b) {
    return std::tie(s.card(a).def->id, a) < std::tie(s.card(b).def->id, b);
  };

  while (true) {
    std::vector<InstanceId> affordable;
    for (InstanceId id : hand) {
      if (std::find(bought.begin(), bought.end(), id) != bought.end()) continue;
      if (purse.affords(*s.card(id).def)) affordable.push_back(id);
    }
    if (affordable.empty()) break;

    std::optional<InstanceId> pick;
    for (InstanceId id : affordable) {
      if (s.card(id).def->id == kExpertFavourite) {
        pick = id;
        break;
      }
    }
    if (!pick) {
      std::vector<InstanceId> spirit;
      for (InstanceId id : affordable) {
        if (s.card(id).def->sphere == Sphere::Spirit) spirit.push_back(id);
      }
      if (!spirit.empty()) {
        pick = *std::min_element(spirit.begin(), spirit.end(), [&](InstanceId a, InstanceId b) {
          const int wa = s.card(a).def->willpower;
          const int wb = s.card(b).def->willpower;
          return wa != wb ? wa > wb : by_id(a, b);
        });
      }
    }
    if (!pick) {
      std::vector<InstanceId> cheap;
      for (InstanceId id : affordable) {
        if (s.card(id).def->cost <= kExpertCheapCost) cheap.push_back(id);
      }
      if (!cheap.empty()) {
        pick = *std::min_element(cheap.begin(), cheap.end(), [&](InstanceId a, InstanceId b) {
          const int ca = s.card(a).def->cost;
          const int cb = s.card(b).def->cost;
          return ca != cb ? ca < cb : by_id(a, b);
        });
      }
    }
    if (!pick) break;
    purse.spend(*s.card(*pick).def);
    bought.push_back(*pick);
  }
  return bought;
}

Action expert_planning(const GameState& s, std::span<const Action> legals) {
  const auto order = expert_purchases(s);
  // With more payable subsets than the enumeration cap only single purchases
  // are listed; fall back to the longest legal prefix of the greedy order.
  for (std::size_t len = order.size(); len > 0; --len) {
    std::vector<InstanceId> prefix(order.begin(), order.begin() + static_cast<long>(len));
    std::sort(prefix.begin(), prefix.end());
    Action candidate = PlayCards{std::move(prefix)};
    if (std::find(legals.begin(), legals.end(), candidate) != legals.end()) return candidate;
  }
  return PlayCards{};
}

Action expert_commit(const GameState& s) {
  std::vector<InstanceId> candidates;
  for (InstanceId id : s.ready_characters()) {
    const CardDef& def = *s.card(id).def;
    if (s.stat(id, Stat::Willpower) == 0) continue;
    if (def.id == kExpertFavourite || def.sphere == Sphere::Spirit) candidates.push_back(id);
  }
  std::sort(candidates.begin(), candidates.end(), [&](InstanceId a, InstanceId b) {
    const bool fa = s.card(a).def->id == kExpertFavourite;
    const bool fb = s.card(b).def->id == kExpertFavourite;
    if (fa != fb) return fa;
    const int wa = s.stat(a, Stat::Willpower);
    const int wb = s.stat(b, Stat::Willpower);
    if (wa != wb) return wa > wb;
    return std::tie(s.card(a).def->id, a) < std::tie(s.card(b).def->id, b);
  });
  const int threat = s.staging_threat();
  int total = 0;
  std::vector<InstanceId> chosen;
  for (InstanceId id : candidates) {
    if (total > threat) break;
    chosen.push_back(id);
    total += s.stat(id, Stat::Willpower);
  }
  if (total <= threat) return Commit{};
  std::sort(chosen.begin(), chosen.end());
  return Commit{std::move(chosen)};
}

Action expert_defend(const GameState& s) {
  std::vector<InstanceId> allies;
  std::vector<InstanceId> heroes;
  for (InstanceId id : s.ready_characters()) {
    (s.card(id).def->kind == CardKind::Hero ? heroes : allies).push_back(id);
  }
  std::sort(allies.begin(), allies.end(), [&](InstanceId a, InstanceId b) {
    const CardDef& da = *s.card(a).def;
    const CardDef& db = *s.card(b).def;
    return std::tie(da.cost, da.id, a) < std::tie(db.cost, db.id, b);
  });
  std::sort(heroes.begin(), heroes.end(), [&](InstanceId a, InstanceId b) {
    const int da = s.stat(a, Stat::Defense);
    const int db = s.stat(b, Stat::Defense);
    return da != db ? da > db : a < b;
  });
  std::vector<InstanceId> order = allies;
  order.insert(order.end(), heroes.begin(), heroes.end());

  auto enemies = s.zone(Zone::EngagementArea);
  std::sort(enemies.begin(), enemies.end());
  Defend d;
  std::size_t next = 0;
  for (InstanceId e : enemies) {
    std::optional<InstanceId> defender;
    if (next < order.size()) defender = order[next++];
    d.assignments.push_back({e, defender});
  }
  return d;
}

}  // namespace

std::string_view to_string(PlayoutPolicy policy) {
  return policy == PlayoutPolicy::Random ? "random" : "expert";
}

AgentKind parse_agent_kind(std::string_view text) {
  const auto parts = split(text, ':');
  const std::string_view name = parts.front();
  AgentKind kind;
  if (name == "random" && parts.size() == 1) {
    kind = RandomAgent{};
  } else if (name == "expert" && parts.size() == 1) {
    kind = ExpertAgent{};
  } else if (name == "flat" && parts.size() == 3) {
    kind = FlatMcAgent{parse_budget(parts[1], text), parse_playout(parts[2], text)};
  } else if (name == "mcts" && parts.size() == 4) {
    kind = MctsAgent{parse_budget(parts[1], text), parse_exploration(parts[2], text),
                     parse_playout(parts[3], text)};
  } else {
    throw ConfigError("unrecognized agent '" + std::string(text) +
                      "' (expected random, expert, flat:<budget>:<playout> or "
                      "mcts:<budget>:<C>:<playout>)");
  }
  validate(kind);
  return kind;
}

std::string to_string(const AgentKind& kind) {
  struct Visitor {
    std::string operator()(const RandomAgent&) const { return "random"; }
    std::string operator()(const ExpertAgent&) const { return "expert"; }
    std::string operator()(const FlatMcAgent& a) const {
      return "flat:" + std::to_string(a.budget) + ":" + std::string(to_string(a.playout));
    }
    std::string operator()(const MctsAgent& a) const {
      return "mcts:" + std::to_string(a.budget) + ":" + format_c(a.exploration_c) + ":" +
             std::string(to_string(a.playout));
    }
  };
  return std::visit(Visitor{}, kind);
}

int agent_number(const AgentKind& kind) { return static_cast<int>(kind.index()) + 1; }

bool is_search_agent(const AgentKind& kind) {
  return std::holds_alternative<FlatMcAgent>(kind) || std::holds_alternative<MctsAgent>(kind);
}

void validate(const AgentKind& kind) {
  auto check_budget = [&](int budget) {
    if (budget < 1)
      throw ConfigError("agent '" + to_string(kind) + "': playout budget must be at least 1");
  };
  if (const auto* flat = std::get_if<FlatMcAgent>(&kind)) check_budget(flat->budget);
  if (const auto* mcts = std::get_if<MctsAgent>(&kind)) {
    check_budget(mcts->budget);
    if (!(mcts->exploration_c >= 0.0 && mcts->exploration_c <= 1.0))
      throw ConfigError("agent '" + to_string(kind) +
                        "': exploration constant C must lie in [0, 1]");
  }
}

const AgentKind* StagePolicyMap::for_stage(StageId stage) const {
  switch (stage) {
    case StageId::Planning: return &planning;
    case StageId::CommitCharacters: return &commit;
    case StageId::DeclareDefenders: return &defense;
    case StageId::DeclareAttackers: return attack ? &*attack : nullptr;
    default: return nullptr;
  }
}

std::string StagePolicyMap::label() const {
  return std::to_string(agent_number(planning)) + "-" + std::to_string(agent_number(commit)) +
         "-" + std::to_string(agent_number(defense));
}

void validate(const StagePolicyMap& map) {
  validate(map.planning);
  validate(map.commit);
  validate(map.defense);
  if (map.attack) {
    validate(*map.attack);
    if (!std::holds_alternative<MctsAgent>(*map.attack))
      throw ConfigError("attack stage can only be overridden with an mcts agent, got '" +
                        to_string(*map.attack) + "'");
  }
}

StagePolicyMap parse_stage_policy_map(std::string_view text) {
  StagePolicyMap map;
  for (std::string_view entry : split(text, ',')) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("stage assignment '" + std::string(entry) + "' must be stage=agent");
    const std::string_view stage = entry.substr(0, eq);
    AgentKind kind = parse_agent_kind(entry.substr(eq + 1));
    if (stage == "planning") {
      map.planning = kind;
    } else if (stage == "commit") {
      map.commit = kind;
    } else if (stage == "defense") {
      map.defense = kind;
    } else if (stage == "attack") {
      map.attack = kind;
    } else {
      throw ConfigError("unknown stage '" + std::string(stage) +
                        "' (expected planning, commit, defense or attack)");
    }
  }
  validate(map);
  return map;
}

std::string to_string(const StagePolicyMap& map) {
  std::string out = "planning=" + to_string(map.planning) + ",commit=" + to_string(map.commit) +
                    ",defense=" + to_string(map.defense);
  if (map.attack) out += ",attack=" + to_string(*map.attack);
  return out;
}

Action random_decide(const GameState&, std::span<const Action> legals, Rng& rng) {
  return legals[uniform_index(rng, legals.size())];
}

Action expert_decide(const GameState& state, std::span<const Action> legals, Rng&) {
  if (state.stage == StageId::Planning) return expert_planning(state, legals);
  return require_member(expert_choice(state), legals);
}

Action expert_choice(const GameState& state) {
  switch (state.stage) {
    case StageId::Planning: {
      const auto legals = legal_actions(state);
      return expert_planning(state, legals);
    }
    case StageId::CommitCharacters: return expert_commit(state);
    case StageId::DeclareDefenders: return expert_defend(state);
    case StageId::Travel: return default_travel_choice(state);
    case StageId::DeclareAttackers: return default_attack_choice(state);
    default:
      throw StageError("expert_choice: " + std::string(to_string(state.stage)) +
                       " is not a decision stage");
  }
}

Action default_travel_choice(const GameState& s) {
  if (!s.zone(Zone::ActiveLocation).empty()) return TravelTo{};
  std::optional<InstanceId> best;
  for (InstanceId id : s.zone(Zone::StagingArea)) {
    const CardInstance& c = s.card(id);
    if (c.def->kind != CardKind::Location) continue;
    if (!best || c.def->threat > s.card(*best).def->threat ||
        (c.def->threat == s.card(*best).def->threat && id < *best))
      best = id;
  }
  return TravelTo{best};
}

Action default_attack_choice(const GameState& s) {
  const auto attackers = s.ready_characters();
  std::optional<InstanceId> target;
  auto remaining = [&](InstanceId id) { return s.card(id).def->hit_points - s.card(id).damage; };
  for (InstanceId id : s.zone(Zone::EngagementArea)) {
    if (!target || remaining(id) < remaining(*target) ||
        (remaining(id) == remaining(*target) && id < *target))
      target = id;
  }
  if (!target || attackers.empty()) return Attack{};
  return Attack{{AttackAssignment{*target, attackers}}};
}

Action default_travel(const GameState& state, std::span<const Action> legals) {
  return require_member(default_travel_choice(state), legals);
}

Action default_attack(const GameState& state, std::span<const Action> legals) {
  return require_member(default_attack_choice(state), legals);
}

Action playout_decide(PlayoutPolicy policy, const GameState& state, Rng& rng) {
  switch (state.stage) {
    case StageId::Travel: return default_travel_choice(state);
    case StageId::DeclareAttackers: return default_attack_choice(state);
    default: break;
  }
  if (policy == PlayoutPolicy::Expert) return expert_choice(state);
  const auto legals = legal_actions(state);
  return random_decide(state, legals, rng);
}

}  // namespace questmc
