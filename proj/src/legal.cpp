// Legal-action generation and rule checks for the five decision stages.

#include <algorithm>
#include <array>
#include <set>

#include "questmc/game.hpp"

namespace questmc {

namespace {

constexpr std::size_t kSphereCount = 6;

struct Budget {
  std::array<int, kSphereCount> by_sphere{};
  int total = 0;
};

using Demand = std::array<int, kSphereCount>;

Budget budget_of(const GameState& s) {
  Budget b;
  for (InstanceId h : s.heroes_in_play()) {
    const CardInstance& hero = s.card(h);
    b.by_sphere[static_cast<std::size_t>(hero.def->sphere)] += hero.resource_pool;
    b.total += hero.resource_pool;
  }
  return b;
}

// Sphere costs must come from matching heroes; neutral costs from anyone.
// Heroes are never neutral, so this check is exact.
bool fits(const Demand& demand, const Budget& budget) {
  int total = 0;
  for (std::size_t i = 0; i < kSphereCount; ++i) {
    total += demand[i];
    if (static_cast<Sphere>(i) != Sphere::Neutral && demand[i] > budget.by_sphere[i]) return false;
  }
  return total <= budget.total;
}

void add_cost(Demand& demand, const CardDef& def, int copies = 1) {
  demand[static_cast<std::size_t>(def.sphere)] += def.cost * copies;
}

struct HandGroup {
  const CardDef* def;
  std::vector<InstanceId> ids;  // ascending
};

// Copies of the same card in hand are interchangeable, so subsets are
// enumerated over card definitions and realized with the lowest ids.
std::vector<HandGroup> group_hand(const GameState& s) {
  auto hand = s.zone(Zone::Hand);
  std::sort(hand.begin(), hand.end());
  std::vector<HandGroup> groups;
  for (InstanceId id : hand) {
    const CardDef* def = s.card(id).def;
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const HandGroup& g) { return g.def == def; });
    if (it == groups.end()) {
      groups.push_back({def, {id}});
    } else {
      it->ids.push_back(id);
    }
  }
  return groups;
}

std::vector<Action> planning_actions(const GameState& s) {
  const auto groups = group_hand(s);
  const Budget budget = budget_of(s);
  std::vector<std::vector<InstanceId>> subsets;
  bool overflow = false;
  std::vector<InstanceId> chosen;

  auto dfs = [&](auto&& self, std::size_t g, Demand demand) -> void {
    if (overflow) return;
    if (g == groups.size()) {
      if (subsets.size() >= kEnumerationCap) {
        overflow = true;
        return;
      }
      auto sorted = chosen;
      std::sort(sorted.begin(), sorted.end());
      subsets.push_back(std::move(sorted));
      return;
    }
    // Larger selections first: take as many copies as fit, then fewer.
    const HandGroup& group = groups[g];
    std::size_t copies = 0;
    Demand with = demand;
    for (std::size_t i = 0; i < group.ids.size(); ++i) {
      add_cost(with, *group.def);
      if (!fits(with, budget)) break;
      ++copies;
    }
    for (std::size_t take = copies; take > 0; --take) {
      Demand d = demand;
      add_cost(d, *group.def, static_cast<int>(take));
      chosen.insert(chosen.end(), group.ids.begin(), group.ids.begin() + static_cast<long>(take));
      self(self, g + 1, d);
      chosen.resize(chosen.size() - take);
    }
    self(self, g + 1, demand);
  };
  dfs(dfs, 0, Demand{});

  std::vector<Action> out;
  if (!overflow) {
    // The DFS reaches the empty subset last.
    for (auto& subset : subsets) out.push_back(PlayCards{std::move(subset)});
    return out;
  }
  for (const HandGroup& group : groups) {
    Demand demand{};
    add_cost(demand, *group.def);
    if (fits(demand, budget)) out.push_back(PlayCards{{group.ids.front()}});
  }
  out.push_back(PlayCards{});
  return out;
}

std::vector<Action> commit_actions(const GameState& s) {
  std::vector<InstanceId> candidates;
  std::vector<int> willpower;
  for (InstanceId id : s.ready_characters()) {
    const int w = s.stat(id, Stat::Willpower);
    if (w > 0) {
      candidates.push_back(id);
      willpower.push_back(w);
    }
  }
  const int threat = s.staging_threat();
  const std::uint32_t n = static_cast<std::uint32_t>(candidates.size());
  std::vector<std::pair<int, std::uint32_t>> qualifying;  // (willpower, mask)
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    int total = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) total += willpower[i];
    }
    if (total > threat) qualifying.emplace_back(total, mask);
  }
  // Smallest sufficient commitments first.
  std::stable_sort(qualifying.begin(), qualifying.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Action> out;
  for (const auto& [total, mask] : qualifying) {
    Commit c;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) c.characters.push_back(candidates[i]);
    }
    out.push_back(std::move(c));
  }
  out.push_back(Commit{});
  return out;
}

std::vector<Action> travel_actions(const GameState& s) {
  std::vector<Action> out;
  if (s.zone(Zone::ActiveLocation).empty()) {
    auto staging = s.zone(Zone::StagingArea);
    std::sort(staging.begin(), staging.end());
    for (InstanceId id : staging) {
      if (s.card(id).def->kind == CardKind::Location) out.push_back(TravelTo{id});
    }
  }
  out.push_back(TravelTo{});
  return out;
}

std::vector<InstanceId> engaged_enemies(const GameState& s) {
  auto enemies = s.zone(Zone::EngagementArea);
  std::sort(enemies.begin(), enemies.end());
  return enemies;
}

std::vector<Action> defend_actions(const GameState& s) {
  const auto enemies = engaged_enemies(s);
  const auto characters = s.ready_characters();
  std::vector<Action> out;
  Defend current;
  for (InstanceId e : enemies) current.assignments.push_back({e, std::nullopt});
  std::vector<bool> used(characters.size(), false);

  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == enemies.size()) {
      out.push_back(current);
      return;
    }
    for (std::size_t c = 0; c < characters.size(); ++c) {
      if (used[c]) continue;
      used[c] = true;
      current.assignments[i].defender = characters[c];
      self(self, i + 1);
      used[c] = false;
    }
    current.assignments[i].defender.reset();
    self(self, i + 1);
  };
  recurse(recurse, 0);
  return out;
}

Attack attack_from_targets(const std::vector<InstanceId>& enemies,
                           const std::vector<InstanceId>& characters,
                           const std::vector<std::size_t>& target) {
  // target[c] == 0 means no attack, otherwise enemy index + 1.
  Attack a;
  for (std::size_t e = 0; e < enemies.size(); ++e) {
    AttackAssignment assignment{enemies[e], {}};
    for (std::size_t c = 0; c < characters.size(); ++c) {
      if (target[c] == e + 1) assignment.attackers.push_back(characters[c]);
    }
    if (!assignment.attackers.empty()) a.assignments.push_back(std::move(assignment));
  }
  return a;
}

std::vector<Action> attack_actions(const GameState& s) {
  const auto enemies = engaged_enemies(s);
  const auto characters = s.ready_characters();
  std::vector<Action> out;
  if (enemies.empty() || characters.empty()) return {Attack{}};

  const std::size_t radix = enemies.size() + 1;
  std::size_t total = 1;
  bool too_many = false;
  for (std::size_t i = 0; i < characters.size() && !too_many; ++i) {
    total *= radix;
    too_many = total > kEnumerationCap;
  }

  if (!too_many) {
    std::vector<std::size_t> target(characters.size(), 0);
    for (std::size_t code = total - 1; code > 0; --code) {
      std::size_t rest = code;
      for (std::size_t c = 0; c < characters.size(); ++c) {
        target[c] = rest % radix;
        rest /= radix;
      }
      out.push_back(attack_from_targets(enemies, characters, target));
    }
    out.push_back(Attack{});
    return out;
  }
  // Fallback: everyone on one enemy, or a single character on one enemy.
  for (std::size_t e = 0; e < enemies.size(); ++e) {
    out.push_back(Attack{{AttackAssignment{enemies[e], characters}}});
  }
  if (characters.size() > 1) {
    for (std::size_t e = 0; e < enemies.size(); ++e) {
      for (InstanceId c : characters) out.push_back(Attack{{AttackAssignment{enemies[e], {c}}}});
    }
  }
  out.push_back(Attack{});
  return out;
}

bool strictly_ascending(const std::vector<InstanceId>& ids) {
  return std::adjacent_find(ids.begin(), ids.end(),
                            [](InstanceId a, InstanceId b) { return a >= b; }) == ids.end();
}

bool valid_id(const GameState& s, InstanceId id) {
  return id >= 0 && static_cast<std::size_t>(id) < s.cards.size();
}

std::string named(const GameState& s, InstanceId id) {
  if (!valid_id(s, id)) return "unknown card " + std::to_string(id);
  return "card " + std::to_string(id) + " (" + s.card(id).def->id + ")";
}

bool is_ready_character(const GameState& s, InstanceId id) {
  if (!valid_id(s, id)) return false;
  const CardInstance& c = s.card(id);
  return c.zone == Zone::PlayArea && c.def->is_character() && !c.exhausted;
}

struct Checker {
  const GameState& s;
  using Result = std::optional<std::string>;

  Result operator()(const PlayCards& a) const {
    if (!strictly_ascending(a.cards)) return "play: card ids must be distinct and ascending";
    Demand demand{};
    for (InstanceId id : a.cards) {
      if (!valid_id(s, id) || s.card(id).zone != Zone::Hand)
        return "play: " + named(s, id) + " is not in hand";
      add_cost(demand, *s.card(id).def);
    }
    if (!fits(demand, budget_of(s)))
      return "play: resources of matching-sphere heroes cannot pay for the selection";
    return std::nullopt;
  }

  Result operator()(const Commit& a) const {
    if (!strictly_ascending(a.characters))
      return "commit: character ids must be distinct and ascending";
    if (a.characters.empty()) return std::nullopt;
    int total = 0;
    for (InstanceId id : a.characters) {
      if (!is_ready_character(s, id)) return "commit: " + named(s, id) + " is not a ready character";
      const int w = s.stat(id, Stat::Willpower);
      if (w == 0) return "commit: " + named(s, id) + " has zero willpower";
      total += w;
    }
    if (total <= s.staging_threat())
      return "commit: committed willpower " + std::to_string(total) +
             " does not exceed staging threat " + std::to_string(s.staging_threat());
    return std::nullopt;
  }

  Result operator()(const TravelTo& a) const {
    if (!a.location) return std::nullopt;
    if (!s.zone(Zone::ActiveLocation).empty()) return "travel: there is already an active location";
    if (!valid_id(s, *a.location) || s.card(*a.location).zone != Zone::StagingArea ||
        s.card(*a.location).def->kind != CardKind::Location)
      return "travel: " + named(s, *a.location) + " is not a location in the staging area";
    return std::nullopt;
  }

  Result operator()(const Defend& a) const {
    const auto enemies = engaged_enemies(s);
    if (a.assignments.size() != enemies.size())
      return "defend: every engaged enemy needs exactly one entry";
    std::set<InstanceId> defenders;
    for (std::size_t i = 0; i < enemies.size(); ++i) {
      const auto& d = a.assignments[i];
      if (d.enemy != enemies[i]) return "defend: entries must list the engaged enemies in order";
      if (!d.defender) continue;
      if (!is_ready_character(s, *d.defender))
        return "defend: " + named(s, *d.defender) + " is not a ready character";
      if (!defenders.insert(*d.defender).second)
        return "defend: " + named(s, *d.defender) + " defends more than one enemy";
    }
    return std::nullopt;
  }

  Result operator()(const Attack& a) const {
    std::set<InstanceId> attackers;
    InstanceId previous = -1;
    for (const auto& assignment : a.assignments) {
      if (assignment.enemy <= previous) return "attack: enemies must be distinct and ascending";
      previous = assignment.enemy;
      if (!valid_id(s, assignment.enemy) ||
          s.card(assignment.enemy).zone != Zone::EngagementArea)
        return "attack: " + named(s, assignment.enemy) + " is not an engaged enemy";
      if (assignment.attackers.empty()) return "attack: empty attacker group";
      if (!strictly_ascending(assignment.attackers))
        return "attack: attacker ids must be distinct and ascending";
      for (InstanceId id : assignment.attackers) {
        if (!is_ready_character(s, id)) return "attack: " + named(s, id) + " is not a ready character";
        if (!attackers.insert(id).second)
          return "attack: " + named(s, id) + " attacks more than one enemy";
      }
    }
    return std::nullopt;
  }
};

}  // namespace

std::vector<Action> legal_actions(const GameState& s) {
  if (s.outcome) throw StageError("legal_actions: game is already over");
  switch (s.stage) {
    case StageId::Planning: return planning_actions(s);
    case StageId::CommitCharacters: return commit_actions(s);
    case StageId::Travel: return travel_actions(s);
    case StageId::DeclareDefenders: return defend_actions(s);
    case StageId::DeclareAttackers: return attack_actions(s);
    default:
      throw StageError("legal_actions: stage " + std::string(to_string(s.stage)) +
                       " is not a decision stage");
  }
}

std::optional<std::string> check_action(const GameState& s, const Action& action) {
  if (stage_of(action) != s.stage)
    return "action for stage " + std::string(to_string(stage_of(action))) +
           " is not applicable at stage " + std::string(to_string(s.stage));
  return std::visit(Checker{s}, action);
}

}  // namespace questmc
