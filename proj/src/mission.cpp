#include "trustmaze/mission.hpp"

#include <algorithm>

#include "trustmaze/error.hpp"

namespace trustmaze {

const char* to_string(HierarchyLevel level) {
  switch (level) {
    case HierarchyLevel::FunctionalPurpose: return "functional_purpose";
    case HierarchyLevel::ValuePriorityMeasure: return "value_priority_measure";
    case HierarchyLevel::PurposeFunction: return "purpose_function";
    case HierarchyLevel::ObjectFunction: return "object_function";
    case HierarchyLevel::PhysicalObject: return "physical_object";
  }
  return "?";
}

std::optional<HierarchyLevel> hierarchy_level_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(HierarchyLevel::PhysicalObject); ++i) {
    auto level = static_cast<HierarchyLevel>(i);
    if (s == to_string(level)) return level;
  }
  return std::nullopt;
}

void AbstractionHierarchy::add_node(HierarchyNode node) {
  if (by_id_.count(node.id))
    throw SimError(ErrorCode::InvalidState, "duplicate hierarchy node '" + node.id + "'");
  by_id_[node.id] = nodes_.size();
  nodes_.push_back(std::move(node));
}

void AbstractionHierarchy::add_edge(const std::string& upper, const std::string& lower) {
  edges_.push_back({upper, lower});
}

bool AbstractionHierarchy::has_node(const std::string& id) const { return by_id_.count(id) > 0; }

const HierarchyNode& AbstractionHierarchy::node(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw SimError(ErrorCode::UnknownFunction, "no hierarchy node '" + id + "'");
  return nodes_[it->second];
}

std::vector<std::string> AbstractionHierarchy::lower_of(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& e : edges_)
    if (e.upper == id) out.push_back(e.lower);
  return out;
}

std::vector<std::string> AbstractionHierarchy::upper_of(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& e : edges_)
    if (e.lower == id) out.push_back(e.upper);
  return out;
}

std::vector<std::string> AbstractionHierarchy::nodes_at(HierarchyLevel level) const {
  std::vector<std::string> out;
  for (const auto& n : nodes_)
    if (n.level == level) out.push_back(n.id);
  return out;
}

bool AbstractionHierarchy::reaches(const std::string& ancestor, const std::string& descendant) const {
  if (ancestor == descendant) return true;
  for (const auto& lower : lower_of(ancestor))
    if (reaches(lower, descendant)) return true;
  return false;
}

std::vector<std::string> AbstractionHierarchy::validate() const {
  std::vector<std::string> problems;
  for (const auto& e : edges_) {
    if (!has_node(e.upper) || !has_node(e.lower)) {
      problems.push_back("edge " + e.upper + "->" + e.lower + " references a missing node");
      continue;
    }
    int upper_level = static_cast<int>(node(e.upper).level);
    int lower_level = static_cast<int>(node(e.lower).level);
    if (lower_level != upper_level + 1)
      problems.push_back("edge " + e.upper + "->" + e.lower + " skips levels");
  }
  for (const auto& n : nodes_) {
    if (n.level == HierarchyLevel::FunctionalPurpose) continue;
    if (upper_of(n.id).empty())
      problems.push_back("node '" + n.id + "' has no upward means-ends link");
  }
  // Means-ends edges always point downward one level, so with valid levels the
  // graph cannot contain a cycle; level skips are already reported above.
  return problems;
}

const char* to_string(Direction d) { return d == Direction::Minimize ? "minimize" : "maximize"; }
const char* to_string(Hardness h) { return h == Hardness::Soft ? "soft" : "hard"; }

const char* to_string(Metric m) {
  switch (m) {
    case Metric::Ticks: return "ticks";
    case Metric::Tokens: return "tokens";
    case Metric::Gates: return "gates";
    case Metric::TeamworkEvents: return "teamwork_events";
    case Metric::None: return "none";
  }
  return "?";
}

std::optional<Direction> direction_from_string(std::string_view s) {
  if (s == "minimize") return Direction::Minimize;
  if (s == "maximize") return Direction::Maximize;
  return std::nullopt;
}

std::optional<Hardness> hardness_from_string(std::string_view s) {
  if (s == "soft") return Hardness::Soft;
  if (s == "hard") return Hardness::Hard;
  return std::nullopt;
}

std::optional<Metric> metric_from_string(std::string_view s) {
  for (Metric m : {Metric::Ticks, Metric::Tokens, Metric::Gates, Metric::TeamworkEvents,
                   Metric::None})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

std::vector<Role> AllocationMap::allocated_roles(PurposeFunction function) const {
  std::vector<Role> out;
  for (const auto& e : entries)
    if (e.function == function && e.allocated) out.push_back(e.role);
  return out;
}

bool AllocationMap::is_allocated(Role role, PurposeFunction function) const {
  for (const auto& e : entries)
    if (e.function == function && e.role == role) return e.allocated;
  return false;
}

PurposeFunction require_purpose_function(std::string_view id) {
  auto fn = purpose_function_from_string(id);
  if (!fn) throw SimError(ErrorCode::UnknownFunction, std::string(id));
  return *fn;
}

std::vector<Role> soca_allocated_roles(std::string_view function_id, const AllocationMap& map) {
  return map.allocated_roles(require_purpose_function(function_id));
}

const ValuePriorityMeasure* MissionModel::find_vpm(const std::string& name) const {
  for (const auto& v : vpms)
    if (v.name == name) return &v;
  return nullptr;
}

MissionModel build_default_mission() {
  MissionModel m;

  auto& h = m.hierarchy;
  h.add_node({"solve_the_maze", HierarchyLevel::FunctionalPurpose, "Solve the maze"});

  m.vpms = {
      {"minimise_time", "Minimise time", Direction::Minimize, Hardness::Soft, Metric::Ticks},
      {"maximise_tokens", "Maximise tokens", Direction::Maximize, Hardness::Soft, Metric::Tokens},
      {"minimise_gate", "Minimise gate", Direction::Minimize, Hardness::Soft, Metric::Gates},
      {"maximise_teamwork", "Maximise Teamwork", Direction::Maximize, Hardness::Soft,
       Metric::TeamworkEvents},
  };
  for (const auto& v : m.vpms) {
    h.add_node({v.name, HierarchyLevel::ValuePriorityMeasure, v.label});
    h.add_edge("solve_the_maze", v.name);
  }

  for (PurposeFunction fn : kAllPurposeFunctions)
    h.add_node({to_string(fn), HierarchyLevel::PurposeFunction, label_of(fn)});
  h.add_edge("minimise_time", "move_through_maze");
  h.add_edge("minimise_gate", "move_through_maze");
  h.add_edge("maximise_tokens", "gather_tokens");
  h.add_edge("maximise_teamwork", "help_team_mates");
  h.add_edge("maximise_teamwork", "communicate");

  for (ObjectFunction fn : kAllObjectFunctions)
    h.add_node({std::string("obj_") + to_string(fn), HierarchyLevel::ObjectFunction,
                to_string(fn)});
  auto link = [&h](const char* purpose, std::initializer_list<const char*> objects) {
    for (const char* obj : objects) h.add_edge(purpose, std::string("obj_") + obj);
  };
  link("move_through_maze", {"forward", "turn", "enter", "follow", "stop"});
  link("help_team_mates", {"change", "release", "forward", "turn"});
  link("gather_tokens", {"collect", "forward", "turn"});
  link("communicate", {"message"});

  const struct {
    const char* id;
    const char* label;
  } physical[] = {
      {"black_square", "Black square"}, {"blue_square", "Blue square"},
      {"red_square", "Red square"},     {"gate", "Gate"},
      {"exit", "Exit"},                 {"agent", "Agent"},
  };
  for (const auto& p : physical)
    h.add_node({p.id, HierarchyLevel::PhysicalObject, p.label});
  auto uses = [&h](const char* obj, std::initializer_list<const char*> things) {
    for (const char* t : things) h.add_edge(std::string("obj_") + obj, t);
  };
  uses("forward", {"black_square", "blue_square", "exit"});
  uses("enter", {"gate"});
  uses("turn", {"black_square"});
  uses("collect", {"red_square"});
  uses("stop", {"red_square", "agent"});
  uses("change", {"red_square"});
  uses("release", {"red_square", "agent"});
  uses("follow", {"agent"});
  uses("message", {"agent"});

  m.goals.team_goal = "all_escape";
  m.goals.individual_goals = {
      {Role::Leader, {"lead the team out", false}},
      {Role::Collector, {"collect tokens", true}},
      {Role::GateUser, {"enter gates", true}},
      {Role::Neutral, {"release team mates", false}},
  };

  // Baseline allocation: a role is allocated to a function iff its performer
  // capability is nonzero (gather -> Collector only; move -> everyone).
  const int performer[4][4] = {
      // Leader, Collector, GateUser, Neutral
      {3, 3, 3, 3},  // move through maze
      {0, 1, 0, 3},  // help team mates
      {0, 3, 0, 0},  // gather tokens
      {3, 2, 2, 3},  // communicate
  };
  for (int f = 0; f < 4; ++f)
    for (int r = 0; r < 4; ++r)
      m.soca.entries.push_back({static_cast<Role>(r), static_cast<PurposeFunction>(f),
                                performer[f][r] > 0});
  return m;
}

int MetricDelta::of(Metric m) const {
  switch (m) {
    case Metric::Ticks: return ticks;
    case Metric::Tokens: return tokens;
    case Metric::Gates: return gates;
    case Metric::TeamworkEvents: return teamwork;
    case Metric::None: return 0;
  }
  return 0;
}

namespace {

std::optional<ActionKind> event_action(const Event& event) {
  if (!event.payload.contains("action")) return std::nullopt;
  return action_from_string(event.payload["action"].get<std::string>());
}

}  // namespace

MetricDelta metric_delta(const Event& event) {
  MetricDelta d;
  switch (event.kind) {
    case EventKind::Moved:
      d.ticks = 1;
      if (auto a = event_action(event); a && *a == ActionKind::Follow &&
          event.payload.value("moved", false))
        d.teamwork = 1;
      break;
    case EventKind::Collected:
      d.ticks = 1;
      d.tokens = 1;
      break;
    case EventKind::Released:
      d.ticks = 1;
      d.teamwork = event.payload.contains("freed")
                       ? static_cast<int>(event.payload["freed"].size())
                       : 0;
      break;
    case EventKind::GateEntered:
      // the tick was already charged to the movement that arrived here
      d.gates = 1;
      break;
    case EventKind::ActionFailed:
      d.ticks = 1;
      break;
    default:
      break;
  }
  return d;
}

std::vector<Violation> check_violation(const Event& event,
                                       const std::vector<ValuePriorityMeasure>& vpms,
                                       const std::vector<ZonePolicy>& policies,
                                       const ViolationContext& context) {
  std::vector<Violation> out;
  if (event.actor < 0) return out;

  const auto action = event_action(event);
  const MetricDelta delta = metric_delta(event);

  // Conduct policies bind regardless of contracts: moral/legal limits.
  if (action) {
    for (const auto& policy : policies) {
      if (policy.forbid != *action) continue;
      if (policy.zone) {
        if (!event.payload.contains("pos")) continue;
        Position p{event.payload["pos"][0].get<int>(), event.payload["pos"][1].get<int>()};
        if (!policy.zone->contains(p)) continue;
      }
      Hardness severity = Hardness::Hard;
      for (const auto& v : vpms)
        if (v.name == policy.vpm) severity = v.hardness;
      out.push_back({policy.vpm, event.actor, severity, "policy '" + policy.name + "' breached"});
    }
  }

  // Contract rule: degrading a measure while bound to a function that does
  // not call for the action. Trapped actors have no alternatives and message
  // sends are common-ground work, so neither is charged. Teamwork-positive
  // events (releases, honored follow steps) are altruistic, never charged.
  if (!context.bound || context.actor_trapped) return out;
  if (action && (is_send(*action) || context.required.count(*action))) return out;
  if (delta.teamwork > 0) return out;

  for (const auto& v : vpms) {
    int change = delta.of(v.metric);
    bool degraded = v.direction == Direction::Minimize ? change > 0 : change < 0;
    if (degraded)
      out.push_back({v.name, event.actor, v.hardness,
                     std::string(action ? to_string(*action) : "?") +
                         " off-contract degrades " + v.name});
  }
  return out;
}

std::set<ActionKind> required_actions(const AbstractionHierarchy& hierarchy, PurposeFunction fn) {
  std::set<ActionKind> out;
  std::set<std::string> objects;
  for (const auto& lower : hierarchy.lower_of(to_string(fn))) objects.insert(lower);
  for (int i = 0; i <= static_cast<int>(ActionKind::SendStopped); ++i) {
    auto kind = static_cast<ActionKind>(i);
    std::string obj = std::string("obj_") + to_string(object_function_of(kind));
    if (objects.count(obj)) out.insert(kind);
  }
  return out;
}

}  // namespace trustmaze
