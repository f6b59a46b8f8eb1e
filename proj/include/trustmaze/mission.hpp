#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trustmaze/core.hpp"
#include "trustmaze/events.hpp"
#include "trustmaze/world.hpp"

namespace trustmaze {

enum class HierarchyLevel : uint8_t {
  FunctionalPurpose,
  ValuePriorityMeasure,
  PurposeFunction,
  ObjectFunction,
  PhysicalObject,
};

const char* to_string(HierarchyLevel level);
std::optional<HierarchyLevel> hierarchy_level_from_string(std::string_view s);

struct HierarchyNode {
  std::string id;
  HierarchyLevel level;
  std::string label;
};

// Means-ends link from a node to one on the next level down.
struct HierarchyEdge {
  std::string upper;
  std::string lower;
};

class AbstractionHierarchy {
 public:
  void add_node(HierarchyNode node);
  void add_edge(const std::string& upper, const std::string& lower);

  bool has_node(const std::string& id) const;
  const HierarchyNode& node(const std::string& id) const;  // throws UnknownFunction
  const std::vector<HierarchyNode>& nodes() const { return nodes_; }
  const std::vector<HierarchyEdge>& edges() const { return edges_; }

  std::vector<std::string> lower_of(const std::string& id) const;
  std::vector<std::string> upper_of(const std::string& id) const;
  std::vector<std::string> nodes_at(HierarchyLevel level) const;

  // true when `descendant` is reachable from `ancestor` walking downward
  bool reaches(const std::string& ancestor, const std::string& descendant) const;

  // edges on adjacent levels only, no cycles, every non-top node supported
  std::vector<std::string> validate() const;

 private:
  std::vector<HierarchyNode> nodes_;
  std::vector<HierarchyEdge> edges_;
  std::map<std::string, size_t> by_id_;
};

enum class Direction : uint8_t { Minimize, Maximize };
enum class Hardness : uint8_t { Soft, Hard };
// Counters a measure scores: mission ticks, tokens collected, gates entered,
// teamwork events (releases plus honored follow steps). None marks measures
// enforced only through conduct policies, outside the counter rule.
enum class Metric : uint8_t { Ticks, Tokens, Gates, TeamworkEvents, None };

const char* to_string(Direction d);
const char* to_string(Hardness h);
const char* to_string(Metric m);
std::optional<Direction> direction_from_string(std::string_view s);
std::optional<Hardness> hardness_from_string(std::string_view s);
std::optional<Metric> metric_from_string(std::string_view s);

struct ValuePriorityMeasure {
  std::string name;   // config id, e.g. "minimise_time"
  std::string label;  // display label, e.g. "Minimise time"
  Direction direction = Direction::Minimize;
  Hardness hardness = Hardness::Soft;
  Metric metric = Metric::Ticks;
};

struct IndividualGoal {
  std::string label;
  bool selfish = false;
};

struct GoalSpec {
  std::string team_goal = "all_escape";  // success: every agent reaches an exit
  std::map<Role, IndividualGoal> individual_goals;
};

struct AllocationEntry {
  Role role;
  PurposeFunction function;
  bool allocated = false;
};

// SOCA baseline: which roles are statically allocated to each function.
struct AllocationMap {
  std::vector<AllocationEntry> entries;

  std::vector<Role> allocated_roles(PurposeFunction function) const;
  bool is_allocated(Role role, PurposeFunction function) const;
};

// Parses "gather_tokens" etc.; throws UnknownFunction on anything else.
PurposeFunction require_purpose_function(std::string_view id);
std::vector<Role> soca_allocated_roles(std::string_view function_id, const AllocationMap& map);

struct Zone {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive corners

  bool contains(Position p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
};

// Scenario-level conduct rule: performing `forbid` inside `zone` (or anywhere,
// when no zone is given) breaches the named measure unconditionally.
struct ZonePolicy {
  std::string name;
  std::string vpm;
  ActionKind forbid = ActionKind::Collect;
  std::optional<Zone> zone;
};

struct MissionModel {
  AbstractionHierarchy hierarchy;
  std::vector<ValuePriorityMeasure> vpms;
  GoalSpec goals;
  AllocationMap soca;
  std::vector<ZonePolicy> policies;

  const ValuePriorityMeasure* find_vpm(const std::string& name) const;
};

MissionModel build_default_mission();

struct Violation {
  std::string vpm;
  int agent = -1;
  Hardness severity = Hardness::Soft;
  std::string reason;
};

// What the violation check needs to know about the actor at event time.
struct ViolationContext {
  bool bound = false;                 // actor is performer or counterparty of an accepted contract
  std::set<ActionKind> required;      // actions the binding contracts' functions call for
  bool actor_trapped = false;
};

// Counter deltas an event implies, derived from its kind and payload.
struct MetricDelta {
  int ticks = 0;
  int tokens = 0;
  int gates = 0;
  int teamwork = 0;

  int of(Metric m) const;
};

MetricDelta metric_delta(const Event& event);

std::vector<Violation> check_violation(const Event& event,
                                       const std::vector<ValuePriorityMeasure>& vpms,
                                       const std::vector<ZonePolicy>& policies,
                                       const ViolationContext& context);

// Actions serving a purpose function, from the hierarchy's means-ends edges.
std::set<ActionKind> required_actions(const AbstractionHierarchy& hierarchy, PurposeFunction fn);

}  // namespace trustmaze
