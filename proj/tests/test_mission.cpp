#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trustmaze/mission.hpp"

using namespace trustmaze;

namespace {

Event action_event(EventKind kind, int actor, const char* action) {
  Event e;
  e.kind = kind;
  e.actor = actor;
  e.payload["action"] = action;
  return e;
}

}  // namespace

TEST_CASE("default mission has the four purpose functions") {
  MissionModel m = build_default_mission();
  auto purpose = m.hierarchy.nodes_at(HierarchyLevel::PurposeFunction);
  CHECK(purpose.size() == 4);
}

TEST_CASE("default mission has the nine object functions") {
  MissionModel m = build_default_mission();
  auto objects = m.hierarchy.nodes_at(HierarchyLevel::ObjectFunction);
  CHECK(objects.size() == 9);
}

TEST_CASE("every object function is reachable from the functional purpose") {
  MissionModel m = build_default_mission();
  for (const auto& id : m.hierarchy.nodes_at(HierarchyLevel::ObjectFunction)) {
    CAPTURE(id);
    CHECK(m.hierarchy.reaches("solve_the_maze", id));
  }
}

TEST_CASE("default hierarchy validates: adjacency, acyclicity, upward support") {
  MissionModel m = build_default_mission();
  CHECK(m.hierarchy.validate().empty());
}

TEST_CASE("hierarchy validation flags level skips and orphans") {
  AbstractionHierarchy h;
  h.add_node({"top", HierarchyLevel::FunctionalPurpose, "top"});
  h.add_node({"obj", HierarchyLevel::ObjectFunction, "obj"});
  h.add_edge("top", "obj");  // skips two levels
  auto problems = h.validate();
  CHECK(problems.size() == 1);

  AbstractionHierarchy h2;
  h2.add_node({"top", HierarchyLevel::FunctionalPurpose, "top"});
  h2.add_node({"orphan", HierarchyLevel::ValuePriorityMeasure, "orphan"});
  CHECK(h2.validate().size() == 1);
}

TEST_CASE("default VPMs carry the mission measure set") {
  MissionModel m = build_default_mission();
  REQUIRE(m.vpms.size() == 4);
  CHECK(m.find_vpm("minimise_time") != nullptr);
  CHECK(m.find_vpm("maximise_tokens") != nullptr);
  CHECK(m.find_vpm("minimise_gate") != nullptr);
  CHECK(m.find_vpm("maximise_teamwork") != nullptr);
  CHECK(m.find_vpm("minimise_gate")->direction == Direction::Minimize);
  for (const auto& v : m.vpms) CHECK(v.hardness == Hardness::Soft);
}

TEST_CASE("soca_allocated_roles follows the capability baseline") {
  MissionModel m = build_default_mission();
  auto gather = soca_allocated_roles("gather_tokens", m.soca);
  REQUIRE(gather.size() == 1);
  CHECK(gather[0] == Role::Collector);

  auto move = soca_allocated_roles("move_through_maze", m.soca);
  CHECK(move.size() == 4);

  auto help = soca_allocated_roles("help_team_mates", m.soca);
  REQUIRE(help.size() == 2);
  CHECK(help[0] == Role::Collector);
  CHECK(help[1] == Role::Neutral);

  try {
    soca_allocated_roles("juggle", m.soca);
    FAIL("expected UnknownFunction");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::UnknownFunction);
  }
}

TEST_CASE("collect under a follow contract violates exactly minimise time") {
  MissionModel m = build_default_mission();
  ViolationContext ctx;
  ctx.bound = true;
  ctx.required = required_actions(m.hierarchy, PurposeFunction::MoveThroughMaze);

  Event collected = action_event(EventKind::Collected, 1, "collect");
  collected.payload["pos"] = {3, 3};
  auto violations = check_violation(collected, m.vpms, m.policies, ctx);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].vpm == "minimise_time");
  CHECK(violations[0].severity == Hardness::Soft);
  CHECK(violations[0].agent == 1);

  // purity: same inputs, same output
  auto again = check_violation(collected, m.vpms, m.policies, ctx);
  REQUIRE(again.size() == 1);
  CHECK(again[0].vpm == violations[0].vpm);
}

TEST_CASE("moving forward with no active contract violates nothing") {
  MissionModel m = build_default_mission();
  ViolationContext ctx;  // not bound
  Event moved = action_event(EventKind::Moved, 0, "forward");
  moved.payload["from"] = {1, 1};
  moved.payload["to"] = {2, 1};
  moved.payload["moved"] = true;
  CHECK(check_violation(moved, m.vpms, m.policies, ctx).empty());
}

TEST_CASE("hard zone policy produces a hard violation regardless of contracts") {
  MissionModel m = build_default_mission();
  m.vpms.push_back({"no_pickup_zone", "No pickup zone", Direction::Minimize, Hardness::Hard,
                    Metric::Tokens});
  m.policies.push_back({"no token pickup in zone Z", "no_pickup_zone", ActionKind::Collect,
                        Zone{2, 2, 5, 5}});

  ViolationContext ctx;  // unbound actor
  Event inside = action_event(EventKind::Collected, 1, "collect");
  inside.payload["pos"] = {3, 3};
  auto violations = check_violation(inside, m.vpms, m.policies, ctx);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].severity == Hardness::Hard);
  CHECK(violations[0].vpm == "no_pickup_zone");

  Event outside = action_event(EventKind::Collected, 1, "collect");
  outside.payload["pos"] = {0, 0};
  CHECK(check_violation(outside, m.vpms, m.policies, ctx).empty());
}

TEST_CASE("hard violations are a subset of all violations") {
  MissionModel m = build_default_mission();
  ViolationContext ctx;
  ctx.bound = true;
  ctx.required = required_actions(m.hierarchy, PurposeFunction::GatherTokens);

  // entering a gate while bound to gathering: degrades gates and ticks
  Event entered = action_event(EventKind::GateEntered, 2, "enter");
  entered.payload["pos"] = {4, 4};
  Event moved = action_event(EventKind::Moved, 2, "enter");
  moved.payload["moved"] = true;
  auto v1 = check_violation(entered, m.vpms, m.policies, ctx);
  auto v2 = check_violation(moved, m.vpms, m.policies, ctx);
  REQUIRE(v1.size() == 1);
  CHECK(v1[0].vpm == "minimise_gate");
  REQUIRE(v2.size() == 1);
  CHECK(v2[0].vpm == "minimise_time");
  for (const auto& v : v1) CHECK((v.severity == Hardness::Soft || v.severity == Hardness::Hard));
}

TEST_CASE("trapped actors and message sends are never charged") {
  MissionModel m = build_default_mission();
  ViolationContext ctx;
  ctx.bound = true;
  ctx.required = required_actions(m.hierarchy, PurposeFunction::MoveThroughMaze);

  ViolationContext trapped = ctx;
  trapped.actor_trapped = true;
  Event collected = action_event(EventKind::Collected, 1, "collect");
  collected.payload["pos"] = {3, 3};
  CHECK(check_violation(collected, m.vpms, m.policies, trapped).empty());

  Event sent = action_event(EventKind::MessageSent, 1, "send_help");
  CHECK(check_violation(sent, m.vpms, m.policies, ctx).empty());
}

TEST_CASE("releases are altruistic and never charged to the contract rule") {
  MissionModel m = build_default_mission();
  ViolationContext ctx;
  ctx.bound = true;
  ctx.required = required_actions(m.hierarchy, PurposeFunction::MoveThroughMaze);

  Event released = action_event(EventKind::Released, 1, "release");
  released.payload["pos"] = {3, 3};
  released.payload["freed"] = {0};
  released.payload["deactivated"] = true;
  CHECK(check_violation(released, m.vpms, m.policies, ctx).empty());
}

TEST_CASE("required actions follow the means-ends edges") {
  MissionModel m = build_default_mission();
  auto move = required_actions(m.hierarchy, PurposeFunction::MoveThroughMaze);
  CHECK(move.count(ActionKind::MoveForward));
  CHECK(move.count(ActionKind::Follow));
  CHECK(move.count(ActionKind::Enter));
  CHECK(move.count(ActionKind::Stop));
  CHECK_FALSE(move.count(ActionKind::Collect));
  CHECK_FALSE(move.count(ActionKind::Release));

  auto help = required_actions(m.hierarchy, PurposeFunction::HelpTeamMates);
  CHECK(help.count(ActionKind::Release));
  CHECK(help.count(ActionKind::ChangeColour));
  CHECK(help.count(ActionKind::MoveForward));
  CHECK_FALSE(help.count(ActionKind::Collect));

  auto communicate = required_actions(m.hierarchy, PurposeFunction::Communicate);
  CHECK(communicate.count(ActionKind::SendHelp));
  CHECK(communicate.count(ActionKind::SendFollowMe));
}

TEST_CASE("allocation map flags unassigned functions") {
  AllocationMap map;
  map.entries.push_back({Role::Leader, PurposeFunction::GatherTokens, false});
  CHECK(map.allocated_roles(PurposeFunction::GatherTokens).empty());
  CHECK_FALSE(map.is_allocated(Role::Leader, PurposeFunction::GatherTokens));
}
