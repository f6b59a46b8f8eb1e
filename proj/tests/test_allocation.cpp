#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "trustmaze/allocation.hpp"

using namespace trustmaze;

namespace {

const CapabilityMatrix kCapability = CapabilityMatrix::defaults();

AgentState make_agent(int id, Role role, Position pos) {
  AgentState a;
  a.id = id;
  a.role = role;
  a.pos = pos;
  return a;
}

// four agents sharing the start cell of an open room
std::vector<AgentState> default_team(Position pos = {1, 1}) {
  return {make_agent(0, Role::Leader, pos), make_agent(1, Role::Collector, pos),
          make_agent(2, Role::GateUser, pos), make_agent(3, Role::Neutral, pos)};
}

Maze open_room() { return Maze::load("#######\n#S....#\n#.....#\n#....E#\n#######"); }

}  // namespace

TEST_CASE("availability is zero for trapped, escaped and busy agents") {
  Maze maze = open_room();
  FunctionRequest request{PurposeFunction::HelpTeamMates, {1, 1}, 0, 0};

  AgentState trapped = make_agent(2, Role::GateUser, {1, 1});
  trapped.status = AgentStatus::Trapped;
  CHECK(availability(trapped, request, maze, false) == 0.0);

  AgentState escaped = make_agent(0, Role::Leader, {1, 1});
  escaped.status = AgentStatus::Escaped;
  CHECK(availability(escaped, request, maze, false) == 0.0);

  AgentState busy = make_agent(1, Role::Collector, {1, 1});
  CHECK(availability(busy, request, maze, true) == 0.0);
}

TEST_CASE("availability decays with maze distance") {
  Maze maze = Maze::load("#######\n#S...E#\n#######");
  AgentState idle = make_agent(3, Role::Neutral, {1, 1});

  FunctionRequest at_origin{PurposeFunction::HelpTeamMates, {1, 1}, 0, 0};
  CHECK(availability(idle, at_origin, maze, false) == doctest::Approx(1.0));

  // corridor distance 4, counted by hand
  FunctionRequest far{PurposeFunction::HelpTeamMates, {5, 1}, 0, 0};
  CHECK(availability(idle, far, maze, false) == doctest::Approx(0.2));

  Maze split = Maze::load("#######\n#S#..E#\n#######");
  FunctionRequest unreachable{PurposeFunction::HelpTeamMates, {3, 1}, 0, 0};
  CHECK(availability(make_agent(3, Role::Neutral, {1, 1}), unreachable, split, false) == 0.0);
}

TEST_CASE("help request with equal trust ranks Neutral over Collector and excludes the rest") {
  Maze maze = open_room();
  auto agents = default_team();
  TrustMatrix trust;
  TrustConfig config;
  AllocationConfig allocation;

  FunctionRequest request{PurposeFunction::HelpTeamMates, {1, 1}, 0, 2};
  auto ranked =
      rank_candidates(request, agents, maze, kCapability, trust, config, allocation, {});
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0] == 3);  // Neutral, score 3
  CHECK(ranked[1] == 1);  // Collector, score 1
}

TEST_CASE("a distrusted top candidate falls to the next most suitable teammate") {
  Maze maze = open_room();
  auto agents = default_team();
  TrustMatrix trust;
  TrustConfig config;
  AllocationConfig allocation;  // min_rung 2

  // every observer holds the Neutral's help record low
  for (int observer : {0, 1, 2}) {
    trust.seed_predictability(observer, 3, PurposeFunction::HelpTeamMates, 0, 20);
    trust.seed_integrity(observer, 3, 0.1);
  }
  REQUIRE(mean_rung(agents, 3, PurposeFunction::HelpTeamMates, trust, kCapability, config) < 2.0);

  FunctionRequest request{PurposeFunction::HelpTeamMates, {1, 1}, 0, 2};
  auto ranked =
      rank_candidates(request, agents, maze, kCapability, trust, config, allocation, {});
  REQUIRE_FALSE(ranked.empty());
  CHECK(ranked[0] == 1);  // Collector steps in
  CHECK(std::find(ranked.begin(), ranked.end(), 3) == ranked.end());

  // exhaustive recomputation over all four agents
  int best = -1;
  double best_score = -1.0;
  for (const AgentState& a : agents) {
    if (any_hard_violation(agents, a.id, trust)) continue;
    if (mean_rung(agents, a.id, request.function, trust, kCapability, config) <
        allocation.min_rung)
      continue;
    Suitability s = suitability_of(a, request, maze, kCapability, false);
    if (s.product <= 0.0) continue;
    double score =
        s.product * mean_composite(agents, a.id, request.function, trust, kCapability, config);
    if (score > best_score) {
      best_score = score;
      best = a.id;
    }
  }
  CHECK(ranked[0] == best);
}

TEST_CASE("gather request with a hard-violated collector has no capable candidate") {
  Maze maze = open_room();
  auto agents = default_team();
  TrustMatrix trust;
  TrustConfig config;
  AllocationConfig allocation;

  Violation hard{"no_pickup_zone", 1, Hardness::Hard, ""};
  trust.update_integrity(0, 1, hard, config.soft_penalty);

  FunctionRequest request{PurposeFunction::GatherTokens, {2, 2}, 0, 0};
  try {
    rank_candidates(request, agents, maze, kCapability, trust, config, allocation, {});
    FAIL("expected NoCapableCandidate");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::NoCapableCandidate);
  }
}

TEST_CASE("ranking order is invariant under a common scaling of trust") {
  Maze maze = open_room();
  auto agents = default_team();
  TrustConfig config;
  config.weights = {0.0, 1.0, 0.0};  // composite == predictability, directly comparable
  AllocationConfig allocation;
  allocation.min_rung = 0;

  FunctionRequest request{PurposeFunction::HelpTeamMates, {1, 1}, 0, 0};

  TrustMatrix a;  // composites 0.8 (Neutral) and 0.4 (Collector)
  for (int observer : {0, 1, 2})
    a.seed_predictability(observer, 3, PurposeFunction::HelpTeamMates, 3, 3);
  for (int observer : {0, 2, 3})
    a.seed_predictability(observer, 1, PurposeFunction::HelpTeamMates, 1, 3);

  TrustMatrix b;  // both halved: 0.4 and 0.2
  for (int observer : {0, 1, 2})
    b.seed_predictability(observer, 3, PurposeFunction::HelpTeamMates, 1, 3);
  for (int observer : {0, 2, 3})
    b.seed_predictability(observer, 1, PurposeFunction::HelpTeamMates, 0, 3);

  auto ranked_a = rank_candidates(request, agents, maze, kCapability, a, config, allocation, {});
  auto ranked_b = rank_candidates(request, agents, maze, kCapability, b, config, allocation, {});
  CHECK(ranked_a == ranked_b);
}

TEST_CASE("proposals carry supporters from the supporter table") {
  Maze maze = open_room();
  auto agents = default_team();
  AllocationConfig allocation;

  FunctionRequest gather{PurposeFunction::GatherTokens, {2, 2}, 0, 0};
  Contract c1 = propose_contract(gather, 1, agents, kCapability, allocation, 1, 0);
  CHECK(c1.supporters.empty());  // nobody supports gathering
  CHECK(c1.status == ContractStatus::Proposed);
  CHECK(c1.affected == std::vector<int>{0, 2, 3});
  CHECK(std::find(c1.affected.begin(), c1.affected.end(), c1.performer) == c1.affected.end());

  FunctionRequest help{PurposeFunction::HelpTeamMates, {2, 2}, 0, 0};
  Contract c2 = propose_contract(help, 3, agents, kCapability, allocation, 2, 0);
  CHECK(c2.supporters == std::vector<int>{1, 3});  // Collector and Neutral

  FunctionRequest comm{PurposeFunction::Communicate, {2, 2}, 0, 0};
  Contract c3 = propose_contract(comm, 0, agents, kCapability, allocation, 3, 0);
  CHECK(c3.supporters.size() == 4);  // everyone scores 2 as communication supporter
}

TEST_CASE("a single-agent proposal has no affected parties and auto-accepts") {
  Maze maze = open_room();
  std::vector<AgentState> solo{make_agent(0, Role::Leader, {1, 1})};
  AllocationConfig allocation;
  TrustMatrix trust;
  TrustConfig config;

  FunctionRequest request{PurposeFunction::MoveThroughMaze, {1, 1}, 0, -1};
  Contract c = propose_contract(request, 0, solo, kCapability, allocation, 1, 0);
  CHECK(c.affected.empty());
  CHECK(negotiate(c, solo, trust, kCapability, config, 2) == ContractStatus::Accepted);
}

TEST_CASE("negotiation needs unanimity at the acceptance rung") {
  Maze maze = open_room();
  auto agents = default_team();
  AllocationConfig allocation;
  TrustMatrix trust;
  TrustConfig config;

  FunctionRequest help{PurposeFunction::HelpTeamMates, {1, 1}, 0, 0};

  // one affected observer holds the performer below the bar
  trust.seed_predictability(2, 3, PurposeFunction::HelpTeamMates, 0, 30);
  trust.seed_integrity(2, 3, 0.05);
  Contract c = propose_contract(help, 3, agents, kCapability, allocation, 1, 0);
  CHECK(negotiate(c, agents, trust, kCapability, config, 2) == ContractStatus::Rejected);
  CHECK(c.dissenters == std::vector<int>{2});

  // unanimous case: rungs (4,3,2) against bar 2
  TrustMatrix fair;
  fair.seed_predictability(0, 3, PurposeFunction::HelpTeamMates, 30, 30);  // rung 4
  fair.seed_predictability(1, 3, PurposeFunction::HelpTeamMates, 3, 10);   // composite ~0.67
  fair.seed_predictability(2, 3, PurposeFunction::HelpTeamMates, 0, 10);   // composite ~0.56
  fair.seed_integrity(2, 3, 0.6);
  Contract c2 = propose_contract(help, 3, agents, kCapability, allocation, 2, 0);
  TrustRecord r0 = fair.record(0, 3, Role::Neutral, PurposeFunction::HelpTeamMates, kCapability,
                               config);
  TrustRecord r1 = fair.record(1, 3, Role::Neutral, PurposeFunction::HelpTeamMates, kCapability,
                               config);
  TrustRecord r2 = fair.record(2, 3, Role::Neutral, PurposeFunction::HelpTeamMates, kCapability,
                               config);
  REQUIRE(r0.rung == 4);
  REQUIRE(r1.rung == 3);
  REQUIRE(r2.rung == 2);
  CHECK(negotiate(c2, agents, fair, kCapability, config, 2) == ContractStatus::Accepted);

  try {
    negotiate(c2, agents, fair, kCapability, config, 2);
    FAIL("expected InvalidState");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::InvalidState);
  }
}

TEST_CASE("settlement updates every observer's predictability") {
  auto agents = default_team();
  AllocationConfig allocation;
  TrustMatrix trust;
  TrustConfig config;

  FunctionRequest gather{PurposeFunction::GatherTokens, {2, 2}, 0, 0};
  Contract c = propose_contract(gather, 1, agents, kCapability, allocation, 1, 0);
  REQUIRE(negotiate(c, agents, trust, kCapability, config, 2) == ContractStatus::Accepted);

  auto updates = settle_contract(c, true, agents, trust, kCapability, config);
  CHECK(c.status == ContractStatus::Completed);
  REQUIRE(updates.size() == 3);
  for (const TrustUpdate& u : updates) {
    CHECK(u.target == 1);
    const auto& cell = trust.predictability(u.observer, 1, PurposeFunction::GatherTokens);
    CHECK(cell.trials == 1);
    CHECK(cell.successes == 1);
    CHECK(u.record.predictability == doctest::Approx(2.0 / 3.0));
  }

  try {
    settle_contract(c, true, agents, trust, kCapability, config);
    FAIL("expected InvalidState");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::InvalidState);
  }
}

TEST_CASE("failure strictly decreases the composite for fresh observers") {
  auto agents = default_team();
  AllocationConfig allocation;
  TrustMatrix trust;
  TrustConfig config;

  FunctionRequest gather{PurposeFunction::GatherTokens, {2, 2}, 0, 0};
  Contract c = propose_contract(gather, 1, agents, kCapability, allocation, 1, 0);
  REQUIRE(negotiate(c, agents, trust, kCapability, config, 2) == ContractStatus::Accepted);

  double before =
      mean_composite(agents, 1, PurposeFunction::GatherTokens, trust, kCapability, config);
  auto updates = settle_contract(c, false, agents, trust, kCapability, config);
  CHECK(c.status == ContractStatus::Failed);
  for (const TrustUpdate& u : updates) CHECK(u.record.composite < before);
  // hand value: (1 + 1/3 + 1) / 3
  CHECK(updates[0].record.composite == doctest::Approx((1.0 + 1.0 / 3.0 + 1.0) / 3.0));
}

TEST_CASE("completion with one soft violation moves the components both ways") {
  auto agents = default_team();
  AllocationConfig allocation;
  TrustMatrix trust;
  TrustConfig config;

  FunctionRequest gather{PurposeFunction::GatherTokens, {2, 2}, 0, 0};
  Contract c = propose_contract(gather, 1, agents, kCapability, allocation, 1, 0);
  REQUIRE(negotiate(c, agents, trust, kCapability, config, 2) == ContractStatus::Accepted);

  // violation observed during performance, then a successful settle
  Violation soft{"minimise_time", 1, Hardness::Soft, ""};
  for (int observer : {0, 2, 3}) trust.update_integrity(observer, 1, soft, config.soft_penalty);
  auto updates = settle_contract(c, true, agents, trust, kCapability, config);

  for (const TrustUpdate& u : updates) {
    CHECK(u.record.predictability == doctest::Approx(2.0 / 3.0));  // up from 0.5
    CHECK(u.record.integrity == doctest::Approx(0.8));             // down from 1.0
    CHECK(u.record.composite == doctest::Approx((1.0 + 2.0 / 3.0 + 0.8) / 3.0));
  }
}

TEST_CASE("contract lifecycle admits only the legal transitions") {
  auto agents = default_team();
  AllocationConfig allocation;
  TrustMatrix trust;
  TrustConfig config;

  FunctionRequest help{PurposeFunction::HelpTeamMates, {1, 1}, 0, 0};
  Contract c = propose_contract(help, 3, agents, kCapability, allocation, 1, 0);
  CHECK(c.status == ContractStatus::Proposed);

  try {
    settle_contract(c, true, agents, trust, kCapability, config);
    FAIL("expected InvalidState");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::InvalidState);
  }

  REQUIRE(negotiate(c, agents, trust, kCapability, config, 2) == ContractStatus::Accepted);
  settle_contract(c, true, agents, trust, kCapability, config);
  CHECK(c.status == ContractStatus::Completed);
}
