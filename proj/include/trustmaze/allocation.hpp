#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "trustmaze/agents.hpp"
#include "trustmaze/core.hpp"
#include "trustmaze/trust.hpp"
#include "trustmaze/world.hpp"

namespace trustmaze {

struct FunctionRequest {
  PurposeFunction function = PurposeFunction::MoveThroughMaze;
  Position origin{};       // where the need arose
  int64_t requested_at = 0;
  int requester = -1;      // agent id, -1 for the system
};

struct Suitability {
  double capability_norm = 0.0;
  double availability = 0.0;
  double product = 0.0;
};

enum class ContractStatus : uint8_t { Proposed, Accepted, Rejected, Completed, Failed };

const char* to_string(ContractStatus s);

// An allocation of one purpose function to one performer, negotiated with the
// agents its performance affects.
struct Contract {
  int id = 0;
  FunctionRequest request;
  int performer = -1;
  std::vector<int> supporters;
  std::vector<int> affected;
  ContractStatus status = ContractStatus::Proposed;
  int64_t decided_at = -1;
  std::optional<int64_t> deadline;  // tick at which an unfinished contract fails
  std::vector<int> dissenters;      // filled on rejection
};

struct AllocationConfig {
  double min_rung = 2.0;     // candidates below this mean rung are filtered out
  int accept_rung = 2;       // each affected agent's bar during negotiation
  bool trigger_release = true;
  bool trigger_token_sighting = true;
  bool trigger_lead = true;
  bool affected_all_active = true;  // false: contracts bind only the performer
  int64_t default_deadline = 50;
  std::optional<int64_t> lead_deadline;  // nullopt: runs to mission end
};

// 0 when trapped/escaped or already performing; else 1/(1+d) with d the maze
// distance to where the function is needed.
double availability(const AgentState& agent, const FunctionRequest& request, const Maze& maze,
                    bool performer_busy);

Suitability suitability_of(const AgentState& agent, const FunctionRequest& request,
                           const Maze& maze, const CapabilityMatrix& capability,
                           bool performer_busy);

// Mean over every other agent of its composite trust in `target` for `fn`.
double mean_composite(std::span<const AgentState> agents, int target, PurposeFunction fn,
                      const TrustMatrix& trust, const CapabilityMatrix& capability,
                      const TrustConfig& config);
double mean_rung(std::span<const AgentState> agents, int target, PurposeFunction fn,
                 const TrustMatrix& trust, const CapabilityMatrix& capability,
                 const TrustConfig& config);
bool any_hard_violation(std::span<const AgentState> agents, int target, const TrustMatrix& trust);

// Candidates ordered by suitability x mean composite trust, after removing
// hard violators, sub-ladder candidates, zero capability and zero
// availability. Throws NoCapableCandidate when nobody survives.
std::vector<int> rank_candidates(const FunctionRequest& request, std::span<const AgentState> agents,
                                 const Maze& maze, const CapabilityMatrix& capability,
                                 const TrustMatrix& trust, const TrustConfig& trust_config,
                                 const AllocationConfig& allocation,
                                 const std::set<int>& busy_performers);

Contract propose_contract(const FunctionRequest& request, int performer,
                          std::span<const AgentState> agents, const CapabilityMatrix& capability,
                          const AllocationConfig& allocation, int contract_id, int64_t tick);

// Unanimous acceptance by the affected agents, each judging the performer on
// its own rung for this function. Throws InvalidState unless Proposed.
ContractStatus negotiate(Contract& contract, std::span<const AgentState> agents,
                         const TrustMatrix& trust, const CapabilityMatrix& capability,
                         const TrustConfig& trust_config, int accept_rung);

struct TrustUpdate {
  int observer = -1;
  int target = -1;
  PurposeFunction function = PurposeFunction::MoveThroughMaze;
  TrustRecord record;  // state after the update
};

// Marks the contract Completed/Failed and records the outcome in every
// observer's predictability estimate for the performer.
// Throws InvalidState unless Accepted.
std::vector<TrustUpdate> settle_contract(Contract& contract, bool success,
                                         std::span<const AgentState> agents, TrustMatrix& trust,
                                         const CapabilityMatrix& capability,
                                         const TrustConfig& trust_config);

}  // namespace trustmaze
