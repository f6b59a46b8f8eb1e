#include "trustmaze/allocation.hpp"

#include <algorithm>

#include "trustmaze/error.hpp"

namespace trustmaze {

const char* to_string(ContractStatus s) {
  switch (s) {
    case ContractStatus::Proposed: return "proposed";
    case ContractStatus::Accepted: return "accepted";
    case ContractStatus::Rejected: return "rejected";
    case ContractStatus::Completed: return "completed";
    case ContractStatus::Failed: return "failed";
  }
  return "?";
}

double availability(const AgentState& agent, const FunctionRequest& request, const Maze& maze,
                    bool performer_busy) {
  if (agent.status == AgentStatus::Trapped || agent.status == AgentStatus::Escaped) return 0.0;
  if (performer_busy) return 0.0;
  auto d = maze.bfs_distance(agent.pos, request.origin);
  if (!d) return 0.0;
  return 1.0 / (1.0 + *d);
}

Suitability suitability_of(const AgentState& agent, const FunctionRequest& request,
                           const Maze& maze, const CapabilityMatrix& capability,
                           bool performer_busy) {
  Suitability s;
  s.capability_norm = capability.norm(agent.role, request.function);
  s.availability = availability(agent, request, maze, performer_busy);
  s.product = s.capability_norm * s.availability;
  return s;
}

double mean_composite(std::span<const AgentState> agents, int target, PurposeFunction fn,
                      const TrustMatrix& trust, const CapabilityMatrix& capability,
                      const TrustConfig& config) {
  Role target_role = Role::Neutral;
  for (const AgentState& a : agents)
    if (a.id == target) target_role = a.role;
  double sum = 0.0;
  int n = 0;
  for (const AgentState& a : agents) {
    if (a.id == target) continue;
    sum += trust.record(a.id, target, target_role, fn, capability, config).composite;
    ++n;
  }
  if (n == 0)  // solo run: the record a fresh observer would hold
    return trust.record(-1, target, target_role, fn, capability, config).composite;
  return sum / n;
}

double mean_rung(std::span<const AgentState> agents, int target, PurposeFunction fn,
                 const TrustMatrix& trust, const CapabilityMatrix& capability,
                 const TrustConfig& config) {
  Role target_role = Role::Neutral;
  for (const AgentState& a : agents)
    if (a.id == target) target_role = a.role;
  double sum = 0.0;
  int n = 0;
  for (const AgentState& a : agents) {
    if (a.id == target) continue;
    sum += trust.record(a.id, target, target_role, fn, capability, config).rung;
    ++n;
  }
  if (n == 0) return trust.record(-1, target, target_role, fn, capability, config).rung;
  return sum / n;
}

bool any_hard_violation(std::span<const AgentState> agents, int target, const TrustMatrix& trust) {
  for (const AgentState& a : agents) {
    if (a.id == target) continue;
    if (trust.hard_violation(a.id, target)) return true;
  }
  return false;
}

std::vector<int> rank_candidates(const FunctionRequest& request, std::span<const AgentState> agents,
                                 const Maze& maze, const CapabilityMatrix& capability,
                                 const TrustMatrix& trust, const TrustConfig& trust_config,
                                 const AllocationConfig& allocation,
                                 const std::set<int>& busy_performers) {
  if (agents.empty()) throw SimError(ErrorCode::NoCapableCandidate, "no agents");

  struct Ranked {
    int id;
    double score;
  };
  std::vector<Ranked> ranked;
  for (const AgentState& a : agents) {
    if (any_hard_violation(agents, a.id, trust)) continue;
    if (mean_rung(agents, a.id, request.function, trust, capability, trust_config) <
        allocation.min_rung)
      continue;
    Suitability s =
        suitability_of(a, request, maze, capability, busy_performers.count(a.id) > 0);
    if (s.product <= 0.0) continue;
    double composite =
        mean_composite(agents, a.id, request.function, trust, capability, trust_config);
    ranked.push_back({a.id, s.product * composite});
  }
  if (ranked.empty())
    throw SimError(ErrorCode::NoCapableCandidate,
                   std::string("no eligible performer for ") + to_string(request.function));
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  std::vector<int> out;
  out.reserve(ranked.size());
  for (const Ranked& r : ranked) out.push_back(r.id);
  return out;
}

Contract propose_contract(const FunctionRequest& request, int performer,
                          std::span<const AgentState> agents, const CapabilityMatrix& capability,
                          const AllocationConfig& allocation, int contract_id, int64_t tick) {
  Contract c;
  c.id = contract_id;
  c.request = request;
  c.performer = performer;
  c.status = ContractStatus::Proposed;
  for (const AgentState& a : agents) {
    if (capability.score(a.role, request.function, Side::Supporter) > 0)
      c.supporters.push_back(a.id);
    if (allocation.affected_all_active && a.id != performer &&
        a.status != AgentStatus::Escaped)
      c.affected.push_back(a.id);
  }
  if (request.function == PurposeFunction::MoveThroughMaze) {
    if (allocation.lead_deadline) c.deadline = tick + *allocation.lead_deadline;
  } else {
    c.deadline = tick + allocation.default_deadline;
  }
  return c;
}

ContractStatus negotiate(Contract& contract, std::span<const AgentState> agents,
                         const TrustMatrix& trust, const CapabilityMatrix& capability,
                         const TrustConfig& trust_config, int accept_rung) {
  if (contract.status != ContractStatus::Proposed)
    throw SimError(ErrorCode::InvalidState,
                   std::string("cannot negotiate a ") + to_string(contract.status) + " contract");
  Role performer_role = Role::Neutral;
  for (const AgentState& a : agents)
    if (a.id == contract.performer) performer_role = a.role;

  contract.dissenters.clear();
  for (int observer : contract.affected) {
    TrustRecord r = trust.record(observer, contract.performer, performer_role,
                                 contract.request.function, capability, trust_config);
    if (r.rung < accept_rung) contract.dissenters.push_back(observer);
  }
  contract.status =
      contract.dissenters.empty() ? ContractStatus::Accepted : ContractStatus::Rejected;
  return contract.status;
}

std::vector<TrustUpdate> settle_contract(Contract& contract, bool success,
                                         std::span<const AgentState> agents, TrustMatrix& trust,
                                         const CapabilityMatrix& capability,
                                         const TrustConfig& trust_config) {
  if (contract.status != ContractStatus::Accepted)
    throw SimError(ErrorCode::InvalidState,
                   std::string("cannot settle a ") + to_string(contract.status) + " contract");
  contract.status = success ? ContractStatus::Completed : ContractStatus::Failed;

  Role performer_role = Role::Neutral;
  for (const AgentState& a : agents)
    if (a.id == contract.performer) performer_role = a.role;

  std::vector<TrustUpdate> updates;
  for (const AgentState& a : agents) {
    if (a.id == contract.performer) continue;
    trust.update_predictability(a.id, contract.performer, contract.request.function, success);
    TrustUpdate u;
    u.observer = a.id;
    u.target = contract.performer;
    u.function = contract.request.function;
    u.record = trust.record(a.id, contract.performer, performer_role, contract.request.function,
                            capability, trust_config);
    updates.push_back(u);
  }
  return updates;
}

}  // namespace trustmaze
