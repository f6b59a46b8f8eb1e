#include "trustmaze/engine.hpp"

#include <algorithm>
#include <cmath>

#include "trustmaze/error.hpp"
#include "trustmaze/rng.hpp"

namespace trustmaze {

namespace {

Json pos_json(Position p) { return Json::array({p.x, p.y}); }

Json ids_json(const std::vector<int>& ids) {
  Json a = Json::array();
  for (int id : ids) a.push_back(id);
  return a;
}

}  // namespace

std::vector<std::string> scenario_diagnostics(const Scenario& s) {
  std::vector<std::string> diags;
  auto diag = [&diags](const std::string& section, const std::string& key,
                       const std::string& reason) {
    diags.push_back(section + "." + key + ": " + reason);
  };

  if (s.schema_version != 1) diag("scenario", "schema_version", "must be 1");

  // maze
  Maze maze;
  bool maze_ok = false;
  if (s.maze.text.has_value() == s.maze.generate.has_value()) {
    diag("maze", "source", "exactly one of text/file or generate must be given");
  } else {
    try {
      if (s.maze.text) {
        maze = Maze::load(*s.maze.text);
      } else {
        const auto& g = *s.maze.generate;
        maze = Maze::generate(g.width, g.height, g.tokens, g.gates, g.seed.value_or(s.seed));
      }
      maze_ok = true;
    } catch (const SimError& e) {
      diag("maze", "source", e.what());
    }
  }

  // roster
  if (s.roster.empty()) diag("agents", "roster", "at least one agent is required");
  std::set<int> ids;
  for (const AgentSpec& a : s.roster) {
    std::string who = "roster[" + std::to_string(a.id) + "]";
    if (a.id < 0) diag("agents", who, "ids must be non-negative");
    if (!ids.insert(a.id).second) diag("agents", who, "duplicate agent id");
    if (a.start && maze_ok) {
      if (!maze.in_bounds(*a.start) || !maze.traversable_at(*a.start))
        diag("agents", who + ".start", "start cell is not traversable");
    }
    if (!a.goal_weights.empty()) {
      double sum = 0.0;
      for (const auto& [name, w] : a.goal_weights) {
        if (!s.mission.find_vpm(name))
          diag("agents", who + ".goal_weights", "unknown measure '" + name + "'");
        if (w < 0.0 || w > 1.0)
          diag("agents", who + ".goal_weights", "weight for '" + name + "' outside [0,1]");
        sum += w;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        diag("agents", who + ".goal_weights",
             "weights sum to " + std::to_string(sum) + ", expected 1");
    }
    if (!s.cpts.count(a.role))
      diag("agents", "cpts", std::string("no CPT declared for role ") + to_string(a.role));
  }
  for (const auto& [role, cpt] : s.cpts)
    for (const std::string& p : cpt.validate())
      diag("agents", std::string("cpts.") + to_string(role), p);

  // mission
  for (const std::string& p : s.mission.hierarchy.validate()) diag("mission", "hierarchy", p);
  {
    std::set<std::string> names;
    for (const auto& v : s.mission.vpms)
      if (!names.insert(v.name).second) diag("mission", "vpms", "duplicate measure '" + v.name + "'");
    for (const auto& p : s.mission.policies)
      if (!s.mission.find_vpm(p.vpm))
        diag("mission", "policies", "policy '" + p.name + "' names unknown measure '" + p.vpm + "'");
    if (s.mission.goals.team_goal != "all_escape" && s.mission.goals.team_goal != "none")
      diag("mission", "team_goal", "must be 'all_escape' or 'none'");
  }

  // trust
  try {
    validate_weights(s.trust.weights);
  } catch (const SimError& e) {
    diag("trust", "weights", e.what());
  }
  for (const std::string& p : s.trust.ladder.validate()) diag("trust", "ladder", p);
  if (s.trust.soft_penalty < 0.0 || s.trust.soft_penalty > 1.0)
    diag("trust", "soft_penalty", "must be in [0,1]");
  if (s.trust.recovery <= 0.0) diag("trust", "recovery", "must be positive");
  for (const TrustSeed& seed : s.trust_seeds) {
    if (!ids.count(seed.target)) diag("trust", "initial", "unknown target agent id");
    if (seed.observer && !ids.count(*seed.observer))
      diag("trust", "initial", "unknown observer agent id");
    if (seed.successes.has_value() != seed.trials.has_value())
      diag("trust", "initial", "successes and trials must be given together");
    if (seed.successes && (*seed.successes < 0 || *seed.trials < 0 || *seed.successes > *seed.trials))
      diag("trust", "initial", "need 0 <= successes <= trials");
    if (seed.integrity && (*seed.integrity < 0.0 || *seed.integrity > 1.0))
      diag("trust", "initial", "integrity must be in [0,1]");
  }

  // allocation
  if (s.allocation.min_rung < 0 || s.allocation.min_rung > s.trust.ladder.max_rung())
    diag("allocation", "min_rung", "outside the ladder range");
  if (s.allocation.accept_rung < 0 || s.allocation.accept_rung > s.trust.ladder.max_rung())
    diag("allocation", "accept_rung", "outside the ladder range");
  if (s.allocation.default_deadline < 1) diag("allocation", "deadlines", "must be >= 1 tick");
  if (s.allocation.lead_deadline && *s.allocation.lead_deadline < 1)
    diag("allocation", "deadlines", "must be >= 1 tick");

  // engine
  if (s.max_ticks && *s.max_ticks < 0) diag("engine", "max_ticks", "must be >= 0");
  if (s.perception.visibility_radius < 0) diag("engine", "visibility_radius", "must be >= 0");
  if (s.perception.time_bucket_width < 1) diag("engine", "time_bucket", "must be >= 1");
  if (s.plot_stride < 1) diag("engine", "plot_stride", "must be >= 1");

  // script
  for (const auto& sc : s.script) {
    if (sc.outcomes.empty()) diag("script", "contract_outcomes", "outcomes must not be empty");
    if (!sc.performer_role && !sc.performer_id)
      diag("script", "contract_outcomes", "performer_role or performer_id required");
    if (sc.performer_id && !ids.count(*sc.performer_id))
      diag("script", "contract_outcomes", "unknown performer agent id");
  }
  return diags;
}

Engine::Engine(Scenario scenario) : scenario_(std::move(scenario)) {
  auto diags = scenario_diagnostics(scenario_);
  if (!diags.empty()) {
    std::string joined;
    for (size_t i = 0; i < diags.size(); ++i) {
      if (i) joined += "; ";
      joined += diags[i];
    }
    throw SimError(ErrorCode::InvalidScenario, joined);
  }
  build_world();
  place_agents();
  seed_trust();
  initial_tokens_ = maze_.count_active_red();
  max_ticks_ = scenario_.max_ticks.value_or(static_cast<int64_t>(10) * maze_.open_cell_count());
}

void Engine::build_world() {
  if (scenario_.maze.text) {
    maze_ = Maze::load(*scenario_.maze.text);
  } else {
    const auto& g = *scenario_.maze.generate;
    maze_ = Maze::generate(g.width, g.height, g.tokens, g.gates, g.seed.value_or(scenario_.seed));
  }
}

void Engine::place_agents() {
  const auto& starts = maze_.starts();
  size_t next_start = 0;
  for (const AgentSpec& spec : scenario_.roster) {
    AgentState a;
    a.id = spec.id;
    a.role = spec.role;
    a.hand = spec.hand;
    a.heading = spec.heading.value_or(Heading::North);
    a.goal_weights = spec.goal_weights;
    a.pos = spec.start.value_or(starts[next_start++ % starts.size()]);
    agents_.push_back(a);
  }
  std::sort(agents_.begin(), agents_.end(),
            [](const AgentState& x, const AgentState& y) { return x.id < y.id; });
}

void Engine::seed_trust() {
  for (const TrustSeed& seed : scenario_.trust_seeds) {
    std::vector<int> observers;
    if (seed.observer) {
      observers.push_back(*seed.observer);
    } else {
      for (const AgentState& a : agents_)
        if (a.id != seed.target) observers.push_back(a.id);
    }
    std::vector<PurposeFunction> functions;
    if (seed.function) {
      functions.push_back(*seed.function);
    } else {
      functions.assign(kAllPurposeFunctions.begin(), kAllPurposeFunctions.end());
    }
    for (int o : observers) {
      if (seed.successes)
        for (PurposeFunction fn : functions)
          trust_.seed_predictability(o, seed.target, fn, *seed.successes, *seed.trials);
      if (seed.integrity) trust_.seed_integrity(o, seed.target, *seed.integrity);
    }
  }
}

bool Engine::terminated() const {
  if (tick_ >= max_ticks_) return true;
  return std::all_of(agents_.begin(), agents_.end(),
                     [](const AgentState& a) { return a.status == AgentStatus::Escaped; });
}

Event& Engine::log(Event event) {
  event.seq = next_seq_++;
  event.tick = tick_;
  trace_.push_back(std::move(event));
  Event& e = trace_.back();
  switch (e.kind) {
    case EventKind::Collected:
      metrics_.tokens_collected += 1;
      sighted_tokens_.erase(Position{e.payload["pos"][0].get<int>(), e.payload["pos"][1].get<int>()});
      break;
    case EventKind::GateEntered:
      metrics_.gates_entered += 1;
      break;
    case EventKind::Released:
      metrics_.releases += static_cast<int>(e.payload["freed"].size());
      break;
    default:
      break;
  }
  return e;
}

void Engine::deliver_messages() {
  inboxes_.clear();
  for (const Message& m : outbox_) {
    for (const AgentState& a : agents_) {
      if (a.id == m.sender || a.status == AgentStatus::Escaped) continue;
      Event e;
      e.kind = EventKind::MessageDelivered;
      e.actor = a.id;
      e.payload["message"] = to_json(m);
      log(std::move(e));
      inboxes_[a.id].push_back(m);
    }
  }
  outbox_.clear();
}

std::set<int> Engine::busy_performers() const {
  std::set<int> busy;
  for (const Contract& c : contracts_)
    if (c.status == ContractStatus::Accepted) busy.insert(c.performer);
  return busy;
}

bool Engine::has_active_contract(PurposeFunction fn) const {
  for (const Contract& c : contracts_)
    if (c.status == ContractStatus::Accepted && c.request.function == fn) return true;
  return false;
}

ScriptedOutcomes* Engine::script_for(const Contract& contract) {
  Role performer_role = Role::Neutral;
  for (const AgentState& a : agents_)
    if (a.id == contract.performer) performer_role = a.role;
  for (ScriptedOutcomes& sc : scenario_.script) {
    if (sc.function != contract.request.function) continue;
    if (sc.performer_id && *sc.performer_id != contract.performer) continue;
    if (sc.performer_role && *sc.performer_role != performer_role) continue;
    if (script_cursor_[&sc] >= sc.outcomes.size()) continue;  // exhausted
    return &sc;
  }
  return nullptr;
}

void Engine::raise_request(const FunctionRequest& request) {
  std::vector<int> ranked;
  try {
    ranked = rank_candidates(request, agents_, maze_, capability_, trust_, scenario_.trust,
                             scenario_.allocation, busy_performers());
  } catch (const SimError& e) {
    if (e.code() != ErrorCode::NoCapableCandidate) throw;
    Event ev;
    ev.kind = EventKind::ActionFailed;
    ev.actor = -1;  // system event, not an agent action
    ev.payload["action"] = "allocate";
    ev.payload["error"] = "NoCapableCandidate";
    ev.payload["function"] = to_string(request.function);
    ev.payload["origin"] = pos_json(request.origin);
    ev.payload["requester"] = request.requester;
    log(std::move(ev));
    return;
  }

  for (int candidate : ranked) {
    Contract contract = propose_contract(request, candidate, agents_, capability_,
                                         scenario_.allocation, next_contract_id_++, tick_);
    contract.decided_at = tick_;
    Event proposed;
    proposed.kind = EventKind::ContractProposed;
    proposed.actor = candidate;
    proposed.payload["contract"] = contract.id;
    proposed.payload["function"] = to_string(request.function);
    proposed.payload["origin"] = pos_json(request.origin);
    proposed.payload["requester"] = request.requester;
    proposed.payload["supporters"] = ids_json(contract.supporters);
    proposed.payload["affected"] = ids_json(contract.affected);
    log(std::move(proposed));

    ContractStatus status = negotiate(contract, agents_, trust_, capability_, scenario_.trust,
                                      scenario_.allocation.accept_rung);
    if (status == ContractStatus::Accepted) {
      Event accepted;
      accepted.kind = EventKind::ContractAccepted;
      accepted.actor = candidate;
      accepted.payload["contract"] = contract.id;
      accepted.payload["function"] = to_string(request.function);
      auto prev = last_performer_.find(request.function);
      bool switched = prev != last_performer_.end() && prev->second != candidate;
      accepted.payload["allocation_switch"] = switched;
      if (switched) {
        accepted.payload["previous_performer"] = prev->second;
        metrics_.allocation_switches += 1;
      }
      log(std::move(accepted));
      last_performer_[request.function] = candidate;
      if (ScriptedOutcomes* sc = script_for(contract)) {
        size_t index = static_cast<size_t>(sc - scenario_.script.data());
        contract_script_[contract.id] = index;
      }
      contracts_.push_back(std::move(contract));
      return;
    }
    Event rejected;
    rejected.kind = EventKind::ContractRejected;
    rejected.actor = candidate;
    rejected.payload["contract"] = contract.id;
    rejected.payload["function"] = to_string(request.function);
    rejected.payload["dissenters"] = ids_json(contract.dissenters);
    log(std::move(rejected));
    contracts_.push_back(std::move(contract));
  }
}

void Engine::allocation_phase() {
  const auto& cfg = scenario_.allocation;

  if (cfg.trigger_release && !has_active_contract(PurposeFunction::HelpTeamMates)) {
    for (const AgentState& a : agents_) {
      if (a.status != AgentStatus::Trapped) continue;
      raise_request({PurposeFunction::HelpTeamMates, a.pos, tick_, a.id});
      break;
    }
  }

  if (cfg.trigger_token_sighting && !has_active_contract(PurposeFunction::GatherTokens)) {
    for (auto it = sighted_tokens_.begin(); it != sighted_tokens_.end();) {
      if (!maze_.active_red_at(it->first)) {
        it = sighted_tokens_.erase(it);
      } else {
        ++it;
      }
    }
    if (!sighted_tokens_.empty()) {
      auto [pos, sighter] = *sighted_tokens_.begin();
      raise_request({PurposeFunction::GatherTokens, pos, tick_, sighter});
    }
  }

  if (cfg.trigger_lead && scenario_.mission.goals.team_goal == "all_escape" &&
      !has_active_contract(PurposeFunction::MoveThroughMaze)) {
    int present = 0;
    const AgentState* first = nullptr;
    for (const AgentState& a : agents_) {
      if (a.status == AgentStatus::Escaped) continue;
      ++present;
      if (!first) first = &a;
    }
    if (present >= 2)
      raise_request({PurposeFunction::MoveThroughMaze, first->pos, tick_, -1});
  }

  refresh_follow_targets();
}

// Contracts steer movement: a help performer tracks its beneficiary, agents
// bound by an accepted lead contract track the leader.
void Engine::refresh_follow_targets() {
  for (AgentState& agent : agents_) {
    std::optional<int> target;
    for (const Contract& c : contracts_) {
      if (c.status != ContractStatus::Accepted) continue;
      if (c.request.function == PurposeFunction::HelpTeamMates && c.performer == agent.id &&
          c.request.requester >= 0) {
        target = c.request.requester;
        break;
      }
      if (c.request.function == PurposeFunction::MoveThroughMaze &&
          std::find(c.affected.begin(), c.affected.end(), agent.id) != c.affected.end())
        target = c.performer;
    }
    agent.follow_target = target;
  }
}

ViolationContext Engine::context_for(int agent_id) const {
  ViolationContext ctx;
  for (const Contract& c : contracts_) {
    if (c.status != ContractStatus::Accepted) continue;
    bool party = c.performer == agent_id ||
                 std::find(c.affected.begin(), c.affected.end(), agent_id) != c.affected.end();
    if (!party) continue;
    ctx.bound = true;
    auto actions = required_actions(scenario_.mission.hierarchy, c.request.function);
    ctx.required.insert(actions.begin(), actions.end());
  }
  for (const AgentState& a : agents_)
    if (a.id == agent_id) ctx.actor_trapped = a.status == AgentStatus::Trapped;
  return ctx;
}

void Engine::agent_turns() {
  for (size_t i = 0; i < agents_.size(); ++i) {
    AgentState& agent = agents_[i];
    if (agent.status == AgentStatus::Escaped) continue;
    if (agent.status == AgentStatus::Stopped) agent.status = AgentStatus::Active;

    static const std::vector<Message> kNoMail;
    auto inbox_it = inboxes_.find(agent.id);
    const std::vector<Message>& inbox = inbox_it == inboxes_.end() ? kNoMail : inbox_it->second;

    Situation situation =
        perceive(agent, maze_, agents_, inbox, scenario_.perception, tick_ - 1);
    Stream stream = agent_stream(scenario_.seed, static_cast<uint64_t>(agent.id),
                                 static_cast<uint64_t>(tick_));
    Action action = decide(agent, situation, scenario_.cpts.at(agent.role), stream);

    ViolationContext ctx = context_for(agent.id);
    std::vector<Event> produced =
        apply_action(maze_, agents_, agent.id, action, {&capability_, tick_});
    for (Event& e : produced) {
      EventKind kind = e.kind;
      Json payload = e.payload;  // inspect before the move
      Event& logged = log(std::move(e));
      staged_.push_back({trace_.size() - 1, ctx});

      if (kind == EventKind::MessageSent) {
        Message m = message_from_json(payload["message"]);
        outbox_.push_back(m);
        if (m.kind == MessageKind::TokenSighting &&
            capability_.score(agent.role, PurposeFunction::GatherTokens, Side::Performer) == 0 &&
            !sighted_tokens_.count(m.pos))
          sighted_tokens_[m.pos] = m.sender;
      } else if (kind == EventKind::Collected) {
        Position pos{payload["pos"][0].get<int>(), payload["pos"][1].get<int>()};
        for (Contract& c : contracts_) {
          if (c.status == ContractStatus::Accepted &&
              c.request.function == PurposeFunction::GatherTokens && c.performer == agent.id &&
              c.request.origin == pos && !contract_script_.count(c.id))
            fulfilled_.insert(c.id);
        }
      } else if (kind == EventKind::Released) {
        for (Contract& c : contracts_) {
          if (c.status != ContractStatus::Accepted ||
              c.request.function != PurposeFunction::HelpTeamMates || c.performer != agent.id ||
              contract_script_.count(c.id))
            continue;
          for (const auto& freed : payload["freed"])
            if (freed.get<int>() == c.request.requester) fulfilled_.insert(c.id);
        }
      }
      (void)logged;
    }
  }
}

void Engine::violation_phase() {
  for (const StagedContext& staged : staged_) {
    const Event event = trace_[staged.event_index];  // copy; trace_ grows below
    auto violations = check_violation(event, scenario_.mission.vpms, scenario_.mission.policies,
                                      staged.context);
    for (const Violation& v : violations) {
      Event ve;
      ve.kind = EventKind::Violation;
      ve.actor = v.agent;
      ve.payload["vpm"] = v.vpm;
      ve.payload["severity"] = to_string(v.severity);
      ve.payload["reason"] = v.reason;
      log(std::move(ve));
      for (const AgentState& observer : agents_) {
        if (observer.id == v.agent) continue;
        Role target_role = Role::Neutral;
        for (const AgentState& a : agents_)
          if (a.id == v.agent) target_role = a.role;
        TrustRecord prev =
            trust_.pair_record(observer.id, v.agent, target_role, capability_, scenario_.trust);
        trust_.update_integrity(observer.id, v.agent, v, scenario_.trust.soft_penalty);
        TrustRecord now =
            trust_.pair_record(observer.id, v.agent, target_role, capability_, scenario_.trust);
        Event tu;
        tu.kind = EventKind::TrustUpdated;
        tu.actor = observer.id;
        tu.payload["target"] = v.agent;
        tu.payload["function"] = "*";
        tu.payload["cause"] = "violation";
        tu.payload["capability"] = now.capability_norm;
        tu.payload["predictability"] = now.predictability;
        tu.payload["integrity"] = now.integrity;
        tu.payload["composite"] = now.composite;
        tu.payload["rung"] = now.rung;
        tu.payload["prev_composite"] = prev.composite;
        tu.payload["prev_rung"] = prev.rung;
        log(std::move(tu));
      }
    }
  }
  staged_.clear();

  if (scenario_.trust.recovery != 1.0) {
    for (const AgentState& observer : agents_) {
      for (const AgentState& target : agents_) {
        if (observer.id == target.id) continue;
        double before = trust_.integrity(observer.id, target.id).score;
        trust_.apply_recovery(observer.id, target.id, scenario_.trust.recovery);
        double after = trust_.integrity(observer.id, target.id).score;
        if (after == before) continue;
        TrustRecord now = trust_.pair_record(observer.id, target.id, target.role, capability_,
                                             scenario_.trust);
        Event tu;
        tu.kind = EventKind::TrustUpdated;
        tu.actor = observer.id;
        tu.payload["target"] = target.id;
        tu.payload["function"] = "*";
        tu.payload["cause"] = "recovery";
        tu.payload["capability"] = now.capability_norm;
        tu.payload["predictability"] = now.predictability;
        tu.payload["integrity"] = now.integrity;
        tu.payload["composite"] = now.composite;
        tu.payload["rung"] = now.rung;
        log(std::move(tu));
      }
    }
  }
}

void Engine::synthesize_completion(Contract& contract) {
  if (contract.request.function == PurposeFunction::GatherTokens) {
    Position pos = contract.request.origin;
    if (maze_.active_red_at(pos)) {
      maze_.set_cell(pos, Cell{CellKind::RedSquare, false});
      for (AgentState& a : agents_)
        if (a.id == contract.performer) a.tokens_collected += 1;
      Event e;
      e.kind = EventKind::Collected;
      e.actor = contract.performer;
      e.payload["action"] = "collect";
      e.payload["pos"] = pos_json(pos);
      e.payload["scripted"] = true;
      log(std::move(e));
    }
  } else if (contract.request.function == PurposeFunction::HelpTeamMates) {
    Position pos = contract.request.origin;
    bool was_active = maze_.active_red_at(pos);
    if (was_active) maze_.set_cell(pos, Cell{CellKind::RedSquare, false});
    Json freed = Json::array();
    for (AgentState& a : agents_) {
      if (a.status == AgentStatus::Trapped && a.pos == pos) {
        a.status = AgentStatus::Active;
        freed.push_back(a.id);
      }
    }
    Event e;
    e.kind = EventKind::Released;
    e.actor = contract.performer;
    e.payload["action"] = "release";
    e.payload["pos"] = pos_json(pos);
    e.payload["freed"] = freed;
    e.payload["deactivated"] = was_active;
    e.payload["scripted"] = true;
    log(std::move(e));
  }
}

void Engine::settle_one(Contract& contract, bool success, bool scripted) {
  if (scripted && success) synthesize_completion(contract);

  // per-observer records before the estimator moves, for the trace
  std::map<int, TrustRecord> prev;
  Role performer_role = Role::Neutral;
  for (const AgentState& a : agents_)
    if (a.id == contract.performer) performer_role = a.role;
  for (const AgentState& a : agents_) {
    if (a.id == contract.performer) continue;
    prev[a.id] = trust_.record(a.id, contract.performer, performer_role,
                               contract.request.function, capability_, scenario_.trust);
  }

  auto updates =
      settle_contract(contract, success, agents_, trust_, capability_, scenario_.trust);

  Event settled;
  settled.kind = EventKind::ContractSettled;
  settled.actor = contract.performer;
  settled.payload["contract"] = contract.id;
  settled.payload["function"] = to_string(contract.request.function);
  settled.payload["status"] = to_string(contract.status);
  settled.payload["scripted"] = scripted;
  log(std::move(settled));

  for (const TrustUpdate& u : updates) {
    Event tu;
    tu.kind = EventKind::TrustUpdated;
    tu.actor = u.observer;
    tu.payload["target"] = u.target;
    tu.payload["function"] = to_string(u.function);
    tu.payload["cause"] = "settle";
    tu.payload["capability"] = u.record.capability_norm;
    tu.payload["predictability"] = u.record.predictability;
    tu.payload["integrity"] = u.record.integrity;
    tu.payload["composite"] = u.record.composite;
    tu.payload["rung"] = u.record.rung;
    tu.payload["prev_composite"] = prev[u.observer].composite;
    tu.payload["prev_rung"] = prev[u.observer].rung;
    log(std::move(tu));
  }

  if (contract.request.function == PurposeFunction::MoveThroughMaze) {
    for (int id : contract.affected)
      for (AgentState& a : agents_)
        if (a.id == id && a.follow_target == contract.performer) a.follow_target.reset();
  }
}

void Engine::settle_phase(bool final_pass) {
  for (Contract& contract : contracts_) {
    if (contract.status != ContractStatus::Accepted) continue;

    auto script_it = contract_script_.find(contract.id);
    if (script_it != contract_script_.end()) {
      ScriptedOutcomes& sc = scenario_.script[script_it->second];
      bool due = final_pass || (contract.deadline && tick_ >= *contract.deadline);
      if (!due) continue;
      size_t& cursor = script_cursor_[&sc];
      bool outcome = cursor < sc.outcomes.size() ? sc.outcomes[cursor] : false;
      if (cursor < sc.outcomes.size()) ++cursor;
      settle_one(contract, outcome, true);
      continue;
    }

    if (fulfilled_.count(contract.id)) {
      settle_one(contract, true, false);
      continue;
    }
    if (contract.request.function == PurposeFunction::MoveThroughMaze) {
      bool all_escaped = true;
      for (int id : contract.affected)
        for (const AgentState& a : agents_)
          if (a.id == id && a.status != AgentStatus::Escaped) all_escaped = false;
      if (all_escaped) {
        settle_one(contract, true, false);
        continue;
      }
    }
    // the need evaporated without the performer delivering
    bool voided = false;
    if (contract.request.function == PurposeFunction::HelpTeamMates) {
      voided = true;
      for (const AgentState& a : agents_)
        if (a.id == contract.request.requester && a.status == AgentStatus::Trapped) voided = false;
    } else if (contract.request.function == PurposeFunction::GatherTokens) {
      voided = !maze_.active_red_at(contract.request.origin);
    }
    if (voided || final_pass || (contract.deadline && tick_ >= *contract.deadline))
      settle_one(contract, false, false);
  }
  fulfilled_.clear();
  refresh_follow_targets();
}

void Engine::check_conservation() const {
  int active = maze_.count_active_red();
  int inactive = maze_.count_inactive_red();
  if (active + inactive != initial_tokens_)
    throw SimError(ErrorCode::InvalidState,
                   "token conservation broken at tick " + std::to_string(tick_) + ": " +
                       std::to_string(active) + " active + " + std::to_string(inactive) +
                       " inactive != " + std::to_string(initial_tokens_));
}

void Engine::sample_trajectories() {
  if (tick_ % scenario_.plot_stride != 0) return;
  for (const AgentState& observer : agents_) {
    for (const AgentState& target : agents_) {
      if (observer.id == target.id) continue;
      TrustRecord r =
          trust_.pair_record(observer.id, target.id, target.role, capability_, scenario_.trust);
      trajectories_.push_back({tick_, observer.id, target.id, r.capability_norm, r.predictability,
                               r.integrity, r.composite, r.rung});
    }
  }
}

std::vector<Event> Engine::tick() {
  if (terminated())
    throw SimError(ErrorCode::InvalidState, "tick() called on a terminated engine");
  size_t first = trace_.size();
  tick_ += 1;
  deliver_messages();
  allocation_phase();
  agent_turns();
  violation_phase();
  settle_phase(false);
  check_conservation();
  if (!metrics_.ticks_to_all_escape &&
      std::all_of(agents_.begin(), agents_.end(),
                  [](const AgentState& a) { return a.status == AgentStatus::Escaped; }))
    metrics_.ticks_to_all_escape = tick_;
  sample_trajectories();
  return {trace_.begin() + first, trace_.end()};
}

RunResult Engine::finish() {
  while (!terminated()) tick();
  settle_phase(true);  // contracts still open at mission end
  metrics_.timeout = !metrics_.ticks_to_all_escape.has_value();
  RunResult result;
  result.trace = trace_;
  result.metrics = metrics_;
  result.trajectories = trajectories_;
  result.initial_tokens = initial_tokens_;
  return result;
}

RunResult run(const Scenario& scenario) { return Engine(scenario).finish(); }

InterpretationTable interpretation_table_for(const Scenario& scenario) {
  InterpretationTable table = InterpretationTable::defaults(CapabilityMatrix::defaults());
  for (const InterpretationOverride& o : scenario.interpretation)
    table.set(o.role, o.observation, o.meaning);
  return table;
}

ReplayResult replay_verify(const std::vector<Event>& trace, const Scenario& scenario) {
  RunResult fresh = run(scenario);
  size_t n = std::min(trace.size(), fresh.trace.size());
  for (size_t i = 0; i < n; ++i) {
    if (serialize_event(trace[i]) != serialize_event(fresh.trace[i]))
      return {false, trace[i].seq};
  }
  if (trace.size() != fresh.trace.size()) {
    uint64_t seq = trace.size() > n ? trace[n].seq : fresh.trace[n].seq;
    return {false, seq};
  }
  return {true, std::nullopt};
}

}  // namespace trustmaze
