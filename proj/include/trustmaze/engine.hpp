#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trustmaze/agents.hpp"
#include "trustmaze/allocation.hpp"
#include "trustmaze/core.hpp"
#include "trustmaze/events.hpp"
#include "trustmaze/mission.hpp"
#include "trustmaze/trust.hpp"
#include "trustmaze/world.hpp"

namespace trustmaze {

struct AgentSpec {
  int id = 0;
  Role role = Role::Neutral;
  Hand hand = Hand::Left;
  std::optional<Position> start;    // defaults to the maze start region, cycled
  std::optional<Heading> heading;   // defaults to North
  std::map<std::string, double> goal_weights;
};

struct MazeGenerateSpec {
  int width = 21;
  int height = 21;
  int tokens = 5;
  int gates = 3;
  std::optional<uint64_t> seed;  // defaults to the run seed
};

struct MazeSource {
  std::optional<std::string> text;  // inline grid (scenario files load `file` into this)
  std::optional<MazeGenerateSpec> generate;
};

// Pre-run trust state override; unset observer/function means "all".
struct TrustSeed {
  std::optional<int> observer;
  int target = 0;
  std::optional<PurposeFunction> function;
  std::optional<int> successes;
  std::optional<int> trials;
  std::optional<double> integrity;
};

struct InterpretationOverride {
  Role role = Role::Neutral;
  Observation observation = Observation::BlackSquare;
  Meaning meaning = Meaning::None;
};

// Forced settle outcomes for contracts matching (function, performer). Used
// by scripted fixtures: a matching contract ignores real completion, settles
// at its deadline with the next outcome, and a success synthesizes the
// completion effects (marked "scripted" in the trace).
struct ScriptedOutcomes {
  PurposeFunction function = PurposeFunction::GatherTokens;
  std::optional<Role> performer_role;
  std::optional<int> performer_id;
  std::vector<bool> outcomes;
};

struct Scenario {
  int schema_version = 1;
  MazeSource maze;
  std::vector<AgentSpec> roster;
  std::map<Role, ActionCpt> cpts;
  std::vector<InterpretationOverride> interpretation;
  MissionModel mission = build_default_mission();
  TrustConfig trust;
  std::vector<TrustSeed> trust_seeds;
  AllocationConfig allocation;
  uint64_t seed = 1;
  std::optional<int64_t> max_ticks;  // default: 10 x open cells
  PerceptionConfig perception;
  int plot_stride = 1;
  std::vector<ScriptedOutcomes> script;
};

struct RunMetrics {
  std::optional<int64_t> ticks_to_all_escape;
  bool timeout = false;
  int tokens_collected = 0;
  int gates_entered = 0;
  int releases = 0;             // agents freed from traps
  int allocation_switches = 0;  // accepted performer changed for a function
};

struct TrajectoryRow {
  int64_t tick = 0;
  int observer = 0;
  int target = 0;
  double capability = 0.0;
  double predictability = 0.0;
  double integrity = 0.0;
  double composite = 0.0;
  int rung = 0;
};

struct RunResult {
  std::vector<Event> trace;
  RunMetrics metrics;
  std::vector<TrajectoryRow> trajectories;  // sampled per tick at plot stride
  int initial_tokens = 0;
};

// Deterministic turn-based scheduler. Ticks are 1-based; agent turns run in
// ascending id order; allocation runs before agent turns so contracts shape
// the same tick's decisions.
class Engine {
 public:
  explicit Engine(Scenario scenario);  // throws InvalidScenario

  bool terminated() const;
  int64_t current_tick() const { return tick_; }
  int64_t max_ticks() const { return max_ticks_; }

  // Advances one tick; returns the slice of trace appended by it.
  std::vector<Event> tick();
  RunResult finish();  // runs to termination, then assembles the result

  const Maze& maze() const { return maze_; }
  const std::vector<AgentState>& agents() const { return agents_; }
  const TrustMatrix& trust() const { return trust_; }
  const std::vector<Contract>& contracts() const { return contracts_; }
  const std::vector<Event>& trace() const { return trace_; }
  const Scenario& scenario() const { return scenario_; }

 private:
  struct StagedContext {
    size_t event_index;
    ViolationContext context;
  };

  void build_world();
  void place_agents();
  void seed_trust();

  Event& log(Event event);
  void deliver_messages();
  void allocation_phase();
  void raise_request(const FunctionRequest& request);
  void refresh_follow_targets();
  void agent_turns();
  void violation_phase();
  void settle_phase(bool final_pass);
  void settle_one(Contract& contract, bool success, bool scripted);
  void synthesize_completion(Contract& contract);
  void sample_trajectories();
  void check_conservation() const;

  ViolationContext context_for(int agent_id) const;
  std::set<int> busy_performers() const;
  bool has_active_contract(PurposeFunction fn) const;
  ScriptedOutcomes* script_for(const Contract& contract);

  Scenario scenario_;
  CapabilityMatrix capability_ = CapabilityMatrix::defaults();
  Maze maze_;
  std::vector<AgentState> agents_;
  TrustMatrix trust_;
  std::vector<Contract> contracts_;
  std::set<int> fulfilled_;  // contracts completed by their performer this tick
  std::vector<Event> trace_;
  std::vector<Message> outbox_;                      // sent this tick, delivered next
  std::map<int, std::vector<Message>> inboxes_;      // delivered this tick
  std::map<Position, int> sighted_tokens_;           // pos -> first sighter
  std::map<PurposeFunction, int> last_performer_;
  std::map<const ScriptedOutcomes*, size_t> script_cursor_;
  std::map<int, size_t> contract_script_;            // contract id -> script index
  std::vector<StagedContext> staged_;
  RunMetrics metrics_;
  std::vector<TrajectoryRow> trajectories_;
  int initial_tokens_ = 0;
  int64_t tick_ = 0;
  int64_t max_ticks_ = 0;
  uint64_t next_seq_ = 1;
  int next_contract_id_ = 1;
};

RunResult run(const Scenario& scenario);

struct ReplayResult {
  bool match = true;
  std::optional<uint64_t> first_divergence;  // seq of the first differing event
};

// Re-simulates the scenario and compares serialized events line by line.
ReplayResult replay_verify(const std::vector<Event>& trace, const Scenario& scenario);

// Full schema and invariant check; one entry per problem, empty when valid.
std::vector<std::string> scenario_diagnostics(const Scenario& scenario);

// Default interpretation table with the scenario's overrides applied.
InterpretationTable interpretation_table_for(const Scenario& scenario);

}  // namespace trustmaze
