#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trustmaze/core.hpp"
#include "trustmaze/events.hpp"
#include "trustmaze/rng.hpp"
#include "trustmaze/trust.hpp"
#include "trustmaze/world.hpp"

namespace trustmaze {

enum class AgentStatus : uint8_t { Active, Trapped, Stopped, Escaped };

const char* to_string(AgentStatus s);

struct AgentState {
  int id = 0;
  Role role = Role::Neutral;
  Position pos{};
  Heading heading = Heading::North;
  Hand hand = Hand::Left;
  AgentStatus status = AgentStatus::Active;
  std::optional<int> follow_target;
  std::map<std::string, double> goal_weights;  // vpm name -> probability, sums to 1
  int gates_entered = 0;
  int tokens_collected = 0;
  std::optional<std::pair<Position, Position>> last_move;  // (from, to) of last displacement
  int64_t last_move_tick = -1;
};

// Cell classification as it appears in situation keys.
enum class CellCategory : uint8_t { Path, Wall, Red, RedOff, Gate, Exit, Start };

CellCategory categorize(const Cell& cell);
const char* to_string(CellCategory c);
std::optional<CellCategory> cell_category_from_string(std::string_view s);

// Most urgent message kind in the inbox; Help outranks everything.
enum class InboxSummary : uint8_t { None, Help, StopAll, FollowMe, TokenSighting, Stopped };

const char* to_string(InboxSummary s);
std::optional<InboxSummary> inbox_summary_from_string(std::string_view s);
InboxSummary summarize_inbox(std::span<const Message> inbox);

// The compact tuple CPT rows are keyed by.
struct SituationKey {
  CellCategory on = CellCategory::Path;
  CellCategory ahead = CellCategory::Path;
  bool trapped_visible = false;
  bool token_visible = false;
  InboxSummary inbox = InboxSummary::None;
  int time_bucket = 1;  // T1 from tick 0, width from config

  std::string to_string() const;
};

struct VisibleAgent {
  int id = 0;
  Role role = Role::Neutral;
  Position pos{};
  AgentStatus status = AgentStatus::Active;
};

// Everything an agent can condition on at its turn; derived from the world
// and its inbox only.
struct Situation {
  Cell on, ahead, left, right, behind;
  std::vector<VisibleAgent> visible;
  std::vector<Message> inbox;
  int time_bucket = 1;
  std::map<std::string, double> goal_weights;
  std::optional<Position> nearest_token;   // nearest visible active red square
  std::optional<int> nearest_trapped;      // nearest visible trapped teammate

  SituationKey key() const;
};

struct PerceptionConfig {
  int visibility_radius = 3;  // Chebyshev window
  int time_bucket_width = 50;
};

Situation perceive(const AgentState& agent, const Maze& maze, std::span<const AgentState> others,
                   std::span<const Message> inbox, const PerceptionConfig& config, int64_t tick);

// --- role-specific interpretation -----------------------------------------

enum class Observation : uint8_t {
  BlackSquare,
  BlueSquare,
  RedSquareActive,
  RedSquareInactive,
  Gate,
  ExitCell,
  TrappedTeammate,
  MsgFollowMe,
  MsgHelp,
  MsgStopAll,
  MsgTokenSighting,
  MsgStopped,
};

enum class Meaning : uint8_t { Traversable, Collectible, Trap, Releasable, FollowCue, None };

const char* to_string(Observation o);
const char* to_string(Meaning m);
std::optional<Observation> observation_from_string(std::string_view s);
std::optional<Meaning> meaning_from_string(std::string_view s);

class InterpretationTable {
 public:
  static InterpretationTable defaults(const CapabilityMatrix& capability);

  Meaning interpret(Role role, Observation obs) const;  // throws UnknownObservation
  void set(Role role, Observation obs, Meaning meaning);
  bool common_ground(Observation obs) const;  // same meaning for every role

 private:
  std::map<std::pair<Role, Observation>, Meaning> entries_;
};

// Express an observation in the receiver's frame: a red square becomes a
// token sighting for a collector, a trapped sender becomes a help request.
// Throws NoTranslationNeeded when both roles already read it the same way
// (or no protocol message captures the difference).
Message translate(const InterpretationTable& table, Role sender_role, Role receiver_role,
                  Observation obs, Position pos, int sender_id);

// --- CPT-based decisions ----------------------------------------------------

struct Action {
  ActionKind kind = ActionKind::Stop;
  std::optional<int> target;     // Release / Follow
  std::optional<Position> pos;   // ChangeColour / SendTokenSighting
};

// Row pattern: unset fields are wildcards; first declared matching row wins.
struct CptPattern {
  std::optional<CellCategory> on, ahead;
  std::optional<bool> trapped_visible, token_visible;
  std::optional<InboxSummary> inbox;
  std::optional<int> time_bucket;

  bool matches(const SituationKey& key) const;
  std::string to_string() const;
  static CptPattern parse(std::string_view text);  // throws InvalidScenario
};

struct CptRow {
  CptPattern pattern;
  std::vector<std::pair<ActionKind, double>> actions;  // declared order = CDF order
};

struct ActionCpt {
  std::vector<CptRow> rows;

  const CptRow* match(const SituationKey& key) const;
  std::vector<std::string> validate() const;  // probabilities in [0,1], rows sum to 1
};

// Inverse-CDF pick over weights in declared order; u in [0,1).
size_t sample_index(std::span<const double> weights, double u);

// Samples one action for this turn. A Trapped agent is renormalized onto its
// Send actions; with no send mass in the row it falls back to a help request.
// Throws MissingRow when no row matches.
Action decide(const AgentState& agent, const Situation& situation, const ActionCpt& cpt,
              Stream& rng);

// --- action execution -------------------------------------------------------

struct ActionContext {
  const CapabilityMatrix* capability = nullptr;
  int64_t tick = 0;
};

// Executes one action, mutating world and agent state. Returns exactly one
// primary event (Moved / Collected / Released / MessageSent / ActionFailed)
// followed by any effect events (Trapped, GateEntered, Escaped). Illegal
// actions are logged as ActionFailed and leave all state unchanged.
std::vector<Event> apply_action(Maze& maze, std::span<AgentState> agents, int actor_id,
                                const Action& action, const ActionContext& context);

}  // namespace trustmaze
