#include "trustmaze/agents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace trustmaze {

const char* to_string(AgentStatus s) {
  switch (s) {
    case AgentStatus::Active: return "active";
    case AgentStatus::Trapped: return "trapped";
    case AgentStatus::Stopped: return "stopped";
    case AgentStatus::Escaped: return "escaped";
  }
  return "?";
}

CellCategory categorize(const Cell& cell) {
  switch (cell.kind) {
    case CellKind::Path: return CellCategory::Path;
    case CellKind::Wall: return CellCategory::Wall;
    case CellKind::RedSquare: return cell.red_active ? CellCategory::Red : CellCategory::RedOff;
    case CellKind::Gate: return CellCategory::Gate;
    case CellKind::Exit: return CellCategory::Exit;
    case CellKind::Start: return CellCategory::Start;
  }
  return CellCategory::Path;
}

const char* to_string(CellCategory c) {
  switch (c) {
    case CellCategory::Path: return "path";
    case CellCategory::Wall: return "wall";
    case CellCategory::Red: return "red";
    case CellCategory::RedOff: return "red_off";
    case CellCategory::Gate: return "gate";
    case CellCategory::Exit: return "exit";
    case CellCategory::Start: return "start";
  }
  return "?";
}

std::optional<CellCategory> cell_category_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(CellCategory::Start); ++i) {
    auto c = static_cast<CellCategory>(i);
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

const char* to_string(InboxSummary s) {
  switch (s) {
    case InboxSummary::None: return "none";
    case InboxSummary::Help: return "help";
    case InboxSummary::StopAll: return "stop_all";
    case InboxSummary::FollowMe: return "follow_me";
    case InboxSummary::TokenSighting: return "token_sighting";
    case InboxSummary::Stopped: return "stopped";
  }
  return "?";
}

std::optional<InboxSummary> inbox_summary_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(InboxSummary::Stopped); ++i) {
    auto v = static_cast<InboxSummary>(i);
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

InboxSummary summarize_inbox(std::span<const Message> inbox) {
  bool help = false, stop_all = false, follow_me = false, sighting = false, stopped = false;
  for (const Message& m : inbox) {
    switch (m.kind) {
      case MessageKind::Help: help = true; break;
      case MessageKind::StopAll: stop_all = true; break;
      case MessageKind::FollowMe: follow_me = true; break;
      case MessageKind::TokenSighting: sighting = true; break;
      case MessageKind::Stopped: stopped = true; break;
    }
  }
  if (help) return InboxSummary::Help;
  if (stop_all) return InboxSummary::StopAll;
  if (follow_me) return InboxSummary::FollowMe;
  if (sighting) return InboxSummary::TokenSighting;
  if (stopped) return InboxSummary::Stopped;
  return InboxSummary::None;
}

std::string SituationKey::to_string() const {
  std::string s = "on=";
  s += trustmaze::to_string(on);
  s += ",ahead=";
  s += trustmaze::to_string(ahead);
  s += ",trapped=";
  s += trapped_visible ? '1' : '0';
  s += ",token=";
  s += token_visible ? '1' : '0';
  s += ",inbox=";
  s += trustmaze::to_string(inbox);
  s += ",t=T";
  s += std::to_string(time_bucket);
  return s;
}

SituationKey Situation::key() const {
  SituationKey k;
  k.on = categorize(on);
  k.ahead = categorize(ahead);
  k.trapped_visible = nearest_trapped.has_value();
  k.token_visible = nearest_token.has_value();
  k.inbox = summarize_inbox(inbox);
  k.time_bucket = time_bucket;
  return k;
}

namespace {

Cell cell_or_wall(const Maze& maze, Position p) {
  return maze.in_bounds(p) ? maze.at(p) : Cell{CellKind::Wall, false};
}

int chebyshev(Position a, Position b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

}  // namespace

Situation perceive(const AgentState& agent, const Maze& maze, std::span<const AgentState> others,
                   std::span<const Message> inbox, const PerceptionConfig& config, int64_t tick) {
  Situation s;
  s.on = cell_or_wall(maze, agent.pos);
  s.ahead = cell_or_wall(maze, step(agent.pos, agent.heading));
  s.left = cell_or_wall(maze, step(agent.pos, turn_left(agent.heading)));
  s.right = cell_or_wall(maze, step(agent.pos, turn_right(agent.heading)));
  s.behind = cell_or_wall(maze, step(agent.pos, reverse(agent.heading)));
  s.inbox.assign(inbox.begin(), inbox.end());
  s.time_bucket = static_cast<int>(tick / config.time_bucket_width) + 1;
  s.goal_weights = agent.goal_weights;

  const int r = config.visibility_radius;

  for (const AgentState& other : others) {
    if (other.id == agent.id || other.status == AgentStatus::Escaped) continue;
    if (chebyshev(other.pos, agent.pos) > r) continue;
    s.visible.push_back({other.id, other.role, other.pos, other.status});
  }
  std::sort(s.visible.begin(), s.visible.end(),
            [](const VisibleAgent& a, const VisibleAgent& b) { return a.id < b.id; });

  // nearest trapped teammate by (distance, id)
  int best_dist = r + 1;
  for (const VisibleAgent& v : s.visible) {
    if (v.status != AgentStatus::Trapped) continue;
    int d = chebyshev(v.pos, agent.pos);
    if (d < best_dist) {
      best_dist = d;
      s.nearest_trapped = v.id;
    }
  }

  // nearest visible active red square, scanning the window in row-major order
  int best_token = r + 1;
  for (int y = agent.pos.y - r; y <= agent.pos.y + r; ++y) {
    for (int x = agent.pos.x - r; x <= agent.pos.x + r; ++x) {
      Position p{x, y};
      if (!maze.active_red_at(p)) continue;
      int d = chebyshev(p, agent.pos);
      if (d < best_token) {
        best_token = d;
        s.nearest_token = p;
      }
    }
  }
  return s;
}

const char* to_string(Observation o) {
  switch (o) {
    case Observation::BlackSquare: return "black_square";
    case Observation::BlueSquare: return "blue_square";
    case Observation::RedSquareActive: return "red_square_active";
    case Observation::RedSquareInactive: return "red_square_inactive";
    case Observation::Gate: return "gate";
    case Observation::ExitCell: return "exit";
    case Observation::TrappedTeammate: return "trapped_teammate";
    case Observation::MsgFollowMe: return "msg_follow_me";
    case Observation::MsgHelp: return "msg_help";
    case Observation::MsgStopAll: return "msg_stop_all";
    case Observation::MsgTokenSighting: return "msg_token_sighting";
    case Observation::MsgStopped: return "msg_stopped";
  }
  return "?";
}

const char* to_string(Meaning m) {
  switch (m) {
    case Meaning::Traversable: return "traversable";
    case Meaning::Collectible: return "collectible";
    case Meaning::Trap: return "trap";
    case Meaning::Releasable: return "releasable";
    case Meaning::FollowCue: return "follow_cue";
    case Meaning::None: return "none";
  }
  return "?";
}

std::optional<Observation> observation_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Observation::MsgStopped); ++i) {
    auto o = static_cast<Observation>(i);
    if (s == to_string(o)) return o;
  }
  return std::nullopt;
}

std::optional<Meaning> meaning_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Meaning::None); ++i) {
    auto m = static_cast<Meaning>(i);
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

InterpretationTable InterpretationTable::defaults(const CapabilityMatrix& capability) {
  InterpretationTable t;
  for (Role role : kAllRoles) {
    const bool gathers = capability.score(role, PurposeFunction::GatherTokens, Side::Performer) > 0;
    const bool helps = capability.score(role, PurposeFunction::HelpTeamMates, Side::Performer) > 0;
    t.set(role, Observation::BlackSquare, Meaning::Traversable);
    t.set(role, Observation::BlueSquare, Meaning::None);
    t.set(role, Observation::RedSquareActive, gathers ? Meaning::Collectible : Meaning::Trap);
    t.set(role, Observation::RedSquareInactive, Meaning::Traversable);
    // an entrance is the gate-user's own kind of collectible
    t.set(role, Observation::Gate,
          role == Role::GateUser ? Meaning::Collectible : Meaning::Traversable);
    t.set(role, Observation::ExitCell, Meaning::Traversable);
    t.set(role, Observation::TrappedTeammate, helps ? Meaning::Releasable : Meaning::None);
    t.set(role, Observation::MsgFollowMe,
          role == Role::Neutral ? Meaning::FollowCue : Meaning::None);
    t.set(role, Observation::MsgHelp, helps ? Meaning::Releasable : Meaning::None);
    t.set(role, Observation::MsgStopAll, Meaning::None);
    t.set(role, Observation::MsgTokenSighting, gathers ? Meaning::Collectible : Meaning::None);
    t.set(role, Observation::MsgStopped, Meaning::None);
  }
  return t;
}

Meaning InterpretationTable::interpret(Role role, Observation obs) const {
  auto it = entries_.find({role, obs});
  if (it == entries_.end())
    throw SimError(ErrorCode::UnknownObservation,
                   std::string(to_string(obs)) + " for " + to_string(role));
  return it->second;
}

void InterpretationTable::set(Role role, Observation obs, Meaning meaning) {
  entries_[{role, obs}] = meaning;
}

bool InterpretationTable::common_ground(Observation obs) const {
  Meaning first = interpret(kAllRoles[0], obs);
  for (Role role : kAllRoles)
    if (interpret(role, obs) != first) return false;
  return true;
}

Message translate(const InterpretationTable& table, Role sender_role, Role receiver_role,
                  Observation obs, Position pos, int sender_id) {
  Meaning sender_meaning = table.interpret(sender_role, obs);
  Meaning receiver_meaning = table.interpret(receiver_role, obs);
  if (sender_meaning == receiver_meaning)
    throw SimError(ErrorCode::NoTranslationNeeded,
                   std::string(to_string(obs)) + " means '" + to_string(sender_meaning) +
                       "' to both roles");
  if (obs == Observation::TrappedTeammate) return {MessageKind::Help, sender_id, pos};
  if ((obs == Observation::RedSquareActive || obs == Observation::Gate) &&
      receiver_meaning == Meaning::Collectible)
    return {MessageKind::TokenSighting, sender_id, pos};
  throw SimError(ErrorCode::NoTranslationNeeded,
                 std::string("no protocol message expresses ") + to_string(obs) +
                     " between these roles");
}

bool CptPattern::matches(const SituationKey& key) const {
  if (on && *on != key.on) return false;
  if (ahead && *ahead != key.ahead) return false;
  if (trapped_visible && *trapped_visible != key.trapped_visible) return false;
  if (token_visible && *token_visible != key.token_visible) return false;
  if (inbox && *inbox != key.inbox) return false;
  if (time_bucket && *time_bucket != key.time_bucket) return false;
  return true;
}

std::string CptPattern::to_string() const {
  std::vector<std::string> parts;
  if (on) parts.push_back(std::string("on=") + trustmaze::to_string(*on));
  if (ahead) parts.push_back(std::string("ahead=") + trustmaze::to_string(*ahead));
  if (trapped_visible) parts.push_back(std::string("trapped=") + (*trapped_visible ? "1" : "0"));
  if (token_visible) parts.push_back(std::string("token=") + (*token_visible ? "1" : "0"));
  if (inbox) parts.push_back(std::string("inbox=") + trustmaze::to_string(*inbox));
  if (time_bucket) parts.push_back("t=T" + std::to_string(*time_bucket));
  if (parts.empty()) return "*";
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

CptPattern CptPattern::parse(std::string_view text) {
  CptPattern p;
  if (text == "*" || text.empty()) return p;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view field = text.substr(pos, comma - pos);
    pos = comma + 1;
    size_t eq = field.find('=');
    if (eq == std::string_view::npos)
      throw SimError(ErrorCode::InvalidScenario, "CPT key field '" + std::string(field) +
                                                     "' is not name=value");
    std::string_view name = field.substr(0, eq);
    std::string_view value = field.substr(eq + 1);
    if (value == "*") continue;
    if (name == "on" || name == "ahead") {
      auto c = cell_category_from_string(value);
      if (!c)
        throw SimError(ErrorCode::InvalidScenario,
                       "unknown cell category '" + std::string(value) + "'");
      (name == "on" ? p.on : p.ahead) = c;
    } else if (name == "trapped" || name == "token") {
      if (value != "0" && value != "1")
        throw SimError(ErrorCode::InvalidScenario,
                       std::string(name) + " must be 0 or 1, got '" + std::string(value) + "'");
      (name == "trapped" ? p.trapped_visible : p.token_visible) = (value == "1");
    } else if (name == "inbox") {
      auto s = inbox_summary_from_string(value);
      if (!s)
        throw SimError(ErrorCode::InvalidScenario,
                       "unknown inbox summary '" + std::string(value) + "'");
      p.inbox = s;
    } else if (name == "t") {
      std::string_view digits = value;
      if (!digits.empty() && (digits[0] == 'T' || digits[0] == 't')) digits.remove_prefix(1);
      int bucket = 0;
      for (char c : digits) {
        if (c < '0' || c > '9')
          throw SimError(ErrorCode::InvalidScenario,
                         "bad time bucket '" + std::string(value) + "'");
        bucket = bucket * 10 + (c - '0');
      }
      if (digits.empty() || bucket < 1)
        throw SimError(ErrorCode::InvalidScenario, "bad time bucket '" + std::string(value) + "'");
      p.time_bucket = bucket;
    } else {
      throw SimError(ErrorCode::InvalidScenario,
                     "unknown CPT key field '" + std::string(name) + "'");
    }
  }
  return p;
}

const CptRow* ActionCpt::match(const SituationKey& key) const {
  for (const CptRow& row : rows)
    if (row.pattern.matches(key)) return &row;
  return nullptr;
}

std::vector<std::string> ActionCpt::validate() const {
  std::vector<std::string> problems;
  for (size_t i = 0; i < rows.size(); ++i) {
    const CptRow& row = rows[i];
    std::string where = "row " + std::to_string(i) + " ('" + row.pattern.to_string() + "')";
    if (row.actions.empty()) {
      problems.push_back(where + " has no actions");
      continue;
    }
    double sum = 0.0;
    for (const auto& [kind, prob] : row.actions) {
      (void)kind;
      if (prob < 0.0 || prob > 1.0)
        problems.push_back(where + " probability " + std::to_string(prob) + " outside [0,1]");
      sum += prob;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      problems.push_back(where + " probabilities sum to " + std::to_string(sum) + ", expected 1");
  }
  return problems;
}

size_t sample_index(std::span<const double> weights, double u) {
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double mark = u * total;
  double cum = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (mark < cum && weights[i] > 0.0) return i;
  }
  // rounding drift: last entry with mass
  for (size_t i = weights.size(); i > 0; --i)
    if (weights[i - 1] > 0.0) return i - 1;
  return 0;
}

namespace {

// Fill in the parameters decide can resolve from the situation alone.
Action resolve_action(ActionKind kind, const AgentState& agent, const Situation& situation) {
  Action action{kind, std::nullopt, std::nullopt};
  switch (kind) {
    case ActionKind::Release:
      action.target = situation.nearest_trapped;
      break;
    case ActionKind::Follow:
      if (agent.follow_target) {
        action.target = agent.follow_target;
      } else {
        for (const Message& m : situation.inbox)
          if (m.kind == MessageKind::FollowMe) action.target = m.sender;
      }
      break;
    case ActionKind::ChangeColour:
    case ActionKind::SendTokenSighting:
      action.pos = situation.nearest_token;
      break;
    default:
      break;
  }
  return action;
}

}  // namespace

Action decide(const AgentState& agent, const Situation& situation, const ActionCpt& cpt,
              Stream& rng) {
  const SituationKey key = situation.key();
  const CptRow* row = cpt.match(key);
  if (!row)
    throw SimError(ErrorCode::MissingRow, "no CPT row matches '" + key.to_string() +
                                              "' for agent " + std::to_string(agent.id) +
                                              " and no wildcard row is declared");

  const bool trapped = agent.status == AgentStatus::Trapped;
  std::vector<double> weights;
  weights.reserve(row->actions.size());
  double live_mass = 0.0;
  for (const auto& [kind, prob] : row->actions) {
    double w = (trapped && !is_send(kind)) ? 0.0 : prob;
    weights.push_back(w);
    live_mass += w;
  }
  double u = rng.next_double();
  if (trapped && live_mass <= 0.0) {
    // nothing sayable in the row; a trapped agent's default is to cry for help
    return resolve_action(ActionKind::SendHelp, agent, situation);
  }
  size_t pick = sample_index(weights, u);
  return resolve_action(row->actions[pick].first, agent, situation);
}

namespace {

Json pos_json(Position p) { return Json::array({p.x, p.y}); }

Event make_event(EventKind kind, int64_t tick, int actor) {
  Event e;
  e.tick = tick;
  e.kind = kind;
  e.actor = actor;
  return e;
}

Event failed(const ActionContext& ctx, int actor, ActionKind kind, const std::string& reason) {
  Event e = make_event(EventKind::ActionFailed, ctx.tick, actor);
  e.payload["action"] = to_string(kind);
  e.payload["error"] = "IllegalAction";
  e.payload["reason"] = reason;
  return e;
}

AgentState* find_agent(std::span<AgentState> agents, int id) {
  for (AgentState& a : agents)
    if (a.id == id) return &a;
  return nullptr;
}

// Trap, gate and exit consequences of arriving on a cell.
void arrival_effects(Maze& maze, AgentState& agent, ActionKind via, const ActionContext& ctx,
                     std::vector<Event>& events) {
  const Cell& cell = maze.at(agent.pos);
  if (cell.kind == CellKind::Gate) {
    agent.gates_entered += 1;
    Event e = make_event(EventKind::GateEntered, ctx.tick, agent.id);
    e.payload["action"] = to_string(via);
    e.payload["pos"] = pos_json(agent.pos);
    e.payload["total"] = agent.gates_entered;
    events.push_back(e);
  }
  if (cell.kind == CellKind::RedSquare && cell.red_active &&
      ctx.capability->score(agent.role, PurposeFunction::GatherTokens, Side::Performer) == 0) {
    agent.status = AgentStatus::Trapped;
    Event e = make_event(EventKind::Trapped, ctx.tick, agent.id);
    e.payload["pos"] = pos_json(agent.pos);
    events.push_back(e);
  }
  if (cell.kind == CellKind::Exit && agent.status != AgentStatus::Trapped) {
    agent.status = AgentStatus::Escaped;
    Event e = make_event(EventKind::Escaped, ctx.tick, agent.id);
    e.payload["pos"] = pos_json(agent.pos);
    events.push_back(e);
  }
}

Event moved_event(const ActionContext& ctx, const AgentState& agent, ActionKind via, Position from) {
  Event e = make_event(EventKind::Moved, ctx.tick, agent.id);
  e.payload["action"] = to_string(via);
  e.payload["from"] = pos_json(from);
  e.payload["to"] = pos_json(agent.pos);
  e.payload["heading"] = to_string(agent.heading);
  e.payload["moved"] = !(agent.pos == from);
  return e;
}

void move_agent(Maze& maze, AgentState& agent, Position to, Heading heading, ActionKind via,
                const ActionContext& ctx, std::vector<Event>& events) {
  Position from = agent.pos;
  agent.pos = to;
  agent.heading = heading;
  if (!(to == from)) {
    agent.last_move = {{from, to}};
    agent.last_move_tick = ctx.tick;
  }
  events.push_back(moved_event(ctx, agent, via, from));
  arrival_effects(maze, agent, via, ctx, events);
}

// First active red square on the actor's cell or 4-neighborhood, N/E/S/W order.
std::optional<Position> reachable_red(const Maze& maze, Position pos) {
  if (maze.active_red_at(pos)) return pos;
  for (Heading h : {Heading::North, Heading::East, Heading::South, Heading::West}) {
    Position n = step(pos, h);
    if (maze.active_red_at(n)) return n;
  }
  return std::nullopt;
}

// Deactivates a red square and frees every agent trapped on it.
Event deactivate_and_free(Maze& maze, std::span<AgentState> agents, int actor, Position cell,
                          ActionKind via, const ActionContext& ctx) {
  bool was_active = maze.active_red_at(cell);
  if (was_active) maze.set_cell(cell, Cell{CellKind::RedSquare, false});
  Json freed = Json::array();
  for (AgentState& a : agents) {
    if (a.status == AgentStatus::Trapped && a.pos == cell) {
      a.status = AgentStatus::Active;
      freed.push_back(a.id);
    }
  }
  Event e = make_event(EventKind::Released, ctx.tick, actor);
  e.payload["action"] = to_string(via);
  e.payload["pos"] = pos_json(cell);
  e.payload["freed"] = freed;
  e.payload["deactivated"] = was_active;
  return e;
}

}  // namespace

std::vector<Event> apply_action(Maze& maze, std::span<AgentState> agents, int actor_id,
                                const Action& action, const ActionContext& context) {
  std::vector<Event> events;
  AgentState* actor = find_agent(agents, actor_id);
  if (!actor || actor->status == AgentStatus::Escaped) return events;
  AgentState& agent = *actor;

  const int gather_score =
      context.capability->score(agent.role, PurposeFunction::GatherTokens, Side::Performer);
  const int help_score =
      context.capability->score(agent.role, PurposeFunction::HelpTeamMates, Side::Performer);

  switch (action.kind) {
    case ActionKind::MoveForward: {
      auto [to, heading] = wall_follow_step(maze, agent.pos, agent.heading, agent.hand);
      move_agent(maze, agent, to, heading, ActionKind::MoveForward, context, events);
      break;
    }
    case ActionKind::MoveBackward:
      // reverse in place; the hand rule takes over again next tick
      move_agent(maze, agent, agent.pos, reverse(agent.heading), ActionKind::MoveBackward, context,
                 events);
      break;
    case ActionKind::TurnLeft:
      move_agent(maze, agent, agent.pos, turn_left(agent.heading), ActionKind::TurnLeft, context,
                 events);
      break;
    case ActionKind::TurnRight:
      move_agent(maze, agent, agent.pos, turn_right(agent.heading), ActionKind::TurnRight, context,
                 events);
      break;
    case ActionKind::Enter: {
      Position ahead = step(agent.pos, agent.heading);
      if (!maze.in_bounds(ahead) || maze.at(ahead).kind != CellKind::Gate) {
        events.push_back(failed(context, actor_id, action.kind, "no gate ahead"));
        break;
      }
      move_agent(maze, agent, ahead, agent.heading, ActionKind::Enter, context, events);
      break;
    }
    case ActionKind::Collect: {
      if (gather_score == 0) {
        events.push_back(failed(context, actor_id, action.kind, "role cannot gather tokens"));
        break;
      }
      auto cell = reachable_red(maze, agent.pos);
      if (!cell) {
        events.push_back(failed(context, actor_id, action.kind, "no active red square in reach"));
        break;
      }
      // collection deactivates the square but does not free a trapped occupant
      maze.set_cell(*cell, Cell{CellKind::RedSquare, false});
      agent.tokens_collected += 1;
      Event e = make_event(EventKind::Collected, context.tick, actor_id);
      e.payload["action"] = to_string(action.kind);
      e.payload["pos"] = pos_json(*cell);
      e.payload["total"] = agent.tokens_collected;
      events.push_back(e);
      break;
    }
    case ActionKind::ChangeColour: {
      if (help_score == 0) {
        events.push_back(failed(context, actor_id, action.kind, "role cannot change colours"));
        break;
      }
      std::optional<Position> cell = action.pos;
      if (cell && !(maze.active_red_at(*cell) &&
                    std::abs(cell->x - agent.pos.x) + std::abs(cell->y - agent.pos.y) <= 1))
        cell.reset();
      if (!cell) cell = reachable_red(maze, agent.pos);
      if (!cell) {
        events.push_back(failed(context, actor_id, action.kind, "no active red square in reach"));
        break;
      }
      events.push_back(
          deactivate_and_free(maze, agents, actor_id, *cell, ActionKind::ChangeColour, context));
      break;
    }
    case ActionKind::Release: {
      if (help_score == 0) {
        events.push_back(failed(context, actor_id, action.kind, "role cannot release team mates"));
        break;
      }
      const AgentState* target = nullptr;
      if (action.target) {
        const AgentState* t = find_agent(agents, *action.target);
        if (t && t->status == AgentStatus::Trapped &&
            std::abs(t->pos.x - agent.pos.x) + std::abs(t->pos.y - agent.pos.y) <= 1)
          target = t;
      }
      if (!target) {
        for (const AgentState& a : agents) {
          if (a.id == actor_id || a.status != AgentStatus::Trapped) continue;
          if (std::abs(a.pos.x - agent.pos.x) + std::abs(a.pos.y - agent.pos.y) > 1) continue;
          if (!target || a.id < target->id) target = &a;
        }
      }
      if (!target) {
        events.push_back(failed(context, actor_id, action.kind, "no adjacent trapped agent"));
        break;
      }
      events.push_back(
          deactivate_and_free(maze, agents, actor_id, target->pos, ActionKind::Release, context));
      break;
    }
    case ActionKind::Follow: {
      const AgentState* target = nullptr;
      if (action.target) target = find_agent(agents, *action.target);
      if (!target) {
        for (const AgentState& a : agents)
          if (a.id != actor_id && a.status != AgentStatus::Escaped && !target) target = &a;
      }
      if (!target || target->id == actor_id) {
        events.push_back(failed(context, actor_id, action.kind, "no one to follow"));
        break;
      }
      // a trapped target is approached, not joined on its square
      auto hold_short = [&](Position dest) {
        return target->status == AgentStatus::Trapped && dest == target->pos;
      };
      // copy the target's most recent displacement while it is actually moving
      if (target->last_move && target->last_move_tick >= context.tick - 1) {
        auto [from, to] = *target->last_move;
        Position dest{agent.pos.x + (to.x - from.x), agent.pos.y + (to.y - from.y)};
        if (maze.traversable_at(dest) && !hold_short(dest)) {
          move_agent(maze, agent, dest, agent.heading, ActionKind::Follow, context, events);
          break;
        }
      }
      if (agent.pos == target->pos) {
        // already sharing the cell; hold formation
        move_agent(maze, agent, agent.pos, agent.heading, ActionKind::Follow, context, events);
        break;
      }
      // blocked copy (corners) or stationary target: close up along the maze
      auto catch_up = maze.bfs_next_step(agent.pos, target->pos);
      if (!catch_up) {
        events.push_back(failed(context, actor_id, action.kind, "cannot reach follow target"));
        break;
      }
      if (hold_short(*catch_up)) {
        move_agent(maze, agent, agent.pos, agent.heading, ActionKind::Follow, context, events);
        break;
      }
      move_agent(maze, agent, *catch_up, agent.heading, ActionKind::Follow, context, events);
      break;
    }
    case ActionKind::Stop: {
      agent.status = AgentStatus::Stopped;
      move_agent(maze, agent, agent.pos, agent.heading, ActionKind::Stop, context, events);
      break;
    }
    case ActionKind::SendFollowMe:
    case ActionKind::SendHelp:
    case ActionKind::SendStopAll:
    case ActionKind::SendTokenSighting:
    case ActionKind::SendStopped: {
      Message m;
      m.sender = actor_id;
      m.pos = agent.pos;
      switch (action.kind) {
        case ActionKind::SendFollowMe: m.kind = MessageKind::FollowMe; break;
        case ActionKind::SendHelp: m.kind = MessageKind::Help; break;
        case ActionKind::SendStopAll: m.kind = MessageKind::StopAll; break;
        case ActionKind::SendStopped: m.kind = MessageKind::Stopped; break;
        case ActionKind::SendTokenSighting: {
          if (!action.pos) {
            events.push_back(failed(context, actor_id, action.kind, "no token visible to report"));
            return events;
          }
          m.kind = MessageKind::TokenSighting;
          m.pos = *action.pos;
          break;
        }
        default: break;
      }
      Event e = make_event(EventKind::MessageSent, context.tick, actor_id);
      e.payload["action"] = to_string(action.kind);
      e.payload["message"] = to_json(m);
      events.push_back(e);
      break;
    }
  }
  return events;
}

}  // namespace trustmaze
