#include "trustmaze/core.hpp"

#include "trustmaze/error.hpp"

namespace trustmaze {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NoStart: return "NoStart";
    case ErrorCode::NoExit: return "NoExit";
    case ErrorCode::UnknownChar: return "UnknownChar";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::PlacementOverflow: return "PlacementOverflow";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::UnknownObservation: return "UnknownObservation";
    case ErrorCode::NoTranslationNeeded: return "NoTranslationNeeded";
    case ErrorCode::MissingRow: return "MissingRow";
    case ErrorCode::IllegalAction: return "IllegalAction";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::NoCapableCandidate: return "NoCapableCandidate";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
  }
  return "UnknownError";
}

bool is_send(ActionKind kind) {
  switch (kind) {
    case ActionKind::SendFollowMe:
    case ActionKind::SendHelp:
    case ActionKind::SendStopAll:
    case ActionKind::SendTokenSighting:
    case ActionKind::SendStopped:
      return true;
    default:
      return false;
  }
}

ObjectFunction object_function_of(ActionKind kind) {
  switch (kind) {
    case ActionKind::MoveForward: return ObjectFunction::Forward;
    case ActionKind::MoveBackward: return ObjectFunction::Turn;  // reverses heading in place
    case ActionKind::TurnLeft: return ObjectFunction::Turn;
    case ActionKind::TurnRight: return ObjectFunction::Turn;
    case ActionKind::Enter: return ObjectFunction::Enter;
    case ActionKind::Collect: return ObjectFunction::Collect;
    case ActionKind::ChangeColour: return ObjectFunction::Change;
    case ActionKind::Release: return ObjectFunction::Release;
    case ActionKind::Follow: return ObjectFunction::Follow;
    case ActionKind::Stop: return ObjectFunction::Stop;
    case ActionKind::SendFollowMe:
    case ActionKind::SendHelp:
    case ActionKind::SendStopAll:
    case ActionKind::SendTokenSighting:
    case ActionKind::SendStopped:
      return ObjectFunction::Message;
  }
  return ObjectFunction::Forward;
}

const char* to_string(Role role) {
  switch (role) {
    case Role::Leader: return "leader";
    case Role::Collector: return "collector";
    case Role::GateUser: return "gate_user";
    case Role::Neutral: return "neutral";
  }
  return "?";
}

const char* to_string(PurposeFunction fn) {
  switch (fn) {
    case PurposeFunction::MoveThroughMaze: return "move_through_maze";
    case PurposeFunction::HelpTeamMates: return "help_team_mates";
    case PurposeFunction::GatherTokens: return "gather_tokens";
    case PurposeFunction::Communicate: return "communicate";
  }
  return "?";
}

const char* to_string(ObjectFunction fn) {
  switch (fn) {
    case ObjectFunction::Forward: return "forward";
    case ObjectFunction::Enter: return "enter";
    case ObjectFunction::Turn: return "turn";
    case ObjectFunction::Collect: return "collect";
    case ObjectFunction::Stop: return "stop";
    case ObjectFunction::Change: return "change";
    case ObjectFunction::Release: return "release";
    case ObjectFunction::Follow: return "follow";
    case ObjectFunction::Message: return "message";
  }
  return "?";
}

const char* to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::MoveForward: return "forward";
    case ActionKind::MoveBackward: return "backward";
    case ActionKind::TurnLeft: return "turn_left";
    case ActionKind::TurnRight: return "turn_right";
    case ActionKind::Enter: return "enter";
    case ActionKind::Collect: return "collect";
    case ActionKind::ChangeColour: return "change_colour";
    case ActionKind::Release: return "release";
    case ActionKind::Follow: return "follow";
    case ActionKind::Stop: return "stop";
    case ActionKind::SendFollowMe: return "send_follow_me";
    case ActionKind::SendHelp: return "send_help";
    case ActionKind::SendStopAll: return "send_stop_all";
    case ActionKind::SendTokenSighting: return "send_token_sighting";
    case ActionKind::SendStopped: return "send_stopped";
  }
  return "?";
}

const char* to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::FollowMe: return "follow_me";
    case MessageKind::Help: return "help";
    case MessageKind::StopAll: return "stop_all";
    case MessageKind::TokenSighting: return "token_sighting";
    case MessageKind::Stopped: return "stopped";
  }
  return "?";
}

const char* label_of(PurposeFunction fn) {
  switch (fn) {
    case PurposeFunction::MoveThroughMaze: return "move through maze";
    case PurposeFunction::HelpTeamMates: return "help team mates";
    case PurposeFunction::GatherTokens: return "gather tokens";
    case PurposeFunction::Communicate: return "communicate";
  }
  return "?";
}

const char* label_of(Role role) {
  switch (role) {
    case Role::Leader: return "Leader";
    case Role::Collector: return "Collector";
    case Role::GateUser: return "Gate-user";
    case Role::Neutral: return "Neutral";
  }
  return "?";
}

std::optional<Role> role_from_string(std::string_view s) {
  for (Role r : kAllRoles)
    if (s == to_string(r)) return r;
  return std::nullopt;
}

std::optional<PurposeFunction> purpose_function_from_string(std::string_view s) {
  for (PurposeFunction f : kAllPurposeFunctions)
    if (s == to_string(f)) return f;
  return std::nullopt;
}

std::optional<ActionKind> action_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(ActionKind::SendStopped); ++i) {
    auto kind = static_cast<ActionKind>(i);
    if (s == to_string(kind)) return kind;
  }
  return std::nullopt;
}

}  // namespace trustmaze
