#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace trustmaze {

enum class Role : uint8_t { Leader, Collector, GateUser, Neutral };

inline constexpr std::array<Role, 4> kAllRoles = {Role::Leader, Role::Collector,
                                                  Role::GateUser, Role::Neutral};

// The four purpose-related functions of the mission model. Allocation,
// capability scoring and contracts all key on these.
enum class PurposeFunction : uint8_t {
  MoveThroughMaze,
  HelpTeamMates,
  GatherTokens,
  Communicate,
};

inline constexpr std::array<PurposeFunction, 4> kAllPurposeFunctions = {
    PurposeFunction::MoveThroughMaze, PurposeFunction::HelpTeamMates,
    PurposeFunction::GatherTokens, PurposeFunction::Communicate};

// The nine object-related functions (the activity rows of the mission model).
enum class ObjectFunction : uint8_t {
  Forward,
  Enter,
  Turn,
  Collect,
  Stop,
  Change,
  Release,
  Follow,
  Message,
};

inline constexpr std::array<ObjectFunction, 9> kAllObjectFunctions = {
    ObjectFunction::Forward, ObjectFunction::Enter,  ObjectFunction::Turn,
    ObjectFunction::Collect, ObjectFunction::Stop,   ObjectFunction::Change,
    ObjectFunction::Release, ObjectFunction::Follow, ObjectFunction::Message};

// Concrete per-tick actions an agent can take. The send_* entries are the
// Send(message) action specialized by message kind so CPT rows can name them.
enum class ActionKind : uint8_t {
  MoveForward,
  MoveBackward,
  TurnLeft,
  TurnRight,
  Enter,
  Collect,
  ChangeColour,
  Release,
  Follow,
  Stop,
  SendFollowMe,
  SendHelp,
  SendStopAll,
  SendTokenSighting,
  SendStopped,
};

enum class MessageKind : uint8_t { FollowMe, Help, StopAll, TokenSighting, Stopped };

bool is_send(ActionKind kind);
ObjectFunction object_function_of(ActionKind kind);

const char* to_string(Role role);
const char* to_string(PurposeFunction fn);
const char* to_string(ObjectFunction fn);
const char* to_string(ActionKind kind);
const char* to_string(MessageKind kind);

// Display labels as they appear in the mission model ("move through maze" etc).
const char* label_of(PurposeFunction fn);
const char* label_of(Role role);

std::optional<Role> role_from_string(std::string_view s);
std::optional<PurposeFunction> purpose_function_from_string(std::string_view s);
std::optional<ActionKind> action_from_string(std::string_view s);

}  // namespace trustmaze
