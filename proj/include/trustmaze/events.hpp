#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "trustmaze/core.hpp"
#include "trustmaze/world.hpp"

namespace trustmaze {

using Json = nlohmann::ordered_json;

enum class EventKind : uint8_t {
  Moved,
  Collected,
  Trapped,
  Released,
  GateEntered,
  MessageSent,
  MessageDelivered,
  ContractProposed,
  ContractAccepted,
  ContractRejected,
  ContractSettled,
  Violation,
  TrustUpdated,
  Escaped,
  ActionFailed,
};

const char* to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view s);

// One trace record. Payload keys are kind-specific; payload construction
// order is fixed per kind so serialized traces are byte-stable.
struct Event {
  uint64_t seq = 0;
  int64_t tick = 0;
  EventKind kind = EventKind::Moved;
  int actor = -1;  // agent id, -1 for engine/system
  Json payload = Json::object();
};

// Line format: {"seq":..,"tick":..,"kind":..,"actor":.., <payload fields>}
std::string serialize_event(const Event& event);
Event parse_event(std::string_view line);

struct Message {
  MessageKind kind = MessageKind::Help;
  int sender = -1;
  Position pos{};  // target of interest for Help / TokenSighting

  bool operator==(const Message&) const = default;
};

Json to_json(const Message& m);
Message message_from_json(const Json& j);
std::optional<MessageKind> message_kind_from_string(std::string_view s);

}  // namespace trustmaze
