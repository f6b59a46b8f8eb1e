#include "trustmaze/events.hpp"

#include "trustmaze/error.hpp"

namespace trustmaze {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Moved: return "Moved";
    case EventKind::Collected: return "Collected";
    case EventKind::Trapped: return "Trapped";
    case EventKind::Released: return "Released";
    case EventKind::GateEntered: return "GateEntered";
    case EventKind::MessageSent: return "MessageSent";
    case EventKind::MessageDelivered: return "MessageDelivered";
    case EventKind::ContractProposed: return "ContractProposed";
    case EventKind::ContractAccepted: return "ContractAccepted";
    case EventKind::ContractRejected: return "ContractRejected";
    case EventKind::ContractSettled: return "ContractSettled";
    case EventKind::Violation: return "Violation";
    case EventKind::TrustUpdated: return "TrustUpdated";
    case EventKind::Escaped: return "Escaped";
    case EventKind::ActionFailed: return "ActionFailed";
  }
  return "?";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(EventKind::ActionFailed); ++i) {
    auto kind = static_cast<EventKind>(i);
    if (s == to_string(kind)) return kind;
  }
  return std::nullopt;
}

std::string serialize_event(const Event& event) {
  Json j = Json::object();
  j["seq"] = event.seq;
  j["tick"] = event.tick;
  j["kind"] = to_string(event.kind);
  j["actor"] = event.actor;
  for (const auto& [key, value] : event.payload.items()) j[key] = value;
  return j.dump();
}

Event parse_event(std::string_view line) {
  Json j = Json::parse(line);
  Event event;
  event.seq = j.at("seq").get<uint64_t>();
  event.tick = j.at("tick").get<int64_t>();
  auto kind = event_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw SimError(ErrorCode::InvalidState, "unknown event kind in trace line");
  event.kind = *kind;
  event.actor = j.at("actor").get<int>();
  for (const auto& [key, value] : j.items())
    if (key != "seq" && key != "tick" && key != "kind" && key != "actor")
      event.payload[key] = value;
  return event;
}

Json to_json(const Message& m) {
  Json j = Json::object();
  j["kind"] = to_string(m.kind);
  j["sender"] = m.sender;
  j["pos"] = {m.pos.x, m.pos.y};
  return j;
}

std::optional<MessageKind> message_kind_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(MessageKind::Stopped); ++i) {
    auto kind = static_cast<MessageKind>(i);
    if (s == to_string(kind)) return kind;
  }
  return std::nullopt;
}

Message message_from_json(const Json& j) {
  Message m;
  auto kind = message_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw SimError(ErrorCode::InvalidState, "unknown message kind");
  m.kind = *kind;
  m.sender = j.at("sender").get<int>();
  m.pos = {j.at("pos")[0].get<int>(), j.at("pos")[1].get<int>()};
  return m;
}

}  // namespace trustmaze
