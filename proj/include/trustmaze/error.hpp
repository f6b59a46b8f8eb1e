#pragma once

#include <stdexcept>
#include <string>

namespace trustmaze {

enum class ErrorCode {
  RaggedRows,
  NoStart,
  NoExit,
  UnknownChar,
  TooSmall,
  PlacementOverflow,
  OutOfBounds,
  UnknownFunction,
  UnknownObservation,
  NoTranslationNeeded,
  MissingRow,
  IllegalAction,
  BadWeights,
  NoCapableCandidate,
  InvalidState,
  InvalidScenario,
};

const char* to_string(ErrorCode code);

class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace trustmaze
