#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "trustmaze/engine.hpp"

namespace trustmaze::cli {

// Exit codes: 0 ok, 2 invalid scenario, 3 runtime failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidScenario = 2;
inline constexpr int kExitRuntime = 3;

struct SimulateOptions {
  std::filesystem::path scenario_path;
  std::optional<uint64_t> seed;
  std::optional<int64_t> max_ticks;
  std::optional<int> plot_stride;
  std::filesystem::path out_dir = ".";
  bool quiet = false;
};

struct BatchOptions {
  std::filesystem::path scenario_path;
  uint64_t seed_begin = 1;
  uint64_t seed_end = 1;  // inclusive
  std::optional<int64_t> max_ticks;
  std::optional<int> plot_stride;
  std::filesystem::path out_dir = ".";
  bool quiet = false;
};

int cmd_validate(const std::filesystem::path& scenario_path, std::ostream& out);
int cmd_simulate(const SimulateOptions& options, std::ostream& out);
int cmd_batch(const BatchOptions& options, std::ostream& out);

// "A..B" inclusive; a single number means a one-seed range.
std::optional<std::pair<uint64_t, uint64_t>> parse_seed_range(const std::string& text);

// Serialization shared with the test suites.
std::string trace_to_jsonl(std::span<const Event> trace);
Json metrics_to_json(const RunResult& result, uint64_t seed);
std::string trajectories_to_csv(std::span<const TrajectoryRow> rows);

}  // namespace trustmaze::cli
