#include "trustmaze/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "trustmaze/error.hpp"
#include "trustmaze/scenario.hpp"

namespace trustmaze::cli {

namespace {

bool debug_log() {
  const char* level = std::getenv("TRUSTMAZE_LOG");
  return level && std::string_view(level) == "debug";
}

// shortest round-trip representation, no locale surprises
std::string num(double x) { return Json(x).dump(); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimError(ErrorCode::InvalidState, "cannot write '" + path.string() + "'");
  out << content;
}

Scenario load_with_overrides(const std::filesystem::path& path, std::optional<uint64_t> seed,
                             std::optional<int64_t> max_ticks, std::optional<int> plot_stride) {
  Scenario scenario = load_scenario_file(path);
  if (seed) scenario.seed = *seed;
  if (max_ticks) scenario.max_ticks = *max_ticks;
  if (plot_stride) scenario.plot_stride = *plot_stride;
  return scenario;
}

struct RunFiles {
  std::string trace;
  std::string metrics;
  std::string trust;
};

RunFiles render_outputs(const RunResult& result, uint64_t seed) {
  RunFiles files;
  files.trace = trace_to_jsonl(result.trace);
  files.metrics = metrics_to_json(result, seed).dump(2) + "\n";
  files.trust = trajectories_to_csv(result.trajectories);
  return files;
}

std::string summary_line(const RunResult& result, uint64_t seed) {
  std::string escape = result.metrics.ticks_to_all_escape
                           ? std::to_string(*result.metrics.ticks_to_all_escape)
                           : std::string("timeout");
  return "seed " + std::to_string(seed) + ": ticks_to_all_escape=" + escape +
         " tokens=" + std::to_string(result.metrics.tokens_collected) +
         " gates=" + std::to_string(result.metrics.gates_entered) +
         " releases=" + std::to_string(result.metrics.releases) +
         " allocation_switches=" + std::to_string(result.metrics.allocation_switches) +
         " events=" + std::to_string(result.trace.size());
}

}  // namespace

std::string trace_to_jsonl(std::span<const Event> trace) {
  std::string out;
  for (const Event& e : trace) {
    out += serialize_event(e);
    out += '\n';
  }
  return out;
}

Json metrics_to_json(const RunResult& result, uint64_t seed) {
  Json j = Json::object();
  j["schema_version"] = 1;
  j["seed"] = seed;
  if (result.metrics.ticks_to_all_escape)
    j["ticks_to_all_escape"] = *result.metrics.ticks_to_all_escape;
  else
    j["ticks_to_all_escape"] = nullptr;
  j["timeout"] = result.metrics.timeout;
  j["tokens_collected"] = result.metrics.tokens_collected;
  j["gates_entered"] = result.metrics.gates_entered;
  j["releases"] = result.metrics.releases;
  j["allocation_switches"] = result.metrics.allocation_switches;
  j["initial_tokens"] = result.initial_tokens;
  j["events"] = result.trace.size();
  return j;
}

std::string trajectories_to_csv(std::span<const TrajectoryRow> rows) {
  std::string out = "tick,observer,target,capability,predictability,integrity,composite,rung\n";
  for (const TrajectoryRow& r : rows) {
    out += std::to_string(r.tick) + ',' + std::to_string(r.observer) + ',' +
           std::to_string(r.target) + ',' + num(r.capability) + ',' + num(r.predictability) +
           ',' + num(r.integrity) + ',' + num(r.composite) + ',' + std::to_string(r.rung) + '\n';
  }
  return out;
}

std::optional<std::pair<uint64_t, uint64_t>> parse_seed_range(const std::string& text) {
  auto parse_u64 = [](const std::string& s) -> std::optional<uint64_t> {
    if (s.empty()) return std::nullopt;
    uint64_t value = 0;
    for (char c : s) {
      if (c < '0' || c > '9') return std::nullopt;
      value = value * 10 + static_cast<uint64_t>(c - '0');
    }
    return value;
  };
  size_t dots = text.find("..");
  if (dots == std::string::npos) {
    auto v = parse_u64(text);
    if (!v) return std::nullopt;
    return std::make_pair(*v, *v);
  }
  auto lo = parse_u64(text.substr(0, dots));
  auto hi = parse_u64(text.substr(dots + 2));
  if (!lo || !hi || *lo > *hi) return std::nullopt;
  return std::make_pair(*lo, *hi);
}

int cmd_validate(const std::filesystem::path& scenario_path, std::ostream& out) {
  std::ifstream in(scenario_path);
  if (!in) {
    out << "error: cannot read '" << scenario_path.string() << "'\n";
    return kExitInvalidScenario;
  }
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    out << "error: not valid JSON: " << e.what() << "\n";
    return kExitInvalidScenario;
  }
  ScenarioParse parsed = try_parse_scenario(doc, scenario_path.parent_path());
  if (!parsed.scenario) {
    for (const std::string& d : parsed.diagnostics) out << "error: " << d << "\n";
    return kExitInvalidScenario;
  }
  out << "ok: " << scenario_path.filename().string() << "\n";
  return kExitOk;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out) {
  Scenario scenario;
  try {
    scenario =
        load_with_overrides(options.scenario_path, options.seed, options.max_ticks,
                            options.plot_stride);
  } catch (const SimError& e) {
    out << "error: " << e.what() << "\n";
    return kExitInvalidScenario;
  }
  try {
    Engine engine(scenario);
    while (!engine.terminated()) {
      auto events = engine.tick();
      if (debug_log())
        std::cerr << "tick " << engine.current_tick() << ": " << events.size() << " events\n";
    }
    RunResult result = engine.finish();
    std::filesystem::create_directories(options.out_dir);
    RunFiles files = render_outputs(result, scenario.seed);
    write_file(options.out_dir / "trace.jsonl", files.trace);
    write_file(options.out_dir / "metrics.json", files.metrics);
    write_file(options.out_dir / "trust.csv", files.trust);
    if (!options.quiet) out << summary_line(result, scenario.seed) << "\n";
    return kExitOk;
  } catch (const SimError& e) {
    out << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidScenario ? kExitInvalidScenario : kExitRuntime;
  }
}

int cmd_batch(const BatchOptions& options, std::ostream& out) {
  Scenario base;
  try {
    base = load_with_overrides(options.scenario_path, std::nullopt, options.max_ticks,
                               options.plot_stride);
  } catch (const SimError& e) {
    out << "error: " << e.what() << "\n";
    return kExitInvalidScenario;
  }
  std::filesystem::create_directories(options.out_dir);

  std::string aggregate =
      "seed,ticks_to_all_escape,timeout,tokens_collected,gates_entered,releases,"
      "allocation_switches,error\n";
  bool any_failed = false;
  for (uint64_t seed = options.seed_begin; seed <= options.seed_end; ++seed) {
    Scenario scenario = base;
    scenario.seed = seed;
    std::string tag = "seed" + std::to_string(seed);
    try {
      RunResult result = run(scenario);
      RunFiles files = render_outputs(result, seed);
      write_file(options.out_dir / ("trace_" + tag + ".jsonl"), files.trace);
      write_file(options.out_dir / ("metrics_" + tag + ".json"), files.metrics);
      write_file(options.out_dir / ("trust_" + tag + ".csv"), files.trust);
      aggregate += std::to_string(seed) + ',' +
                   (result.metrics.ticks_to_all_escape
                        ? std::to_string(*result.metrics.ticks_to_all_escape)
                        : std::string()) +
                   ',' + (result.metrics.timeout ? "1" : "0") + ',' +
                   std::to_string(result.metrics.tokens_collected) + ',' +
                   std::to_string(result.metrics.gates_entered) + ',' +
                   std::to_string(result.metrics.releases) + ',' +
                   std::to_string(result.metrics.allocation_switches) + ",\n";
      if (!options.quiet) out << summary_line(result, seed) << "\n";
    } catch (const SimError& e) {
      // record and keep going; one bad seed must not sink the batch
      any_failed = true;
      aggregate += std::to_string(seed) + ",,,,,,," + std::string(e.what()) + "\n";
      if (!options.quiet) out << "seed " << seed << ": error: " << e.what() << "\n";
    }
    if (seed == UINT64_MAX) break;
  }
  write_file(options.out_dir / "aggregate.csv", aggregate);
  return any_failed ? kExitRuntime : kExitOk;
}

}  // namespace trustmaze::cli
