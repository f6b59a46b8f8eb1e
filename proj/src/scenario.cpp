#include "trustmaze/scenario.hpp"

#include <fstream>
#include <sstream>

#include "trustmaze/error.hpp"

namespace trustmaze {

namespace {

class Parser {
 public:
  Parser(const Json& doc, const std::filesystem::path& base_dir)
      : doc_(doc), base_dir_(base_dir) {}

  ScenarioParse run() {
    if (!doc_.is_object()) {
      diag("scenario", "", "document must be a JSON object");
      return {std::nullopt, diags_};
    }
    expect_keys(doc_, "scenario",
                {"schema_version", "maze", "agents", "mission", "trust", "allocation", "engine",
                 "script"});
    if (!doc_.contains("schema_version")) {
      diag("scenario", "schema_version", "required");
    } else {
      get_int(doc_, "scenario", "schema_version", s_.schema_version);
    }
    parse_engine();  // first: the run seed feeds maze generation defaults
    parse_maze();
    parse_mission();  // before agents so goal weights can be checked later
    parse_agents();
    parse_trust();
    parse_allocation();
    parse_script();
    if (!diags_.empty()) return {std::nullopt, diags_};

    for (const std::string& d : scenario_diagnostics(s_)) diags_.push_back(d);
    if (!diags_.empty()) return {std::nullopt, diags_};
    return {std::move(s_), {}};
  }

 private:
  void diag(const std::string& section, const std::string& key, const std::string& reason) {
    diags_.push_back(key.empty() ? section + ": " + reason : section + "." + key + ": " + reason);
  }

  void expect_keys(const Json& obj, const std::string& section,
                   std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      bool known = false;
      for (const char* a : allowed)
        if (key == a) known = true;
      if (!known) diag(section, key, "unknown key");
    }
  }

  bool get_int(const Json& obj, const std::string& section, const std::string& key, int& out) {
    if (!obj.contains(key)) return false;
    if (!obj[key].is_number_integer()) {
      diag(section, key, "must be an integer");
      return false;
    }
    out = obj[key].get<int>();
    return true;
  }

  bool get_double(const Json& obj, const std::string& section, const std::string& key,
                  double& out) {
    if (!obj.contains(key)) return false;
    if (!obj[key].is_number()) {
      diag(section, key, "must be a number");
      return false;
    }
    out = obj[key].get<double>();
    return true;
  }

  bool get_bool(const Json& obj, const std::string& section, const std::string& key, bool& out) {
    if (!obj.contains(key)) return false;
    if (!obj[key].is_boolean()) {
      diag(section, key, "must be a boolean");
      return false;
    }
    out = obj[key].get<bool>();
    return true;
  }

  std::optional<std::string> get_string(const Json& obj, const std::string& section,
                                        const std::string& key) {
    if (!obj.contains(key)) return std::nullopt;
    if (!obj[key].is_string()) {
      diag(section, key, "must be a string");
      return std::nullopt;
    }
    return obj[key].get<std::string>();
  }

  std::optional<Position> get_position(const Json& value, const std::string& section,
                                       const std::string& key) {
    if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() ||
        !value[1].is_number_integer()) {
      diag(section, key, "must be [x, y]");
      return std::nullopt;
    }
    return Position{value[0].get<int>(), value[1].get<int>()};
  }

  void parse_engine() {
    if (!doc_.contains("engine")) return;
    const Json& e = doc_["engine"];
    if (!e.is_object()) {
      diag("engine", "", "must be an object");
      return;
    }
    expect_keys(e, "engine",
                {"seed", "max_ticks", "visibility_radius", "time_bucket", "plot_stride"});
    if (e.contains("seed")) {
      if (!e["seed"].is_number_unsigned() && !e["seed"].is_number_integer())
        diag("engine", "seed", "must be an integer");
      else
        s_.seed = e["seed"].get<uint64_t>();
    }
    if (e.contains("max_ticks")) {
      if (e["max_ticks"].is_null()) {
        s_.max_ticks.reset();
      } else if (!e["max_ticks"].is_number_integer()) {
        diag("engine", "max_ticks", "must be an integer or null");
      } else {
        s_.max_ticks = e["max_ticks"].get<int64_t>();
      }
    }
    get_int(e, "engine", "visibility_radius", s_.perception.visibility_radius);
    get_int(e, "engine", "time_bucket", s_.perception.time_bucket_width);
    get_int(e, "engine", "plot_stride", s_.plot_stride);
  }

  void parse_maze() {
    if (!doc_.contains("maze")) {
      diag("maze", "", "section required");
      return;
    }
    const Json& m = doc_["maze"];
    if (!m.is_object()) {
      diag("maze", "", "must be an object");
      return;
    }
    expect_keys(m, "maze", {"file", "text", "generate"});
    int sources = m.contains("file") + m.contains("text") + m.contains("generate");
    if (sources != 1) {
      diag("maze", "", "exactly one of file, text, generate required");
      return;
    }
    if (auto file = get_string(m, "maze", "file")) {
      std::ifstream in(base_dir_ / *file);
      if (!in) {
        diag("maze", "file", "cannot read '" + *file + "'");
        return;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      s_.maze.text = buf.str();
    } else if (auto text = get_string(m, "maze", "text")) {
      s_.maze.text = *text;
    } else if (m.contains("generate")) {
      const Json& g = m["generate"];
      if (!g.is_object()) {
        diag("maze", "generate", "must be an object");
        return;
      }
      expect_keys(g, "maze.generate", {"width", "height", "tokens", "gates", "seed"});
      MazeGenerateSpec spec;
      get_int(g, "maze.generate", "width", spec.width);
      get_int(g, "maze.generate", "height", spec.height);
      get_int(g, "maze.generate", "tokens", spec.tokens);
      get_int(g, "maze.generate", "gates", spec.gates);
      if (g.contains("seed")) {
        if (!g["seed"].is_number_unsigned() && !g["seed"].is_number_integer())
          diag("maze.generate", "seed", "must be an integer");
        else
          spec.seed = g["seed"].get<uint64_t>();
      }
      s_.maze.generate = spec;
    }
  }

  void parse_mission() {
    if (!doc_.contains("mission")) return;
    const Json& m = doc_["mission"];
    if (!m.is_object()) {
      diag("mission", "", "must be an object");
      return;
    }
    expect_keys(m, "mission",
                {"vpms", "team_goal", "individual_goals", "soca", "hierarchy", "policies"});

    if (m.contains("vpms")) {
      if (!m["vpms"].is_array()) {
        diag("mission", "vpms", "must be an array");
      } else {
        for (const Json& v : m["vpms"]) {
          expect_keys(v, "mission.vpms", {"name", "label", "direction", "hardness", "metric"});
          auto name = get_string(v, "mission.vpms", "name");
          if (!name) {
            diag("mission", "vpms", "entry without a name");
            continue;
          }
          ValuePriorityMeasure* existing = nullptr;
          for (auto& known : s_.mission.vpms)
            if (known.name == *name) existing = &known;
          ValuePriorityMeasure vpm;
          if (existing) vpm = *existing;
          vpm.name = *name;
          if (auto label = get_string(v, "mission.vpms", "label")) vpm.label = *label;
          if (vpm.label.empty()) vpm.label = *name;
          if (auto d = get_string(v, "mission.vpms", "direction")) {
            auto parsed = direction_from_string(*d);
            if (!parsed)
              diag("mission.vpms", *name, "unknown direction '" + *d + "'");
            else
              vpm.direction = *parsed;
          }
          if (auto h = get_string(v, "mission.vpms", "hardness")) {
            auto parsed = hardness_from_string(*h);
            if (!parsed)
              diag("mission.vpms", *name, "unknown hardness '" + *h + "'");
            else
              vpm.hardness = *parsed;
          }
          if (auto mt = get_string(v, "mission.vpms", "metric")) {
            auto parsed = metric_from_string(*mt);
            if (!parsed)
              diag("mission.vpms", *name, "unknown metric '" + *mt + "'");
            else
              vpm.metric = *parsed;
          }
          if (existing) {
            *existing = vpm;
          } else {
            s_.mission.vpms.push_back(vpm);
            s_.mission.hierarchy.add_node(
                {vpm.name, HierarchyLevel::ValuePriorityMeasure, vpm.label});
            s_.mission.hierarchy.add_edge("solve_the_maze", vpm.name);
          }
        }
      }
    }

    if (auto goal = get_string(m, "mission", "team_goal")) s_.mission.goals.team_goal = *goal;

    if (m.contains("individual_goals")) {
      const Json& goals = m["individual_goals"];
      if (!goals.is_object()) {
        diag("mission", "individual_goals", "must be an object keyed by role");
      } else {
        for (const auto& [role_name, g] : goals.items()) {
          auto role = role_from_string(role_name);
          if (!role) {
            diag("mission.individual_goals", role_name, "unknown role");
            continue;
          }
          expect_keys(g, "mission.individual_goals", {"label", "selfish"});
          IndividualGoal goal = s_.mission.goals.individual_goals[*role];
          if (auto label = get_string(g, "mission.individual_goals", "label")) goal.label = *label;
          get_bool(g, "mission.individual_goals", "selfish", goal.selfish);
          s_.mission.goals.individual_goals[*role] = goal;
        }
      }
    }

    if (m.contains("soca")) {
      const Json& soca = m["soca"];
      if (!soca.is_object()) {
        diag("mission", "soca", "must be an object keyed by role");
      } else {
        for (const auto& [role_name, fns] : soca.items()) {
          auto role = role_from_string(role_name);
          if (!role) {
            diag("mission.soca", role_name, "unknown role");
            continue;
          }
          if (!fns.is_array()) {
            diag("mission.soca", role_name, "must be an array of function ids");
            continue;
          }
          std::set<PurposeFunction> allocated;
          for (const Json& f : fns) {
            auto fn = f.is_string() ? purpose_function_from_string(f.get<std::string>())
                                    : std::nullopt;
            if (!fn) {
              diag("mission.soca", role_name, "unknown function '" + f.dump() + "'");
              continue;
            }
            allocated.insert(*fn);
          }
          for (auto& entry : s_.mission.soca.entries)
            if (entry.role == *role) entry.allocated = allocated.count(entry.function) > 0;
        }
      }
    }

    if (m.contains("hierarchy")) {
      const Json& h = m["hierarchy"];
      expect_keys(h, "mission.hierarchy", {"add_nodes", "add_edges"});
      if (h.contains("add_nodes")) {
        for (const Json& n : h["add_nodes"]) {
          expect_keys(n, "mission.hierarchy.add_nodes", {"id", "level", "label"});
          auto id = get_string(n, "mission.hierarchy.add_nodes", "id");
          auto level_name = get_string(n, "mission.hierarchy.add_nodes", "level");
          if (!id || !level_name) {
            diag("mission.hierarchy", "add_nodes", "entries need id and level");
            continue;
          }
          auto level = hierarchy_level_from_string(*level_name);
          if (!level) {
            diag("mission.hierarchy", *id, "unknown level '" + *level_name + "'");
            continue;
          }
          std::string label = get_string(n, "mission.hierarchy.add_nodes", "label").value_or(*id);
          try {
            s_.mission.hierarchy.add_node({*id, *level, label});
          } catch (const SimError& e) {
            diag("mission.hierarchy", *id, e.what());
          }
        }
      }
      if (h.contains("add_edges")) {
        for (const Json& e : h["add_edges"]) {
          if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
            diag("mission.hierarchy", "add_edges", "entries must be [upper, lower]");
            continue;
          }
          s_.mission.hierarchy.add_edge(e[0].get<std::string>(), e[1].get<std::string>());
        }
      }
    }

    if (m.contains("policies")) {
      if (!m["policies"].is_array()) {
        diag("mission", "policies", "must be an array");
      } else {
        for (const Json& p : m["policies"]) {
          expect_keys(p, "mission.policies", {"name", "vpm", "forbid_action", "zone"});
          ZonePolicy policy;
          policy.name = get_string(p, "mission.policies", "name").value_or("");
          policy.vpm = get_string(p, "mission.policies", "vpm").value_or("");
          if (policy.name.empty() || policy.vpm.empty()) {
            diag("mission", "policies", "entries need name and vpm");
            continue;
          }
          if (auto a = get_string(p, "mission.policies", "forbid_action")) {
            auto kind = action_from_string(*a);
            if (!kind) {
              diag("mission.policies", policy.name, "unknown action '" + *a + "'");
              continue;
            }
            policy.forbid = *kind;
          }
          if (p.contains("zone")) {
            const Json& z = p["zone"];
            if (!z.is_array() || z.size() != 4) {
              diag("mission.policies", policy.name, "zone must be [x0, y0, x1, y1]");
              continue;
            }
            policy.zone = Zone{z[0].get<int>(), z[1].get<int>(), z[2].get<int>(), z[3].get<int>()};
          }
          s_.mission.policies.push_back(policy);
        }
      }
    }
  }

  void parse_agents() {
    if (!doc_.contains("agents")) {
      diag("agents", "", "section required");
      return;
    }
    const Json& a = doc_["agents"];
    if (!a.is_object()) {
      diag("agents", "", "must be an object");
      return;
    }
    expect_keys(a, "agents", {"roster", "cpts", "interpretation"});

    if (!a.contains("roster") || !a["roster"].is_array()) {
      diag("agents", "roster", "must be an array");
    } else {
      for (const Json& r : a["roster"]) {
        expect_keys(r, "agents.roster", {"id", "role", "hand", "start", "heading", "goal_weights"});
        AgentSpec spec;
        if (!get_int(r, "agents.roster", "id", spec.id)) {
          diag("agents", "roster", "entries need an integer id");
          continue;
        }
        std::string who = "roster[" + std::to_string(spec.id) + "]";
        auto role_name = get_string(r, "agents." + who, "role");
        if (!role_name) {
          diag("agents", who + ".role", "required");
          continue;
        }
        auto role = role_from_string(*role_name);
        if (!role) {
          diag("agents", who + ".role", "unknown role '" + *role_name + "'");
          continue;
        }
        spec.role = *role;
        if (auto hand = get_string(r, "agents." + who, "hand")) {
          auto parsed = hand_from_string(*hand);
          if (!parsed)
            diag("agents", who + ".hand", "must be left or right");
          else
            spec.hand = *parsed;
        }
        if (r.contains("start")) spec.start = get_position(r["start"], "agents", who + ".start");
        if (auto heading = get_string(r, "agents." + who, "heading")) {
          auto parsed = heading_from_string(*heading);
          if (!parsed)
            diag("agents", who + ".heading", "unknown heading '" + *heading + "'");
          else
            spec.heading = *parsed;
        }
        if (r.contains("goal_weights")) {
          if (!r["goal_weights"].is_object()) {
            diag("agents", who + ".goal_weights", "must be an object");
          } else {
            for (const auto& [name, w] : r["goal_weights"].items()) {
              if (!w.is_number()) {
                diag("agents", who + ".goal_weights", "'" + name + "' must be a number");
                continue;
              }
              spec.goal_weights[name] = w.get<double>();
            }
          }
        }
        s_.roster.push_back(spec);
      }
    }

    if (!a.contains("cpts") || !a["cpts"].is_object()) {
      diag("agents", "cpts", "must be an object keyed by role");
    } else {
      for (const auto& [role_name, rows] : a["cpts"].items()) {
        auto role = role_from_string(role_name);
        if (!role) {
          diag("agents.cpts", role_name, "unknown role");
          continue;
        }
        if (!rows.is_array()) {
          diag("agents.cpts", role_name, "must be an array of rows");
          continue;
        }
        ActionCpt cpt;
        for (const Json& row : rows) {
          expect_keys(row, "agents.cpts." + role_name, {"key", "actions"});
          auto key = get_string(row, "agents.cpts." + role_name, "key");
          if (!key) {
            diag("agents.cpts", role_name, "rows need a key");
            continue;
          }
          CptRow parsed;
          try {
            parsed.pattern = CptPattern::parse(*key);
          } catch (const SimError& e) {
            diag("agents.cpts", role_name + "['" + *key + "']", e.what());
            continue;
          }
          if (!row.contains("actions") || !row["actions"].is_array()) {
            diag("agents.cpts", role_name + "['" + *key + "']", "actions must be an array");
            continue;
          }
          for (const Json& entry : row["actions"]) {
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
                !entry[1].is_number()) {
              diag("agents.cpts", role_name + "['" + *key + "']",
                   "actions entries must be [name, probability]");
              continue;
            }
            auto kind = action_from_string(entry[0].get<std::string>());
            if (!kind) {
              diag("agents.cpts", role_name + "['" + *key + "']",
                   "unknown action '" + entry[0].get<std::string>() + "'");
              continue;
            }
            parsed.actions.emplace_back(*kind, entry[1].get<double>());
          }
          cpt.rows.push_back(std::move(parsed));
        }
        s_.cpts[*role] = std::move(cpt);
      }
    }

    if (a.contains("interpretation")) {
      if (!a["interpretation"].is_array()) {
        diag("agents", "interpretation", "must be an array");
      } else {
        for (const Json& o : a["interpretation"]) {
          expect_keys(o, "agents.interpretation", {"role", "observation", "meaning"});
          auto role_name = get_string(o, "agents.interpretation", "role");
          auto obs_name = get_string(o, "agents.interpretation", "observation");
          auto meaning_name = get_string(o, "agents.interpretation", "meaning");
          if (!role_name || !obs_name || !meaning_name) {
            diag("agents", "interpretation", "entries need role, observation, meaning");
            continue;
          }
          auto role = role_from_string(*role_name);
          auto obs = observation_from_string(*obs_name);
          auto meaning = meaning_from_string(*meaning_name);
          if (!role || !obs || !meaning) {
            diag("agents", "interpretation", "unknown role/observation/meaning in entry");
            continue;
          }
          s_.interpretation.push_back({*role, *obs, *meaning});
        }
      }
    }
  }

  void parse_trust() {
    if (!doc_.contains("trust")) return;
    const Json& t = doc_["trust"];
    if (!t.is_object()) {
      diag("trust", "", "must be an object");
      return;
    }
    expect_keys(t, "trust", {"weights", "ladder", "soft_penalty", "recovery", "initial"});
    if (t.contains("weights")) {
      const Json& w = t["weights"];
      if (!w.is_array() || w.size() != 3 || !w[0].is_number() || !w[1].is_number() ||
          !w[2].is_number()) {
        diag("trust", "weights", "must be [capability, predictability, integrity]");
      } else {
        s_.trust.weights = {w[0].get<double>(), w[1].get<double>(), w[2].get<double>()};
      }
    }
    if (t.contains("ladder")) {
      const Json& l = t["ladder"];
      if (!l.is_array() || l.empty()) {
        diag("trust", "ladder", "must be a non-empty array of thresholds");
      } else {
        s_.trust.ladder.thresholds.clear();
        for (const Json& v : l) {
          if (!v.is_number()) {
            diag("trust", "ladder", "thresholds must be numbers");
            break;
          }
          s_.trust.ladder.thresholds.push_back(v.get<double>());
        }
      }
    }
    get_double(t, "trust", "soft_penalty", s_.trust.soft_penalty);
    get_double(t, "trust", "recovery", s_.trust.recovery);

    if (t.contains("initial")) {
      if (!t["initial"].is_array()) {
        diag("trust", "initial", "must be an array");
        return;
      }
      for (const Json& seed : t["initial"]) {
        expect_keys(seed, "trust.initial",
                    {"observer", "target", "function", "successes", "trials", "integrity"});
        if (!seed.contains("target")) {
          diag("trust", "initial", "entries need a target");
          continue;
        }
        std::vector<int> targets;
        if (seed["target"].is_number_integer()) {
          targets.push_back(seed["target"].get<int>());
        } else if (seed["target"].is_string()) {
          auto role = role_from_string(seed["target"].get<std::string>());
          if (!role) {
            diag("trust", "initial", "unknown target role");
            continue;
          }
          for (const AgentSpec& a : s_.roster)
            if (a.role == *role) targets.push_back(a.id);
        } else {
          diag("trust", "initial", "target must be an agent id or role name");
          continue;
        }
        TrustSeed base;
        if (seed.contains("observer")) {
          if (seed["observer"].is_number_integer())
            base.observer = seed["observer"].get<int>();
          else if (!(seed["observer"].is_string() && seed["observer"] == "*"))
            diag("trust", "initial", "observer must be an agent id or \"*\"");
        }
        if (seed.contains("function")) {
          if (seed["function"].is_string() && seed["function"] != "*") {
            auto fn = purpose_function_from_string(seed["function"].get<std::string>());
            if (!fn) {
              diag("trust", "initial", "unknown function");
              continue;
            }
            base.function = fn;
          }
        }
        int successes = 0, trials = 0;
        if (get_int(seed, "trust.initial", "successes", successes)) base.successes = successes;
        if (get_int(seed, "trust.initial", "trials", trials)) base.trials = trials;
        double integrity = 1.0;
        if (get_double(seed, "trust.initial", "integrity", integrity)) base.integrity = integrity;
        for (int target : targets) {
          TrustSeed one = base;
          one.target = target;
          s_.trust_seeds.push_back(one);
        }
      }
    }
  }

  void parse_allocation() {
    if (!doc_.contains("allocation")) return;
    const Json& a = doc_["allocation"];
    if (!a.is_object()) {
      diag("allocation", "", "must be an object");
      return;
    }
    expect_keys(a, "allocation", {"min_rung", "accept_rung", "triggers", "affected", "deadlines"});
    double min_rung = s_.allocation.min_rung;
    if (get_double(a, "allocation", "min_rung", min_rung)) s_.allocation.min_rung = min_rung;
    get_int(a, "allocation", "accept_rung", s_.allocation.accept_rung);
    if (a.contains("triggers")) {
      const Json& t = a["triggers"];
      expect_keys(t, "allocation.triggers", {"release", "token_sighting", "lead"});
      get_bool(t, "allocation.triggers", "release", s_.allocation.trigger_release);
      get_bool(t, "allocation.triggers", "token_sighting", s_.allocation.trigger_token_sighting);
      get_bool(t, "allocation.triggers", "lead", s_.allocation.trigger_lead);
    }
    if (auto affected = get_string(a, "allocation", "affected")) {
      if (*affected == "all_active")
        s_.allocation.affected_all_active = true;
      else if (*affected == "none")
        s_.allocation.affected_all_active = false;
      else
        diag("allocation", "affected", "must be 'all_active' or 'none'");
    }
    if (a.contains("deadlines")) {
      const Json& d = a["deadlines"];
      expect_keys(d, "allocation.deadlines", {"default", "move_through_maze"});
      if (d.contains("default")) {
        if (!d["default"].is_number_integer())
          diag("allocation.deadlines", "default", "must be an integer");
        else
          s_.allocation.default_deadline = d["default"].get<int64_t>();
      }
      if (d.contains("move_through_maze")) {
        if (d["move_through_maze"].is_null())
          s_.allocation.lead_deadline.reset();
        else if (!d["move_through_maze"].is_number_integer())
          diag("allocation.deadlines", "move_through_maze", "must be an integer or null");
        else
          s_.allocation.lead_deadline = d["move_through_maze"].get<int64_t>();
      }
    }
  }

  void parse_script() {
    if (!doc_.contains("script")) return;
    const Json& sc = doc_["script"];
    if (!sc.is_object()) {
      diag("script", "", "must be an object");
      return;
    }
    expect_keys(sc, "script", {"contract_outcomes"});
    if (!sc.contains("contract_outcomes")) return;
    if (!sc["contract_outcomes"].is_array()) {
      diag("script", "contract_outcomes", "must be an array");
      return;
    }
    for (const Json& entry : sc["contract_outcomes"]) {
      expect_keys(entry, "script.contract_outcomes",
                  {"function", "performer_role", "performer_id", "outcomes"});
      ScriptedOutcomes out;
      auto fn_name = get_string(entry, "script.contract_outcomes", "function");
      if (!fn_name) {
        diag("script", "contract_outcomes", "entries need a function");
        continue;
      }
      auto fn = purpose_function_from_string(*fn_name);
      if (!fn) {
        diag("script", "contract_outcomes", "unknown function '" + *fn_name + "'");
        continue;
      }
      out.function = *fn;
      if (auto role_name = get_string(entry, "script.contract_outcomes", "performer_role")) {
        auto role = role_from_string(*role_name);
        if (!role) {
          diag("script", "contract_outcomes", "unknown role '" + *role_name + "'");
          continue;
        }
        out.performer_role = role;
      }
      int performer_id = 0;
      if (get_int(entry, "script.contract_outcomes", "performer_id", performer_id))
        out.performer_id = performer_id;
      if (!entry.contains("outcomes") || !entry["outcomes"].is_array()) {
        diag("script", "contract_outcomes", "outcomes must be an array of booleans");
        continue;
      }
      for (const Json& o : entry["outcomes"]) {
        if (!o.is_boolean()) {
          diag("script", "contract_outcomes", "outcomes must be booleans");
          break;
        }
        out.outcomes.push_back(o.get<bool>());
      }
      s_.script.push_back(std::move(out));
    }
  }

  const Json& doc_;
  std::filesystem::path base_dir_;
  Scenario s_;
  std::vector<std::string> diags_;
};

}  // namespace

ScenarioParse try_parse_scenario(const Json& doc, const std::filesystem::path& base_dir) {
  return Parser(doc, base_dir).run();
}

Scenario parse_scenario(const Json& doc, const std::filesystem::path& base_dir) {
  ScenarioParse result = try_parse_scenario(doc, base_dir);
  if (!result.scenario) {
    std::string joined;
    for (size_t i = 0; i < result.diagnostics.size(); ++i) {
      if (i) joined += "; ";
      joined += result.diagnostics[i];
    }
    throw SimError(ErrorCode::InvalidScenario, joined);
  }
  return std::move(*result.scenario);
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SimError(ErrorCode::InvalidScenario, "cannot read '" + path.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SimError(ErrorCode::InvalidScenario, std::string("not valid JSON: ") + e.what());
  }
  return parse_scenario(doc, path.parent_path());
}

}  // namespace trustmaze
