#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wayfield/benchmark.hpp"
#include "wayfield/config.hpp"
#include "wayfield/engine.hpp"
#include "wayfield/entropy.hpp"

namespace fs = std::filesystem;
using namespace wayfield;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

int cmd_generate_benchmark(const std::string& out_path) {
  try {
    write_file(out_path, benchmark_scenario_text());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  std::cout << "wrote " << out_path << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& scenario_path) {
  std::string text;
  try {
    text = read_file(scenario_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  try {
    const Scenario s = parse_scenario(text);
    std::vector<Violation> violations = validate_scenario(s);
    if (violations.empty()) build_cognitive_map(s, &violations);
    for (const Violation& v : violations) {
      std::cout << "violation [" << v.code << "] " << v.detail << '\n';
    }
    if (!violations.empty()) return kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitValidation;
  }
  std::cout << "ok\n";
  return kExitOk;
}

int cmd_dump_topology(const std::string& scenario_path, double speed, double plausibility) {
  std::string text;
  try {
    text = read_file(scenario_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  try {
    const Scenario s = parse_scenario(text);
    std::vector<Violation> violations = validate_scenario(s);
    const CognitiveMap cm = build_cognitive_map(s, &violations);
    for (const Violation& v : violations) {
      std::cout << "violation [" << v.code << "] " << v.detail << '\n';
    }

    std::cout << "regions: " << cm.regions.size() << '\n';
    for (const Region& r : cm.regions) {
      std::cout << "  region " << r.id << ": " << r.cells.size() << " cells";
      if (!r.type_label.empty()) std::cout << " type " << r.type_label;
      std::cout << '\n';
    }
    std::cout << "openings: " << cm.openings.size() << '\n';
    for (const OpeningEdge& e : cm.openings) {
      std::cout << "  opening " << e.id << ": regions " << e.regions[0] << "<->" << e.regions[1]
                << ", width " << e.width_m << " m\n";
    }
    FieldSet fields;
    for (const Marker* o : s.of_kind(MarkerKind::Opening)) {
      fields.path.emplace(o->id, spread_path_field(s, o->cells, o->id));
    }
    for (const Marker* d : s.of_kind(MarkerKind::FinalDestination)) {
      fields.path.emplace(d->id, spread_path_field(s, d->cells, d->id));
    }
    for (const std::string& dest : s.ids_of_kind(MarkerKind::FinalDestination)) {
      const PathsTree tree = build_paths_tree(cm, fields, dest, speed, plausibility);
      std::cout << "paths tree for destination " << dest << ":\n";
      for (const auto& [opening, records] : tree.entries) {
        std::cout << "  from " << opening << ":\n";
        for (const PathRecord& r : records) {
          std::cout << "    region " << r.origin_region << ": ";
          for (const std::string& node : r.openings) std::cout << node << " -> ";
          std::cout << dest << "  (tt " << r.tt << " s)\n";
        }
      }
    }
    if (!violations.empty()) return kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_run(const RunConfig& config) {
  std::string text;
  try {
    text = read_file(config.scenario);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }

  WorldState world;
  try {
    const Scenario s = parse_scenario(text);
    world = init_world(s, config.params, config.seed, engine_config_of(config));
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  const fs::path out_dir = config.output_dir;
  int artifact_failures = 0;
  try {
    fs::create_directories(out_dir);
    write_file(out_dir / "effective_config.txt", serialize_config(config));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }

  if (config.dump_fields) {
    try {
      for (const auto& [id, field] : world.fields.path) {
        export_field_csv(field, out_dir / ("field_" + id + ".csv"));
      }
      export_field_csv(world.fields.obstacle, out_dir / "field_obstacles.csv");
    } catch (const std::exception& e) {
      std::cerr << "artifact error: " << e.what() << '\n';
      ++artifact_failures;
    }
  }

  const std::vector<std::string> dests = world.scenario.ids_of_kind(MarkerKind::FinalDestination);
  SnapshotHook hook = [&](const WorldState& snapshot) {
    for (const std::string& dest : dests) {
      const EntropyMap m = entropy_map(snapshot, dest);
      const std::string stem = "entropy_" + dest + "_" + std::to_string(snapshot.step);
      try {
        export_csv(m, out_dir / (stem + ".csv"));
        export_image(m, out_dir / (stem + ".pgm"));
      } catch (const std::exception& e) {
        std::cerr << "artifact error: " << e.what() << '\n';
        ++artifact_failures;
      }
    }
  };

  run(world, config.steps, config.snapshot_steps, hook, config.verbose ? &std::cout : nullptr);

  std::ostringstream summary;
  summary << "steps = " << world.step << '\n';
  summary << "spawned = " << world.stats.spawned << '\n';
  summary << "despawned = " << world.stats.despawned << '\n';
  summary << "remaining = " << world.agents.size() << '\n';
  summary << "reevaluations = " << world.stats.reevaluations << '\n';
  summary << "choice_changes = " << world.stats.choice_changes << '\n';
  for (const auto& [opening, count] : world.stats.crossings) {
    summary << "crossings." << opening << " = " << count << '\n';
  }
  try {
    write_file(out_dir / "summary.txt", summary.str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }

  std::cout << summary.str();
  return artifact_failures == 0 ? kExitOk : kExitIo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "wayfield: grid-based pedestrian wayfinding simulator with per-cell "
      "path-choice entropy maps. All model defaults are UNCALIBRATED working "
      "values."};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate-benchmark", "write the four-room benchmark scenario");
  std::string gen_out = "benchmark.scenario";
  gen->add_option("--out", gen_out, "output path")->capture_default_str();

  auto* val = app.add_subcommand("validate", "parse and validate a scenario file");
  std::string val_scenario;
  val->add_option("scenario", val_scenario, "scenario file")->required();

  auto* dump = app.add_subcommand("dump-topology", "print the cognitive map and paths trees");
  std::string dump_scenario;
  double dump_speed = 4.0 / 3.0;
  double dump_plausibility = 3.0;
  dump->add_option("scenario", dump_scenario, "scenario file")->required();
  dump->add_option("--speed", dump_speed, "reference speed, m/s")->capture_default_str();
  dump->add_option("--plausibility_factor", dump_plausibility, "path retention factor")
      ->capture_default_str();

  auto* runc = app.add_subcommand("run", "run a simulation and export entropy maps");
  std::string run_config_path;
  std::map<std::string, std::string> overrides;
  runc->add_option("--config", run_config_path, "key=value config file");
  // Every config key doubles as a flag of the same name.
  static const char* keys[] = {"scenario", "seed", "steps", "snapshot_steps", "output_dir",
                               "speed", "arrivals", "dump_fields", "verbose", "kappa_tt",
                               "kappa_q", "kappa_f", "gamma", "rho_c", "tau_c", "tau_a",
                               "tau_short", "tau_long", "plausibility_factor", "k_pf", "k_obs",
                               "k_prox", "proxemic_radius"};
  for (const char* key : keys) {
    runc->add_option_function<std::string>(
        std::string("--") + key,
        [key, &overrides](const std::string& v) { overrides[key] = v; },
        std::string("config key ") + key);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitIo;
  }

  if (gen->parsed()) return cmd_generate_benchmark(gen_out);
  if (val->parsed()) return cmd_validate(val_scenario);
  if (dump->parsed()) return cmd_dump_topology(dump_scenario, dump_speed, dump_plausibility);
  if (runc->parsed()) {
    RunConfig config;
    try {
      if (!run_config_path.empty()) config = load_config_file(run_config_path, config);
      for (const auto& [key, value] : overrides) apply_config_value(config, key, value);
      if (config.scenario.empty()) throw ConfigError("no scenario given (--scenario)");
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitValidation;
    }
    return cmd_run(config);
  }
  return kExitOk;
}
