#include "wayfield/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wayfield {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value, bool allow_inf = false) {
  if (allow_inf && (value == "inf" || value == "infinity")) {
    return std::numeric_limits<double>::infinity();
  }
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("invalid value '" + value + "' for " + key);
  }
  if (pos != value.size()) throw ConfigError("invalid value '" + value + "' for " + key);
  return v;
}

int64_t parse_int(const std::string& key, const std::string& value) {
  size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("invalid value '" + value + "' for " + key);
  }
  if (pos != value.size()) throw ConfigError("invalid value '" + value + "' for " + key);
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("invalid value '" + value + "' for " + key);
}

std::vector<int64_t> parse_steps_list(const std::string& key, const std::string& value) {
  std::vector<int64_t> out;
  if (trim(value).empty()) return out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(key, trim(item)));
  return out;
}

std::string format_double(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void apply_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "scenario") {
    c.scenario = value;
  } else if (key == "seed") {
    c.seed = static_cast<uint64_t>(parse_int(key, value));
  } else if (key == "steps") {
    c.steps = parse_int(key, value);
    if (c.steps < 0) throw ConfigError("steps must be >= 0");
  } else if (key == "snapshot_steps") {
    c.snapshot_steps = parse_steps_list(key, value);
  } else if (key == "output_dir") {
    c.output_dir = value;
  } else if (key == "speed") {
    c.speed = parse_double(key, value);
    if (!(c.speed > 0.0)) throw ConfigError("speed must be positive");
    c.params.speed_ref = c.speed;
  } else if (key == "arrivals") {
    if (value != "poisson" && value != "constant") {
      throw ConfigError("arrivals must be 'poisson' or 'constant'");
    }
    c.arrivals = value;
  } else if (key == "dump_fields") {
    c.dump_fields = parse_bool(key, value);
  } else if (key == "verbose") {
    c.verbose = parse_bool(key, value);
  } else if (key == "kappa_tt") {
    c.params.kappa_tt = parse_double(key, value);
  } else if (key == "kappa_q") {
    c.params.kappa_q = parse_double(key, value);
  } else if (key == "kappa_f") {
    c.params.kappa_f = parse_double(key, value);
  } else if (key == "gamma") {
    c.params.gamma_m = parse_double(key, value, /*allow_inf=*/true);
    if (c.params.gamma_m < 0.0) throw ConfigError("gamma must be >= 0");
  } else if (key == "rho_c") {
    c.params.rho_c = parse_double(key, value);
    if (c.params.rho_c < 0.0) throw ConfigError("rho_c must be >= 0");
  } else if (key == "tau_c") {
    c.params.tau_c = parse_int(key, value);
  } else if (key == "tau_a") {
    c.params.tau_a = parse_int(key, value);
  } else if (key == "tau_short") {
    c.params.tau_short = parse_int(key, value);
  } else if (key == "tau_long") {
    c.params.tau_long = parse_int(key, value);
  } else if (key == "plausibility_factor") {
    c.params.plausibility_factor = parse_double(key, value);
  } else if (key == "k_pf") {
    c.params.k_pf = parse_double(key, value, /*allow_inf=*/true);
  } else if (key == "k_obs") {
    c.params.k_obs = parse_double(key, value);
  } else if (key == "k_prox") {
    c.params.k_prox = parse_double(key, value);
  } else if (key == "proxemic_radius") {
    c.params.proxemic_radius = parse_double(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
  if (c.params.tau_short > c.params.tau_long) {
    throw ConfigError("tau_short must be <= tau_long");
  }
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    apply_config_value(base, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return base;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), std::move(base));
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "scenario = " << c.scenario << '\n';
  out << "seed = " << c.seed << '\n';
  out << "steps = " << c.steps << '\n';
  out << "snapshot_steps = ";
  for (size_t i = 0; i < c.snapshot_steps.size(); ++i) {
    if (i > 0) out << ',';
    out << c.snapshot_steps[i];
  }
  out << '\n';
  out << "output_dir = " << c.output_dir << '\n';
  out << "speed = " << format_double(c.speed) << '\n';
  out << "arrivals = " << c.arrivals << '\n';
  out << "dump_fields = " << (c.dump_fields ? "true" : "false") << '\n';
  out << "verbose = " << (c.verbose ? "true" : "false") << '\n';
  out << "kappa_tt = " << format_double(c.params.kappa_tt) << '\n';
  out << "kappa_q = " << format_double(c.params.kappa_q) << '\n';
  out << "kappa_f = " << format_double(c.params.kappa_f) << '\n';
  out << "gamma = " << format_double(c.params.gamma_m) << '\n';
  out << "rho_c = " << format_double(c.params.rho_c) << '\n';
  out << "tau_c = " << c.params.tau_c << '\n';
  out << "tau_a = " << c.params.tau_a << '\n';
  out << "tau_short = " << c.params.tau_short << '\n';
  out << "tau_long = " << c.params.tau_long << '\n';
  out << "plausibility_factor = " << format_double(c.params.plausibility_factor) << '\n';
  out << "k_pf = " << format_double(c.params.k_pf) << '\n';
  out << "k_obs = " << format_double(c.params.k_obs) << '\n';
  out << "k_prox = " << format_double(c.params.k_prox) << '\n';
  out << "proxemic_radius = " << format_double(c.params.proxemic_radius) << '\n';
  return out.str();
}

EngineConfig engine_config_of(const RunConfig& c) {
  EngineConfig e;
  e.agent_speed = c.speed;
  e.deterministic_arrivals = c.arrivals == "constant";
  return e;
}

}  // namespace wayfield
