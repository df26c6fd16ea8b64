#include "mrcl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mrcl/graph.hpp"

namespace mrcl {

namespace {

using nlohmann::json;

class Violations {
 public:
  void add(const std::string& key, const std::string& what) {
    messages_.push_back(key + ": " + what);
  }
  bool empty() const { return messages_.empty(); }
  std::string joined() const {
    std::ostringstream out;
    out << "invalid config:";
    for (const std::string& m : messages_) out << "\n  - " << m;
    return out.str();
  }

 private:
  std::vector<std::string> messages_;
};

double number(const json& j, const std::string& key, double fallback, Violations& v) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    v.add(key, "expected a number");
    return fallback;
  }
  return j.at(key).get<double>();
}

bool boolean(const json& j, const std::string& key, bool fallback, Violations& v) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) {
    v.add(key, "expected a boolean");
    return fallback;
  }
  return j.at(key).get<bool>();
}

std::string text(const json& j, const std::string& key, const std::string& fallback,
                 Violations& v) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) {
    v.add(key, "expected a string");
    return fallback;
  }
  return j.at(key).get<std::string>();
}

FilterKind parse_filter_kind(const std::string& s, Violations& v) {
  if (s == "ckf") return FilterKind::kCkf;
  if (s == "ekf") return FilterKind::kEkf;
  if (s == "ukf") return FilterKind::kUkf;
  v.add("filter.kind", "unknown filter '" + s + "' (expected ckf, ekf or ukf)");
  return FilterKind::kCkf;
}

ZoneKind parse_zone_kind(const std::string& s, const std::string& key, Violations& v) {
  if (s == "sensing") return ZoneKind::kSensing;
  if (s == "communication") return ZoneKind::kCommunication;
  v.add(key, "unknown zone kind '" + s + "'");
  return ZoneKind::kSensing;
}

int line_of_offset(const std::string& content, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < content.size(); ++i)
    if (content[i] == '\n') ++line;
  return line;
}

}  // namespace

nlohmann::json parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  try {
    return json::parse(content);
  } catch (const json::parse_error& e) {
    throw ConfigError("parse error in " + path.string() + " at line " +
                      std::to_string(line_of_offset(content, e.byte)) + ": " + e.what());
  }
}

namespace {
ScenarioConfig scenario_from_json_impl(const nlohmann::json& j);
}  // namespace

ScenarioConfig scenario_from_json(const nlohmann::json& j) {
  try {
    return scenario_from_json_impl(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config structure: ") + e.what());
  }
}

namespace {

ScenarioConfig scenario_from_json_impl(const nlohmann::json& j) {
  Violations v;
  ScenarioConfig cfg;

  cfg.n_robots = static_cast<int>(number(j, "n_robots", cfg.n_robots, v));
  cfg.steps = static_cast<int>(number(j, "steps", cfg.steps, v));
  cfg.dt = number(j, "dt", cfg.dt, v);
  cfg.sensing_radius = number(j, "sensing_radius", cfg.sensing_radius, v);
  cfg.min_lattice_spacing = number(j, "min_lattice_spacing", cfg.min_lattice_spacing, v);
  cfg.seed = static_cast<std::uint64_t>(number(j, "seed", static_cast<double>(cfg.seed), v));
  cfg.loop_waypoints = boolean(j, "loop_waypoints", cfg.loop_waypoints, v);
  cfg.rotate_offsets = boolean(j, "rotate_offsets", cfg.rotate_offsets, v);

  if (cfg.n_robots < 1) v.add("n_robots", "must be >= 1");
  if (cfg.steps < 1) v.add("steps", "must be >= 1");
  if (cfg.dt <= 0.0) v.add("dt", "must be > 0");
  if (cfg.sensing_radius <= 0.0) v.add("sensing_radius", "must be > 0");

  if (j.contains("area")) {
    const json& a = j.at("area");
    cfg.area.width = number(a, "width", cfg.area.width, v);
    cfg.area.height = number(a, "height", cfg.area.height, v);
  }
  if (cfg.area.width <= 0.0 || cfg.area.height <= 0.0)
    v.add("area", "width and height must be > 0");

  if (j.contains("noise")) {
    const json& nj = j.at("noise");
    cfg.noise.sigma_range = number(nj, "sigma_range", cfg.noise.sigma_range, v);
    cfg.noise.sigma_bearing = number(nj, "sigma_bearing", cfg.noise.sigma_bearing, v);
  }
  if (cfg.noise.sigma_range < 0.0) v.add("noise.sigma_range", "must be >= 0");
  if (cfg.noise.sigma_bearing < 0.0) v.add("noise.sigma_bearing", "must be >= 0");

  if (j.contains("process_noise")) {
    const json& pj = j.at("process_noise");
    cfg.process_noise.sigma_xy = number(pj, "sigma_xy", cfg.process_noise.sigma_xy, v);
    cfg.process_noise.sigma_theta =
        number(pj, "sigma_theta", cfg.process_noise.sigma_theta, v);
  }
  if (cfg.process_noise.sigma_xy < 0.0) v.add("process_noise.sigma_xy", "must be >= 0");
  if (cfg.process_noise.sigma_theta < 0.0)
    v.add("process_noise.sigma_theta", "must be >= 0");

  if (j.contains("init")) {
    const json& ij = j.at("init");
    cfg.init.sigma_xy = number(ij, "sigma_xy", cfg.init.sigma_xy, v);
    cfg.init.sigma_theta = number(ij, "sigma_theta", cfg.init.sigma_theta, v);
  }
  if (cfg.init.sigma_xy < 0.0) v.add("init.sigma_xy", "must be >= 0");
  if (cfg.init.sigma_theta < 0.0) v.add("init.sigma_theta", "must be >= 0");

  if (j.contains("control")) {
    const json& cj = j.at("control");
    cfg.gains.k_v = number(cj, "k_v", cfg.gains.k_v, v);
    cfg.gains.k_omega = number(cj, "k_omega", cfg.gains.k_omega, v);
    cfg.limits.v_max = number(cj, "v_max", cfg.limits.v_max, v);
    cfg.limits.omega_max = number(cj, "omega_max", cfg.limits.omega_max, v);
    cfg.follower_tolerance =
        number(cj, "follower_tolerance", cfg.follower_tolerance, v);
  }
  if (cfg.gains.k_v <= 0.0) v.add("control.k_v", "must be > 0");
  if (cfg.gains.k_omega <= 0.0) v.add("control.k_omega", "must be > 0");
  if (cfg.limits.v_max <= 0.0) v.add("control.v_max", "must be > 0");
  if (cfg.limits.omega_max <= 0.0) v.add("control.omega_max", "must be > 0");
  if (cfg.follower_tolerance <= 0.0) v.add("control.follower_tolerance", "must be > 0");

  if (j.contains("zones")) {
    if (!j.at("zones").is_array()) {
      v.add("zones", "expected an array");
    } else {
      int index = 0;
      for (const json& zj : j.at("zones")) {
        const std::string key = "zones." + std::to_string(index);
        DangerZone zone;
        zone.kind = parse_zone_kind(text(zj, "kind", "sensing", v), key + ".kind", v);
        if (zj.contains("center") && zj.at("center").is_array() &&
            zj.at("center").size() == 2) {
          zone.center(0) = zj.at("center").at(0).get<double>();
          zone.center(1) = zj.at("center").at(1).get<double>();
        } else {
          v.add(key + ".center", "expected [x, y]");
        }
        zone.radius = number(zj, "radius", zone.radius, v);
        zone.peak_rate = number(zj, "peak_rate", zone.peak_rate, v);
        zone.threshold = number(zj, "threshold", zone.threshold, v);
        if (zone.radius <= 0.0) v.add(key + ".radius", "must be > 0");
        if (zone.peak_rate < 0.0 || zone.peak_rate > 1.0)
          v.add(key + ".peak_rate", "must be in [0, 1]");
        if (zone.threshold < 0.0 || zone.threshold > 1.0)
          v.add(key + ".threshold", "must be in [0, 1]");
        cfg.zones.push_back(zone);
        ++index;
      }
    }
  }

  if (j.contains("attack")) {
    const json& aj = j.at("attack");
    cfg.attack.range = number(aj, "range_bias", cfg.attack.range, v);
    cfg.attack.bearing = number(aj, "bearing_bias", cfg.attack.bearing, v);
  }

  if (j.contains("trigger")) {
    const json& tj = j.at("trigger");
    cfg.trigger.alpha = number(tj, "alpha", cfg.trigger.alpha, v);
    cfg.trigger.gamma = number(tj, "gamma", cfg.trigger.gamma, v);
    cfg.trigger.zeta_s = number(tj, "zeta_s", cfg.trigger.zeta_s, v);
    cfg.trigger.zeta_c = number(tj, "zeta_c", cfg.trigger.zeta_c, v);
    cfg.trigger.rho = number(tj, "rho", cfg.trigger.rho, v);
    const std::string norm = text(tj, "norm", "whitened", v);
    if (norm == "whitened")
      cfg.trigger.norm = InnovationNorm::kWhitened;
    else if (norm == "euclidean")
      cfg.trigger.norm = InnovationNorm::kEuclidean;
    else
      v.add("trigger.norm", "unknown norm '" + norm + "'");
  }
  if (cfg.trigger.alpha <= 0.0) v.add("trigger.alpha", "must be > 0");
  if (cfg.trigger.gamma < 0.0) v.add("trigger.gamma", "must be >= 0");
  if (cfg.trigger.zeta_s < 0.0 || cfg.trigger.zeta_s > 1.0)
    v.add("trigger.zeta_s", "must be in [0, 1]");
  if (cfg.trigger.zeta_c < 0.0 || cfg.trigger.zeta_c > 1.0)
    v.add("trigger.zeta_c", "must be in [0, 1]");
  if (cfg.trigger.rho <= 0.0) v.add("trigger.rho", "must be > 0");

  if (j.contains("filter")) {
    const json& fj = j.at("filter");
    cfg.filter.kind = parse_filter_kind(text(fj, "kind", "ckf", v), v);
    const std::string nu = text(fj, "neighbor_uncertainty", "inflate", v);
    if (nu == "inflate")
      cfg.filter.neighbor_uncertainty = NeighborUncertainty::kInflate;
    else if (nu == "ignore")
      cfg.filter.neighbor_uncertainty = NeighborUncertainty::kIgnore;
    else
      v.add("filter.neighbor_uncertainty", "expected 'inflate' or 'ignore'");
    if (fj.contains("ukf")) {
      const json& uj = fj.at("ukf");
      cfg.filter.ukf.alpha = number(uj, "alpha", cfg.filter.ukf.alpha, v);
      cfg.filter.ukf.beta = number(uj, "beta", cfg.filter.ukf.beta, v);
      cfg.filter.ukf.kappa = number(uj, "kappa", cfg.filter.ukf.kappa, v);
      if (cfg.filter.ukf.alpha <= 0.0) v.add("filter.ukf.alpha", "must be > 0");
    }
  }

  if (j.contains("comm")) {
    const json& cj = j.at("comm");
    const std::string mode = text(cj, "mode", "event_triggered", v);
    if (mode == "event_triggered")
      cfg.comm.mode = CommMode::kEventTriggered;
    else if (mode == "periodic")
      cfg.comm.mode = CommMode::kPeriodic;
    else if (mode == "always")
      cfg.comm.mode = CommMode::kAlways;
    else
      v.add("comm.mode", "unknown mode '" + mode + "'");
    cfg.comm.periodic_rate = number(cj, "rate", cfg.comm.periodic_rate, v);
    if (cfg.comm.mode == CommMode::kPeriodic &&
        (cfg.comm.periodic_rate <= 0.0 || cfg.comm.periodic_rate > 1.0))
      v.add("comm.rate", "must be in (0, 1] for periodic mode");
  }

  const std::string scope = text(j, "lambda2_scope", "global", v);
  if (scope == "global")
    cfg.lambda2_scope = Lambda2Scope::kGlobal;
  else if (scope == "neighborhood")
    cfg.lambda2_scope = Lambda2Scope::kNeighborhood;
  else
    v.add("lambda2_scope", "expected 'global' or 'neighborhood'");

  if (j.contains("waypoints")) {
    if (!j.at("waypoints").is_array()) {
      v.add("waypoints", "expected an array");
    } else {
      int index = 0;
      for (const json& wj : j.at("waypoints")) {
        Waypoint wp;
        wp.x = number(wj, "x", 0.0, v);
        wp.y = number(wj, "y", 0.0, v);
        wp.arrival_tolerance = number(wj, "tolerance", 0.05, v);
        if (wp.arrival_tolerance <= 0.0)
          v.add("waypoints." + std::to_string(index) + ".tolerance", "must be > 0");
        cfg.waypoints.push_back(wp);
        ++index;
      }
    }
  }

  // Cross-field invariants.
  if (cfg.trigger.norm == InnovationNorm::kWhitened &&
      (cfg.noise.sigma_range <= 0.0 || cfg.noise.sigma_bearing <= 0.0))
    v.add("trigger.norm", "whitened norm needs strictly positive noise sigmas");

  double max_ds = 0.0, max_dc = 0.0;
  for (const DangerZone& zone : cfg.zones) {
    if (zone.kind == ZoneKind::kSensing) max_ds = std::max(max_ds, zone.peak_rate);
    else max_dc = std::max(max_dc, zone.peak_rate);
  }
  if (cfg.trigger.zeta_s * max_ds + cfg.trigger.zeta_c * max_dc > 1.0)
    v.add("trigger", "zeta_s*Ds + zeta_c*Dc can exceed 1 for reachable zone rates, "
                     "making the adaptive-threshold factor negative");

  if (cfg.n_robots >= 1) {
    try {
      const auto lattice = init_lattice(cfg.n_robots, cfg.area.width, cfg.area.height,
                                        cfg.min_lattice_spacing);
      // The gate must sit above the largest event threshold reachable with
      // gamma = 0, otherwise it would mask every trigger; the initial lattice
      // connectivity is the reference.
      if (cfg.comm.mode == CommMode::kEventTriggered && cfg.n_robots >= 2) {
        std::vector<Vec2> positions;
        positions.reserve(lattice.size());
        for (const RobotState& s : lattice) positions.push_back(s.position());
        const double lam2 = std::max(
            lambda2(build_graph(positions, cfg.sensing_radius)), kLambda2Floor);
        if (cfg.trigger.rho <= cfg.trigger.alpha / lam2)
          v.add("trigger.rho",
                "must exceed alpha/lambda2 of the initial graph (max event "
                "threshold at gamma=0), or the attack gate masks all triggers");
      }
    } catch (const std::invalid_argument& e) {
      v.add("n_robots", e.what());
    }
  }

  if (!v.empty()) throw ConfigError(v.joined());
  return cfg;
}

}  // namespace

ScenarioConfig load_config(const std::filesystem::path& path) {
  return scenario_from_json(parse_config_file(path));
}

void apply_override(nlohmann::json& j, const std::string& key_value) {
  const std::size_t eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like key=value, got '" + key_value + "'");
  const std::string key = key_value.substr(0, eq);
  const std::string value = key_value.substr(eq + 1);

  std::string pointer = "/";
  for (const char c : key) pointer += (c == '.') ? '/' : c;
  const nlohmann::json::json_pointer ptr(pointer);
  if (!j.contains(ptr))
    throw ConfigError("override references unknown config key '" + key + "'");

  nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;  // fall back to a plain string
  j[ptr] = parsed;
}

}  // namespace mrcl
