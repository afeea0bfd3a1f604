/*
 Copyright 2026 The pidaquad Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <array>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "pidaquad/report.hpp"

namespace pidaquad::cli {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Walks one mapping node, remembers which keys were consumed, and rejects the
// rest. All diagnostics carry the source, line and dotted key path.
class Section {
 public:
  Section(YAML::Node node, std::string path, const std::string* source)
      : node_(std::move(node)), path_(std::move(path)), source_(source) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) fail(node_, path_, "expected a mapping");
  }

  bool present() const { return node_ && !node_.IsNull(); }
  bool has(const std::string& key) const { return present() && node_[key]; }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    seen_.insert(key);
    const YAML::Node v = node_[key];
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      fail(v, key_path(key), "has the wrong type");
    }
  }

  void read_angle(const std::string& key, double& out_rad) {
    if (!has(key)) return;
    double deg = 0.0;
    read(key, deg);
    out_rad = deg * kDeg;
  }

  void read_vector2(const std::string& key, Eigen::Vector2d& out) {
    if (!has(key)) return;
    seen_.insert(key);
    const YAML::Node v = node_[key];
    if (!v.IsSequence() || v.size() != 2) fail(v, key_path(key), "expected a list of 2 numbers");
    try {
      out << v[0].as<double>(), v[1].as<double>();
    } catch (const YAML::Exception&) {
      fail(v, key_path(key), "expected a list of 2 numbers");
    }
  }

  template <typename E>
  void read_enum(const std::string& key, E& out,
                 std::initializer_list<std::pair<const char*, E>> choices) {
    if (!has(key)) return;
    std::string text;
    read(key, text);
    for (const auto& [name, value] : choices) {
      if (text == name) {
        out = value;
        return;
      }
    }
    std::string allowed;
    for (const auto& c : choices) allowed += std::string(allowed.empty() ? "" : ", ") + c.first;
    fail(node_[key], key_path(key), "must be one of: " + allowed);
  }

  Section child(const std::string& key) {
    if (has(key)) seen_.insert(key);
    return Section(present() ? node_[key] : YAML::Node(), key_path(key), source_);
  }

  /// Runs `check`, turning std::invalid_argument into a located ConfigError.
  void validate(const std::function<void()>& check) const {
    try {
      check();
    } catch (const std::invalid_argument& e) {
      fail(node_, path_, e.what());
    }
  }

  void finish() const {
    if (!present()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) fail(kv.first, key_path(key), "unknown key");
    }
  }

  [[noreturn]] void fail(const YAML::Node& at, const std::string& key,
                         const std::string& msg) const {
    std::ostringstream os;
    os << *source_;
    if (at && at.Mark().line >= 0) os << ":" << at.Mark().line + 1;
    os << ": '" << (key.empty() ? "<root>" : key) << "' " << msg;
    throw ConfigError(os.str());
  }

  const std::string& path() const { return path_; }

 private:
  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  YAML::Node node_;
  std::string path_;
  const std::string* source_;
  std::set<std::string> seen_;
};

void read_params(Section s, QuadParams& p) {
  s.read("m", p.m);
  s.read("l", p.l);
  s.read("g", p.g);
  s.read("c", p.c);
  s.read("Ixx", p.Ixx);
  s.read("Iyy", p.Iyy);
  s.read("Izz", p.Izz);
  s.read("Im", p.Im);
  s.read("b", p.b);
  s.finish();
  s.validate([&] { p.validate(); });
}

void read_channel_values(Section s, sim::ChannelValues& v) {
  s.read_angle("roll_deg", v[0]);
  s.read_angle("pitch_deg", v[1]);
  s.read_angle("yaw_deg", v[2]);
  s.read("altitude", v[3]);
  s.finish();
}

void read_initial_state(Section s, QuadState& x) {
  s.read_angle("phi_deg", x.phi);
  s.read_angle("theta_deg", x.theta);
  s.read_angle("psi_deg", x.psi);
  s.read("p", x.p);
  s.read("q", x.q);
  s.read("r", x.r);
  s.read("u", x.u);
  s.read("v", x.v);
  s.read("w", x.w);
  s.read("x", x.xE);
  s.read("y", x.yE);
  double altitude = x.altitude();
  s.read("altitude", altitude);
  x.zE = -altitude;
  s.finish();
}

const std::initializer_list<std::pair<const char*, Channel>> kChannelChoices = {
    {"roll", Channel::kRoll},
    {"pitch", Channel::kPitch},
    {"yaw", Channel::kYaw},
    {"altitude", Channel::kAltitude}};

void read_scenario(Section s, sim::Scenario& sc) {
  s.read("duration", sc.duration);
  s.read("dt", sc.dt);
  s.read("seed", sc.seed);
  s.read("controller", sc.controller_enabled);
  s.read_angle("attitude_envelope_deg", sc.attitude_envelope);
  read_initial_state(s.child("initial_state"), sc.initial_state);

  Section c = s.child("commands");
  c.read_enum("type", sc.commands.kind,
              {{"hold", sim::CommandKind::kHold},
               {"step", sim::CommandKind::kStep},
               {"spiral", sim::CommandKind::kSpiral}});
  // Hold and step default to holding the initial attitude and altitude.
  sc.commands.initial = sim::outputs_of(sc.initial_state);
  read_channel_values(c.child("initial"), sc.commands.initial);
  sc.commands.final = sc.commands.initial;
  read_channel_values(c.child("final"), sc.commands.final);
  c.read("step_time", sc.commands.step_time);
  c.read("omega", sc.commands.omega);
  sc.commands.altitude_offset = sc.initial_state.altitude();
  c.read("altitude_offset", sc.commands.altitude_offset);
  c.finish();

  Section d = s.child("disturbance");
  sc.disturbance.enabled = d.present();
  d.read("enabled", sc.disturbance.enabled);
  d.read_enum("channel", sc.disturbance.channel, kChannelChoices);
  d.read("start_time", sc.disturbance.start_time);
  d.read("mean", sc.disturbance.mean);
  d.read("sigma", sc.disturbance.sigma);
  d.finish();

  Section n = s.child("sensor_noise");
  n.read("roll", sc.sensor_noise[0]);
  n.read("pitch", sc.sensor_noise[1]);
  n.read("yaw", sc.sensor_noise[2]);
  n.read("altitude", sc.sensor_noise[3]);
  n.finish();

  Section g = s.child("guidance");
  g.read("k_pos", sc.guidance.k_pos);
  g.read("k_vel", sc.guidance.k_vel);
  g.read_angle("max_tilt_deg", sc.guidance.max_tilt);
  g.read("feedforward", sc.guidance.feedforward);
  g.finish();

  Section l = s.child("limits");
  l.read("torque", sc.limits.torque);
  l.read("thrust_max", sc.limits.thrust_max);
  l.finish();
  s.finish();
}

void read_gains(Section s, ChannelGains& gains) {
  static constexpr std::array<const char*, kChannelCount> kNames = {"roll", "pitch", "yaw",
                                                                    "altitude"};
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    Section c = s.child(kNames[i]);
    PidaGains& g = gains[i];
    c.read("kp", g.kp);
    c.read("ki", g.ki);
    c.read("kd", g.kd);
    c.read("ka", g.ka);
    c.read("tf", g.tf);
    c.finish();
    c.validate([&] { g.validate(); });
  }
  s.finish();
}

void read_filter_channel(Section s, sim::ChannelFilterSettings& f) {
  s.read_vector2("init_spread", f.init_spread);
  s.read_vector2("mutation_scale", f.mutation_scale);
  s.read_vector2("process_noise", f.process_noise);
  s.finish();
}

void read_estimator(Section s, sim::EstimatorSettings& e) {
  e.enabled = true;
  s.read("enabled", e.enabled);
  s.read("filter_attitude", e.filter_attitude);
  s.read("population_size", e.population_size);
  s.read("max_generations", e.max_generations);
  s.read("mutation_rate", e.mutation_rate);
  s.read("elite_count", e.elite_count);
  s.read_enum("noise_injection", e.noise_injection,
              {{"per_generation", gf::NoiseInjection::kPerGeneration},
               {"per_measurement", gf::NoiseInjection::kPerMeasurement}});
  read_filter_channel(s.child("attitude"), e.attitude);
  read_filter_channel(s.child("altitude"), e.altitude);
  s.finish();
}

void read_sdsa(Section s, RunConfig& cfg) {
  sdsa::SdsaConfig& c = cfg.sdsa;
  s.read("a_max", c.a_max);
  s.read("alpha_max", c.alpha_max);
  s.read("gamma_max", c.gamma_max);
  s.read("beta_max", c.beta_max);
  s.read("i_max", c.i_max);
  s.read("n_simplexes", c.n_simplexes);
  s.read("seed", c.seed);
  s.read("stall_tolerance", c.stall_tolerance);
  s.read("stall_iterations", c.stall_iterations);
  s.read("warm_start", cfg.warm_start);
  s.read_enum("centroid", c.centroid_mode,
              {{"sum", sdsa::CentroidMode::kSum}, {"mean", sdsa::CentroidMode::kMean}});
  s.read_enum("perturbation", c.perturbation,
              {{"per_coordinate", sdsa::PerturbationMode::kPerCoordinate},
               {"scalar", sdsa::PerturbationMode::kScalar}});
  Section t = s.child("objective");
  t.read("overshoot", cfg.tuning.desired_overshoot);
  t.read("settling_time", cfg.tuning.desired_settling);
  t.read("require_hurwitz", cfg.tuning.require_hurwitz);
  t.finish();
  s.finish();
  c.bounds = tuning_bounds();
  s.validate([&] { c.validate(); });
}

void read_stability(Section s, StabilitySettings& st) {
  double v = 0.0;
  if (s.has("altitude")) {
    s.read("altitude", v);
    st.altitude = v;
  }
  if (s.has("thrust")) {
    s.read("thrust", v);
    st.thrust = v;
  }
  s.read("trajectory_runs", st.trajectory_runs);
  s.read("sample_period", st.sample_period);
  s.finish();
  s.validate([&] {
    if (st.trajectory_runs < 0) throw std::invalid_argument("trajectory_runs must be >= 0");
    if (!(st.sample_period > 0.0)) throw std::invalid_argument("sample_period must be > 0");
  });
}

void read_filter_demo(Section s, FilterDemoSettings& f) {
  Section l = s.child("linear");
  l.read("a", f.linear.a);
  l.read("process_std", f.linear.process_std);
  l.read("measurement_std", f.linear.measurement_std);
  l.read("steps", f.linear.steps);
  l.read("seed", f.linear.seed);
  l.read("init_spread", f.linear.init_spread);
  l.read("mutation_scale", f.linear.mutation_scale);
  l.finish();
  l.validate([&] {
    if (f.linear.steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (!(f.linear.process_std >= 0.0) || !(f.linear.measurement_std >= 0.0)) {
      throw std::invalid_argument("noise levels must be >= 0");
    }
  });
  Section a = s.child("altitude");
  a.read("duration", f.altitude.duration);
  a.read("dt", f.altitude.dt);
  a.read("measurement_std", f.altitude.measurement_std);
  a.read("accel_std", f.altitude.accel_std);
  a.read("seed", f.altitude.seed);
  a.finish();
  a.validate([&] {
    if (!(f.altitude.duration > 0.0) || !(f.altitude.dt > 0.0)) {
      throw std::invalid_argument("duration and dt must be > 0");
    }
  });
  s.finish();
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ":" << e.mark.line + 1 << ": parse error: " << e.msg;
    throw ConfigError(os.str());
  }
  Section top(root, "", &source);
  if (!top.present()) throw ConfigError(source + ": empty config");

  RunConfig cfg;
  if (!top.has("schema_version")) top.fail(root, "schema_version", "is required");
  top.read("schema_version", cfg.schema_version);
  if (cfg.schema_version != kSchemaVersion) {
    top.fail(root["schema_version"], "schema_version",
             "unsupported version " + std::to_string(cfg.schema_version) + " (expected " +
                 std::to_string(kSchemaVersion) + ")");
  }
  top.read("name", cfg.name);
  if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos) {
    top.fail(root["name"], "name", "must be a non-empty file-name-safe string");
  }
  cfg.scenario.name = cfg.name;

  read_params(top.child("params"), cfg.scenario.params);
  read_scenario(top.child("scenario"), cfg.scenario);
  read_gains(top.child("gains"), cfg.scenario.gains);

  cfg.has_estimator = top.has("estimator");
  if (cfg.has_estimator) read_estimator(top.child("estimator"), cfg.scenario.estimator);

  cfg.has_sdsa = top.has("sdsa");
  if (cfg.has_sdsa) read_sdsa(top.child("sdsa"), cfg);

  read_stability(top.child("stability"), cfg.stability);

  cfg.has_filter_demo = top.has("filter_demo");
  read_filter_demo(top.child("filter_demo"), cfg.filter_demo);
  top.finish();

  top.validate([&] { cfg.scenario.validate(); });
  return cfg;
}

ChannelGains parse_gains_fragment(const std::string& text, const std::string& source,
                                  const ChannelGains& base) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ":" << e.mark.line + 1 << ": parse error: " << e.msg;
    throw ConfigError(os.str());
  }
  Section top(root, "", &source);
  if (!top.has("gains")) top.fail(root, "gains", "is required");
  int version = kSchemaVersion;
  top.read("schema_version", version);
  if (version != kSchemaVersion) top.fail(root["schema_version"], "schema_version", "unsupported");
  ChannelGains gains = base;
  read_gains(top.child("gains"), gains);
  top.finish();
  return gains;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

std::string gains_fragment(const ChannelGains& gains) {
  static constexpr std::array<const char*, kChannelCount> kNames = {"roll", "pitch", "yaw",
                                                                    "altitude"};
  std::ostringstream os;
  os << "gains:\n";
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    const PidaGains& g = gains[i];
    os << "  " << kNames[i] << ":\n"
       << "    kp: " << format_number(g.kp) << "\n"
       << "    ki: " << format_number(g.ki) << "\n"
       << "    kd: " << format_number(g.kd) << "\n"
       << "    ka: " << format_number(g.ka) << "\n"
       << "    tf: " << format_number(g.tf) << "\n";
  }
  return os.str();
}

}  // namespace pidaquad::cli
