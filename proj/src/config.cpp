#include "mola/config.hpp"

#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "mola/errors.hpp"
#include "mola/textio.hpp"

namespace mola {

LinearGame build_game(const GameSpec& spec, std::uint64_t seed) {
  if (!spec.file.empty()) {
    std::ifstream in(spec.file);
    if (!in) throw IoError("cannot open game file '" + spec.file + "'");
    return read_game(in);
  }
  switch (spec.kind) {
    case GameKind::Bilinear:
      return make_bilinear(spec.d, spec.beta, seed);
    case GameKind::SCSC:
      return make_scsc(spec.d, spec.eta_x, spec.eta_y, spec.sigma_min, spec.sigma_max, seed);
    case GameKind::QuadraticRot:
      return make_quadratic_rot(spec.d, spec.beta, seed);
  }
  throw InvalidArgument("unknown game kind");
}

void ExperimentConfig::validate() const {
  if (game.d < 1) throw InvalidArgument("d must be >= 1");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be > 0");
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
  if (repeats < 1) throw InvalidArgument("repeats must be >= 1");
  if (log_every < 1) throw InvalidArgument("log_every must be >= 1");
  if (methods.empty()) throw InvalidArgument("no methods given");
  if (threads < 0) throw InvalidArgument("threads must be >= 0");
  std::set<std::string> labels;
  for (const RunConfig& rc : method_configs(*this)) {
    rc.validate();
    if (!labels.insert(rc.label()).second)
      throw InvalidArgument("method '" + rc.label() + "' listed twice");
  }
}

std::vector<std::string> split_methods(std::string_view text) {
  std::vector<std::string> out;
  for (const std::string& part : split(text, ',')) {
    const std::string_view t = trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

namespace {

std::string join_methods(const std::vector<std::string>& methods) {
  std::string out;
  for (std::size_t i = 0; i < methods.size(); ++i) out += (i ? ", " : "") + methods[i];
  return out;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + format_double(values[i]);
  return out;
}

int to_int(std::string_view value, std::string_view key) {
  return static_cast<int>(parse_int_field(value, key));
}

}  // namespace

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value, int line) {
  try {
    if (key == "game")
      c.game.kind = parse_game_kind(value);
    else if (key == "d")
      c.game.d = to_int(value, key);
    else if (key == "beta")
      c.game.beta = parse_double_field(value, key);
    else if (key == "eta_x")
      c.game.eta_x = parse_double_field(value, key);
    else if (key == "eta_y")
      c.game.eta_y = parse_double_field(value, key);
    else if (key == "eta")
      c.game.eta_x = c.game.eta_y = parse_double_field(value, key);
    else if (key == "sigma_min")
      c.game.sigma_min = parse_double_field(value, key);
    else if (key == "sigma_max")
      c.game.sigma_max = parse_double_field(value, key);
    else if (key == "game_file")
      c.game.file = std::string(value);
    else if (key == "seed")
      c.seed = parse_uint_field(value, key);
    else if (key == "gamma")
      c.gamma = parse_double_field(value, key);
    else if (key == "iterations" || key == "iters")
      c.iterations = parse_int_field(value, key);
    else if (key == "methods")
      c.methods = split_methods(value);
    else if (key == "k")
      c.k = to_int(value, key);
    else if (key == "alpha")
      c.alpha = parse_double_field(value, key);
    else if (key == "k_min")
      c.k_min = to_int(value, key);
    else if (key == "k_max")
      c.k_max = to_int(value, key);
    else if (key == "alpha_grid")
      c.alpha_grid = parse_double_list(value, line);
    else if (key == "z0_scale")
      c.z0_scale = parse_double_field(value, key);
    else if (key == "box_radius")
      c.box_radius = parse_double_field(value, key);
    else if (key == "repeats")
      c.repeats = to_int(value, key);
    else if (key == "out")
      c.out = std::string(value);
    else if (key == "plot")
      c.plot = parse_bool_field(value, key);
    else if (key == "log_every")
      c.log_every = to_int(value, key);
    else if (key == "timing")
      c.timing = parse_bool_field(value, key);
    else if (key == "embed_matrix")
      c.embed_matrix = parse_bool_field(value, key);
    else if (key == "dominant_cap")
      c.dominant_cap = parse_bool_field(value, key);
    else if (key == "threads")
      c.threads = to_int(value, key);
    else
      throw ParseError("unknown key '" + std::string(key) + "'");
  } catch (const ParseError& e) {
    if (line > 0) throw ParseError("line " + std::to_string(line) + ": " + e.what());
    throw;
  }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  for (const KeyValueLine& kv : read_key_values(in)) {
    std::string key = kv.key;
    // Accept both flat keys and a single level of [section] grouping.
    if (const auto dot = key.rfind('.'); dot != std::string::npos) key = key.substr(dot + 1);
    apply_setting(base, key, kv.value, kv.line);
  }
  return base;
}

ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base) {
  std::istringstream in{std::string(text)};
  return parse_config(in, std::move(base));
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "# mola experiment\n";
  out << "game = " << to_string(c.game.kind) << "\n";
  out << "d = " << c.game.d << "\n";
  out << "beta = " << format_double(c.game.beta) << "\n";
  out << "eta_x = " << format_double(c.game.eta_x) << "\n";
  out << "eta_y = " << format_double(c.game.eta_y) << "\n";
  out << "sigma_min = " << format_double(c.game.sigma_min) << "\n";
  out << "sigma_max = " << format_double(c.game.sigma_max) << "\n";
  if (!c.game.file.empty()) out << "game_file = " << c.game.file << "\n";
  out << "seed = " << c.seed << "\n";
  out << "gamma = " << format_double(c.gamma) << "\n";
  out << "iterations = " << c.iterations << "\n";
  out << "methods = " << join_methods(c.methods) << "\n";
  out << "k = " << c.k << "\n";
  out << "alpha = " << format_double(c.alpha) << "\n";
  out << "k_min = " << c.k_min << "\n";
  out << "k_max = " << c.k_max << "\n";
  out << "alpha_grid = " << join_doubles(c.alpha_grid) << "\n";
  out << "z0_scale = " << format_double(c.z0_scale) << "\n";
  out << "box_radius = " << format_double(c.box_radius) << "\n";
  out << "repeats = " << c.repeats << "\n";
  out << "out = " << c.out << "\n";
  out << "plot = " << (c.plot ? "true" : "false") << "\n";
  out << "log_every = " << c.log_every << "\n";
  out << "timing = " << (c.timing ? "true" : "false") << "\n";
  out << "embed_matrix = " << (c.embed_matrix ? "true" : "false") << "\n";
  out << "threads = " << c.threads << "\n";
  out << "dominant_cap = " << (c.dominant_cap ? "true" : "false") << "\n";
  return out.str();
}

RunConfig method_config(const ExperimentConfig& c, std::string_view token) {
  const std::vector<std::string> parts = split(token, ':');
  RunConfig rc;
  rc.method = parse_method(trim(parts.at(0)));
  rc.gamma = c.gamma;
  rc.T = c.iterations;
  rc.k = c.k;
  rc.alpha = c.alpha;
  rc.z0_scale = c.z0_scale;
  rc.k_min = c.k_min;
  rc.k_max = c.k_max;
  rc.alpha_grid = c.alpha_grid;
  rc.gap_every = c.log_every;
  rc.gap.box_radius = c.box_radius;
  rc.timing = c.timing;
  rc.dominant_cap = c.dominant_cap;
  if (parts.size() > 1) {
    if (rc.method != Method::LA && rc.method != Method::LAAdam)
      throw ParseError("method '" + std::string(token) + "' takes no parameters");
    if (parts.size() != 3)
      throw ParseError("expected LA:k:alpha, got '" + std::string(token) + "'");
    rc.k = static_cast<int>(parse_int_field(trim(parts[1]), "k"));
    rc.alpha = parse_double_field(trim(parts[2]), "alpha");
  }
  return rc;
}

std::vector<RunConfig> method_configs(const ExperimentConfig& c) {
  std::vector<RunConfig> out;
  for (const std::string& token : c.methods) out.push_back(method_config(c, token));
  return out;
}

}  // namespace mola
