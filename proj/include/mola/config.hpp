#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mola/games.hpp"
#include "mola/run_config.hpp"

namespace mola {

/// Parameters from which a benchmark game is generated (or the file it is read from).
struct GameSpec {
  GameKind kind = GameKind::Bilinear;
  int d = 100;
  double beta = 1.0;
  double eta_x = 0.1;
  double eta_y = 0.1;
  double sigma_min = 0.7;
  double sigma_max = 0.9;
  std::string file;  ///< serialized game; overrides the generator when set

  bool operator==(const GameSpec&) const = default;
};

LinearGame build_game(const GameSpec& spec, std::uint64_t seed);

/// Full description of a `run` experiment. Method tokens are kept verbatim
/// ("EG", "LA:40:0.5", ...) and resolved by method_configs().
struct ExperimentConfig {
  GameSpec game;
  std::uint64_t seed = 0;  ///< game seed; repeat r starts from z0 seed seed + 1 + r
  double gamma = 0.01;
  long iterations = 20000;
  std::vector<std::string> methods{"EG", "OGD", "LA:40:0.5", "MoLA"};
  int k = 40;
  double alpha = 0.5;
  int k_min = kDefaultKMin;
  int k_max = kDefaultKMax;
  std::vector<double> alpha_grid = default_alpha_grid();
  double z0_scale = 1.0;
  double box_radius = 0.0;
  int repeats = 1;
  std::string out = "results";
  bool plot = true;
  int log_every = 10;
  bool timing = true;
  bool embed_matrix = false;
  int threads = 0;
  bool dominant_cap = false;

  bool operator==(const ExperimentConfig&) const = default;

  void validate() const;
};

/// Applies one `key = value` assignment; `line` is used in diagnostics.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   int line = 0);

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
std::string serialize_config(const ExperimentConfig& config);

/// Comma-separated method list into tokens.
std::vector<std::string> split_methods(std::string_view text);

/// RunConfig for one method token. "LA" and "LAAdam" take k and alpha from
/// the experiment unless given as "LA:k:alpha".
RunConfig method_config(const ExperimentConfig& config, std::string_view token);
std::vector<RunConfig> method_configs(const ExperimentConfig& config);

}  // namespace mola
