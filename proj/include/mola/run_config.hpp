#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mola/modal.hpp"

namespace mola {

enum class Method { GD, EG, OGD, Adam, LA, LAAdam, MoLA };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Restriction used by the primal-dual gap. A box_radius <= 0 means
/// "10 * |z0|", resolved when a run starts.
struct GapSpec {
  double box_radius = 0.0;
  bool closed_form = true;
};

/// One solver configuration. T counts base-optimizer steps for every method.
struct RunConfig {
  Method method = Method::GD;
  double gamma = 0.01;
  long T = 1000;
  int k = 40;
  double alpha = 0.5;
  AdamParams adam;
  std::uint64_t seed = 0;
  double z0_scale = 1.0;

  // MoLA search space.
  int k_min = kDefaultKMin;
  int k_max = kDefaultKMax;
  std::vector<double> alpha_grid = default_alpha_grid();
  bool all_modes = false;
  bool dominant_cap = false;  ///< alpha cap from the dominant mode only

  // Gap of the running average is logged every gap_every iterations (0 disables).
  int gap_every = 10;
  GapSpec gap;
  bool timing = true;

  /// Unique, CSV-safe name: "GD", "LA-k40-a0.5", "MoLA", ...
  std::string label() const;
  /// Throws InvalidArgument when the configuration cannot run.
  void validate() const;
};

}  // namespace mola
