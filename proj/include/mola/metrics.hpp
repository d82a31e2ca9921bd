#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mola/games.hpp"
#include "mola/modal.hpp"
#include "mola/run_config.hpp"

namespace mola {

/// Euclidean distance of the joint state to the equilibrium at the origin.
double distance(const JointPoint& z);

/// Incremental mean prev + (z_t - prev) / t, t >= 1.
JointPoint running_average(const JointPoint& prev_avg, const JointPoint& z_t, long t);

/// Box radius actually used for a run started at z0: spec.box_radius if
/// positive, else 10 * |z0|.
double resolve_box_radius(const GapSpec& spec, const JointPoint& z0);

/// Primal-dual gap max_y f(x_bar, y) - min_x f(x, y_bar). Quadratic games
/// with both curvatures positive use the unconstrained closed form; games
/// with a zero curvature (bilinear) are restricted to the box [-B, B]^d.
/// Requesting the closed form for a game without curvature falls back to
/// the box form and prints a warning to stderr once per process.
double restricted_gap(const LinearGame& game, const JointPoint& z_bar, const GapSpec& spec);

/// Box point p = (x_p, y_p) attaining the box-restricted gap of a bilinear
/// game: gap = f(x_bar, y_p) - f(x_p, y_bar).
JointPoint gap_comparator(const LinearGame& game, const JointPoint& z_bar, double box_radius);

struct OperatorConstants {
  double mu = 0.0;  ///< strong monotonicity
  double L = 0.0;   ///< Lipschitz constant
};

OperatorConstants operator_constants(const LinearGame& game);

/// |z0 - p|^2 / (2 alpha gamma T).
double ergodic_bound(const JointPoint& z0, const JointPoint& p, double alpha, double gamma, long T);

/// One-line `key=value` summary of a game's construction parameters.
std::string game_descriptor(const LinearGame& game);

struct TrajectoryRow {
  long iter = 0;
  long field_evals = 0;
  double cpu_s = 0.0;
  double wall_s = 0.0;
  double distance = 0.0;
  std::optional<double> gap;

  bool operator==(const TrajectoryRow&) const = default;
};

struct LogHeader {
  std::string game;
  RunConfig config;
  std::optional<ModalSelection> selection;
  int repeat = 0;
};

struct TrajectoryLog {
  LogHeader header;
  std::vector<TrajectoryRow> rows;
  JointPoint running_average;
  JointPoint final_point;
  bool diverged = false;

  double initial_distance() const { return rows.empty() ? 0.0 : rows.front().distance; }
  double final_distance() const { return rows.empty() ? 0.0 : rows.back().distance; }
};

/// Least-squares slope of log(distance) against iteration over the rows
/// with iter >= from_iter and positive distance.
double log_distance_slope(const TrajectoryLog& log, long from_iter = 0);

}  // namespace mola
