#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "mola/games.hpp"
#include "mola/metrics.hpp"
#include "mola/modal.hpp"
#include "mola/run_config.hpp"

namespace mola {

/// Mutable solver memory shared by all steppers.
struct SolverState {
  JointPoint z;
  std::optional<JointPoint> z_prev_field;  ///< OGD: F(z_{t-1})
  JointPoint anchor;                       ///< LA snapshot
  int step_in_cycle = 0;
  std::optional<JointPoint> adam_m;
  std::optional<JointPoint> adam_v;
  long t = 0;       ///< base steps taken
  long adam_t = 0;  ///< Adam bias-correction counter
  long field_evals = 0;

  static SolverState start(const JointPoint& z0);
};

/// z - gamma F(z).
JointPoint gd_step(const LinearGame& game, const JointPoint& z, double gamma);

/// Extragradient: z - gamma F(z - gamma F(z)).
JointPoint eg_step(const LinearGame& game, const JointPoint& z, double gamma);

/// z - 2 gamma F(z_t) + gamma F(z_{t-1}), with F(z_{-1}) := F(z_0).
SolverState ogd_step(const LinearGame& game, SolverState state, double gamma);

/// Bias-corrected Adam on the joint field (descent in x, ascent in y through F).
SolverState adam_step(const LinearGame& game, SolverState state, double gamma,
                      const AdamParams& params = {});

enum class BaseOptimizer { GD, Adam };

/// One base step, followed by z <- (1 - alpha) anchor + alpha z when it
/// completes a cycle of length k.
SolverState la_step(const LinearGame& game, SolverState state, BaseOptimizer base, int k,
                    double alpha, double gamma, const AdamParams& params = {});

/// Called after every base step with the current and running-average iterates.
using IterateObserver =
    std::function<void(long iter, const JointPoint& z, const JointPoint& average)>;

struct LogOptions {
  int gap_every = 10;
  GapSpec gap;
  bool timing = true;
  IterateObserver observer;
};

TrajectoryLog la_run(const LinearGame& game, BaseOptimizer base, int k, double alpha,
                     double gamma, long T, const JointPoint& z0, const LogOptions& options = {},
                     const AdamParams& params = {});

/// Selects (k, alpha) once from the exact spectrum of the constant Jacobian
/// and runs LookAhead-GD with it.
std::pair<ModalSelection, TrajectoryLog> mola_run(const LinearGame& game, double gamma, long T,
                                                  int k_min, int k_max,
                                                  const std::vector<double>& alpha_grid,
                                                  const JointPoint& z0,
                                                  const LogOptions& options = {},
                                                  const ModalSearchOptions& search = {});

TrajectoryLog run_method(const LinearGame& game, const RunConfig& config, const JointPoint& z0,
                         const IterateObserver& observer = {});

/// Seeded standard Gaussian start point of length 2d, scaled by `scale`.
JointPoint initial_point(int d, std::uint64_t seed, double scale = 1.0);

/// Process-independent clocks used in logs.
double thread_cpu_seconds();

}  // namespace mola
