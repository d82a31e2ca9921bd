#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mola/config.hpp"
#include "mola/csv.hpp"
#include "mola/hrde.hpp"
#include "mola/metrics.hpp"
#include "mola/modal.hpp"
#include "mola/svg.hpp"

namespace mola {

struct RunResult {
  std::string label;
  int repeat = 0;
  TrajectoryLog log;
};

/// Runs every method on every repeat, using a worker pool. Results come back
/// sorted by (label, repeat) whatever the scheduling was.
std::vector<RunResult> run_experiment(const ExperimentConfig& config, const LinearGame& game);

std::vector<CsvSeries> to_series(const std::vector<RunResult>& runs, int log_every);

/// Distance against iterations (or CPU seconds when `cpu_axis`).
LineChart distance_chart(const std::vector<CsvSeries>& series, bool cpu_axis);

/// Writes per-run CSVs, combined.csv, game.txt, config.txt, summary.txt and,
/// when enabled, the two distance charts. Returns the written paths.
std::vector<std::string> write_experiment(const ExperimentConfig& config, const LinearGame& game,
                                          const std::vector<RunResult>& runs);

std::string summarize_runs(const std::vector<RunResult>& runs);

/// `a+bi`, `a-bi`, `a`, `bi` tokens separated by commas or whitespace.
std::vector<Complex> parse_eigenvalue_list(std::string_view text);
Complex parse_complex(std::string_view token);
std::string format_complex(Complex z);

/// Aligned `key value` lines.
std::string format_selection(const ModalSelection& sel);
std::string selection_json(const ModalSelection& sel);

struct RotationPoint {
  double beta = 0.0;
  ModalSelection selection;
};

std::vector<RotationPoint> sweep_rotation(int d, const std::vector<double>& betas, double gamma,
                                          std::uint64_t seed, int k_min = kDefaultKMin,
                                          int k_max = kDefaultKMax,
                                          const std::vector<double>& alpha_grid = default_alpha_grid(),
                                          const ModalSearchOptions& search = {});

std::string rotation_csv(const std::vector<RotationPoint>& points);
LineChart rotation_k_chart(const std::vector<RotationPoint>& points);
LineChart rotation_alpha_chart(const std::vector<RotationPoint>& points);

/// Spearman rank correlation (average ranks on ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

struct HrdeRequest {
  double gamma = 0.01;
  int k = 2;
  double alpha = 0.45;
  double dt = 1e-4;
  double t_end = 2.0;
  bool gd_mode = false;
  int record_every = 1;
};

struct HrdeReport {
  HRDESolution solution;
  bool bg_condition = false;
  bool characteristic = false;
  bool bounded = false;
  std::optional<double> residual;
};

/// Integrates the LA-HRDE (or GD-HRDE) from z0 with zero initial velocity
/// and evaluates the three convergence verdicts.
HrdeReport run_hrde(const LinearGame& game, const Eigen::VectorXd& z0, const HrdeRequest& req);

}  // namespace mola
