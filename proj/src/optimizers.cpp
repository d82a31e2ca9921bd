#include "mola/optimizers.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "mola/errors.hpp"
#include "mola/rng.hpp"
#include "mola/spectral.hpp"
#include "mola/textio.hpp"

namespace mola {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::GD:
      return "GD";
    case Method::EG:
      return "EG";
    case Method::OGD:
      return "OGD";
    case Method::Adam:
      return "Adam";
    case Method::LA:
      return "LA";
    case Method::LAAdam:
      return "LAAdam";
    case Method::MoLA:
      return "MoLA";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "gd") return Method::GD;
  if (lower == "eg") return Method::EG;
  if (lower == "ogd") return Method::OGD;
  if (lower == "adam") return Method::Adam;
  if (lower == "la" || lower == "la-gd") return Method::LA;
  if (lower == "laadam" || lower == "la-adam") return Method::LAAdam;
  if (lower == "mola") return Method::MoLA;
  throw ParseError("unknown method '" + std::string(name) + "'");
}

std::string RunConfig::label() const {
  if (method == Method::LA || method == Method::LAAdam) {
    std::ostringstream out;
    out << to_string(method) << "-k" << k << "-a" << format_double(alpha);
    return out.str();
  }
  return std::string(to_string(method));
}

void RunConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be > 0");
  if (T < 1) throw InvalidArgument("iterations must be >= 1");
  if (!(z0_scale >= 0.0)) throw InvalidArgument("z0_scale must be >= 0");
  if (method == Method::LA || method == Method::LAAdam) {
    if (k < 1) throw InvalidArgument("LookAhead k must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("LookAhead alpha must lie in (0, 1]");
  }
  if (method == Method::Adam || method == Method::LAAdam) {
    if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0))
      throw InvalidArgument("Adam betas must lie in [0, 1)");
    if (!(adam.eps > 0.0)) throw InvalidArgument("Adam eps must be > 0");
  }
  if (method == Method::MoLA) {
    if (k_min < 1 || k_max < k_min) throw InvalidArgument("need 1 <= k_min <= k_max");
    if (alpha_grid.empty()) throw InvalidArgument("alpha grid is empty");
  }
  if (gap_every < 0) throw InvalidArgument("gap interval must be >= 0");
}

SolverState SolverState::start(const JointPoint& z0) {
  SolverState s;
  s.z = z0;
  s.anchor = z0;
  return s;
}

JointPoint gd_step(const LinearGame& game, const JointPoint& z, double gamma) {
  return JointPoint(z.z - gamma * field_eval(game, z).z);
}

JointPoint eg_step(const LinearGame& game, const JointPoint& z, double gamma) {
  const JointPoint half(z.z - gamma * field_eval(game, z).z);
  return JointPoint(z.z - gamma * field_eval(game, half).z);
}

SolverState ogd_step(const LinearGame& game, SolverState state, double gamma) {
  JointPoint f = field_eval(game, state.z);
  ++state.field_evals;
  const JointPoint& prev = state.z_prev_field ? *state.z_prev_field : f;
  state.z.z = state.z.z - 2.0 * gamma * f.z + gamma * prev.z;
  state.z_prev_field = std::move(f);
  ++state.t;
  return state;
}

SolverState adam_step(const LinearGame& game, SolverState state, double gamma,
                      const AdamParams& params) {
  const Eigen::VectorXd g = field_eval(game, state.z).z;
  ++state.field_evals;
  if (!state.adam_m) state.adam_m = JointPoint(Eigen::VectorXd::Zero(g.size()));
  if (!state.adam_v) state.adam_v = JointPoint(Eigen::VectorXd::Zero(g.size()));
  ++state.adam_t;
  Eigen::VectorXd& m = state.adam_m->z;
  Eigen::VectorXd& v = state.adam_v->z;
  m = params.beta1 * m + (1.0 - params.beta1) * g;
  v = params.beta2 * v + (1.0 - params.beta2) * g.cwiseAbs2();
  const double t = static_cast<double>(state.adam_t);
  const double c1 = 1.0 - std::pow(params.beta1, t);
  const double c2 = 1.0 - std::pow(params.beta2, t);
  state.z.z -= gamma * ((m / c1).array() / ((v / c2).array().sqrt() + params.eps)).matrix();
  ++state.t;
  return state;
}

SolverState la_step(const LinearGame& game, SolverState state, BaseOptimizer base, int k,
                    double alpha, double gamma, const AdamParams& params) {
  if (base == BaseOptimizer::GD) {
    state.z = gd_step(game, state.z, gamma);
    ++state.field_evals;
    ++state.t;
  } else {
    state = adam_step(game, std::move(state), gamma, params);
  }
  if (++state.step_in_cycle == k) {
    state.z.z = (1.0 - alpha) * state.anchor.z + alpha * state.z.z;
    state.anchor = state.z;
    state.step_in_cycle = 0;
  }
  return state;
}

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

JointPoint initial_point(int d, std::uint64_t seed, double scale) {
  if (d < 1) throw InvalidArgument("initial_point: d must be >= 1");
  Xoshiro256 rng(seed);
  Eigen::VectorXd z(2 * d);
  for (int i = 0; i < 2 * d; ++i) z(i) = scale * rng.gaussian();
  return JointPoint(std::move(z));
}

namespace {

// Shared logging loop: `advance` performs one base step on the state.
template <typename Advance>
TrajectoryLog drive(const LinearGame& game, const JointPoint& z0, long T,
                    const LogOptions& options, Advance advance) {
  if (z0.z.size() != 2 * game.d()) throw ShapeError("initial point does not match the game");
  TrajectoryLog log;
  log.rows.reserve(static_cast<std::size_t>(T) + 1);
  GapSpec gap = options.gap;
  gap.box_radius = resolve_box_radius(options.gap, z0);
  log.header.config.gap = gap;

  const double cpu0 = options.timing ? thread_cpu_seconds() : 0.0;
  const auto wall0 = std::chrono::steady_clock::now();
  auto stamp = [&](TrajectoryRow& row) {
    if (!options.timing) return;
    row.cpu_s = thread_cpu_seconds() - cpu0;
    row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  };

  SolverState state = SolverState::start(z0);
  JointPoint avg = z0;
  {
    TrajectoryRow row;
    row.distance = distance(z0);
    if (options.gap_every > 0) row.gap = restricted_gap(game, z0, gap);
    stamp(row);
    log.rows.push_back(row);
  }
  for (long t = 1; t <= T; ++t) {
    advance(state);
    if (!state.z.z.allFinite()) {
      log.diverged = true;
      break;
    }
    avg.z += (state.z.z - avg.z) / static_cast<double>(t);
    if (options.observer) options.observer(t, state.z, avg);
    TrajectoryRow row;
    row.iter = t;
    row.field_evals = state.field_evals;
    row.distance = distance(state.z);
    if (options.gap_every > 0 && t % options.gap_every == 0) row.gap = restricted_gap(game, avg, gap);
    stamp(row);
    log.rows.push_back(row);
  }
  log.running_average = avg;
  log.final_point = state.z;
  log.header.game = game_descriptor(game);
  return log;
}

}  // namespace

TrajectoryLog la_run(const LinearGame& game, BaseOptimizer base, int k, double alpha,
                     double gamma, long T, const JointPoint& z0, const LogOptions& options,
                     const AdamParams& params) {
  if (k < 1) throw InvalidArgument("la_run: k must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("la_run: alpha must lie in (0, 1]");
  if (!(gamma > 0.0)) throw InvalidArgument("la_run: gamma must be > 0");
  TrajectoryLog log = drive(game, z0, T, options, [&](SolverState& s) {
    s = la_step(game, std::move(s), base, k, alpha, gamma, params);
  });
  RunConfig& c = log.header.config;
  c.method = base == BaseOptimizer::GD ? Method::LA : Method::LAAdam;
  c.gamma = gamma;
  c.T = T;
  c.k = k;
  c.alpha = alpha;
  c.adam = params;
  c.gap_every = options.gap_every;
  c.timing = options.timing;
  return log;
}

std::pair<ModalSelection, TrajectoryLog> mola_run(const LinearGame& game, double gamma, long T,
                                                  int k_min, int k_max,
                                                  const std::vector<double>& alpha_grid,
                                                  const JointPoint& z0, const LogOptions& options,
                                                  const ModalSearchOptions& search) {
  const std::vector<Complex> lambdas = eigenvalues(jacobian(game));
  const ModalSelection sel = choose_modal_params(lambdas, k_min, k_max, alpha_grid, gamma, search);
  TrajectoryLog log =
      la_run(game, BaseOptimizer::GD, sel.k, sel.alpha, gamma, T, z0, options);
  RunConfig& c = log.header.config;
  c.method = Method::MoLA;
  c.k_min = k_min;
  c.k_max = k_max;
  c.alpha_grid = alpha_grid;
  c.all_modes = search.all_modes;
  c.dominant_cap = !search.cap_all_modes;
  log.header.selection = sel;
  return {sel, std::move(log)};
}

TrajectoryLog run_method(const LinearGame& game, const RunConfig& config, const JointPoint& z0,
                         const IterateObserver& observer) {
  config.validate();
  LogOptions options;
  options.gap_every = config.gap_every;
  options.gap = config.gap;
  options.timing = config.timing;
  options.observer = observer;
  const double gamma = config.gamma;

  TrajectoryLog log;
  switch (config.method) {
    case Method::GD:
      log = drive(game, z0, config.T, options, [&](SolverState& s) {
        s.z = gd_step(game, s.z, gamma);
        ++s.field_evals;
        ++s.t;
      });
      break;
    case Method::EG:
      log = drive(game, z0, config.T, options, [&](SolverState& s) {
        s.z = eg_step(game, s.z, gamma);
        s.field_evals += 2;
        ++s.t;
      });
      break;
    case Method::OGD:
      log = drive(game, z0, config.T, options,
                  [&](SolverState& s) { s = ogd_step(game, std::move(s), gamma); });
      break;
    case Method::Adam:
      log = drive(game, z0, config.T, options,
                  [&](SolverState& s) { s = adam_step(game, std::move(s), gamma, config.adam); });
      break;
    case Method::LA:
    case Method::LAAdam:
      log = la_run(game, config.method == Method::LA ? BaseOptimizer::GD : BaseOptimizer::Adam,
                   config.k, config.alpha, gamma, config.T, z0, options, config.adam);
      break;
    case Method::MoLA: {
      ModalSearchOptions search;
      search.all_modes = config.all_modes;
      search.cap_all_modes = !config.dominant_cap;
      log = mola_run(game, gamma, config.T, config.k_min, config.k_max, config.alpha_grid, z0,
                     options, search)
                .second;
      break;
    }
  }
  const GapSpec resolved = log.header.config.gap;
  log.header.config = config;
  log.header.config.gap = resolved;
  return log;
}

}  // namespace mola
