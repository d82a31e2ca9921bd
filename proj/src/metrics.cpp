#include "mola/metrics.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>

#include "mola/errors.hpp"
#include "mola/spectral.hpp"
#include "mola/textio.hpp"

namespace mola {

double distance(const JointPoint& z) { return z.z.norm(); }

JointPoint running_average(const JointPoint& prev_avg, const JointPoint& z_t, long t) {
  if (t < 1) throw InvalidArgument("running_average: t must be >= 1");
  if (prev_avg.z.size() != z_t.z.size()) throw ShapeError("running_average: dimension mismatch");
  return JointPoint(prev_avg.z + (z_t.z - prev_avg.z) / static_cast<double>(t));
}

double resolve_box_radius(const GapSpec& spec, const JointPoint& z0) {
  if (spec.box_radius > 0.0) return spec.box_radius;
  const double r = 10.0 * distance(z0);
  return r > 0.0 ? r : 1.0;
}

namespace {

void warn_box_fallback() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    std::cerr << "warning: closed-form gap needs positive curvatures; using the box-restricted form\n";
  });
}

}  // namespace

double restricted_gap(const LinearGame& game, const JointPoint& z_bar, const GapSpec& spec) {
  if (z_bar.d() != game.d() || z_bar.z.size() != 2 * game.d())
    throw ShapeError("restricted_gap: dimension mismatch");
  const Eigen::MatrixXd& a = game.coupling();
  const Eigen::VectorXd atx = a.transpose() * z_bar.x();
  const Eigen::VectorXd ay = a * z_bar.y();

  if (game.eta_x() > 0.0 && game.eta_y() > 0.0) {
    return 0.5 * game.eta_x() * z_bar.x().squaredNorm() + atx.squaredNorm() / (2.0 * game.eta_y()) +
           ay.squaredNorm() / (2.0 * game.eta_x()) + 0.5 * game.eta_y() * z_bar.y().squaredNorm();
  }
  if (spec.closed_form) warn_box_fallback();
  if (!(spec.box_radius > 0.0) || !std::isfinite(spec.box_radius))
    throw InvalidArgument("restricted_gap: box radius must be positive and finite");
  const double b = spec.box_radius;
  // With one curvature zero the remaining quadratic terms are still exact.
  return b * atx.lpNorm<1>() + b * ay.lpNorm<1>() + 0.5 * game.eta_x() * z_bar.x().squaredNorm() +
         0.5 * game.eta_y() * z_bar.y().squaredNorm();
}

JointPoint gap_comparator(const LinearGame& game, const JointPoint& z_bar, double box_radius) {
  const Eigen::MatrixXd& a = game.coupling();
  const Eigen::VectorXd atx = a.transpose() * z_bar.x();
  const Eigen::VectorXd ay = a * z_bar.y();
  auto sign = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
  Eigen::VectorXd xp = -box_radius * ay.unaryExpr(sign);
  Eigen::VectorXd yp = box_radius * atx.unaryExpr(sign);
  return JointPoint(xp, yp);
}

OperatorConstants operator_constants(const LinearGame& game) {
  const double norm_a = spectral_norm(game.coupling());
  const double lp = std::max(game.eta_x(), game.eta_y());
  return {std::min(game.eta_x(), game.eta_y()), std::sqrt(lp * lp + norm_a * norm_a)};
}

double ergodic_bound(const JointPoint& z0, const JointPoint& p, double alpha, double gamma, long T) {
  if (!(alpha > 0.0) || !(gamma > 0.0) || T < 1)
    throw InvalidArgument("ergodic_bound: alpha, gamma and T must be positive");
  return (z0.z - p.z).squaredNorm() / (2.0 * alpha * gamma * static_cast<double>(T));
}

std::string game_descriptor(const LinearGame& game) {
  std::ostringstream out;
  out << "kind=" << to_string(game.kind()) << " d=" << game.d()
      << " beta=" << format_double(game.beta()) << " eta_x=" << format_double(game.eta_x())
      << " eta_y=" << format_double(game.eta_y());
  if (game.kind() == GameKind::SCSC)
    out << " sigma_min=" << format_double(game.sigma_min())
        << " sigma_max=" << format_double(game.sigma_max());
  out << " seed=" << game.seed();
  return out.str();
}

double log_distance_slope(const TrajectoryLog& log, long from_iter) {
  std::vector<double> xs, ys;
  for (const TrajectoryRow& row : log.rows) {
    if (row.iter < from_iter || !(row.distance > 0.0) || !std::isfinite(row.distance)) continue;
    xs.push_back(static_cast<double>(row.iter));
    ys.push_back(std::log(row.distance));
  }
  if (xs.size() < 2) return 0.0;
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace mola
