#include "mola/hrde.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "mola/errors.hpp"

namespace mola {

Eigen::VectorXd la_hrde_rhs(const LinearGame& game, const Eigen::VectorXd& z,
                            const Eigen::VectorXd& v, double gamma, int k, double alpha) {
  const JointPoint f = field_eval(game, JointPoint(z));
  // The field is linear, so JF * F(z) = F(F(z)).
  const JointPoint jf = field_eval(game, f);
  return -(2.0 / gamma) * v - (2.0 * k * alpha / gamma) * f.z +
         (static_cast<double>(k) * (k - 1) * alpha) * jf.z;
}

Eigen::VectorXd gd_hrde_rhs(const LinearGame& game, const Eigen::VectorXd& z,
                            const Eigen::VectorXd& v, double gamma) {
  return -(2.0 / gamma) * v - (2.0 / gamma) * field_eval(game, JointPoint(z)).z;
}

namespace {

long step_count(double dt, double t_end) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw InvalidArgument("integrate: dt and t_end must be > 0");
  return static_cast<long>(std::ceil(t_end / dt - 1e-9));
}

}  // namespace

OdeTrajectory integrate_first_order(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& y0, double dt, double t_end, const IntegrateOptions& options) {
  const long n = step_count(dt, t_end);
  const double h = t_end / static_cast<double>(n);
  const int every = std::max(1, options.record_every);
  OdeTrajectory out;
  out.times.push_back(0.0);
  out.values.push_back(y0);
  Eigen::VectorXd y = y0;
  for (long i = 1; i <= n; ++i) {
    const double t = h * static_cast<double>(i - 1);
    const Eigen::VectorXd k1 = f(t, y);
    const Eigen::VectorXd k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(t + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double ti = h * static_cast<double>(i);
    if (!y.allFinite() || y.norm() > options.divergence_threshold) {
      out.diverged = true;
      out.blowup_time = ti;
      break;
    }
    if (i % every == 0 || i == n) {
      out.times.push_back(ti);
      out.values.push_back(y);
    }
  }
  return out;
}

HRDESolution integrate(const AccelerationFn& accel, const Eigen::VectorXd& z0,
                       const Eigen::VectorXd& v0, double dt, double t_end,
                       const IntegrateOptions& options) {
  if (z0.size() != v0.size()) throw ShapeError("integrate: z0 and v0 differ in length");
  const long n = step_count(dt, t_end);
  const double h = t_end / static_cast<double>(n);
  const int every = std::max(1, options.record_every);
  const Eigen::Index m = z0.size();

  HRDESolution out;
  auto record = [&](double t, const Eigen::VectorXd& z, const Eigen::VectorXd& v) {
    out.times.push_back(t);
    out.states.push_back({z, v, t, h});
  };
  record(0.0, z0, v0);

  Eigen::VectorXd z = z0, v = v0;
  Eigen::VectorXd zt(m), vt(m);
  for (long i = 1; i <= n; ++i) {
    const Eigen::VectorXd a1 = accel(z, v);
    const Eigen::VectorXd& dz1 = v;
    zt = z + 0.5 * h * dz1;
    vt = v + 0.5 * h * a1;
    const Eigen::VectorXd dz2 = vt;
    const Eigen::VectorXd a2 = accel(zt, vt);
    zt = z + 0.5 * h * dz2;
    vt = v + 0.5 * h * a2;
    const Eigen::VectorXd dz3 = vt;
    const Eigen::VectorXd a3 = accel(zt, vt);
    zt = z + h * dz3;
    vt = v + h * a3;
    const Eigen::VectorXd a4 = accel(zt, vt);
    z += (h / 6.0) * (dz1 + 2.0 * dz2 + 2.0 * dz3 + vt);
    v += (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    const double t = h * static_cast<double>(i);
    if (!z.allFinite() || !v.allFinite() || z.norm() > options.divergence_threshold) {
      out.diverged = true;
      out.blowup_time = t;
      break;
    }
    if (i % every == 0 || i == n) record(t, z, v);
  }
  return out;
}

std::vector<Complex> bilinear_modal_frequencies(const LinearGame& game, double gamma, int k,
                                                double alpha) {
  if (!game.is_bilinear())
    throw InvalidArgument("bilinear_modal_frequencies: game has curvature (unsupported)");
  if (!(gamma > 0.0)) throw InvalidArgument("bilinear_modal_frequencies: gamma must be > 0");
  const double c = alpha * k * (k - 1);
  std::vector<Complex> out;
  for (const Complex& lambda : eigenvalues(game.coupling()))
    out.push_back(std::sqrt(Complex(1.0 / (gamma * gamma)) - c * lambda * lambda));
  return out;
}

namespace {

// e^{-t/gamma} cosh(w t) and e^{-t/gamma} sinh(w t) / w with the decay folded
// into each exponential.
struct DampedHyperbolic {
  double cosh_part;
  double sinh_over_w;
};

DampedHyperbolic damped(Complex w, double gamma, double t) {
  const double decay = 1.0 / gamma;
  if (std::abs(w) < 1e-12) {
    const double e = std::exp(-decay * t);
    return {e, t * e};
  }
  const Complex ep = std::exp((w - decay) * t);
  const Complex em = std::exp((-w - decay) * t);
  return {(0.5 * (ep + em)).real(), (0.5 * (ep - em) / w).real()};
}

}  // namespace

double solution_residual(const LinearGame& game, const HRDESolution& sol, double gamma, int k,
                         double alpha) {
  if (!game.is_bilinear()) throw InvalidArgument("solution_residual: bilinear game required");
  const Eigen::MatrixXd& a = game.coupling();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    throw InvalidArgument("solution_residual: coupling must be symmetric");
  const std::size_t n = sol.times.size();
  if (n == 0 || sol.states.size() != n) throw InvalidArgument("solution_residual: empty solution");
  const double h = n > 1 ? sol.times[1] - sol.times[0] : 0.0;
  for (std::size_t j = 1; j < n; ++j)
    if (std::abs(sol.times[j] - sol.times[j - 1] - h) > 1e-9 * std::max(1.0, h) || !(h > 0.0))
      throw InvalidArgument("solution_residual: time grid is not uniform");

  const int d = game.d();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const Eigen::MatrixXd& u = eig.eigenvectors();
  const Eigen::VectorXd& lambda = eig.eigenvalues();

  // Trajectories in eigen-coordinates, one column per grid time.
  Eigen::MatrixXd p(d, n), q(d, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Eigen::VectorXd& z = sol.states[j].z;
    p.col(j) = u.transpose() * z.head(d);
    q.col(j) = u.transpose() * z.tail(d);
  }
  const Eigen::VectorXd p0 = p.col(0), q0 = q.col(0);
  const Eigen::VectorXd pd0 = u.transpose() * sol.states[0].v.head(d);
  const Eigen::VectorXd qd0 = u.transpose() * sol.states[0].v.tail(d);

  const double coupling = 2.0 * k * alpha / gamma;
  const double c = alpha * k * (k - 1);
  Eigen::MatrixXd rhs_p(d, n), rhs_q(d, n);
  std::vector<double> g(n);
  for (int i = 0; i < d; ++i) {
    const Complex w = std::sqrt(Complex(1.0 / (gamma * gamma) - c * lambda(i) * lambda(i)));
    for (std::size_t m = 0; m < n; ++m) {
      const double t = sol.times[m] - sol.times[0];
      const DampedHyperbolic dh = damped(w, gamma, t);
      g[m] = dh.sinh_over_w;
      rhs_p(i, m) = dh.cosh_part * p0(i) + dh.sinh_over_w * (pd0(i) + p0(i) / gamma);
      rhs_q(i, m) = dh.cosh_part * q0(i) + dh.sinh_over_w * (qd0(i) + q0(i) / gamma);
    }
    for (std::size_t m = 1; m < n; ++m) {
      double conv_q = 0.5 * (g[m] * q(i, 0) + g[0] * q(i, m));
      double conv_p = 0.5 * (g[m] * p(i, 0) + g[0] * p(i, m));
      for (std::size_t j = 1; j < m; ++j) {
        conv_q += g[m - j] * q(i, j);
        conv_p += g[m - j] * p(i, j);
      }
      rhs_p(i, m) -= coupling * lambda(i) * h * conv_q;
      rhs_q(i, m) += coupling * lambda(i) * h * conv_p;
    }
  }

  double worst = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const Eigen::VectorXd& z = sol.states[m].z;
    worst = std::max(worst, (z.head(d) - u * rhs_p.col(m)).cwiseAbs().maxCoeff());
    worst = std::max(worst, (z.tail(d) - u * rhs_q.col(m)).cwiseAbs().maxCoeff());
  }
  return worst;
}

LinearGame make_symmetric_bilinear(int d, std::uint64_t seed) {
  const Eigen::MatrixXd g = gaussian_matrix(d, d, 1.0, seed);
  Eigen::MatrixXd a = g * g.transpose() / static_cast<double>(d);
  a = 0.5 * (a + a.transpose());
  return LinearGame(GameKind::Bilinear, a, 0.0, 0.0, 1.0, seed);
}

bool trajectory_bounded(const HRDESolution& sol) {
  if (sol.diverged || sol.times.empty()) return false;
  const double t_end = sol.times.back();
  std::size_t mid = 0;
  for (std::size_t i = 0; i < sol.times.size(); ++i)
    if (std::abs(sol.times[i] - 0.5 * t_end) < std::abs(sol.times[mid] - 0.5 * t_end)) mid = i;
  return sol.states.back().z.norm() <= sol.states[mid].z.norm();
}

bool bg_convergence_condition(int k, double alpha) {
  return alpha < static_cast<double>(k - 1) / static_cast<double>(k);
}

std::vector<Complex> polynomial_roots(const std::vector<double>& lower_coeffs) {
  const int n = static_cast<int>(lower_coeffs.size());
  if (n == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -lower_coeffs[static_cast<std::size_t>(i)];
  return eigenvalues(companion);
}

namespace {

// Monic quartic (s^2 + b s + c)^2 + e, lowest coefficient first.
std::vector<double> squared_quadratic_plus(double b, double c, double e) {
  return {c * c + e, 2.0 * b * c, b * b + 2.0 * c, 2.0 * b};
}

bool all_roots_stable(const std::vector<double>& coeffs) {
  for (const Complex& s : polynomial_roots(coeffs))
    if (!(s.real() < 1e-9)) return false;
  return true;
}

Eigen::VectorXd singular_values(const LinearGame& game) {
  if (!game.is_bilinear()) throw InvalidArgument("characteristic_stability: bilinear game required");
  return Eigen::JacobiSVD<Eigen::MatrixXd>(game.coupling()).singularValues();
}

}  // namespace

bool characteristic_stability(const LinearGame& game, double gamma, int k, double alpha) {
  if (!(gamma > 0.0)) throw InvalidArgument("characteristic_stability: gamma must be > 0");
  const double b = 2.0 / gamma;
  for (double s : singular_values(game)) {
    if (s <= 1e-14) continue;  // static mode, double root at 0
    const double c = alpha * k * (k - 1) * s * s;
    const double e = 2.0 * k * alpha * s / gamma;
    if (!all_roots_stable(squared_quadratic_plus(b, c, e * e))) return false;
  }
  return true;
}

bool gd_characteristic_stability(const LinearGame& game, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("gd_characteristic_stability: gamma must be > 0");
  const double b = 2.0 / gamma;
  for (double s : singular_values(game)) {
    if (s <= 1e-14) continue;
    const double e = 2.0 * s / gamma;
    if (!all_roots_stable(squared_quadratic_plus(b, 0.0, e * e))) return false;
  }
  return true;
}

}  // namespace mola
