#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "mola/games.hpp"
#include "mola/spectral.hpp"

namespace mola {

/// Phase-space state (z, v = dz/dt) at time t.
struct HRDEState {
  Eigen::VectorXd z;
  Eigen::VectorXd v;
  double t = 0.0;
  double dt = 0.0;
};

struct HRDESolution {
  std::vector<double> times;
  std::vector<HRDEState> states;
  double residual_max = 0.0;
  bool diverged = false;
  double blowup_time = std::numeric_limits<double>::quiet_NaN();
};

/// Acceleration as a function of position and velocity.
using AccelerationFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& z, const Eigen::VectorXd& v)>;

/// z'' = -(2/gamma) z' - (2 k alpha / gamma) F(z) + k (k - 1) alpha JF F(z).
Eigen::VectorXd la_hrde_rhs(const LinearGame& game, const Eigen::VectorXd& z,
                            const Eigen::VectorXd& v, double gamma, int k, double alpha);

/// z'' = -(2/gamma) z' - (2/gamma) F(z).
Eigen::VectorXd gd_hrde_rhs(const LinearGame& game, const Eigen::VectorXd& z,
                            const Eigen::VectorXd& v, double gamma);

struct IntegrateOptions {
  int record_every = 1;  ///< keep every n-th step (the first and last are always kept)
  double divergence_threshold = 1e12;
};

/// Classical RK4 with a fixed step on the first-order system (z, v)' = (v, a(z, v)).
/// The step is shrunk to t_end / ceil(t_end / dt) so the grid ends at t_end.
/// Integration stops with `diverged` set when |z| exceeds the threshold or
/// turns non-finite.
HRDESolution integrate(const AccelerationFn& accel, const Eigen::VectorXd& z0,
                       const Eigen::VectorXd& v0, double dt, double t_end,
                       const IntegrateOptions& options = {});

struct OdeTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> values;
  bool diverged = false;
  double blowup_time = std::numeric_limits<double>::quiet_NaN();
};

/// RK4 for a first-order system y' = f(t, y).
OdeTrajectory integrate_first_order(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& y0, double dt, double t_end, const IntegrateOptions& options = {});

/// omega_i = sqrt(1/gamma^2 - alpha k (k - 1) lambda_i^2) per eigenvalue of A
/// (principal branch). Throws InvalidArgument for games with curvature.
std::vector<Complex> bilinear_modal_frequencies(const LinearGame& game, double gamma, int k,
                                                double alpha);

/// Max-norm defect of the closed-form integral identities
///   x(t) = D_x(t) - (2 k alpha / gamma) (U diag(lambda_i g_i) U^T * y)(t)
///   y(t) = D_y(t) + (2 k alpha / gamma) (U diag(lambda_i g_i) U^T * x)(t)
/// with g_i(t) = e^{-t/gamma} sinh(omega_i t) / omega_i, evaluated on the
/// stored grid with trapezoidal convolution. Needs a bilinear game with a
/// symmetric coupling and a uniform time grid.
double solution_residual(const LinearGame& game, const HRDESolution& sol, double gamma, int k,
                         double alpha);

/// Bilinear game with a symmetric positive semidefinite coupling G G^T / d,
/// G seeded Gaussian; the setting of the closed-form trajectory identities.
LinearGame make_symmetric_bilinear(int d, std::uint64_t seed);

/// Empirical verdict: no blow-up and |z(t_end)| <= |z(t_end / 2)|.
bool trajectory_bounded(const HRDESolution& sol);

/// alpha < (k - 1) / k.
bool bg_convergence_condition(int k, double alpha);

/// Roots of the per-mode quartic
///   (s^2 + (2/gamma) s + alpha k (k - 1) s_i^2)^2 + (2 k alpha s_i / gamma)^2
/// over the singular values s_i of A; true iff every root has Re < 1e-9.
bool characteristic_stability(const LinearGame& game, double gamma, int k, double alpha);

/// Same test for the GD-HRDE quartic (s^2 + (2/gamma) s)^2 + (2 s_i / gamma)^2.
bool gd_characteristic_stability(const LinearGame& game, double gamma);

/// Roots of a monic polynomial s^n + c[n-1] s^{n-1} + ... + c[0] from its companion matrix.
std::vector<Complex> polynomial_roots(const std::vector<double>& lower_coeffs);

}  // namespace mola
