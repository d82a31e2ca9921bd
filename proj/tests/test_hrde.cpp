#include <doctest.h>

#include <cmath>

#include "mola/errors.hpp"
#include "mola/experiment.hpp"
#include "mola/games.hpp"
#include "mola/hrde.hpp"
#include "mola/optimizers.hpp"

using namespace mola;

namespace {

LinearGame scalar_bilinear(double a) {
  return LinearGame(GameKind::Bilinear, Eigen::MatrixXd::Constant(1, 1, a), 0, 0, 1, 0);
}

Eigen::VectorXd vec2(double a, double b) { return Eigen::Vector2d(a, b); }

AccelerationFn la_accel(const LinearGame& g, double gamma, int k, double alpha) {
  return [&g, gamma, k, alpha](const Eigen::VectorXd& z, const Eigen::VectorXd& v) {
    return la_hrde_rhs(g, z, v, gamma, k, alpha);
  };
}

}  // namespace

TEST_CASE("la hrde right-hand side") {
  const LinearGame g = scalar_bilinear(1.0);
  CHECK(la_hrde_rhs(g, vec2(0, 0), vec2(0, 0), 0.01, 3, 0.5).norm() == 0.0);

  const Eigen::VectorXd z = vec2(0.3, -0.7), v = vec2(1.1, 0.4);
  const Eigen::VectorXd f = field_eval(g, JointPoint(z)).z;
  CHECK((la_hrde_rhs(g, z, v, 0.1, 1, 0.6) - (-(2 / 0.1) * v - (2 * 0.6 / 0.1) * f)).norm() < 1e-12);

  // k = 2, alpha = 0.5, gamma = 0.01 at z = (1, 0): F = (0, -1), JF F = (-1, 0).
  const Eigen::VectorXd acc = la_hrde_rhs(g, vec2(1, 0), vec2(0, 0), 0.01, 2, 0.5);
  CHECK(acc(0) == doctest::Approx(-1.0));
  CHECK(acc(1) == doctest::Approx(200.0));

  const Eigen::VectorXd gd = gd_hrde_rhs(g, z, v, 0.1);
  CHECK((gd - (-(2 / 0.1) * v - (2 / 0.1) * f)).norm() < 1e-12);
}

TEST_CASE("rk4 integrates exponential decay") {
  const auto f = [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd { return -y; };
  const OdeTrajectory tr = integrate_first_order(f, Eigen::VectorXd::Constant(1, 1.0), 1e-3, 1.0);
  CHECK(std::abs(tr.values.back()(0) - std::exp(-1.0)) < 1e-8);
  CHECK(tr.times.back() == doctest::Approx(1.0));
  CHECK(tr.times.size() == 1001);
}

TEST_CASE("rk4 order") {
  // z'' = -z, z(0) = 1, z'(0) = 0: z = cos t.
  const AccelerationFn osc = [](const Eigen::VectorXd& z, const Eigen::VectorXd&) -> Eigen::VectorXd { return -z; };
  auto max_error = [&](double dt) {
    const HRDESolution s = integrate(osc, Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Zero(1), dt, 5.0);
    double e = 0;
    for (std::size_t i = 0; i < s.times.size(); ++i) e = std::max(e, std::abs(s.states[i].z(0) - std::cos(s.times[i])));
    return e;
  };
  const double ratio = max_error(0.05) / max_error(0.025);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("integration records, thins and validates") {
  const AccelerationFn zero = [](const Eigen::VectorXd& z, const Eigen::VectorXd&) -> Eigen::VectorXd {
    return Eigen::VectorXd::Zero(z.size());
  };
  IntegrateOptions o;
  o.record_every = 10;
  const HRDESolution s = integrate(zero, vec2(1, 2), vec2(1, 0), 0.01, 1.0, o);
  CHECK(s.times.size() == 11);
  CHECK(s.states.back().z(0) == doctest::Approx(2.0));
  for (std::size_t i = 1; i < s.times.size(); ++i) CHECK(s.times[i] > s.times[i - 1]);
  CHECK_THROWS_AS(integrate(zero, vec2(1, 2), vec2(1, 0), 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(integrate(zero, vec2(1, 2), vec2(1, 0), 0.1, -1.0), InvalidArgument);
}

TEST_CASE("gd hrde diverges on a bilinear game") {
  const LinearGame g = scalar_bilinear(3.0);
  const AccelerationFn acc = [&](const Eigen::VectorXd& z, const Eigen::VectorXd& v) { return gd_hrde_rhs(g, z, v, 1.0); };
  const HRDESolution s = integrate(acc, vec2(1, 0), vec2(0, 0), 1e-3, 60.0);
  CHECK(s.diverged);
  CHECK(std::isfinite(s.blowup_time));
  CHECK(s.states.back().z.norm() > 1.0);
  CHECK_FALSE(gd_characteristic_stability(g, 1.0));
  CHECK_FALSE(gd_characteristic_stability(make_bilinear(5, 1.0, 0), 0.01));
  // Norm grows over the tail of the recorded run.
  const HRDESolution early = integrate(acc, vec2(1, 0), vec2(0, 0), 1e-3, 3.0);
  CHECK(early.states.back().z.norm() > early.states[early.states.size() / 2].z.norm());
}

TEST_CASE("modal frequencies") {
  const auto w = bilinear_modal_frequencies(scalar_bilinear(1.0), 0.01, 2, 0.4);
  REQUIRE(w.size() == 1);
  CHECK(w[0].real() == doctest::Approx(std::sqrt(10000 - 0.8)));
  CHECK(w[0].imag() == 0.0);
  CHECK(w[0].real() == doctest::Approx(99.996).epsilon(1e-5));
  CHECK(bilinear_modal_frequencies(scalar_bilinear(1.0), 0.01, 1, 0.4)[0] == Complex(100, 0));
  CHECK(bilinear_modal_frequencies(scalar_bilinear(0.0), 0.01, 5, 0.4)[0] == Complex(100, 0));
  // Depends on lambda through its square.
  CHECK(bilinear_modal_frequencies(scalar_bilinear(-2.0), 0.1, 3, 0.5)[0] ==
        bilinear_modal_frequencies(scalar_bilinear(2.0), 0.1, 3, 0.5)[0]);
  const Complex big = bilinear_modal_frequencies(scalar_bilinear(-50.0), 0.1, 3, 0.5)[0];
  CHECK(big.real() == doctest::Approx(0.0));
  CHECK(big.imag() > 0.0);
  CHECK_THROWS_AS(bilinear_modal_frequencies(make_scsc(2, 0.1, 0.1, 0.5, 0.5, 0), 0.01, 2, 0.4), InvalidArgument);
}

TEST_CASE("closed-form residual") {
  const LinearGame g = make_symmetric_bilinear(2, 3);
  const Eigen::MatrixXd& a = g.coupling();
  CHECK((a - a.transpose()).norm() == 0.0);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues().minCoeff() >= 0.0);

  const double gamma = 0.1, alpha = 0.4;
  const int k = 2;
  const Eigen::Vector4d z0(1.0, -0.5, 0.3, 0.8);
  const Eigen::Vector4d v0(0.2, 0.0, -0.4, 0.1);
  auto residual = [&](double dt) {
    const HRDESolution s = integrate(la_accel(g, gamma, k, alpha), z0, v0, dt, 0.5);
    return solution_residual(g, s, gamma, k, alpha);
  };
  const double r1 = residual(2e-4), r2 = residual(1e-4);
  CHECK(r2 < 1e-4);
  CHECK(r1 / r2 >= 3.0);

  // Only the initial point: the homogeneous term reproduces it.
  HRDESolution one;
  one.times = {0.0};
  one.states = {HRDEState{z0, v0, 0.0, 1e-4}};
  CHECK(solution_residual(g, one, gamma, k, alpha) < 1e-14);

  // Without coupling the trajectory is the homogeneous response alone.
  const LinearGame free(GameKind::Bilinear, Eigen::MatrixXd::Zero(2, 2), 0, 0, 1, 0);
  const HRDESolution fs = integrate(la_accel(free, gamma, k, alpha), z0, v0, 1e-3, 0.5);
  CHECK(solution_residual(free, fs, gamma, k, alpha) < 1e-6);

  HRDESolution bad = fs;
  bad.times[3] += 1e-4;
  CHECK_THROWS_AS(solution_residual(free, bad, gamma, k, alpha), InvalidArgument);
  CHECK_THROWS_AS(solution_residual(make_bilinear(2, 1.0, 1), fs, gamma, k, alpha), InvalidArgument);
}

TEST_CASE("averaging boundary condition") {
  CHECK(bg_convergence_condition(2, 0.45));
  CHECK_FALSE(bg_convergence_condition(2, 0.5));
  CHECK(bg_convergence_condition(5, 0.79));
  CHECK_FALSE(bg_convergence_condition(5, 0.81));
}

TEST_CASE("characteristic roots") {
  const auto r = polynomial_roots({2.0, -3.0});
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - Complex(2, 0)) < 1e-12);
  CHECK(std::abs(r[1] - Complex(1, 0)) < 1e-12);

  const LinearGame g = scalar_bilinear(1.0);
  CHECK(characteristic_stability(g, 0.01, 2, 0.4));
  CHECK_FALSE(characteristic_stability(g, 0.01, 2, 0.6));
  for (double gamma : {1e-3, 0.01, 0.1, 1.0}) CHECK_FALSE(gd_characteristic_stability(g, gamma));
}

TEST_CASE("one lookahead cycle matches the hrde at one step-size of time") {
  const LinearGame g = scalar_bilinear(1.0);
  const int k = 3;
  const double alpha = 0.5;
  const Eigen::VectorXd z0 = vec2(1.0, 0.5);
  auto error = [&](double gamma) {
    SolverState s = SolverState::start(JointPoint(z0));
    for (int i = 0; i < k; ++i) s = la_step(g, s, BaseOptimizer::GD, k, alpha, gamma);
    const Eigen::VectorXd f = field_eval(g, JointPoint(z0)).z;
    const Eigen::VectorXd jf = field_eval(g, JointPoint(f)).z;
    const Eigen::VectorXd v0 = alpha * (-k * f + 0.5 * k * (k - 1) * gamma * jf);
    const HRDESolution h = integrate(la_accel(g, gamma, k, alpha), z0, v0, gamma / 200, gamma);
    return (h.states.back().z - s.z.z).norm();
  };
  const double ratio = error(1e-3) / error(5e-4);
  MESSAGE("error ratio " << ratio);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("hrde report verdicts agree") {
  const LinearGame g = make_symmetric_bilinear(2, 1);
  HrdeRequest req;
  req.gamma = 0.1;
  req.t_end = 1.0;
  const HrdeReport ok = run_hrde(g, Eigen::Vector4d(1, 0, 0, 1), req);
  CHECK(ok.bg_condition);
  CHECK(ok.characteristic);
  CHECK(ok.bounded);
  REQUIRE(ok.residual.has_value());
  CHECK(*ok.residual < 1e-4);

  req.alpha = 0.55;
  const HrdeReport bad = run_hrde(g, Eigen::Vector4d(1, 0, 0, 1), req);
  CHECK_FALSE(bad.bg_condition);
  CHECK_FALSE(bad.characteristic);
  CHECK_FALSE(bad.bounded);
}
