#include "mola/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "mola/errors.hpp"
#include "mola/rng.hpp"

namespace mola {

void sort_spectrum(std::vector<Complex>& values) {
  std::stable_sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return std::arg(a) < std::arg(b);
  });
}

std::vector<Complex> eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ShapeError("eigenvalues: matrix must be square");
  if (!m.allFinite()) throw NumericalError("eigenvalues: matrix has non-finite entries");
  const auto n = m.rows();
  if (n == 0) return {};

  Eigen::EigenSolver<Eigen::MatrixXd> solver;
  solver.setMaxIterations(static_cast<Eigen::Index>(100 * n));
  solver.compute(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalues: QR iteration did not converge");

  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  sort_spectrum(out);
  return out;
}

std::vector<Complex> gd_multipliers(const std::vector<Complex>& lambdas, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("gd_multipliers: gamma must be > 0");
  std::vector<Complex> out;
  out.reserve(lambdas.size());
  for (const Complex& l : lambdas) out.push_back(1.0 - gamma * l);
  return out;
}

std::pair<int, Complex> dominant_mode(const std::vector<Complex>& multipliers) {
  if (multipliers.empty()) throw InvalidArgument("dominant_mode: empty input");
  int best = 0;
  double best_mod = std::abs(multipliers[0]);
  for (std::size_t i = 1; i < multipliers.size(); ++i) {
    const double mod = std::abs(multipliers[i]);
    if (mod > best_mod) {
      best_mod = mod;
      best = static_cast<int>(i);
    }
  }
  return {best, multipliers[static_cast<std::size_t>(best)]};
}

ComplexSpectrum make_spectrum(std::vector<Complex> lambdas, double gamma) {
  ComplexSpectrum s;
  s.gd_multipliers = gd_multipliers(lambdas, gamma);
  s.eigenvalues = std::move(lambdas);
  s.gamma = gamma;
  s.dominant_index = dominant_mode(s.gd_multipliers).first;
  return s;
}

ComplexSpectrum make_spectrum(const Eigen::MatrixXd& jacobian, double gamma) {
  return make_spectrum(eigenvalues(jacobian), gamma);
}

double spectral_norm(const Eigen::MatrixXd& a, const PowerIterationOptions& options) {
  if (a.size() == 0) return 0.0;
  Xoshiro256 rng(options.seed);
  Eigen::VectorXd v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.gaussian();
  v.normalize();

  double estimate = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    Eigen::VectorXd w = a.transpose() * (a * v);
    const double rayleigh = v.dot(w);  // |A v|^2 with |v| = 1
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double next = std::sqrt(std::max(rayleigh, 0.0));
    if (it > 0 && std::abs(next - estimate) <= options.rel_tol * next) return next;
    estimate = next;
  }
  return estimate;
}

}  // namespace mola
