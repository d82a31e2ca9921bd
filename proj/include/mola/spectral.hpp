#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mola {

using Complex = std::complex<double>;

/// Eigenvalues of a Jacobian together with the one-step gradient-descent
/// multipliers T_i = 1 - gamma * lambda_i and the index of the dominant one.
struct ComplexSpectrum {
  std::vector<Complex> eigenvalues;
  std::vector<Complex> gd_multipliers;
  double gamma = 0.0;
  int dominant_index = 0;

  Complex dominant() const { return gd_multipliers.at(static_cast<std::size_t>(dominant_index)); }
};

/// All eigenvalues of a real square matrix, with multiplicity, ordered by
/// modulus (descending) then principal argument (ascending).
///
/// Backed by Eigen's Hessenberg reduction + Francis double-shift QR; the
/// iteration budget is 100 * n sweeps. Throws ShapeError for non-square
/// input and NumericalError on non-convergence or non-finite entries.
std::vector<Complex> eigenvalues(const Eigen::MatrixXd& m);

/// Orders a list in place with the same key eigenvalues() uses.
void sort_spectrum(std::vector<Complex>& values);

std::vector<Complex> gd_multipliers(const std::vector<Complex>& lambdas, double gamma);

/// argmax_i |T_i|, first index on ties. Throws InvalidArgument when empty.
std::pair<int, Complex> dominant_mode(const std::vector<Complex>& multipliers);

ComplexSpectrum make_spectrum(std::vector<Complex> lambdas, double gamma);
ComplexSpectrum make_spectrum(const Eigen::MatrixXd& jacobian, double gamma);

struct PowerIterationOptions {
  int max_iterations = 20000;
  double rel_tol = 1e-12;
  std::uint64_t seed = 0x5eed;
};

/// Largest singular value of `a` by power iteration on A^T A from a seeded
/// Gaussian start vector.
double spectral_norm(const Eigen::MatrixXd& a, const PowerIterationOptions& options = {});

}  // namespace mola
