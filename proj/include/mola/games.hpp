#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace mola {

enum class GameKind { Bilinear, SCSC, QuadraticRot };

std::string_view to_string(GameKind kind);
GameKind parse_game_kind(std::string_view name);

/// Joint state z = (x, y) of both players, stored contiguously.
struct JointPoint {
  Eigen::VectorXd z;

  JointPoint() = default;
  explicit JointPoint(Eigen::VectorXd joint) : z(std::move(joint)) {}
  JointPoint(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

  static JointPoint zero(int d) { return JointPoint(Eigen::VectorXd::Zero(2 * d)); }

  /// Per-player dimension.
  int d() const { return static_cast<int>(z.size() / 2); }
  auto x() const { return z.head(z.size() / 2); }
  auto y() const { return z.tail(z.size() / 2); }
  auto x() { return z.head(z.size() / 2); }
  auto y() { return z.tail(z.size() / 2); }
};

/// Quadratic saddle-point game
///
///   f(x, y) = 1/2 eta_x |x|^2 - 1/2 eta_y |y|^2 + x^T A y
///
/// whose operator F(z) = (eta_x x + A y, eta_y y - A^T x) is linear with a
/// constant Jacobian and vanishes at the origin. The three benchmark
/// families only differ in how A and the curvatures are generated.
/// Instances are immutable after construction.
class LinearGame {
 public:
  LinearGame(GameKind kind, Eigen::MatrixXd coupling, double eta_x, double eta_y,
             double beta, std::uint64_t seed);

  GameKind kind() const { return kind_; }
  int d() const { return static_cast<int>(coupling_.rows()); }
  const Eigen::MatrixXd& coupling() const { return coupling_; }
  double eta_x() const { return eta_x_; }
  double eta_y() const { return eta_y_; }
  double beta() const { return beta_; }
  std::uint64_t seed() const { return seed_; }

  // SCSC construction range, recorded for serialization only.
  double sigma_min() const { return sigma_min_; }
  double sigma_max() const { return sigma_max_; }
  void set_sigma_range(double lo, double hi) {
    sigma_min_ = lo;
    sigma_max_ = hi;
  }

  bool is_bilinear() const { return eta_x_ == 0.0 && eta_y_ == 0.0; }

  /// Scalar payoff f(x, y).
  double payoff(const JointPoint& z) const;

 private:
  GameKind kind_;
  Eigen::MatrixXd coupling_;
  double eta_x_;
  double eta_y_;
  double beta_;
  std::uint64_t seed_;
  double sigma_min_ = 0.0;
  double sigma_max_ = 0.0;
};

/// A_ij ~ N(0, beta^2 / d) from the seeded generator, row-major draw order.
LinearGame make_bilinear(int d, double beta, std::uint64_t seed);

/// A = U diag(sigma) V^T with sigma linearly spaced over [sigma_min, sigma_max]
/// (descending) and U, V Haar-like orthogonal factors from Householder QR of
/// seeded Gaussian matrices, signs fixed so that diag(R) >= 0.
LinearGame make_scsc(int d, double eta_x, double eta_y, double sigma_min, double sigma_max,
                     std::uint64_t seed);

/// (1 - beta) x^T x + beta x^T A y - (1 - beta) y^T y, with A drawn as in
/// make_bilinear at unit scale. The curvature stored is the exact Hessian
/// 2 (1 - beta).
LinearGame make_quadratic_rot(int d, double beta, std::uint64_t seed);

/// Seeded Gaussian matrix, entries N(0, scale^2), row-major draw order.
Eigen::MatrixXd gaussian_matrix(int rows, int cols, double scale, std::uint64_t seed);

/// Orthogonal factor of the QR decomposition of a seeded Gaussian matrix,
/// with column signs chosen so that R has a nonnegative diagonal.
Eigen::MatrixXd random_orthogonal(int d, std::uint64_t seed);

JointPoint field_eval(const LinearGame& game, const JointPoint& z);

/// [[eta_x I, A], [-A^T, eta_y I]].
Eigen::MatrixXd jacobian(const LinearGame& game);

/// Self-describing `key = value` text. Games are re-created from their
/// parameters; with `embed_matrix` the coupling entries are written too and
/// take precedence when read back.
void write_game(std::ostream& out, const LinearGame& game, bool embed_matrix);
std::string serialize_game(const LinearGame& game, bool embed_matrix);
LinearGame read_game(std::istream& in);
LinearGame parse_game(std::string_view text);

}  // namespace mola
