#include "mola/games.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "mola/errors.hpp"
#include "mola/rng.hpp"
#include "mola/textio.hpp"

namespace mola {

std::string_view to_string(GameKind kind) {
  switch (kind) {
    case GameKind::Bilinear:
      return "bilinear";
    case GameKind::SCSC:
      return "scsc";
    case GameKind::QuadraticRot:
      return "qg";
  }
  return "unknown";
}

GameKind parse_game_kind(std::string_view name) {
  if (name == "bilinear" || name == "bg") return GameKind::Bilinear;
  if (name == "scsc") return GameKind::SCSC;
  if (name == "qg" || name == "quadratic-rot") return GameKind::QuadraticRot;
  throw ParseError("unknown game kind '" + std::string(name) + "'");
}

JointPoint::JointPoint(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) throw ShapeError("JointPoint: x and y must have equal length");
  z.resize(x.size() + y.size());
  z << x, y;
}

LinearGame::LinearGame(GameKind kind, Eigen::MatrixXd coupling, double eta_x, double eta_y,
                       double beta, std::uint64_t seed)
    : kind_(kind),
      coupling_(std::move(coupling)),
      eta_x_(eta_x),
      eta_y_(eta_y),
      beta_(beta),
      seed_(seed) {
  if (coupling_.rows() < 1 || coupling_.rows() != coupling_.cols())
    throw ShapeError("LinearGame: coupling must be square with d >= 1");
  if (!coupling_.allFinite()) throw InvalidArgument("LinearGame: coupling has non-finite entries");
  if (!(eta_x_ >= 0.0) || !(eta_y_ >= 0.0))
    throw InvalidArgument("LinearGame: curvatures must be nonnegative");
}

double LinearGame::payoff(const JointPoint& z) const {
  const auto x = z.x();
  const auto y = z.y();
  return 0.5 * eta_x_ * x.squaredNorm() - 0.5 * eta_y_ * y.squaredNorm() +
         x.dot(coupling_ * y);
}

namespace {

Eigen::MatrixXd draw_gaussian(Xoshiro256& rng, int rows, int cols, double scale) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * rng.gaussian();
  return m;
}

Eigen::MatrixXd orthogonal_from(const Eigen::MatrixXd& g) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
  const Eigen::MatrixXd& packed = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (packed(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

void check_dimension(int d) {
  if (d < 1) throw InvalidArgument("invalid dimension: d must be >= 1");
}

}  // namespace

Eigen::MatrixXd gaussian_matrix(int rows, int cols, double scale, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  return draw_gaussian(rng, rows, cols, scale);
}

Eigen::MatrixXd random_orthogonal(int d, std::uint64_t seed) {
  check_dimension(d);
  return orthogonal_from(gaussian_matrix(d, d, 1.0, seed));
}

LinearGame make_bilinear(int d, double beta, std::uint64_t seed) {
  check_dimension(d);
  if (!std::isfinite(beta) || beta < 0.0) throw InvalidArgument("make_bilinear: beta must be >= 0");
  Eigen::MatrixXd a = gaussian_matrix(d, d, beta / std::sqrt(static_cast<double>(d)), seed);
  return LinearGame(GameKind::Bilinear, std::move(a), 0.0, 0.0, beta, seed);
}

LinearGame make_scsc(int d, double eta_x, double eta_y, double sigma_min, double sigma_max,
                     std::uint64_t seed) {
  check_dimension(d);
  if (!std::isfinite(eta_x) || !std::isfinite(eta_y) || eta_x <= 0.0 || eta_y <= 0.0)
    throw InvalidArgument("make_scsc: eta_x and eta_y must be finite and > 0");
  if (!std::isfinite(sigma_min) || !std::isfinite(sigma_max) || sigma_min < 0.0)
    throw InvalidArgument("make_scsc: singular values must be finite and >= 0");
  if (sigma_min > sigma_max) throw InvalidArgument("make_scsc: invalid range, sigma_min > sigma_max");

  Xoshiro256 rng(seed);
  const Eigen::MatrixXd u = orthogonal_from(draw_gaussian(rng, d, d, 1.0));
  const Eigen::MatrixXd v = orthogonal_from(draw_gaussian(rng, d, d, 1.0));
  Eigen::VectorXd sigma(d);
  for (int i = 0; i < d; ++i) {
    const double t = d == 1 ? 0.0 : static_cast<double>(i) / (d - 1);
    sigma(i) = sigma_max + t * (sigma_min - sigma_max);
  }
  Eigen::MatrixXd a = u * sigma.asDiagonal() * v.transpose();
  LinearGame game(GameKind::SCSC, std::move(a), eta_x, eta_y, 0.0, seed);
  game.set_sigma_range(sigma_min, sigma_max);
  return game;
}

LinearGame make_quadratic_rot(int d, double beta, std::uint64_t seed) {
  check_dimension(d);
  if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidArgument("make_quadratic_rot: invalid range, beta must lie in [0, 1]");
  Eigen::MatrixXd a = beta * gaussian_matrix(d, d, 1.0 / std::sqrt(static_cast<double>(d)), seed);
  const double eta = 2.0 * (1.0 - beta);
  return LinearGame(GameKind::QuadraticRot, std::move(a), eta, eta, beta, seed);
}

JointPoint field_eval(const LinearGame& game, const JointPoint& z) {
  if (z.z.size() != 2 * game.d())
    throw ShapeError("field_eval: state has length " + std::to_string(z.z.size()) +
                     ", game expects " + std::to_string(2 * game.d()));
  const auto& a = game.coupling();
  JointPoint out;
  out.z.resize(z.z.size());
  out.x().noalias() = a * z.y();
  out.x() += game.eta_x() * z.x();
  out.y().noalias() = -a.transpose() * z.x();
  out.y() += game.eta_y() * z.y();
  return out;
}

Eigen::MatrixXd jacobian(const LinearGame& game) {
  const int d = game.d();
  Eigen::MatrixXd j(2 * d, 2 * d);
  j.topLeftCorner(d, d) = game.eta_x() * Eigen::MatrixXd::Identity(d, d);
  j.topRightCorner(d, d) = game.coupling();
  j.bottomLeftCorner(d, d) = -game.coupling().transpose();
  j.bottomRightCorner(d, d) = game.eta_y() * Eigen::MatrixXd::Identity(d, d);
  return j;
}

void write_game(std::ostream& out, const LinearGame& game, bool embed_matrix) {
  out << "# mola game\n";
  out << "kind = " << to_string(game.kind()) << '\n';
  out << "d = " << game.d() << '\n';
  out << "beta = " << format_double(game.beta()) << '\n';
  out << "eta_x = " << format_double(game.eta_x()) << '\n';
  out << "eta_y = " << format_double(game.eta_y()) << '\n';
  out << "sigma_min = " << format_double(game.sigma_min()) << '\n';
  out << "sigma_max = " << format_double(game.sigma_max()) << '\n';
  out << "seed = " << game.seed() << '\n';
  if (embed_matrix) {
    const auto& a = game.coupling();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out << "row =";
      for (Eigen::Index j = 0; j < a.cols(); ++j) out << ' ' << format_double(a(i, j));
      out << '\n';
    }
  }
}

std::string serialize_game(const LinearGame& game, bool embed_matrix) {
  std::ostringstream out;
  write_game(out, game, embed_matrix);
  return out.str();
}

LinearGame read_game(std::istream& in) {
  std::map<std::string, std::string> fields;
  std::vector<std::vector<double>> rows;
  for (const KeyValueLine& kv : read_key_values(in)) {
    if (kv.key == "row") {
      rows.push_back(parse_double_list(kv.value, kv.line));
    } else {
      fields[kv.key] = kv.value;
    }
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end()) throw ParseError("game file: missing field '" + key + "'");
    return it->second;
  };
  auto number = [&](const std::string& key, double fallback) {
    auto it = fields.find(key);
    return it == fields.end() ? fallback : parse_double_field(it->second, key);
  };

  const GameKind kind = parse_game_kind(need("kind"));
  const int d = static_cast<int>(parse_int_field(need("d"), "d"));
  const auto seed = static_cast<std::uint64_t>(parse_uint_field(need("seed"), "seed"));

  LinearGame game = [&] {
    switch (kind) {
      case GameKind::Bilinear:
        return make_bilinear(d, number("beta", 1.0), seed);
      case GameKind::SCSC:
        return make_scsc(d, number("eta_x", 0.1), number("eta_y", 0.1), number("sigma_min", 0.7),
                         number("sigma_max", 0.9), seed);
      case GameKind::QuadraticRot:
        break;
    }
    return make_quadratic_rot(d, number("beta", 0.5), seed);
  }();

  if (rows.empty()) return game;
  if (static_cast<int>(rows.size()) != d) throw ParseError("game file: expected " + std::to_string(d) + " matrix rows");
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[i].size()) != d)
      throw ParseError("game file: row " + std::to_string(i) + " has wrong length");
    for (int j = 0; j < d; ++j) a(i, j) = rows[i][j];
  }
  LinearGame embedded(kind, std::move(a), game.eta_x(), game.eta_y(), game.beta(), seed);
  embedded.set_sigma_range(game.sigma_min(), game.sigma_max());
  return embedded;
}

LinearGame parse_game(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_game(in);
}

}  // namespace mola
