#include "mola/modal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mola/errors.hpp"

namespace mola {

Complex complex_power(Complex z, int k) {
  if (k == 0) return {1.0, 0.0};
  const double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  return std::polar(std::exp(k * std::log(r)), k * std::arg(z));
}

Complex mode_multiplier(double c, double alpha, int k) {
  // (1 - i c)^k = (1 + c^2)^{k/2} e^{-i k atan c}
  const double mod = std::exp(0.5 * k * std::log1p(c * c));
  return (1.0 - alpha) + alpha * std::polar(mod, -k * std::atan(c));
}

Complex la_multiplier(Complex t, double alpha, int k) {
  return (1.0 - alpha) + alpha * complex_power(t, k);
}

double stability_margin(double c, double alpha, int k) {
  return std::norm(mode_multiplier(c, alpha, k)) - 1.0;
}

namespace {

// First c in (0, c_max] where pred turns true, located on a uniform grid and
// refined by bisection. Returns nullopt-like (found = false) if pred never holds.
template <typename Pred>
std::pair<double, bool> first_crossing(Pred pred, double c_max, int grid_points, int bisect_iters,
                                       double tol, bool* hit_first_point = nullptr) {
  const double h = c_max / grid_points;
  for (int i = 1; i <= grid_points; ++i) {
    const double c = h * i;
    if (!pred(c)) continue;
    if (hit_first_point != nullptr) *hit_first_point = (i == 1);
    double lo = h * (i - 1);
    double hi = c;
    for (int it = 0; it < bisect_iters && hi - lo > tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (pred(mid))
        hi = mid;
      else
        lo = mid;
    }
    return {0.5 * (lo + hi), true};
  }
  return {c_max, false};
}

}  // namespace

BudgetResult gamma_budget(double alpha, int k, double c_max) {
  if (!(c_max > 0.0)) throw InvalidArgument("gamma_budget: c_max must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("gamma_budget: alpha must lie in (0, 1)");
  if (k < 2) throw InvalidArgument("gamma_budget: k must be >= 2");

  BudgetResult out;
  out.scan_resolution = c_max / kBudgetGridPoints;
  bool at_first = false;
  const auto [c, found] = first_crossing(
      [&](double x) { return stability_margin(x, alpha, k) > 0.0; }, c_max, kBudgetGridPoints,
      kBisectionIterations, 1e-10, &at_first);
  out.crossing_found = found;
  out.gamma_L_budget = c;
  if (found && at_first && alpha >= 1.0 - 1.0 / k) out.gamma_L_budget = 0.0;
  return out;
}

double alpha_cap(Complex t_dom, int k) {
  if (k < 1) throw InvalidArgument("alpha_cap: k must be >= 1");
  const Complex w = complex_power(t_dom, k);
  if (w == Complex(1.0, 0.0)) return 1.0;
  if (w.real() >= 1.0) return 0.0;
  return std::min(1.0, 2.0 * (1.0 - w.real()) / std::norm(1.0 - w));
}

std::set<int> k_candidates(Complex t_dom, double alpha, int k_min, int k_max) {
  if (k_min < 1 || k_max < k_min) throw InvalidArgument("k_candidates: need 1 <= k_min <= k_max");
  std::set<int> out;
  const double radius = std::abs(t_dom);
  const double theta = std::abs(std::arg(t_dom));
  const double ratio = (1.0 - alpha) / alpha;

  if (theta < 1e-9) {
    // Non-rotational mode: amplitude matching only, meaningful when it decays.
    if (radius > 0.0 && radius < 1.0 && ratio > 0.0) {
      const double k_amp = std::log(ratio) / std::log(radius);
      if (k_amp > 0.0 && std::isfinite(k_amp)) {
        const double clamped = std::clamp(std::round(k_amp), double(k_min), double(k_max));
        out.insert(static_cast<int>(clamped));
      }
    }
    return out;
  }

  // The amplitude target only steers the harmonic when the mode grows and
  // alpha < 1/2; otherwise the first admissible phase target is used.
  double k_amp = k_min;
  if (radius > 1.0 && ratio > 1.0) {
    const double v = std::log(ratio) / std::log(radius);
    if (v > 0.0 && std::isfinite(v)) k_amp = v;
  }

  const double pi = std::numbers::pi;
  auto k_phase = [&](double m) { return pi * (2.0 * m + 1.0) / theta; };

  // Smallest harmonic whose ceiling reaches k_min.
  double m_lo = std::max(0.0, std::ceil(((k_min - 1) * theta / pi - 1.0) / 2.0));
  while (m_lo > 0.0 && std::ceil(k_phase(m_lo - 1.0)) >= k_min) m_lo -= 1.0;
  while (std::ceil(k_phase(m_lo)) < k_min) m_lo += 1.0;
  if (k_phase(m_lo) > k_max + 1.0) return out;

  const double m_est = (theta * k_amp / pi - 1.0) / 2.0;
  double best_m = m_lo;
  double best_dist = std::abs(k_phase(m_lo) - k_amp);
  for (double m : {std::floor(m_est), std::ceil(m_est)}) {
    if (!(m > m_lo)) continue;
    const double dist = std::abs(k_phase(m) - k_amp);
    if (dist < best_dist) {
      best_dist = dist;
      best_m = m;
    }
  }

  const double k_circ = k_phase(best_m);
  for (double k : {std::floor(k_circ), std::ceil(k_circ)})
    if (k >= k_min && k <= k_max) out.insert(static_cast<int>(k));
  return out;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 49; ++i) grid.push_back(0.02 * i);
  return grid;
}

namespace {

double worst_rho(const std::vector<Complex>& modes, double alpha, int k) {
  double rho = 0.0;
  for (const Complex& t : modes) rho = std::max(rho, std::abs(la_multiplier(t, alpha, k)));
  return rho;
}

double worst_cap(const std::vector<Complex>& modes, int k) {
  double cap = 1.0;
  for (const Complex& t : modes) cap = std::min(cap, alpha_cap(t, k));
  return cap;
}

}  // namespace

ModalSelection choose_modal_params(const std::vector<Complex>& lambdas, int k_min, int k_max,
                                   const std::vector<double>& alpha_grid, double gamma,
                                   const ModalSearchOptions& options) {
  if (alpha_grid.empty()) throw InvalidArgument("choose_modal_params: empty alpha grid");
  if (k_min < 1 || k_max < k_min) throw InvalidArgument("choose_modal_params: need 1 <= k_min <= k_max");

  const std::vector<Complex> multipliers = gd_multipliers(lambdas, gamma);
  const auto [dom_index, t_dom] = dominant_mode(multipliers);
  const std::vector<Complex> dom_only{t_dom};
  const std::vector<Complex>& cap_modes =
      options.all_modes || options.cap_all_modes ? multipliers : dom_only;
  const std::vector<Complex>& rho_modes = options.all_modes ? multipliers : dom_only;

  ModalSelection best;
  best.gamma = gamma;
  best.dominant = t_dom;
  best.dominant_index = dom_index;
  best.k = k_min;
  best.alpha = 0.5;
  best.rho = std::numeric_limits<double>::infinity();

  for (double alpha : alpha_grid) {
    if (!(alpha > 0.0 && alpha < 1.0)) continue;
    for (int k : k_candidates(t_dom, alpha, k_min, k_max)) {
      if (!(alpha <= worst_cap(cap_modes, k))) continue;
      const double rho = worst_rho(rho_modes, alpha, k);
      if (rho < best.rho) {
        best.k = k;
        best.alpha = alpha;
        best.rho = rho;
      }
    }
  }

  if (std::isinf(best.rho)) {
    best.k = k_min;
    best.alpha = std::min(0.5, worst_cap(cap_modes, k_min));
    best.rho = worst_rho(rho_modes, best.alpha, k_min);
    best.fallback_used = true;
    best.feasible = false;
  } else {
    best.feasible = true;
  }
  return best;
}

GainSelection maximize_gain(int k_min, int k_max, const std::vector<double>& alpha_grid,
                            double c_max) {
  if (alpha_grid.empty()) throw InvalidArgument("maximize_gain: empty alpha grid");
  GainSelection best;
  bool any = false;
  for (int k = std::max(k_min, 2); k <= k_max; ++k) {
    for (double alpha : alpha_grid) {
      if (!(alpha > 0.0 && alpha < 1.0) || alpha > 1.0 - 1.0 / k) continue;
      const double budget = gamma_budget(alpha, k, c_max).gamma_L_budget;
      const double gain = alpha * budget;
      if (!any || gain > best.gain) {
        best = {k, alpha, budget, gain};
        any = true;
      }
    }
  }
  if (!any) throw InvalidArgument("maximize_gain: no admissible (k, alpha) pair");
  return best;
}

double class_alpha_envelope(double gamma_l, int k) {
  return 2.0 / (1.0 + std::pow(1.0 + gamma_l * gamma_l, 0.5 * k));
}

double class_gamma_envelope(double alpha, int k) {
  const double inner = std::pow((2.0 - alpha) / alpha, 2.0 / k) - 1.0;
  return std::sqrt(std::max(inner, 0.0));
}

double phi_k(double c, int k) {
  return std::pow(1.0 + c * c, 0.5 * k) * std::cos(k * std::atan(c));
}

RotationBudget rotation_budget(int k, double r_max) {
  if (!(r_max > 0.0)) throw InvalidArgument("rotation_budget: r_max must be > 0");
  const auto [c, found] =
      first_crossing([&](double x) { return phi_k(x, k) >= 1.0; }, r_max, kBudgetGridPoints,
                     kBisectionIterations, 1e-12);
  return {c, found};
}

}  // namespace mola
