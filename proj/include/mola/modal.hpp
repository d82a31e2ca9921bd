#pragma once

#include <set>
#include <vector>

#include "mola/spectral.hpp"

namespace mola {

/// (k, alpha) chosen for a LookAhead run, certified against the dominant mode.
struct ModalSelection {
  int k = 1;
  double alpha = 0.5;
  double gamma = 0.0;
  double rho = 0.0;  ///< |(1 - alpha) + alpha T_dom^k| (worst mode if all-modes checking is on)
  bool feasible = false;
  bool fallback_used = false;
  Complex dominant{1.0, 0.0};  ///< T_dom
  int dominant_index = 0;
};

/// Gamma_k*(alpha): the largest gamma * L for which every purely rotational
/// mode stays inside the unit disk under LA(k, alpha).
struct BudgetResult {
  double gamma_L_budget = 0.0;
  bool crossing_found = false;
  double scan_resolution = 0.0;
};

/// z^k in polar form, stable for large k.
Complex complex_power(Complex z, int k);

/// mu_k(c; alpha) = (1 - alpha) + alpha (1 - i c)^k.
Complex mode_multiplier(double c, double alpha, int k);

/// (1 - alpha) + alpha T^k.
Complex la_multiplier(Complex t, double alpha, int k);

/// g_k(c; alpha) = |mu_k(c; alpha)|^2 - 1; negative means the mode contracts.
double stability_margin(double c, double alpha, int k);

inline constexpr int kBudgetGridPoints = 4096;
inline constexpr int kBisectionIterations = 60;

/// Scans g_k on a uniform grid over [0, c_max] for the first sign change
/// from <= 0 to > 0 and refines it by bisection. Returns c_max with
/// crossing_found = false when no crossing exists on the grid, and 0 when
/// alpha >= 1 - 1/k and the margin is already positive at the first grid point.
BudgetResult gamma_budget(double alpha, int k, double c_max = 10.0);

/// Exact largest alpha in [0, 1] keeping |(1 - alpha) + alpha w| <= 1, w = T^k:
/// 0 when Re w >= 1, 1 when w == 1 exactly.
double alpha_cap(Complex t_dom, int k);

/// Integer horizons balancing phase alignment (k theta near an odd
/// multiple of pi) with amplitude matching (alpha R^k near 1 - alpha), for
/// T_dom = R e^{-i theta}.
std::set<int> k_candidates(Complex t_dom, double alpha, int k_min, int k_max);

struct ModalSearchOptions {
  /// Re-check the alpha cap and rho over the full spectrum instead of the dominant mode only.
  bool all_modes = false;
  /// Apply the alpha cap over the full spectrum while still scoring rho on
  /// the dominant mode. Off reproduces the dominant-only pseudocode, which
  /// can select a higher phase harmonic that turns mid-spectrum modes to
  /// Re T^k >= 1.
  bool cap_all_modes = true;
};

/// Default averaging grid {0.02, 0.04, ..., 0.98}.
std::vector<double> default_alpha_grid();
inline constexpr int kDefaultKMin = 5;
inline constexpr int kDefaultKMax = 2000;

/// Modal LookAhead hyperparameter search over the dominant GD multiplier.
/// Grid order is the outer loop, ascending k the inner one, and only a
/// strict improvement of rho replaces the incumbent. With no feasible pair
/// the result is (k_min, min(0.5, cap at k_min)) with fallback_used set.
ModalSelection choose_modal_params(const std::vector<Complex>& lambdas, int k_min, int k_max,
                                   const std::vector<double>& alpha_grid, double gamma,
                                   const ModalSearchOptions& options = {});

/// Maximiser of the rate gain alpha * Gamma_k*(alpha) over a (k, alpha)
/// grid restricted to alpha <= 1 - 1/k.
struct GainSelection {
  int k = 2;
  double alpha = 0.0;
  double budget = 0.0;
  double gain = 0.0;
};

GainSelection maximize_gain(int k_min, int k_max, const std::vector<double>& alpha_grid,
                            double c_max = 10.0);

/// Largest alpha admissible for every mode with c <= gamma_L, k fixed:
/// 2 / (1 + (1 + Gamma^2)^{k/2}).
double class_alpha_envelope(double gamma_l, int k);

/// Inverse of class_alpha_envelope: sqrt(((2 - alpha)/alpha)^{2/k} - 1).
double class_gamma_envelope(double alpha, int k);

/// phi_k(c) = Re (1 - i c)^k = (1 + c^2)^{k/2} cos(k atan c).
double phi_k(double c, int k);

struct RotationBudget {
  double radius = 0.0;
  bool bounded = false;  ///< false: phi_k < 1 on the whole scan range (0, r_max]
};

/// C_k = sup{ r : phi_k(c) < 1 on (0, r] }, by grid scan and bisection.
RotationBudget rotation_budget(int k, double r_max = 10.0);

}  // namespace mola
