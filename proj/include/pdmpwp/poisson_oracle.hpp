#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "pdmpwp/potential.hpp"

namespace pdmpwp {

/// Solution of u - u'' + U' u' = g on a uniform grid over [-L, L].
struct PoissonSolution {
  Vector grid;
  Vector u;
  Vector du;
  Vector d2u;
  Vector grad_u;  // U' on the grid
  /// Trapezoid weights h e^{-U(x_i)} / Z (halved at the ends).
  Vector weights;
  double norm_g = 0.0;
  double norm_u = 0.0;
  double norm_du = 0.0;
  double norm_d2u = 0.0;
  double norm_grad_u_du = 0.0;
  /// max_i |(A u - W g)_i| / (w_i max|g|) for the assembled linear system.
  double residual = 0.0;
  /// Relative pi-norm of u - u'' + U'u' - g on interior nodes, derivatives by differencing.
  double pde_residual = 0.0;
};

struct PoissonOptions {
  /// Require max |g| over |x| >= 0.9 L to be at most support_tolerance * max |g|.
  bool check_support = true;
  double support_tolerance = 1e-3;
};

/// Conservative second-order finite differences with zero-flux ends:
/// w_i u_i - [pi_{i+1/2}(u_{i+1}-u_i) - pi_{i-1/2}(u_i-u_{i-1})]/h = w_i g_i,
/// which is symmetric in the trapezoid pi-inner product. Thomas solve.
PoissonSolution solve_poisson_1d(const Potential& potential, const std::function<double(double)>& g,
                                 double half_width, int n, const PoissonOptions& options = {});

/// pi-weighted inner product of two grid functions.
double weighted_inner(const PoissonSolution& sol, const Vector& a, const Vector& b);

struct PoissonEstimateReport {
  static constexpr std::array<const char*, 4> kNames = {"|u|/|g|", "|u'|/|g|", "|u''|/(k1|g|)",
                                                         "|U'u'|/(k2|g|)"};
  std::array<double, 4> ratios{};
  std::array<bool, 4> holds{};
  bool all_hold() const noexcept { return holds[0] && holds[1] && holds[2] && holds[3]; }
};

PoissonEstimateReport verify_estimates(const PoissonSolution& sol, double kappa1, double kappa2);

/// exp(-1/(1 - ((x-c)/w)^2)) on |x - c| < w, else 0.
double bump(double x, double center, double width);

struct PoissonTestFunction {
  std::string name;
  std::function<double(double)> g;
};

/// Ten smooth test functions supported in [-20, 20].
std::vector<PoissonTestFunction> poisson_test_battery();

}  // namespace pdmpwp
