#include "pdmpwp/poisson_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdmpwp/error.hpp"
#include "pdmpwp/quadrature.hpp"

namespace pdmpwp {

namespace {

double weighted_norm(const Vector& w, const Vector& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    acc += w[i] * f[i] * f[i];
  }
  return std::sqrt(acc);
}

}  // namespace

PoissonSolution solve_poisson_1d(const Potential& potential, const std::function<double(double)>& g,
                                 double half_width, int n, const PoissonOptions& options) {
  if (potential.dim() != 1) {
    throw InvalidArgument("poisson oracle: potential must be one-dimensional");
  }
  if (n < 1000) {
    throw InvalidArgument("poisson oracle: n must be at least 1000");
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw InvalidArgument("poisson oracle: L must be positive and finite");
  }
  const double L = half_width;
  const double h = 2.0 * L / (n - 1);
  auto u_at = [&](double x) {
    const double xs[1] = {x};
    return potential.value(xs);
  };
  const double u0 = u_at(0.0);

  PoissonSolution sol;
  sol.grid.resize(n);
  Vector rhs(n), pi(n), flux(n - 1);
  sol.grad_u.resize(n);
  double gmax = 0.0, gmax_edge = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = -L + i * h;
    sol.grid[i] = x;
    rhs[i] = g(x);
    if (!std::isfinite(rhs[i])) {
      throw NumericalError("poisson oracle: g is not finite on the grid");
    }
    gmax = std::max(gmax, std::abs(rhs[i]));
    if (std::abs(x) >= 0.9 * L) {
      gmax_edge = std::max(gmax_edge, std::abs(rhs[i]));
    }
    pi[i] = std::exp(u0 - u_at(x));
    const double xs[1] = {x};
    sol.grad_u[i] = potential.partial(xs, 0);
  }
  if (options.check_support && gmax_edge > options.support_tolerance * gmax) {
    throw InvalidArgument("poisson oracle: g is not supported well inside [-L, L]");
  }
  for (int i = 0; i + 1 < n; ++i) {
    flux[i] = std::exp(u0 - u_at(sol.grid[i] + 0.5 * h)) / h;
  }

  // Normalizer of e^{-U} (shifted by U(0)); falls back to the grid mass when the
  // full-line integral is not available.
  double z = 0.0;
  try {
    z = quad::real_line([&](double x) { return std::exp(u0 - u_at(x)); }, 1e-10);
  } catch (const NumericalError&) {
    z = 0.0;
  }
  Vector w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = h * pi[i] * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
  }
  if (!(z > 0.0) || !std::isfinite(z)) {
    z = 0.0;
    for (double wi : w) z += wi;
  }

  // Tridiagonal system: diag_i = w_i + flux_{i-1} + flux_i, off = -flux.
  Vector diag(n), upper(n, 0.0), b(n);
  for (int i = 0; i < n; ++i) {
    diag[i] = w[i] + (i > 0 ? flux[i - 1] : 0.0) + (i + 1 < n ? flux[i] : 0.0);
    if (i + 1 < n) upper[i] = -flux[i];
    b[i] = w[i] * rhs[i];
  }
  Vector c(n), d(n), u(n);
  double denom = diag[0];
  if (!(denom > 0.0)) throw NumericalError("poisson oracle: singular system");
  c[0] = upper[0] / denom;
  d[0] = b[0] / denom;
  for (int i = 1; i < n; ++i) {
    denom = diag[i] - upper[i - 1] * c[i - 1];
    if (!(std::abs(denom) > 0.0) || !std::isfinite(denom)) {
      throw NumericalError("poisson oracle: singular system");
    }
    c[i] = upper[i] / denom;
    d[i] = (b[i] - upper[i - 1] * d[i - 1]) / denom;
  }
  u[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) {
    u[i] = d[i] - c[i] * u[i + 1];
  }

  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    double au = diag[i] * u[i];
    if (i > 0) au += upper[i - 1] * u[i - 1];
    if (i + 1 < n) au += upper[i] * u[i + 1];
    res = std::max(res, std::abs(au - b[i]) / (w[i] * std::max(gmax, 1e-300)));
  }
  sol.residual = res;

  sol.du.resize(n);
  sol.d2u.resize(n);
  for (int i = 1; i + 1 < n; ++i) {
    sol.du[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    sol.d2u[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
  }
  // Zero flux at the ends.
  sol.du[0] = 0.0;
  sol.du[n - 1] = 0.0;
  sol.d2u[0] = sol.d2u[1];
  sol.d2u[n - 1] = sol.d2u[n - 2];

  sol.weights.resize(n);
  for (int i = 0; i < n; ++i) sol.weights[i] = w[i] / z;
  sol.u = std::move(u);

  Vector drift(n), pde(n, 0.0);
  for (int i = 0; i < n; ++i) drift[i] = sol.grad_u[i] * sol.du[i];
  for (int i = 1; i + 1 < n; ++i) pde[i] = sol.u[i] - sol.d2u[i] + drift[i] - rhs[i];

  sol.norm_g = weighted_norm(sol.weights, rhs);
  sol.norm_u = weighted_norm(sol.weights, sol.u);
  sol.norm_du = weighted_norm(sol.weights, sol.du);
  sol.norm_d2u = weighted_norm(sol.weights, sol.d2u);
  sol.norm_grad_u_du = weighted_norm(sol.weights, drift);
  sol.pde_residual = sol.norm_g > 0.0 ? weighted_norm(sol.weights, pde) / sol.norm_g : 0.0;
  return sol;
}

double weighted_inner(const PoissonSolution& sol, const Vector& a, const Vector& b) {
  if (a.size() != sol.weights.size() || b.size() != sol.weights.size()) {
    throw InvalidArgument("weighted_inner: size mismatch with the grid");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += sol.weights[i] * a[i] * b[i];
  return acc;
}

PoissonEstimateReport verify_estimates(const PoissonSolution& sol, double kappa1, double kappa2) {
  PoissonEstimateReport r;
  const double g = sol.norm_g;
  auto ratio = [g](double num, double scale) {
    if (g == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / (scale * g);
  };
  r.ratios = {ratio(sol.norm_u, 1.0), ratio(sol.norm_du, 1.0), ratio(sol.norm_d2u, kappa1),
              ratio(sol.norm_grad_u_du, kappa2)};
  for (int k = 0; k < 4; ++k) r.holds[k] = r.ratios[k] <= 1.0;
  return r;
}

double bump(double x, double center, double width) {
  const double z = (x - center) / width;
  if (std::abs(z) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - z * z));
}

std::vector<PoissonTestFunction> poisson_test_battery() {
  return {
      {"bump(0,1)", [](double x) { return bump(x, 0.0, 1.0); }},
      {"bump(0,5)", [](double x) { return bump(x, 0.0, 5.0); }},
      {"bump(3,2)", [](double x) { return bump(x, 3.0, 2.0); }},
      {"bump(-7,4)", [](double x) { return bump(x, -7.0, 4.0); }},
      {"x*bump(0,10)", [](double x) { return x * bump(x, 0.0, 10.0); }},
      {"cos(3x)*bump(0,8)", [](double x) { return std::cos(3.0 * x) * bump(x, 0.0, 8.0); }},
      {"sin(x)*bump(0,6)", [](double x) { return std::sin(x) * bump(x, 0.0, 6.0); }},
      {"bump(2,3)-bump(-2,3)", [](double x) { return bump(x, 2.0, 3.0) - bump(x, -2.0, 3.0); }},
      {"x^2/(1+x^2)*bump(0,15)", [](double x) { return x * x / (1.0 + x * x) * bump(x, 0.0, 15.0); }},
      {"(1+sin(0.7x)/2)*bump(0,20)",
       [](double x) { return (1.0 + 0.5 * std::sin(0.7 * x)) * bump(x, 0.0, 20.0); }},
  };
}

}  // namespace pdmpwp
