#include <doctest.h>

#include <cmath>

#include "pdmpwp/error.hpp"
#include "pdmpwp/potential.hpp"

using namespace pdmpwp;

namespace {

double fd_partial(const Potential& u, Vector x, int k) {
  const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
  Vector xp = x, xm = x;
  xp[k] += h;
  xm[k] -= h;
  return (u.value(xp) - u.value(xm)) / (2.0 * h);
}

}  // namespace

TEST_CASE("cauchy potential: value, gradient, constants") {
  const Potential u = make_power_law(1, 1.0);
  for (double x : {-30.0, -2.0, -0.3, 0.0, 0.7, 1.0, 5.0, 200.0}) {
    const Vector xs{x};
    CHECK(u.value(xs) == doctest::Approx(std::log1p(x * x)).epsilon(1e-14));
    CHECK(u.partial(xs, 0) == doctest::Approx(2.0 * x / (1.0 + x * x)).epsilon(1e-14));
    CHECK(u.partial(xs, 0) == doctest::Approx(fd_partial(u, xs, 0)).epsilon(1e-7));
  }
  CHECK(u.hessian_lower_bound() == doctest::Approx(0.25).epsilon(1e-15));
  REQUIRE(u.grad_sup_bound());
  CHECK(*u.grad_sup_bound() == doctest::Approx(1.0));
}

TEST_CASE("power law c_U matches a brute-force curvature scan") {
  for (int d : {1, 2, 3}) {
    for (double p : {0.5, 1.0, 4.0}) {
      const Potential u = make_power_law(d, p);
      // Radial second derivative (d+p)(1-s)/(1+s)^2, s = r^2: minimum -(d+p)/8 at s = 3.
      double lowest = 0.0;
      for (int i = 0; i <= 100000; ++i) {
        const double s = 10.0 * i / 100000.0;
        lowest = std::min(lowest, (d + p) * (1.0 - s) / ((1.0 + s) * (1.0 + s)));
      }
      CHECK(u.hessian_lower_bound() == doctest::Approx(-lowest).epsilon(1e-6));
      CHECK(u.hessian_lower_bound() == doctest::Approx((d + p) / 8.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("power law gradient agrees with finite differences in d = 3") {
  const Potential u = make_power_law(3, 2.0);
  const Vector x{0.3, -1.2, 2.5};
  const Vector g = u.gradient(x);
  for (int k = 0; k < 3; ++k) CHECK(g[k] == doctest::Approx(fd_partial(u, x, k)).epsilon(1e-7));
}

TEST_CASE("sub-exponential potential is C1 across the patch and has closed-form constants") {
  const double sigma = 1.0, delta = 0.5, m = 1.0;
  const Potential u = make_subexp(sigma, delta, m);
  const double eps = 1e-9;
  CHECK(u.value(Vector{m - eps}) == doctest::Approx(u.value(Vector{m + eps})).epsilon(1e-8));
  CHECK(u.partial(Vector{m - eps}, 0) == doctest::Approx(u.partial(Vector{m + eps}, 0)).epsilon(1e-7));
  CHECK(u.value(Vector{16.0}) == doctest::Approx(4.0));
  CHECK(u.hessian_lower_bound() == doctest::Approx(sigma * delta * (1 - delta) * std::pow(m, delta - 2)));
  CHECK(u.hessian_lower_bound() == doctest::Approx(0.25));
  CHECK(*u.grad_sup_bound() == doctest::Approx(0.5));
  for (double x : {-7.0, -1.5, -0.5, 0.2, 0.99, 3.0}) {
    CHECK(u.partial(Vector{x}, 0) == doctest::Approx(fd_partial(u, Vector{x}, 0)).epsilon(1e-6));
  }
}

TEST_CASE("factories reject invalid parameters") {
  CHECK_THROWS_AS(make_power_law(0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_power_law(1, -1.0), InvalidArgument);
  CHECK_THROWS_AS(make_subexp(1.0, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_subexp(1.0, 0.5, 0.0), InvalidArgument);
  CHECK_THROWS_AS(make_custom(CustomParams{}), InvalidArgument);
}

TEST_CASE("gaussian potential: no gradient bound, Laplacian bound") {
  const Potential u = make_gaussian(2);
  CHECK(u.hessian_lower_bound() == 0.0);
  CHECK_FALSE(u.grad_sup_bound());
  REQUIRE(u.laplacian_bound());
  CHECK(u.value(Vector{3.0, 4.0}) == doctest::Approx(12.5));
}

TEST_CASE("estimated c_U of a double well") {
  CustomParams p;
  p.dim = 1;
  p.name = "double-well";
  p.value = [](std::span<const double> x) { return 0.25 * std::pow(x[0], 4) - 0.5 * x[0] * x[0]; };
  p.gradient = [](std::span<const double> x, std::span<double> g) { g[0] = x[0] * x[0] * x[0] - x[0]; };
  const Potential u = make_custom(p);
  CHECK(u.hessian_bound_is_estimate());
  // U'' = 3x^2 - 1 >= -1.
  CHECK(u.hessian_lower_bound() == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("assumption checks pass for the example potentials") {
  CHECK(check_assumptions(make_power_law(1, 1.0)).all_ok());
  CHECK(check_assumptions(make_subexp(1.0, 0.5, 1.0)).all_ok());
  CHECK(check_assumptions(make_gaussian(1)).all_ok());
  CHECK(check_assumptions(make_power_law(2, 1.0)).all_ok());
}

TEST_CASE("assumption checks flag false claims") {
  const auto bad_hessian = check_assumptions(make_power_law(1, 1.0).with_hessian_lower_bound(0.1));
  CHECK_FALSE(bad_hessian.hessian_bound_ok);
  CHECK_FALSE(bad_hessian.violations.empty());
  CHECK(bad_hessian.observed_min_curvature == doctest::Approx(-0.25).epsilon(1e-3));

  const auto bad_sup = check_assumptions(make_power_law(1, 1.0).with_grad_sup_bound(0.5));
  CHECK_FALSE(bad_sup.all_ok());

  const auto no_lap = check_assumptions(make_gaussian(1).with_laplacian_bound(std::nullopt));
  CHECK_FALSE(no_lap.all_ok());
}

TEST_CASE("field decompositions sum to the gradient") {
  const Potential u = make_power_law(3, 1.0);
  const Vector x{0.5, -2.0, 1.5};
  const Vector g = u.gradient(x);
  for (SamplerKind kind : {SamplerKind::ZigZag, SamplerKind::BouncyParticle}) {
    const FieldDecomposition fd = decompose(u, kind);
    Vector sum(3, 0.0);
    for (int k = 0; k < fd.num_fields(); ++k) {
      const Vector f = fd.field(k, x);
      for (int j = 0; j < 3; ++j) sum[j] += f[j];
    }
    for (int j = 0; j < 3; ++j) CHECK(sum[j] == doctest::Approx(g[j]));
    for (double a : fd.growth_constants()) CHECK(a == doctest::Approx(1.0));
  }
  const FieldDecomposition zz = decompose(u, SamplerKind::ZigZag);
  CHECK(zz.num_fields() == 3);
  const Vector v{1.0, -1.0, 1.0};
  CHECK(zz.directional(1, x, v) == doctest::Approx(-g[1]));
}
