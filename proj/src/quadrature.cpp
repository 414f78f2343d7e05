#include "pdmpwp/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pdmpwp/error.hpp"

namespace pdmpwp::quad {

namespace {

void check(double value, double error, double l1, double rel_tol, const char* what) {
  if (!std::isfinite(value) || !std::isfinite(error)) {
    throw NumericalError(std::string(what) + ": quadrature did not converge (non-finite result)");
  }
  if (error > rel_tol * std::max(std::abs(value), 1e-300) + 1e-300 &&
      error > 10.0 * rel_tol * l1) {
    throw NumericalError(std::string(what) + ": quadrature error estimate " +
                         std::to_string(error) + " exceeds tolerance for value " +
                         std::to_string(value));
  }
}

}  // namespace

double half_line(const Integrand& f, double a, double rel_tol) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  try {
    value = integrator.integrate([&](double x) { return f(x); }, a,
                                 std::numeric_limits<double>::infinity(), rel_tol, &error, &l1);
  } catch (const std::exception& e) {
    throw NumericalError(std::string("half-line quadrature failed: ") + e.what());
  }
  check(value, error, l1, std::max(rel_tol, 1e-14) * 100.0, "half-line integral");
  return value;
}

double interval(const Integrand& f, double a, double b, double rel_tol) {
  if (a == b) {
    return 0.0;
  }
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  try {
    value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double x) { return f(x); }, a, b, 20, rel_tol, &error, &l1);
  } catch (const std::exception& e) {
    throw NumericalError(std::string("interval quadrature failed: ") + e.what());
  }
  check(value, error, l1, std::max(rel_tol, 1e-14) * 100.0, "interval integral");
  return value;
}

double real_line(const Integrand& f, double rel_tol) {
  return half_line(f, 0.0, rel_tol) + half_line([&](double x) { return f(-x); }, 0.0, rel_tol);
}

}  // namespace pdmpwp::quad
