#pragma once

#include <functional>

namespace pdmpwp::quad {

using Integrand = std::function<double(double)>;

// Thin wrappers over Boost.Math double-exponential and Gauss-Kronrod rules.
// All throw NumericalError when the result is not finite or the reported
// error estimate exceeds rel_tol * |result| (plus a tiny absolute floor).

/// int_a^inf f(x) dx
double half_line(const Integrand& f, double a, double rel_tol = 1e-10);

/// int_a^b f(x) dx, adaptive Gauss-Kronrod (handles kinks at the ends).
double interval(const Integrand& f, double a, double b, double rel_tol = 1e-10);

/// int_{-inf}^{inf} f(x) dx, split at zero into two half-line integrals.
double real_line(const Integrand& f, double rel_tol = 1e-10);

}  // namespace pdmpwp::quad
