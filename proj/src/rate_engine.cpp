#include "pdmpwp/rate_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "pdmpwp/error.hpp"
#include "pdmpwp/quadrature.hpp"

namespace pdmpwp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest r in (floor, 1] with g(r) <= target, g decreasing on (0, 1);
// bisection in log r.
XiPoint solve_rate_inequality(double target, const std::function<double(double)>& g, double c1) {
  if (!(target > 0.0)) {
    return {c1, 1.0, false};
  }
  double lo = std::log(kXiRadiusFloor);
  double hi = 0.0;
  if (g(kXiRadiusFloor) <= target) {
    return {c1 * kXiRadiusFloor, kXiRadiusFloor, true};
  }
  for (int it = 0; it < 400 && hi - lo > 1e-14 * std::max(1.0, -lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(std::exp(mid)) <= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double r = std::exp(hi);
  return {c1 * std::min(1.0, r), r, false};
}

}  // namespace

// ---------------------------------------------------------------------------
// Constants

double kappa1(double c_u) {
  if (!(c_u >= 0.0)) {
    throw InvalidArgument("kappa1: c_U must be >= 0");
  }
  return std::sqrt(2.0 * (2.0 + c_u));
}

double kappa2(const Potential& potential, double kappa1) {
  if (const auto& sup = potential.grad_sup_bound()) {
    return *sup;
  }
  if (const auto& lap = potential.laplacian_bound()) {
    const double d = potential.dim();
    return std::sqrt(4.0 * (4.0 * kappa1 + lap->c_u * std::pow(d, 1.0 + lap->omega)));
  }
  throw InvalidArgument("kappa2: potential has neither a gradient bound nor a Laplacian bound");
}

double r0_constant(const VelocityMoments& m, double kappa1, double kappa2,
                   std::span<const double> growth_constants, double lambda_lower, double c_lambda) {
  if (!(m.m2 >= 1.0)) {
    throw InvalidArgument("r0_constant: m2 must be >= 1");
  }
  if (!(kappa1 > 0.0 && kappa2 >= 0.0 && lambda_lower > 0.0 && c_lambda >= 0.0)) {
    throw InvalidArgument("r0_constant: constants must be positive");
  }
  const double excess = std::max(0.0, m.m4 - m.m22);
  const double sum_a = std::accumulate(growth_constants.begin(), growth_constants.end(), 0.0);
  const double transport = std::sqrt(3.0 * excess + m.m22) * (kappa1 + kappa2);
  const double jumps = m.m2 * lambda_lower * (1.0 + c_lambda * kappa2) +
                       (1.0 + kappa2) * std::sqrt(2.0 * m.m22 + 3.0 * excess) * sum_a;
  return transport + jumps / m.m2;
}

C1C2 c1_c2(double r0, double m2, double eps) {
  if (!(r0 > 0.0) || !(m2 > 0.0)) {
    throw InvalidArgument("c1_c2: R0 and m2 must be positive");
  }
  const double s = 1.0 / std::sqrt(m2 / 2.0);
  if (!(eps >= 0.0) || !(eps * s < 1.0)) {
    throw InvalidArgument("c1_c2: eps must satisfy 0 <= eps < (m2/2)^{1/2}");
  }
  const double one_m = (1.0 + m2) * (1.0 + m2);
  const double lead = std::max((1.0 + eps * s) / 2.0, (2.0 + s) * (r0 * r0 * one_m + 1.0));
  return {2.0 * lead / (1.0 - eps * s), 1.0 / (r0 * r0 * (2.0 + s) * one_m)};
}

double epsilon_for(double alpha1_at_r1, double alpha2_at_r2, double r0, double m2) {
  return 1.0 / (alpha2_at_r2 * (r0 * r0 * (alpha1_at_r1 + m2) + 2.0));
}

double strong_poincare_constant(double lambda_lower, double m2) {
  if (!(lambda_lower > 0.0) || !(m2 > 0.0)) {
    throw InvalidArgument("strong_poincare_constant: lambda and m2 must be positive");
  }
  return 1.0 / (lambda_lower * std::sqrt(m2));
}

RateConstants compute_rate_constants(const FieldDecomposition& decomposition,
                                     const VelocityMeasure& velocity, double lambda_ref,
                                     double c_lambda) {
  if (!(lambda_ref > 0.0)) {
    throw InvalidArgument("rate constants: refresh rate must be positive");
  }
  const Potential& u = decomposition.potential();
  RateConstants rc;
  const auto& m = velocity.moments();
  rc.m2 = m.m2;
  rc.m4 = m.m4;
  rc.m22 = m.m22;
  rc.m22_from_d1_convention = m.m22_from_d1_convention;
  rc.c_u = u.hessian_lower_bound();
  rc.laplacian = u.laplacian_bound();
  rc.kappa1 = kappa1(rc.c_u);
  rc.kappa2 = kappa2(u, rc.kappa1);
  rc.growth_constants = decomposition.growth_constants();
  rc.lambda_lower = lambda_ref;
  rc.c_lambda = c_lambda;
  rc.r0 = r0_constant(m, rc.kappa1, rc.kappa2, rc.growth_constants, rc.lambda_lower, c_lambda);
  rc.c_p = strong_poincare_constant(rc.lambda_lower, rc.m2);
  rc.eps = 0.0;
  const C1C2 base = c1_c2(rc.r0, rc.m2, rc.eps);
  rc.c1 = base.c1;
  rc.c2 = base.c2;
  rc.c1_eps_half = c1_c2(rc.r0, rc.m2, 0.5).c1;
  rc.c2_prime = rc.c2 / rc.c_p;
  return rc;
}

CauchyExampleConstants cauchy_example_constants(double c_u, double lambda_ref) {
  CauchyExampleConstants p;
  p.c_u = c_u;
  p.lambda_ref = lambda_ref;
  p.r0 = (1.0 + std::sqrt(1.0 + c_u / 2.0)) + lambda_ref + 2.0 * std::sqrt(2.0);
  p.c1 = 2.0 + std::sqrt(2.0);
  p.c2_prime = lambda_ref / (4.0 * p.r0 * p.r0 * (2.0 + std::sqrt(2.0)));
  return p;
}

// ---------------------------------------------------------------------------
// Alpha functions

std::string to_string(AlphaFamily family) {
  switch (family) {
    case AlphaFamily::Power:
      return "power";
    case AlphaFamily::SubExpLog:
      return "subexp_log";
    case AlphaFamily::Constant:
      return "constant";
    case AlphaFamily::CauchyExplicit:
      return "cauchy_explicit";
    case AlphaFamily::RocknerWang1D:
      return "rockner_wang_1d";
    case AlphaFamily::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

RocknerWang1D::RocknerWang1D(Potential potential, TailConvention convention)
    : potential_(std::move(potential)), convention_(convention) {
  if (potential_.dim() != 1) {
    throw InvalidArgument("Rockner-Wang alpha is implemented for d = 1 only");
  }
  try {
    z_ = tail_mass(0.0);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("non-integrable potential: ") + e.what());
  }
  if (!(z_ > 0.0) || !std::isfinite(z_)) {
    throw NumericalError("non-integrable potential: normalizer is not finite");
  }
  if (convention_ == TailConvention::Unnormalized) {
    return;
  }
}

double RocknerWang1D::tail_mass(double s) const {
  auto density = [this](double x) {
    const double xs[1] = {x};
    return std::exp(-potential_.value(xs));
  };
  const double right = quad::half_line(density, s, 1e-12);
  const double left = quad::half_line([&](double x) { return density(-x); }, s, 1e-12);
  const double mass = right + left;
  // The constructor calls this before z_ is known; z_ starts at 1.
  return convention_ == TailConvention::Normalized ? mass / z_ : mass;
}

double RocknerWang1D::quantile_radius(double r) const {
  if (!(r > 0.0)) {
    throw InvalidArgument("Rockner-Wang: r must be positive");
  }
  const double q = r / (1.0 + r);
  if (tail_mass(0.0) <= q) {
    return 0.0;
  }
  double hi = 1.0;
  while (tail_mass(hi) > q) {
    hi *= 2.0;
    if (hi > 1e300) {
      throw NumericalError("Rockner-Wang: tail mass never drops below r/(1+r)");
    }
  }
  double lo = hi <= 1.0 ? 0.0 : hi / 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tail_mass(mid) <= q) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double RocknerWang1D::oscillation(double radius) const {
  if (!(radius >= 0.0)) {
    throw InvalidArgument("oscillation: radius must be >= 0");
  }
  auto u = [this](double x) {
    const double xs[1] = {x};
    return potential_.value(xs);
  };
  if (radius == 0.0) {
    return 0.0;
  }
  const int n = 4001;
  const double h = 2.0 * radius / (n - 1);
  int imax = 0, imin = 0;
  double vmax = -kInf, vmin = kInf;
  for (int i = 0; i < n; ++i) {
    const double val = u(-radius + i * h);
    if (val > vmax) {
      vmax = val;
      imax = i;
    }
    if (val < vmin) {
      vmin = val;
      imin = i;
    }
  }
  auto bracket = [&](int i) {
    return std::pair{std::max(-radius, -radius + (i - 1) * h), std::min(radius, -radius + (i + 1) * h)};
  };
  const auto [a1, b1] = bracket(imin);
  const auto best_min = boost::math::tools::brent_find_minima(u, a1, b1, 50);
  const auto [a2, b2] = bracket(imax);
  const auto best_max = boost::math::tools::brent_find_minima([&](double x) { return -u(x); }, a2, b2, 50);
  return std::max(vmax, -best_max.second) - std::min(vmin, best_min.second);
}

double RocknerWang1D::alpha(double r) const {
  const double radius = quantile_radius(r);
  return 4.0 * radius * radius * std::exp(oscillation(radius)) / (kPi * kPi);
}

AlphaFn AlphaFn::power(double c, double tau) {
  if (!(c > 0.0) || !(tau > 0.0)) {
    throw InvalidArgument("power alpha: c and tau must be positive");
  }
  return AlphaFn(PowerParams{c, tau});
}

AlphaFn AlphaFn::subexp_log(double c, double delta) {
  if (!(c > 0.0) || !(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("subexp_log alpha: c > 0 and delta in (0, 1) required");
  }
  return AlphaFn(SubExpLogParams{c, delta});
}

AlphaFn AlphaFn::constant(double value) {
  if (!(value > 0.0)) {
    throw InvalidArgument("constant alpha: value must be positive");
  }
  return AlphaFn(ConstantParams{value});
}

AlphaFn AlphaFn::cauchy_explicit() { return AlphaFn(CauchyParams{}); }

AlphaFn AlphaFn::rockner_wang_1d(const Potential& potential, TailConvention convention) {
  return AlphaFn(std::make_shared<const RocknerWang1D>(potential, convention));
}

AlphaFn AlphaFn::tabulated(Vector r, Vector alpha) {
  if (r.size() < 2 || r.size() != alpha.size()) {
    throw InvalidArgument("tabulated alpha: need at least two (r, alpha) pairs");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !(alpha[i] > 0.0)) {
      throw InvalidArgument("tabulated alpha: r and alpha must be positive");
    }
    if (i > 0 && (!(r[i] > r[i - 1]) || alpha[i] > alpha[i - 1])) {
      throw InvalidArgument("tabulated alpha: r must increase and alpha must not increase");
    }
  }
  return AlphaFn(TabulatedParams{std::move(r), std::move(alpha)});
}

AlphaFamily AlphaFn::family() const noexcept {
  return static_cast<AlphaFamily>(params_.index());
}

double AlphaFn::operator()(double r) const {
  if (!(r > 0.0)) {
    throw InvalidArgument("alpha: r must be positive");
  }
  return std::visit(
      [r](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, PowerParams>) {
          return p.c * (1.0 + std::pow(r, -p.tau));
        } else if constexpr (std::is_same_v<P, SubExpLogParams>) {
          return p.c * std::pow(1.0 + std::log1p(1.0 / r), 4.0 * (1.0 - p.delta) / p.delta);
        } else if constexpr (std::is_same_v<P, ConstantParams>) {
          return p.value;
        } else if constexpr (std::is_same_v<P, CauchyParams>) {
          return alpha_cauchy_explicit(r);
        } else if constexpr (std::is_same_v<P, RwPtr>) {
          return std::max(1.0, p->alpha(r));
        } else {
          const auto& rs = p.r;
          const auto& as = p.alpha;
          const double lr = std::log(r);
          std::size_t i = std::upper_bound(rs.begin(), rs.end(), r) - rs.begin();
          i = std::clamp<std::size_t>(i, 1, rs.size() - 1);
          const double x0 = std::log(rs[i - 1]), x1 = std::log(rs[i]);
          const double y0 = std::log(as[i - 1]), y1 = std::log(as[i]);
          return std::exp(y0 + (y1 - y0) * (lr - x0) / (x1 - x0));
        }
      },
      params_);
}

std::string AlphaFn::description() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, PowerParams>) {
          os << "power(c=" << p.c << ", tau=" << p.tau << ")";
        } else if constexpr (std::is_same_v<P, SubExpLogParams>) {
          os << "subexp_log(c=" << p.c << ", delta=" << p.delta << ")";
        } else if constexpr (std::is_same_v<P, ConstantParams>) {
          os << "constant(" << p.value << ")";
        } else if constexpr (std::is_same_v<P, CauchyParams>) {
          os << "cauchy_explicit";
        } else if constexpr (std::is_same_v<P, RwPtr>) {
          os << "rockner_wang_1d("
             << (p->convention() == TailConvention::Normalized ? "normalized" : "unnormalized") << ")";
        } else {
          os << "tabulated(" << p.r.size() << " points)";
        }
      },
      params_);
  return os.str();
}

double alpha_cauchy_explicit(double r) {
  if (!(r > 0.0)) {
    throw InvalidArgument("alpha_cauchy_explicit: r must be positive");
  }
  // theta = pi/2 - u: tan(theta) = cot(u), 1/cos^2(theta) = 1/sin^2(u).
  const double u = r / (2.0 * (1.0 + r));
  const double s = std::sin(u);
  return 4.0 / (kPi * kPi) * std::cos(u) / (s * s * s);
}

double alpha_rockner_wang_1d(const Potential& potential, double r, TailConvention convention) {
  return RocknerWang1D(potential, convention).alpha(r);
}

double tau_exponent(int d, double p) {
  if (d < 1 || !(p > 0.0)) {
    throw InvalidArgument("tau_exponent: d >= 1 and p > 0 required");
  }
  const double first = (d + p + 2.0) / p;
  const double denom = p * p - 4.0 - 2.0 * d - 2.0 * p;
  const double second = denom > 0.0 ? (4.0 * p + 4.0 + 2.0 * d) / denom : kInf;
  return std::min(first, second);
}

// ---------------------------------------------------------------------------
// xi

XiPoint xi_strong(double t, const AlphaFn& alpha1, double c1, double c2_prime) {
  if (!(t >= 0.0)) {
    throw InvalidArgument("xi: t must be >= 0");
  }
  return solve_rate_inequality(
      c2_prime * t,
      [&](double r) {
        const double a = alpha1(r);
        return a * a * std::log(1.0 / r);
      },
      c1);
}

XiPoint xi_general(double t, const AlphaFn& alpha1, const AlphaFn& alpha2, double c1, double c2) {
  if (!(t >= 0.0)) {
    throw InvalidArgument("xi: t must be >= 0");
  }
  return solve_rate_inequality(
      c2 * t,
      [&](double r) {
        const double a = alpha1(r);
        const double inner = r / (a * a);
        if (!(inner > 0.0)) {
          return kInf;
        }
        return a * a * alpha2(inner) * std::log(1.0 / r);
      },
      c1);
}

XiCurve XiCurve::strong(AlphaFn alpha1, double c1, double c2_prime) {
  if (!(c1 > 0.0) || !(c2_prime > 0.0)) {
    throw InvalidArgument("xi curve: c1 and c2' must be positive");
  }
  return XiCurve(XiMode::StrongPI, std::move(alpha1), std::nullopt, c1, c2_prime);
}

XiCurve XiCurve::general(AlphaFn alpha1, AlphaFn alpha2, double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw InvalidArgument("xi curve: c1 and c2 must be positive");
  }
  return XiCurve(XiMode::General, std::move(alpha1), std::move(alpha2), c1, c2);
}

XiPoint XiCurve::evaluate(double t) const {
  if (mode_ == XiMode::StrongPI) {
    return xi_strong(t, alpha1_, c1_, c2_);
  }
  return xi_general(t, alpha1_, *alpha2_, c1_, c2_);
}

double lambert_w(double x) {
  if (!(x >= 0.0)) {
    throw InvalidArgument("lambert_w: x must be >= 0 (principal branch)");
  }
  if (x == 0.0) {
    return 0.0;
  }
  if (std::isinf(x)) {
    return kInf;
  }
  double w;
  if (x < 1.0) {
    w = std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log1p(l1);
    w = l1 - l2 + l2 / (1.0 + l1);
  }
  if (x > 1e200) {
    // Newton on w + log w - log x, avoiding overflow of e^w.
    const double lx = std::log(x);
    for (int it = 0; it < 100; ++it) {
      const double f = w + std::log(w) - lx;
      const double step = f / (1.0 + 1.0 / w);
      w -= step;
      if (std::abs(step) <= 1e-16 * w) {
        break;
      }
    }
    return w;
  }
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 4e-16 * (1.0 + std::abs(w))) {
      break;
    }
  }
  return w;
}

double cauchy_xi_lambert_printed(double t, double c1, double c2_prime) {
  const double x = 3.0 * c2_prime * std::pow(kPi, 4) * t / 512.0;
  return c1 * std::pow(lambert_w(x), -1.0 / 6.0);
}

double cauchy_xi_lambert_solved(double t, double c1, double c2_prime) {
  const double x = 3.0 * c2_prime * std::pow(kPi, 4) * t / 512.0;
  return c1 * std::exp(-lambert_w(x) / 6.0);
}

std::vector<double> bound_curve(std::span<const double> times, const XiCurve& xi, double f_l2_sq,
                                double f_osc_sq) {
  if (!(f_l2_sq >= 0.0) || !(f_osc_sq >= 0.0)) {
    throw InvalidArgument("bound_curve: norms must be nonnegative");
  }
  std::vector<double> out;
  out.reserve(times.size());
  const double scale = f_l2_sq + f_osc_sq;
  for (double t : times) {
    out.push_back(scale == 0.0 ? 0.0 : scale * xi(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table and CLT

std::vector<RateTableRow> rate_table() {
  const std::string poly_half = "t^(-1/(2*tau))";
  const std::string poly_full = "t^(-1/tau)";
  const std::string stretched_slow = "exp(-k*t^(delta/(8-7*delta)))";
  const std::string stretched_fast = "exp(-k*t^(delta/(4-3*delta)))";
  return {
      {"PDMP", poly_half, stretched_slow},
      {"reversible Langevin", poly_full, stretched_fast},
      {"nonreversible Langevin, V1=U, V2=v^2/2", poly_half, stretched_slow},
      {"nonreversible Langevin, V1=v^2/2, V2=U", poly_full, stretched_fast},
  };
}

double pdmp_power_exponent(double tau) { return 1.0 / (2.0 * tau); }
double reversible_power_exponent(double tau) { return 1.0 / tau; }
double pdmp_stretched_exponent(double delta) { return delta / (8.0 - 7.0 * delta); }
double reversible_stretched_exponent(double delta) { return delta / (4.0 - 3.0 * delta); }

std::string to_string(CltVerdict verdict) {
  switch (verdict) {
    case CltVerdict::Holds:
      return "holds";
    case CltVerdict::Fails:
      return "fails";
    case CltVerdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

namespace {

CltResult clt_numeric(const AlphaFn& alpha1, const CltOptions& opt) {
  CltResult result;
  result.numeric = true;
  // Log grid from 1e-8 to t_max; trapezoid in log t for both integrals.
  const double t_min = 1e-8;
  const int decades = static_cast<int>(std::ceil(std::log10(opt.t_max / t_min)));
  const int n = decades * opt.points_per_decade + 1;
  std::vector<double> t(n), v(n), phi(n), tail_int(n);
  double prev_sqrt_xi = std::sqrt(opt.c1);
  double acc_v = std::sqrt(opt.c1) * t_min;  // xi <= c1 on [0, t_min]
  for (int i = 0; i < n; ++i) {
    t[i] = t_min * std::pow(10.0, static_cast<double>(i) / opt.points_per_decade);
    const double sq = std::sqrt(xi_strong(t[i], alpha1, opt.c1, opt.c2).value);
    if (i > 0) {
      acc_v += 0.5 * (prev_sqrt_xi + sq) * (t[i] - t[i - 1]);
    }
    prev_sqrt_xi = sq;
    v[i] = acc_v;
    phi[i] = std::pow(t[i], -1.5) * v[i];
  }
  // int_1^T phi dt
  tail_int.assign(n, 0.0);
  for (int i = 1; i < n; ++i) {
    tail_int[i] = tail_int[i - 1];
    if (t[i] > 1.0) {
      const double a = std::max(t[i - 1], 1.0);
      tail_int[i] += 0.5 * (phi[i - 1] + phi[i]) * (t[i] - a);
    }
  }
  auto decay = [&](int i) {
    const int j = i - opt.points_per_decade;
    return -(std::log(phi[i]) - std::log(phi[j])) / (std::log(t[i]) - std::log(t[j]));
  };
  auto extrapolated = [&](int i, double beta) { return tail_int[i] + phi[i] * t[i] / (beta - 1.0); };

  const int last = n - 1;
  const int earlier = last - 2 * opt.points_per_decade;
  const double beta_last = decay(last);
  const double beta_earlier = decay(earlier);
  result.margin = beta_last - 1.0;
  std::ostringstream os;
  os << "tail decay exponent " << beta_last << " (two decades earlier " << beta_earlier << ")";
  if (beta_last <= 1.0) {
    const bool settled = beta_last - beta_earlier < 0.01;
    result.verdict = settled ? CltVerdict::Fails : CltVerdict::Inconclusive;
    os << (settled ? "; integrand tail is not integrable" : "; decay exponent still rising");
    result.detail = os.str();
    return result;
  }
  if (beta_earlier <= 1.0) {
    result.verdict = CltVerdict::Inconclusive;
    os << "; decay exponent still crossing 1";
    result.detail = os.str();
    return result;
  }
  const double total_last = extrapolated(last, beta_last);
  const double total_earlier = extrapolated(earlier, beta_earlier);
  const double disagreement = std::abs(total_last - total_earlier) / std::abs(total_last);
  os << "; extrapolated integral " << total_last << " vs " << total_earlier;
  result.verdict = disagreement > opt.extrapolation_tolerance ? CltVerdict::Inconclusive : CltVerdict::Holds;
  result.detail = os.str();
  return result;
}

}  // namespace

CltResult clt_check(const AlphaFn& alpha1, const CltOptions& options) {
  if (!options.force_numeric) {
    if (const auto* p = alpha1.power_params()) {
      CltResult r;
      r.margin = 0.5 - p->tau;
      r.verdict = p->tau < 0.5 ? CltVerdict::Holds : CltVerdict::Fails;
      r.detail = "power family: requires tau < 1/2";
      return r;
    }
    if (alpha1.family() == AlphaFamily::SubExpLog) {
      return {CltVerdict::Holds, kInf, false, "subexp_log family: stretched-exponential rate"};
    }
    if (alpha1.family() == AlphaFamily::Constant) {
      return {CltVerdict::Holds, kInf, false, "constant alpha: exponential rate"};
    }
  }
  return clt_numeric(alpha1, options);
}

}  // namespace pdmpwp
