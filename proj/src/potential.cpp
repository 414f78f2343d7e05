#include "pdmpwp/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "pdmpwp/error.hpp"
#include "pdmpwp/rng.hpp"

namespace pdmpwp {

namespace {

double squared_norm(std::span<const double> x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

// Directional second derivative u^T grad^2 U(x) u by central differences of the gradient.
double curvature(const Potential& potential, std::span<const double> x, std::span<const double> u) {
  const double h = 1e-5 * std::max(1.0, std::sqrt(squared_norm(x)));
  const auto d = x.size();
  Vector plus(x.begin(), x.end()), minus(x.begin(), x.end());
  for (std::size_t i = 0; i < d; ++i) {
    plus[i] += h * u[i];
    minus[i] -= h * u[i];
  }
  const Vector gp = potential.gradient(plus);
  const Vector gm = potential.gradient(minus);
  double q = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    q += u[i] * (gp[i] - gm[i]);
  }
  return q / (2.0 * h);
}

Vector random_unit(Philox4x32& rng, int dim) {
  std::normal_distribution<double> normal;
  Vector u(dim);
  double n2 = 0.0;
  do {
    for (auto& ui : u) {
      ui = normal(rng);
    }
    n2 = squared_norm(u);
  } while (n2 == 0.0);
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& ui : u) {
    ui *= inv;
  }
  return u;
}

// Test points: a dense 1-d grid plus log-spaced tails for d = 1; rays along the
// axes and random directions at log-spaced radii otherwise.
std::vector<Vector> test_points(int dim) {
  std::vector<Vector> points;
  if (dim == 1) {
    const int n = 10001;
    for (int i = 0; i < n; ++i) {
      points.push_back({-50.0 + 100.0 * i / (n - 1)});
    }
    for (int i = 0; i <= 100; ++i) {
      const double r = 50.0 * std::pow(20.0, i / 100.0);
      points.push_back({r});
      points.push_back({-r});
    }
    return points;
  }
  std::vector<Vector> directions;
  for (int k = 0; k < dim; ++k) {
    Vector e(dim, 0.0);
    e[k] = 1.0;
    directions.push_back(e);
    e[k] = -1.0;
    directions.push_back(e);
  }
  Philox4x32 rng(0x5eed, 0);
  for (int j = 0; j < 64; ++j) {
    directions.push_back(random_unit(rng, dim));
  }
  points.emplace_back(dim, 0.0);
  for (const auto& u : directions) {
    for (int i = 0; i <= 120; ++i) {
      const double r = 1e-3 * std::pow(10.0, i / 20.0);
      Vector x(dim);
      for (int k = 0; k < dim; ++k) {
        x[k] = r * u[k];
      }
      points.push_back(std::move(x));
    }
  }
  return points;
}

std::vector<Vector> test_directions(std::span<const double> x, Philox4x32& rng) {
  const int dim = static_cast<int>(x.size());
  std::vector<Vector> dirs;
  for (int k = 0; k < dim; ++k) {
    Vector e(dim, 0.0);
    e[k] = 1.0;
    dirs.push_back(std::move(e));
  }
  if (dim > 1) {
    const double r = std::sqrt(squared_norm(x));
    if (r > 0.0) {
      Vector radial(x.begin(), x.end());
      for (auto& c : radial) {
        c /= r;
      }
      dirs.push_back(std::move(radial));
    }
    dirs.push_back(random_unit(rng, dim));
  }
  return dirs;
}

}  // namespace

std::string to_string(PotentialFamily family) {
  switch (family) {
    case PotentialFamily::PowerLaw:
      return "power_law";
    case PotentialFamily::SubExp:
      return "subexp";
    case PotentialFamily::Custom:
      return "custom";
  }
  return "unknown";
}

PotentialFamily Potential::family() const noexcept {
  switch (params_.index()) {
    case 0:
      return PotentialFamily::PowerLaw;
    case 1:
      return PotentialFamily::SubExp;
    default:
      return PotentialFamily::Custom;
  }
}

double Potential::value(std::span<const double> x) const {
  if (const auto* pl = power_law()) {
    return 0.5 * (pl->dim + pl->p) * std::log1p(squared_norm(x));
  }
  if (const auto* se = subexp()) {
    const double r2 = squared_norm(x);
    if (r2 >= se->patch_radius * se->patch_radius) {
      return se->sigma * std::pow(r2, 0.5 * se->delta);
    }
    return se->patch_a + se->patch_b * r2;
  }
  return custom()->value(x);
}

void Potential::gradient(std::span<const double> x, std::span<double> out) const {
  if (const auto* pl = power_law()) {
    const double scale = (pl->dim + pl->p) / (1.0 + squared_norm(x));
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = scale * x[i];
    }
    return;
  }
  if (const auto* se = subexp()) {
    const double r2 = squared_norm(x);
    double scale;
    if (r2 >= se->patch_radius * se->patch_radius) {
      // d/dx sigma r^delta = sigma delta r^{delta-2} x
      scale = se->sigma * se->delta * std::pow(r2, 0.5 * se->delta - 1.0);
    } else {
      scale = 2.0 * se->patch_b;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = scale * x[i];
    }
    return;
  }
  custom()->gradient(x, out);
}

Vector Potential::gradient(std::span<const double> x) const {
  Vector g(x.size());
  gradient(x, g);
  return g;
}

double Potential::partial(std::span<const double> x, int k) const {
  if (const auto* pl = power_law()) {
    return (pl->dim + pl->p) * x[k] / (1.0 + squared_norm(x));
  }
  if (const auto* se = subexp()) {
    const double r2 = squared_norm(x);
    if (r2 >= se->patch_radius * se->patch_radius) {
      return se->sigma * se->delta * std::pow(r2, 0.5 * se->delta - 1.0) * x[k];
    }
    return 2.0 * se->patch_b * x[k];
  }
  Vector g(x.size());
  custom()->gradient(x, g);
  return g[k];
}

std::string Potential::description() const {
  std::ostringstream os;
  if (const auto* pl = power_law()) {
    os << "power_law(d=" << pl->dim << ", p=" << pl->p << ")";
  } else if (const auto* se = subexp()) {
    os << "subexp(sigma=" << se->sigma << ", delta=" << se->delta << ", M=" << se->patch_radius
       << ", d=" << se->dim << ")";
  } else {
    os << "custom(" << custom()->name << ", d=" << dim_ << ")";
  }
  return os.str();
}

Potential Potential::with_hessian_lower_bound(double c_u) const {
  Potential copy = *this;
  copy.hessian_lower_bound_ = c_u;
  copy.hessian_estimated_ = false;
  return copy;
}

Potential Potential::with_grad_sup_bound(std::optional<double> bound) const {
  Potential copy = *this;
  copy.grad_sup_bound_ = bound;
  return copy;
}

Potential Potential::with_laplacian_bound(std::optional<LaplacianBound> bound) const {
  Potential copy = *this;
  copy.laplacian_bound_ = bound;
  return copy;
}

Potential make_power_law(int dim, double p) {
  if (dim < 1) {
    throw InvalidArgument("power_law: dimension must be >= 1");
  }
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw InvalidArgument("power_law: p must be a positive finite number");
  }
  Potential u;
  u.params_ = PowerLawParams{dim, p};
  u.dim_ = dim;
  const double scale = dim + p;
  if (dim == 1) {
    // U''(x) = (1+p)(1-x^2)/(1+x^2)^2, minimised at x^2 = 3 with value -(1+p)/8.
    u.hessian_lower_bound_ = scale / 8.0;
  } else {
    // Radial eigenvalue (d+p)(1-s)/(1+s)^2 (s = |x|^2) is the only one that can be
    // negative; the transverse eigenvalue (d+p)/(1+s) is positive.
    double lowest = 0.0;
    const int n = 200001;
    for (int i = 0; i < n; ++i) {
      const double s = 100.0 * i / (n - 1);
      lowest = std::min(lowest, scale * (1.0 - s) / ((1.0 + s) * (1.0 + s)));
    }
    u.hessian_lower_bound_ = -lowest;
  }
  // |grad U| = (d+p) r/(1+r^2) is maximal at r = 1.
  u.grad_sup_bound_ = scale / 2.0;
  return u;
}

Potential make_subexp(double sigma, double delta, double patch_radius, int dim) {
  if (!(sigma > 0.0)) {
    throw InvalidArgument("subexp: sigma must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("subexp: delta must lie in (0, 1)");
  }
  if (!(patch_radius > 0.0)) {
    throw InvalidArgument("subexp: patch radius must be positive");
  }
  if (dim < 1) {
    throw InvalidArgument("subexp: dimension must be >= 1");
  }
  const double m = patch_radius;
  SubExpParams params{sigma, delta, m, dim, 0.0, 0.0};
  // a + b M^2 = sigma M^delta and 2 b M = sigma delta M^{delta-1}.
  params.patch_b = 0.5 * sigma * delta * std::pow(m, delta - 2.0);
  params.patch_a = sigma * std::pow(m, delta) * (1.0 - 0.5 * delta);

  Potential u;
  u.params_ = params;
  u.dim_ = dim;
  // Most negative radial curvature sigma delta (delta-1) r^{delta-2} is at r = M.
  u.hessian_lower_bound_ = sigma * delta * (1.0 - delta) * std::pow(m, delta - 2.0);
  // Radial slope decreases beyond M and grows linearly inside: sup attained on |x| = M.
  u.grad_sup_bound_ = sigma * delta * std::pow(m, delta - 1.0);
  return u;
}

Potential make_custom(CustomParams params, std::optional<double> hessian_lower_bound,
                      std::optional<double> grad_sup_bound,
                      std::optional<LaplacianBound> laplacian_bound, const HessianSearch& search) {
  if (params.dim < 1) {
    throw InvalidArgument("custom potential: dimension must be >= 1");
  }
  if (!params.value || !params.gradient) {
    throw InvalidArgument("custom potential: value and gradient callbacks are required");
  }
  Potential u;
  u.dim_ = params.dim;
  u.params_ = std::move(params);
  u.grad_sup_bound_ = grad_sup_bound;
  u.laplacian_bound_ = laplacian_bound;
  if (hessian_lower_bound) {
    u.hessian_lower_bound_ = *hessian_lower_bound;
  } else {
    u.hessian_lower_bound_ = estimate_hessian_lower_bound(u, search);
    u.hessian_estimated_ = true;
  }
  return u;
}

Potential make_gaussian(int dim) {
  CustomParams params;
  params.dim = dim;
  params.name = "gaussian";
  params.value = [](std::span<const double> x) { return 0.5 * squared_norm(x); };
  params.gradient = [](std::span<const double> x, std::span<double> out) {
    std::copy(x.begin(), x.end(), out.begin());
  };
  // Delta U = d <= 1 * d^{1+0} + |x|^2/2.
  return make_custom(std::move(params), 0.0, std::nullopt, LaplacianBound{1.0, 0.0});
}

double estimate_hessian_lower_bound(const Potential& potential, const HessianSearch& search) {
  const int dim = potential.dim();
  const double b = search.box_half_width;
  const int n = std::max(search.grid_points_per_axis, 2);
  double lowest = 0.0;
  Vector x(dim, 0.0), e(dim, 0.0);
  for (int axis = 0; axis < dim; ++axis) {
    std::fill(e.begin(), e.end(), 0.0);
    e[axis] = 1.0;
    for (int i = 0; i < n; ++i) {
      std::fill(x.begin(), x.end(), 0.0);
      x[axis] = -b + 2.0 * b * i / (n - 1);
      lowest = std::min(lowest, curvature(potential, x, e));
    }
  }
  if (dim > 1) {
    Philox4x32 rng(search.seed, 0);
    for (int j = 0; j < search.random_directions; ++j) {
      for (auto& xi : x) {
        xi = -b + 2.0 * b * rng.uniform();
      }
      const Vector u = random_unit(rng, dim);
      lowest = std::min(lowest, curvature(potential, x, u));
    }
  }
  return -lowest;
}

// ---------------------------------------------------------------------------

std::string to_string(SamplerKind kind) {
  return kind == SamplerKind::ZigZag ? "zigzag" : "bps";
}

FieldDecomposition::FieldDecomposition(Potential potential, SamplerKind kind)
    : potential_(std::move(potential)), kind_(kind) {
  // |d_k U| <= |grad U| and |grad U| <= 1 + |grad U|, so a_k = 1 in both cases.
  growth_.assign(num_fields(), 1.0);
}

void FieldDecomposition::field(int k, std::span<const double> x, std::span<double> out) const {
  if (kind_ == SamplerKind::BouncyParticle) {
    potential_.gradient(x, out);
    return;
  }
  std::fill(out.begin(), out.end(), 0.0);
  out[k] = potential_.partial(x, k);
}

Vector FieldDecomposition::field(int k, std::span<const double> x) const {
  Vector out(x.size());
  field(k, x, out);
  return out;
}

double FieldDecomposition::directional(int k, std::span<const double> x,
                                       std::span<const double> v) const {
  if (kind_ == SamplerKind::ZigZag) {
    return v[k] * potential_.partial(x, k);
  }
  const Vector g = potential_.gradient(x);
  return std::inner_product(g.begin(), g.end(), v.begin(), 0.0);
}

FieldDecomposition decompose(const Potential& potential, SamplerKind kind) {
  return FieldDecomposition(potential, kind);
}

// ---------------------------------------------------------------------------

AssumptionReport check_assumptions(const Potential& potential) {
  AssumptionReport report;
  const int dim = potential.dim();
  const auto points = test_points(dim);
  const double c_u = potential.hessian_lower_bound();
  const auto& sup_claim = potential.grad_sup_bound();
  const auto& lap_claim = potential.laplacian_bound();
  const FieldDecomposition zigzag(potential, SamplerKind::ZigZag);
  const FieldDecomposition bps(potential, SamplerKind::BouncyParticle);
  Philox4x32 rng(0xc0ffee, 1);

  double min_curv = std::numeric_limits<double>::infinity();
  bool laplacian_ok = true;
  const std::size_t max_violations = 64;
  auto record = [&](std::string what, const Vector& x, double observed, double claimed) {
    if (report.violations.size() < max_violations) {
      report.violations.push_back({std::move(what), x, observed, claimed});
    }
  };

  for (const auto& x : points) {
    const Vector g = potential.gradient(x);
    const double gnorm = std::sqrt(squared_norm(g));
    report.observed_grad_sup = std::max(report.observed_grad_sup, gnorm);
    if (sup_claim && gnorm > *sup_claim * (1.0 + 1e-9) + 1e-12) {
      record("gradient exceeds grad_sup_bound", x, gnorm, *sup_claim);
    }

    for (const auto& u : test_directions(x, rng)) {
      const double q = curvature(potential, x, u);
      min_curv = std::min(min_curv, q);
      if (q < -c_u - 1e-6 * (1.0 + c_u)) {
        report.hessian_bound_ok = false;
        record("curvature below -c_U", x, q, -c_u);
      }
    }

    for (const FieldDecomposition* decomp : {&zigzag, &bps}) {
      for (int k = 0; k < decomp->num_fields(); ++k) {
        const Vector f = decomp->field(k, x);
        const double fnorm = std::sqrt(squared_norm(f));
        const double bound = decomp->growth_constants()[k] * (1.0 + gnorm);
        if (fnorm > bound * (1.0 + 1e-12)) {
          report.growth_bounds_ok = false;
          record(to_string(decomp->kind()) + " field growth bound a_k", x, fnorm, bound);
        }
      }
    }

    if (!sup_claim && lap_claim) {
      double laplacian = 0.0;
      Vector e(dim, 0.0);
      for (int k = 0; k < dim; ++k) {
        e[k] = 1.0;
        laplacian += curvature(potential, x, e);
        e[k] = 0.0;
      }
      const double rhs = lap_claim->c_u * std::pow(static_cast<double>(dim), 1.0 + lap_claim->omega) +
                         0.5 * gnorm * gnorm;
      if (laplacian > rhs + 1e-6 * (1.0 + std::abs(rhs))) {
        laplacian_ok = false;
        record("laplacian condition", x, laplacian, rhs);
      }
    }
  }

  report.observed_min_curvature = min_curv;
  report.gradient_bounded =
      sup_claim.has_value() &&
      std::none_of(report.violations.begin(), report.violations.end(),
                   [](const AssumptionViolation& v) { return v.what == "gradient exceeds grad_sup_bound"; });
  if (!sup_claim) {
    report.laplacian_condition = lap_claim.has_value() && laplacian_ok;
    if (!lap_claim) {
      record("unbounded gradient and no laplacian bound supplied", Vector(dim, 0.0), 0.0, 0.0);
    }
  }
  return report;
}

}  // namespace pdmpwp
