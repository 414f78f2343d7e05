#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pdmpwp {

using Vector = std::vector<double>;

enum class PotentialFamily { PowerLaw, SubExp, Custom };

std::string to_string(PotentialFamily family);

/// Constants (C_U, omega) of the Laplacian growth condition
/// Delta U(x) <= C_U d^{1+omega} + |grad U(x)|^2 / 2.
struct LaplacianBound {
  double c_u = 0.0;
  double omega = 0.0;
};

struct PowerLawParams {
  int dim = 1;
  double p = 1.0;
};

/// sigma |x|^delta outside the ball |x| < patch_radius, a + b |x|^2 inside.
struct SubExpParams {
  double sigma = 1.0;
  double delta = 0.5;
  double patch_radius = 1.0;
  int dim = 1;
  double patch_a = 0.0;
  double patch_b = 0.0;
};

struct CustomParams {
  int dim = 1;
  std::string name;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
};

/// Box and sampling budget used when estimating c_U for a custom potential.
struct HessianSearch {
  double box_half_width = 20.0;
  int grid_points_per_axis = 2001;
  int random_directions = 1000;
  std::uint64_t seed = 12345;
};

/// Target potential U with gradient and the regularity constants the rate
/// bounds consume. Immutable once built; copies are cheap.
class Potential {
 public:
  int dim() const noexcept { return dim_; }
  PotentialFamily family() const noexcept;

  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;
  Vector gradient(std::span<const double> x) const;
  /// k-th partial derivative of U.
  double partial(std::span<const double> x, int k) const;

  /// c_U with grad^2 U >= -c_U I.
  double hessian_lower_bound() const noexcept { return hessian_lower_bound_; }
  bool hessian_bound_is_estimate() const noexcept { return hessian_estimated_; }
  const std::optional<double>& grad_sup_bound() const noexcept { return grad_sup_bound_; }
  const std::optional<LaplacianBound>& laplacian_bound() const noexcept { return laplacian_bound_; }

  const PowerLawParams* power_law() const noexcept { return std::get_if<PowerLawParams>(&params_); }
  const SubExpParams* subexp() const noexcept { return std::get_if<SubExpParams>(&params_); }
  const CustomParams* custom() const noexcept { return std::get_if<CustomParams>(&params_); }

  std::string description() const;

  // Copies with a caller-claimed constant replaced. Nothing is validated here;
  // check_assumptions() is the place to find out whether the claim holds.
  Potential with_hessian_lower_bound(double c_u) const;
  Potential with_grad_sup_bound(std::optional<double> bound) const;
  Potential with_laplacian_bound(std::optional<LaplacianBound> bound) const;

 private:
  friend Potential make_power_law(int, double);
  friend Potential make_subexp(double, double, double, int);
  friend Potential make_custom(CustomParams, std::optional<double>, std::optional<double>,
                               std::optional<LaplacianBound>, const HessianSearch&);

  Potential() = default;

  std::variant<PowerLawParams, SubExpParams, CustomParams> params_;
  int dim_ = 1;
  double hessian_lower_bound_ = 0.0;
  bool hessian_estimated_ = false;
  std::optional<double> grad_sup_bound_;
  std::optional<LaplacianBound> laplacian_bound_;
};

/// U(x) = (d+p)/2 log(1+|x|^2); p = 1, d = 1 is the standard Cauchy target.
Potential make_power_law(int dim, double p);

/// U(x) = sigma |x|^delta for |x| >= M with a C^1 quadratic patch inside.
Potential make_subexp(double sigma, double delta, double patch_radius, int dim = 1);

/// User-supplied potential. When c_U is not given it is estimated by a grid
/// search over the HessianSearch box plus random directions (an estimate, not
/// a certificate).
Potential make_custom(CustomParams params, std::optional<double> hessian_lower_bound = {},
                      std::optional<double> grad_sup_bound = {},
                      std::optional<LaplacianBound> laplacian_bound = {},
                      const HessianSearch& search = {});

/// U(x) = |x|^2 / 2 (standard Gaussian), as a custom potential with exact constants.
Potential make_gaussian(int dim);

/// Minimum over a grid of the smallest Hessian eigenvalue estimate; used for
/// custom potentials. Returns max(0, -min).
double estimate_hessian_lower_bound(const Potential& potential, const HessianSearch& search);

// ---------------------------------------------------------------------------

enum class SamplerKind { ZigZag, BouncyParticle };

std::string to_string(SamplerKind kind);

/// grad U = sum_k F_k. Zig-Zag: F_k = d_k U e_k (K = d); BPS: F_1 = grad U.
class FieldDecomposition {
 public:
  FieldDecomposition(Potential potential, SamplerKind kind);

  SamplerKind kind() const noexcept { return kind_; }
  int num_fields() const noexcept { return kind_ == SamplerKind::ZigZag ? potential_.dim() : 1; }
  const Potential& potential() const noexcept { return potential_; }

  /// a_k with |F_k(x)| <= a_k (1 + |grad U(x)|).
  const Vector& growth_constants() const noexcept { return growth_; }

  void field(int k, std::span<const double> x, std::span<double> out) const;
  Vector field(int k, std::span<const double> x) const;
  /// v^T F_k(x) without materialising F_k.
  double directional(int k, std::span<const double> x, std::span<const double> v) const;

 private:
  Potential potential_;
  SamplerKind kind_;
  Vector growth_;
};

FieldDecomposition decompose(const Potential& potential, SamplerKind kind);

// ---------------------------------------------------------------------------

struct AssumptionViolation {
  std::string what;
  Vector x;
  double observed = 0.0;
  double claimed = 0.0;
};

struct AssumptionReport {
  bool gradient_bounded = false;
  double observed_grad_sup = 0.0;
  /// Only evaluated when the gradient is not bounded.
  std::optional<bool> laplacian_condition;
  bool hessian_bound_ok = true;
  double observed_min_curvature = 0.0;
  bool growth_bounds_ok = true;
  std::vector<AssumptionViolation> violations;

  bool all_ok() const noexcept {
    return hessian_bound_ok && growth_bounds_ok && (gradient_bounded || laplacian_condition.value_or(false));
  }
};

/// Checks the regularity claims of a potential on a test grid: gradient
/// boundedness, the Laplacian condition (unbounded case), the Hessian lower
/// bound and the growth constants of both field decompositions.
AssumptionReport check_assumptions(const Potential& potential);

}  // namespace pdmpwp
