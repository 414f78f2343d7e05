#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pdmpwp/pdmp_sim.hpp"
#include "pdmpwp/potential.hpp"

namespace pdmpwp {

// ---------------------------------------------------------------------------
// Hypocoercivity constants

/// kappa_1 = sqrt(2 (2 + c_U)).
double kappa1(double c_u);

/// sup |grad U| when the gradient is bounded, else sqrt(4 (4 kappa_1 + C_U d^{1+omega})).
double kappa2(const Potential& potential, double kappa1);

/// Cross-term constant R_0 for PDMP generators.
double r0_constant(const VelocityMoments& moments, double kappa1, double kappa2,
                   std::span<const double> growth_constants, double lambda_lower, double c_lambda);

struct C1C2 {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// c_1, c_2 of the abstract rate; requires 0 <= eps < (m2/2)^{1/2}.
C1C2 c1_c2(double r0, double m2, double eps = 0.0);

/// eps = 1 / (alpha_2(r_2) [R_0^2 (alpha_1(r_1) + m_2) + 2]).
double epsilon_for(double alpha1_at_r1, double alpha2_at_r2, double r0, double m2);

/// C_P = 1 / (lambda_lower m2^{1/2}), the strong Poincare constant in v.
double strong_poincare_constant(double lambda_lower, double m2);

struct RateConstants {
  double m2 = 1.0, m4 = 1.0 / 3.0, m22 = 1.0;
  bool m22_from_d1_convention = false;
  double c_u = 0.0;
  std::optional<LaplacianBound> laplacian;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  Vector growth_constants;
  double lambda_lower = 1.0;
  double c_lambda = 0.0;
  double r0 = 0.0;
  double c_p = 0.0;
  /// Canonical eps (r -> 0 limit) and the c_1 it yields.
  double eps = 0.0;
  double c1 = 0.0;
  /// c_1 at the eps -> 1/2 end of the admissible range.
  double c1_eps_half = 0.0;
  double c2 = 0.0;
  /// c_2' = c_2 / C_P = lambda_lower m2^{1/2} c_2.
  double c2_prime = 0.0;
};

/// Every constant computed from the potential, decomposition and velocity law.
RateConstants compute_rate_constants(const FieldDecomposition& decomposition,
                                     const VelocityMeasure& velocity, double lambda_ref,
                                     double c_lambda = 0.0);

/// Fixed constant set for the d = 1 Cauchy Zig-Zag:
/// R_0 = (1 + sqrt(1 + c_U/2)) + lambda_ref + 2 sqrt 2, c_1 = 2 + sqrt 2,
/// c_2' = lambda_ref / (4 R_0^2 (2 + sqrt 2)). Separate from compute_rate_constants.
struct CauchyExampleConstants {
  double c_u = 0.3;
  double lambda_ref = 1.0;
  double r0 = 0.0;
  double c1 = 0.0;
  double c2_prime = 0.0;
};

CauchyExampleConstants cauchy_example_constants(double c_u = 0.3, double lambda_ref = 1.0);

// ---------------------------------------------------------------------------
// Weak Poincare alpha functions

enum class AlphaFamily { Power, SubExpLog, Constant, CauchyExplicit, RocknerWang1D, Tabulated };

std::string to_string(AlphaFamily family);

/// Tail-mass convention for the Rockner-Wang quantile radius.
enum class TailConvention { Normalized, Unnormalized };

/// alpha(r) = 4 R_r^2 e^{delta_{R_r}(U)} / pi^2 in d = 1, with
/// R_r = inf{s > 0 : pi(|x| > s) <= r/(1+r)} and delta_R = osc of U on [-R, R].
class RocknerWang1D {
 public:
  RocknerWang1D(Potential potential, TailConvention convention);

  double normalizer() const noexcept { return z_; }
  TailConvention convention() const noexcept { return convention_; }
  /// pi(B_s^c) in the chosen convention.
  double tail_mass(double s) const;
  double quantile_radius(double r) const;
  /// max_{[-R,R]} U - min_{[-R,R]} U.
  double oscillation(double radius) const;
  double alpha(double r) const;

 private:
  Potential potential_;
  TailConvention convention_;
  double z_ = 1.0;
};

class AlphaFn {
 public:
  struct PowerParams {
    double c = 1.0;
    double tau = 1.0;
  };
  struct SubExpLogParams {
    double c = 1.0;
    double delta = 0.5;
  };
  struct TabulatedParams {
    Vector r;
    Vector alpha;
  };

  /// c (1 + r^{-tau})
  static AlphaFn power(double c, double tau);
  /// c [1 + log(1 + 1/r)]^{4(1-delta)/delta}
  static AlphaFn subexp_log(double c, double delta);
  static AlphaFn constant(double value);
  /// (4/pi^2) tan(theta)/cos^2(theta), theta = (pi - r/(1+r))/2.
  static AlphaFn cauchy_explicit();
  static AlphaFn rockner_wang_1d(const Potential& potential, TailConvention convention);
  /// Log-log interpolation of (r, alpha) samples; r increasing, alpha nonincreasing.
  static AlphaFn tabulated(Vector r, Vector alpha);

  double operator()(double r) const;
  AlphaFamily family() const noexcept;
  std::string description() const;

  const PowerParams* power_params() const noexcept { return std::get_if<PowerParams>(&params_); }
  const SubExpLogParams* subexp_params() const noexcept { return std::get_if<SubExpLogParams>(&params_); }

 private:
  struct ConstantParams {
    double value = 1.0;
  };
  struct CauchyParams {};
  using RwPtr = std::shared_ptr<const RocknerWang1D>;

  explicit AlphaFn(std::variant<PowerParams, SubExpLogParams, ConstantParams, CauchyParams, RwPtr,
                                TabulatedParams>
                       params)
      : params_(std::move(params)) {}

  std::variant<PowerParams, SubExpLogParams, ConstantParams, CauchyParams, RwPtr, TabulatedParams>
      params_;
};

/// Closed-form alpha_1 of the d = 1 Cauchy example, evaluated as
/// cos(u)/sin^3(u) with u = r/(2(1+r)) so it stays accurate as r -> 0.
double alpha_cauchy_explicit(double r);

double alpha_rockner_wang_1d(const Potential& potential, double r,
                             TailConvention convention = TailConvention::Normalized);

/// tau = min{(d+p+2)/p, (4p+4+2d)/[p^2-4-2d-2p]^+}; +inf denominators drop out.
double tau_exponent(int d, double p);

// ---------------------------------------------------------------------------
// Rate curve xi(t)

enum class XiMode { StrongPI, General };

struct XiPoint {
  double value = 0.0;
  double r_star = 1.0;
  /// r* hit the 1e-300 floor of the search domain.
  bool saturated = false;
};

inline constexpr double kXiRadiusFloor = 1e-300;

/// c_1 inf{r > 0 : c_2' t >= alpha_1(r)^2 log(1/r)}
XiPoint xi_strong(double t, const AlphaFn& alpha1, double c1, double c2_prime);

/// c_1 inf{r > 0 : c_2 t >= alpha_1(r)^2 alpha_2(r / alpha_1(r)^2) log(1/r)}
XiPoint xi_general(double t, const AlphaFn& alpha1, const AlphaFn& alpha2, double c1, double c2);

class XiCurve {
 public:
  static XiCurve strong(AlphaFn alpha1, double c1, double c2_prime);
  static XiCurve general(AlphaFn alpha1, AlphaFn alpha2, double c1, double c2);

  XiPoint evaluate(double t) const;
  double operator()(double t) const { return evaluate(t).value; }

  XiMode mode() const noexcept { return mode_; }
  double c1() const noexcept { return c1_; }
  double c2() const noexcept { return c2_; }
  const AlphaFn& alpha1() const noexcept { return alpha1_; }

 private:
  XiCurve(XiMode mode, AlphaFn alpha1, std::optional<AlphaFn> alpha2, double c1, double c2)
      : mode_(mode), alpha1_(std::move(alpha1)), alpha2_(std::move(alpha2)), c1_(c1), c2_(c2) {}

  XiMode mode_;
  AlphaFn alpha1_;
  std::optional<AlphaFn> alpha2_;
  double c1_;
  double c2_;
};

/// Principal branch of the Lambert W function (inverse of w e^w), x >= 0.
double lambert_w(double x);

/// c_1 W(3 c_2' pi^4 t / 512)^{-1/6}, the W^{-1/6} Lambert form for the Cauchy alpha.
double cauchy_xi_lambert_printed(double t, double c1, double c2_prime);

/// Leading-order solution of c_2' t = 1024 log(1/r) / (pi^4 r^6):
/// r^{-6} = e^{W(x)} = x / W(x) with x = 3 c_2' pi^4 t / 512.
double cauchy_xi_lambert_solved(double t, double c1, double c2_prime);

/// pointwise xi(t) (||f||_2^2 + ||f||_osc^2)
std::vector<double> bound_curve(std::span<const double> times, const XiCurve& xi, double f_l2_sq,
                                double f_osc_sq);

// ---------------------------------------------------------------------------
// Rate table and CLT criterion

struct RateTableRow {
  std::string process;
  std::string scenario_a;  // power-law target
  std::string scenario_b;  // sub-exponential target
};

std::vector<RateTableRow> rate_table();

/// Polynomial exponents beta in t^{-beta} (scenario a) and stretched exponents
/// gamma in exp(-k t^gamma) (scenario b).
double pdmp_power_exponent(double tau);
double reversible_power_exponent(double tau);
double pdmp_stretched_exponent(double delta);
double reversible_stretched_exponent(double delta);

enum class CltVerdict { Holds, Fails, Inconclusive };

std::string to_string(CltVerdict verdict);

struct CltOptions {
  /// Constants used when xi has to be computed numerically.
  double c1 = 1.0;
  double c2 = 1.0;
  double t_max = 1e12;
  int points_per_decade = 40;
  /// Relative disagreement between tail extrapolations that makes the numeric
  /// branch inconclusive.
  double extrapolation_tolerance = 0.05;
  bool force_numeric = false;
};

struct CltResult {
  CltVerdict verdict = CltVerdict::Inconclusive;
  /// Power: 1/2 - tau. Numeric: (tail decay exponent of the integrand) - 1.
  double margin = 0.0;
  bool numeric = false;
  std::string detail;
};

/// Checks int t^{-3/2} ||v_t|| dt < inf with ||v_t|| <= int_0^t xi(s)^{1/2} ds.
/// Power and SubExpLog families are decided analytically; other families by
/// quadrature of the t >= 1 part with a power-law tail extrapolation.
CltResult clt_check(const AlphaFn& alpha1, const CltOptions& options = {});

}  // namespace pdmpwp
