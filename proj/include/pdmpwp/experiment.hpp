#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdmpwp/pdmp_sim.hpp"
#include "pdmpwp/potential.hpp"
#include "pdmpwp/rate_engine.hpp"

namespace pdmpwp {

// ---------------------------------------------------------------------------
// Configuration

enum class SamplerChoice { ZigZag, BPS, UnderdampedEM, OverdampedEM };

std::string to_string(SamplerChoice s);
bool is_pdmp(SamplerChoice s) noexcept;

struct PotentialSpec {
  std::string family = "power_law";  // power_law | subexp | gaussian
  int dim = 1;
  double p = 1.0;
  double sigma = 1.0;
  double delta = 0.5;
  double patch_radius = 1.0;
};

Potential build_potential(const PotentialSpec& spec);

enum class VelocityPolicy { UniformPm1, DrawFromMeasure, Fixed };

struct ObservableSpec {
  enum class Kind { Indicator, Tabulated } kind = Kind::Indicator;
  int coord = 0;
  double threshold = 5.0;
  /// Tabulated: piecewise-linear f(x_coord) through (x, f), constant beyond the ends.
  Vector table_x;
  Vector table_f;

  double operator()(std::span<const double> x) const;
  /// (sup f - inf f)
  double oscillation() const;
  /// Points where f is not smooth.
  Vector breakpoints() const;
};

struct BoundSpec {
  std::string alpha = "cauchy_explicit";  // cauchy_explicit | power | subexp_log | constant | rockner_wang
  std::string constants = "example";  // example | computed | manual
  double c = 1.0;
  double tau = 1.0;
  double delta = 0.5;
  double value = 1.0;
  double c_u = 0.3;  // example only
  double c1 = 1.0;   // manual only
  double c2 = 1.0;   // manual only
};

struct PoissonSpec {
  double half_width = 100.0;
  int n = 8192;
  std::string csv;  // optional dump of (x, u, u', u'') for the first test function
};

struct ExperimentConfig {
  std::vector<SamplerChoice> samplers{SamplerChoice::ZigZag};
  std::uint64_t n_paths = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double t_max = 100.0;
  double t_step = 1.0;
  std::optional<double> mu_f;

  PotentialSpec potential;
  /// Empty means Rademacher for Zig-Zag, Gaussian for BPS.
  std::optional<VelocityKind> velocity;
  double lambda_ref = 1.0;

  Vector x0{-5.0};
  VelocityPolicy v0 = VelocityPolicy::UniformPm1;
  Vector v0_fixed;

  double em_step = 0.01;
  VelocityPolicy em_v0 = VelocityPolicy::DrawFromMeasure;
  Vector em_v0_fixed;

  ObservableSpec observable;
  BoundSpec bound;
  CltOptions clt;
  PoissonSpec poisson;

  std::string out_dir = ".";
  /// Canonical key=value text of the parsed config; feeds the config hash.
  std::string canonical;

  void validate() const;
  Vector times() const;
  std::string config_hash() const;
};

/// INI text with sections [experiment], [potential], [velocity], [initial],
/// [em], [observable], [bound], [clt], [poisson], [output]. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

SamplerSpec build_sampler_spec(const ExperimentConfig& cfg, SamplerChoice sampler);

// ---------------------------------------------------------------------------
// Error curves

struct ErrorRow {
  double t = 0.0;
  double estimate = 0.0;
  double sq_error = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_paths = 0;

  bool operator==(const ErrorRow&) const = default;
};

struct ErrorCurve {
  std::string label;
  std::vector<ErrorRow> rows;

  bool operator==(const ErrorCurve&) const = default;
};

/// int f e^{-U} / Z over the real line (d = 1), relative tolerance 1e-9.
double mu_f_quadrature(const Potential& potential, const std::function<double(double)>& f,
                       const Vector& breakpoints = {});
double mu_f_quadrature(const Potential& potential, const ObservableSpec& f);

/// Paths per deterministic work block.
inline constexpr std::uint64_t kPathsPerBlock = 1024;

/// Monte Carlo estimate of E f(X_t) on the config's time grid for one sampler.
/// Bit-identical for every worker count.
ErrorCurve run_error_experiment(const ExperimentConfig& cfg, SamplerChoice sampler, double mu_f);

struct Figure1Bundle {
  ErrorCurve pdmp;
  ErrorCurve langevin;
  /// Rows (t, xi(t), c xi(t), 0, 0) with c = pdmp.rows[0].sq_error / xi(0).
  ErrorCurve bound;
  double c = 0.0;
};

Figure1Bundle figure1_repro(const ErrorCurve& pdmp, const ErrorCurve& langevin, const XiCurve& xi);

/// Rate constants and the xi curve described by the [bound] section.
struct BoundsReport {
  std::optional<RateConstants> computed;
  std::optional<CauchyExampleConstants> example;
  double c1 = 0.0;
  double c2_prime = 0.0;
  XiCurve xi;
};

BoundsReport compute_bounds(const ExperimentConfig& cfg);
AlphaFn build_alpha(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// I/O

inline constexpr const char* kCsvHeader = "t,estimate,sq_error,stderr,n_paths";

std::string format_csv(const ErrorCurve& curve);
ErrorCurve parse_csv(const std::string& text, std::string label = {});
void write_csv(const ErrorCurve& curve, const std::string& path);
ErrorCurve read_csv(const std::string& path);

struct RunMetadata {
  std::uint64_t seed = 0;
  std::string config_hash;
  double wall_time_s = 0.0;
  unsigned workers = 1;
  std::uint64_t n_paths = 0;
  double mu_f = 0.0;
};

void write_json(const ErrorCurve& curve, const RunMetadata& meta, const std::string& path);

/// CSV (t, xi, lambert_asymptote); the asymptote column is nan unless the
/// bound uses the explicit Cauchy alpha.
void write_xi_csv(const BoundsReport& report, const ExperimentConfig& cfg, const Vector& times,
                  const std::string& path);

void write_skeleton_csv(const SkeletonPath& path, const std::string& file);

}  // namespace pdmpwp
