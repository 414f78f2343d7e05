#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pdmpwp/potential.hpp"
#include "pdmpwp/rng.hpp"

namespace pdmpwp {

// ---------------------------------------------------------------------------
// Velocity measures

enum class VelocityKind { RademacherProduct, StdGaussian, UniformSphere };

std::string to_string(VelocityKind kind);

/// m2 = E v1^2, m4 = E v1^4 / 3, m22 = E v1^2 v2^2.
struct VelocityMoments {
  double m2 = 1.0;
  double m4 = 1.0 / 3.0;
  double m22 = 1.0;
  /// True when d = 1 and m22 was set to m2^2 (the two-coordinate moment is undefined).
  bool m22_from_d1_convention = false;
};

class VelocityMeasure {
 public:
  static VelocityMeasure rademacher(int dim);
  static VelocityMeasure gaussian(int dim);
  /// Uniform on the sphere of the given radius; radius sqrt(d) gives m2 = 1.
  static VelocityMeasure sphere(int dim, double radius);
  static VelocityMeasure sphere(int dim) { return sphere(dim, std::sqrt(static_cast<double>(dim))); }

  VelocityKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  double radius() const noexcept { return radius_; }
  const VelocityMoments& moments() const noexcept { return moments_; }

  void sample(Philox4x32& rng, std::span<double> out) const;

 private:
  VelocityMeasure(VelocityKind kind, int dim, double radius);

  VelocityKind kind_;
  int dim_;
  double radius_;
  VelocityMoments moments_;
};

// ---------------------------------------------------------------------------
// States and skeleton paths

struct PdmpState {
  double t = 0.0;
  Vector x;
  Vector v;
};

enum class EventKind { Bounce, Refresh };

/// State right after an event: x at the event time and the post-event velocity.
struct EventRecord {
  double t = 0.0;
  Vector x;
  Vector v;
  EventKind kind = EventKind::Bounce;
  int channel = -1;  // bounce channel; -1 for refresh
};

struct SkeletonPath {
  PdmpState initial;
  std::vector<EventRecord> events;
  double horizon = 0.0;
};

/// (v^T F_k(x))_+
double event_rate(const FieldDecomposition& decomp, int k, const PdmpState& state);

/// v' = v - 2 (v^T n_k) n_k with n_k = F_k/|F_k| (identity where F_k vanishes).
PdmpState bounce(const FieldDecomposition& decomp, int k, const PdmpState& state);

/// Deterministic flow: state at time t, read off the skeleton.
PdmpState evaluate_at(const SkeletonPath& path, double t);

// ---------------------------------------------------------------------------
// Simulation

enum class EnvelopeStrategy { GlobalBound, PerSegmentBound };

/// User envelope for channel k, valid for all future times along the ray
/// x + s v from the given state. Must dominate the realized rate.
using EnvelopeFn = std::function<double(const FieldDecomposition&, const PdmpState&, int)>;

struct InitialVelocity {
  enum class Policy { Fixed, DrawFromMeasure } policy = Policy::DrawFromMeasure;
  Vector fixed;

  static InitialVelocity draw() { return {}; }
  static InitialVelocity fixed_vector(Vector v) { return {Policy::Fixed, std::move(v)}; }
};

struct SamplerSpec {
  FieldDecomposition decomposition;
  VelocityMeasure velocity;
  /// Refreshment clock runs at m2^{1/2} * refresh_rate; 0 disables refreshment.
  double refresh_rate = 1.0;
  std::optional<EnvelopeFn> envelope;
};

/// Event-by-event simulator. Independent exponential proposal clocks per bounce
/// channel against constant-along-segment envelopes, thinned with probability
/// rate/envelope, plus a homogeneous refreshment clock. Channel k draws from
/// RNG stream (path, k); refreshment times from (path, K), velocity draws from
/// (path, K+1).
class PdmpSimulator {
 public:
  PdmpSimulator(const SamplerSpec& spec, Vector x0, const InitialVelocity& v0, std::uint64_t seed,
                std::uint64_t path_index = 0);

  const PdmpState& state() const noexcept { return state_; }
  EnvelopeStrategy envelope_strategy() const noexcept { return strategy_; }

  /// Advances to the next event if it happens at or before t_stop and returns
  /// it; otherwise flows to t_stop and returns nothing.
  std::optional<EventRecord> step(double t_stop);

  /// Flows to time t (>= current time), processing every event on the way.
  void advance_to(double t);

  std::uint64_t proposals() const noexcept { return proposals_; }

 private:
  double envelope(int k) const;
  void redraw_bounce_clocks();
  void move_to(double t);

  const SamplerSpec* spec_;
  int channels_;
  PdmpState state_;
  std::vector<Philox4x32> channel_rng_;
  Philox4x32 refresh_rng_;
  Philox4x32 velocity_rng_;
  std::vector<double> next_proposal_;
  std::vector<double> bound_;
  double next_refresh_;
  double refresh_intensity_;
  double grad_sup_ = 0.0;
  EnvelopeStrategy strategy_;
  std::uint64_t proposals_ = 0;
};

struct SimulateOptions {
  std::size_t max_events = std::numeric_limits<std::size_t>::max();
};

/// Exact-law skeleton on [0, horizon]. If max_events is reached first the
/// horizon is cut at the last event.
SkeletonPath simulate(const SamplerSpec& spec, Vector x0, const InitialVelocity& v0,
                      double horizon, std::uint64_t seed, std::uint64_t path_index = 0,
                      const SimulateOptions& options = {});

// ---------------------------------------------------------------------------
// Observables and ergodic averages

/// f(x, v) = 1{x_coord >= threshold}.
struct IndicatorObservable {
  int coord = 0;
  double threshold = 0.0;
};

struct FunctionObservable {
  std::function<double(std::span<const double>, std::span<const double>)> f;
};

using Observable = std::variant<IndicatorObservable, FunctionObservable>;

double evaluate(const Observable& f, std::span<const double> x, std::span<const double> v);

/// (1/T) int_0^T f(x(s), v(s)) ds; indicator observables use exact crossing
/// times, other observables 10-point Gauss-Legendre per segment.
double ergodic_average(const SkeletonPath& path, const Observable& f, double horizon);

}  // namespace pdmpwp
