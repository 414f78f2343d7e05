#include "pdmpwp/pdmp_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "pdmpwp/error.hpp"

namespace pdmpwp {

namespace {

double norm(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

std::string to_string(VelocityKind kind) {
  switch (kind) {
    case VelocityKind::RademacherProduct:
      return "rademacher";
    case VelocityKind::StdGaussian:
      return "gaussian";
    case VelocityKind::UniformSphere:
      return "sphere";
  }
  return "unknown";
}

VelocityMeasure::VelocityMeasure(VelocityKind kind, int dim, double radius)
    : kind_(kind), dim_(dim), radius_(radius) {
  if (dim < 1) {
    throw InvalidArgument("velocity measure: dimension must be >= 1");
  }
  switch (kind) {
    case VelocityKind::RademacherProduct:
      moments_ = {1.0, 1.0 / 3.0, 1.0, dim == 1};
      break;
    case VelocityKind::StdGaussian:
      moments_ = {1.0, 1.0, 1.0, dim == 1};
      break;
    case VelocityKind::UniformSphere: {
      if (!(radius > 0.0)) {
        throw InvalidArgument("velocity measure: sphere radius must be positive");
      }
      const double d = dim;
      const double r2 = radius * radius;
      // E w1^2 = 1/d, E w1^4 = 3/(d(d+2)), E w1^2 w2^2 = 1/(d(d+2)) on the unit sphere.
      moments_.m2 = r2 / d;
      moments_.m4 = r2 * r2 / (d * (d + 2.0));
      if (dim == 1) {
        moments_.m22 = moments_.m2 * moments_.m2;
        moments_.m22_from_d1_convention = true;
      } else {
        moments_.m22 = r2 * r2 / (d * (d + 2.0));
      }
      break;
    }
  }
}

VelocityMeasure VelocityMeasure::rademacher(int dim) {
  return VelocityMeasure(VelocityKind::RademacherProduct, dim, 0.0);
}

VelocityMeasure VelocityMeasure::gaussian(int dim) {
  return VelocityMeasure(VelocityKind::StdGaussian, dim, 0.0);
}

VelocityMeasure VelocityMeasure::sphere(int dim, double radius) {
  return VelocityMeasure(VelocityKind::UniformSphere, dim, radius);
}

void VelocityMeasure::sample(Philox4x32& rng, std::span<double> out) const {
  switch (kind_) {
    case VelocityKind::RademacherProduct:
      for (auto& vi : out) {
        vi = (rng() >> 63) ? 1.0 : -1.0;
      }
      return;
    case VelocityKind::StdGaussian: {
      std::normal_distribution<double> normal;
      for (auto& vi : out) {
        vi = normal(rng);
      }
      return;
    }
    case VelocityKind::UniformSphere: {
      std::normal_distribution<double> normal;
      double n = 0.0;
      do {
        for (auto& vi : out) {
          vi = normal(rng);
        }
        n = norm(out);
      } while (n == 0.0);
      for (auto& vi : out) {
        vi *= radius_ / n;
      }
      return;
    }
  }
}

// ---------------------------------------------------------------------------

double event_rate(const FieldDecomposition& decomp, int k, const PdmpState& state) {
  return std::max(0.0, decomp.directional(k, state.x, state.v));
}

PdmpState bounce(const FieldDecomposition& decomp, int k, const PdmpState& state) {
  PdmpState out = state;
  const Vector f = decomp.field(k, state.x);
  const double fn = norm(f);
  if (fn == 0.0) {
    return out;
  }
  if (decomp.kind() == SamplerKind::ZigZag) {
    // n_k = +-e_k, so the reflection is an exact sign flip of coordinate k.
    out.v[k] = -out.v[k];
    return out;
  }
  double vn = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    vn += state.v[i] * f[i] / fn;
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    out.v[i] = state.v[i] - 2.0 * vn * (f[i] / fn);
  }
  return out;
}

PdmpState evaluate_at(const SkeletonPath& path, double t) {
  if (!(t >= 0.0 && t <= path.horizon)) {
    throw InvalidArgument("evaluate_at: time outside [0, horizon]");
  }
  const auto it = std::upper_bound(path.events.begin(), path.events.end(), t,
                                   [](double s, const EventRecord& e) { return s < e.t; });
  const double t0 = it == path.events.begin() ? path.initial.t : std::prev(it)->t;
  const Vector& x0 = it == path.events.begin() ? path.initial.x : std::prev(it)->x;
  const Vector& v0 = it == path.events.begin() ? path.initial.v : std::prev(it)->v;
  PdmpState out{t, x0, v0};
  const double dt = t - t0;
  for (std::size_t i = 0; i < out.x.size(); ++i) {
    out.x[i] += dt * v0[i];
  }
  return out;
}

// ---------------------------------------------------------------------------

PdmpSimulator::PdmpSimulator(const SamplerSpec& spec, Vector x0, const InitialVelocity& v0,
                             std::uint64_t seed, std::uint64_t path_index)
    : spec_(&spec),
      channels_(spec.decomposition.num_fields()),
      refresh_rng_(seed, stream_id(path_index, static_cast<std::uint32_t>(channels_))),
      velocity_rng_(seed, stream_id(path_index, static_cast<std::uint32_t>(channels_ + 1))),
      strategy_(spec.envelope ? EnvelopeStrategy::PerSegmentBound : EnvelopeStrategy::GlobalBound) {
  const int dim = spec.decomposition.potential().dim();
  if (static_cast<int>(x0.size()) != dim) {
    throw InvalidArgument("simulate: x0 has the wrong dimension");
  }
  if (spec.velocity.dim() != dim) {
    throw InvalidArgument("simulate: velocity measure dimension does not match the potential");
  }
  if (!(spec.refresh_rate >= 0.0) || !std::isfinite(spec.refresh_rate)) {
    throw InvalidArgument("simulate: refresh rate must be finite and >= 0");
  }
  if (channels_ + 2 > 256) {
    throw InvalidArgument("simulate: at most 254 bounce channels are supported");
  }
  if (!spec.envelope) {
    const auto& sup = spec.decomposition.potential().grad_sup_bound();
    if (!sup) {
      throw InvalidArgument(
          "simulate: potential has no gradient bound; supply a thinning envelope");
    }
    grad_sup_ = *sup;
  }
  channel_rng_.reserve(channels_);
  for (int k = 0; k < channels_; ++k) {
    channel_rng_.emplace_back(seed, stream_id(path_index, static_cast<std::uint32_t>(k)));
  }
  state_.t = 0.0;
  state_.x = std::move(x0);
  state_.v.assign(dim, 0.0);
  if (v0.policy == InitialVelocity::Policy::Fixed) {
    if (static_cast<int>(v0.fixed.size()) != dim) {
      throw InvalidArgument("simulate: v0 has the wrong dimension");
    }
    state_.v = v0.fixed;
  } else {
    spec.velocity.sample(velocity_rng_, state_.v);
  }
  refresh_intensity_ = std::sqrt(spec.velocity.moments().m2) * spec.refresh_rate;
  next_refresh_ = refresh_rng_.exponential(refresh_intensity_);
  next_proposal_.assign(channels_, 0.0);
  bound_.assign(channels_, 0.0);
  redraw_bounce_clocks();
}

double PdmpSimulator::envelope(int k) const {
  if (spec_->envelope) {
    return (*spec_->envelope)(spec_->decomposition, state_, k);
  }
  if (spec_->decomposition.kind() == SamplerKind::ZigZag) {
    // |v_k d_k U| <= |v_k| sup |grad U|
    return std::abs(state_.v[k]) * grad_sup_;
  }
  return norm(state_.v) * grad_sup_;
}

void PdmpSimulator::redraw_bounce_clocks() {
  for (int k = 0; k < channels_; ++k) {
    bound_[k] = envelope(k);
    next_proposal_[k] = state_.t + channel_rng_[k].exponential(bound_[k]);
  }
}

void PdmpSimulator::move_to(double t) {
  const double dt = t - state_.t;
  for (std::size_t i = 0; i < state_.x.size(); ++i) {
    state_.x[i] += dt * state_.v[i];
  }
  state_.t = t;
}

std::optional<EventRecord> PdmpSimulator::step(double t_stop) {
  for (;;) {
    int next = -1;
    double t_next = next_refresh_;
    for (int k = 0; k < channels_; ++k) {
      if (next_proposal_[k] < t_next) {
        t_next = next_proposal_[k];
        next = k;
      }
    }
    if (!(t_next <= t_stop)) {
      move_to(t_stop);
      return std::nullopt;
    }
    move_to(t_next);
    if (next < 0) {
      spec_->velocity.sample(velocity_rng_, state_.v);
      next_refresh_ = state_.t + refresh_rng_.exponential(refresh_intensity_);
      redraw_bounce_clocks();
      return EventRecord{state_.t, state_.x, state_.v, EventKind::Refresh, -1};
    }
    ++proposals_;
    const double rate = event_rate(spec_->decomposition, next, state_);
    const double bound = bound_[next];
    if (rate > bound * (1.0 + 1e-9) + 1e-300) {
      throw EnvelopeViolation(next, rate, bound);
    }
    if (channel_rng_[next].uniform() * bound < rate) {
      state_ = bounce(spec_->decomposition, next, state_);
      redraw_bounce_clocks();
      return EventRecord{state_.t, state_.x, state_.v, EventKind::Bounce, next};
    }
    next_proposal_[next] = state_.t + channel_rng_[next].exponential(bound);
  }
}

void PdmpSimulator::advance_to(double t) {
  while (step(t)) {
  }
}

SkeletonPath simulate(const SamplerSpec& spec, Vector x0, const InitialVelocity& v0,
                      double horizon, std::uint64_t seed, std::uint64_t path_index,
                      const SimulateOptions& options) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("simulate: horizon must be finite and >= 0");
  }
  PdmpSimulator sim(spec, std::move(x0), v0, seed, path_index);
  SkeletonPath path;
  path.initial = sim.state();
  path.horizon = horizon;
  while (path.events.size() < options.max_events) {
    auto event = sim.step(horizon);
    if (!event) {
      return path;
    }
    path.events.push_back(std::move(*event));
  }
  path.horizon = path.events.empty() ? 0.0 : path.events.back().t;
  return path;
}

// ---------------------------------------------------------------------------

double evaluate(const Observable& f, std::span<const double> x, std::span<const double> v) {
  if (const auto* ind = std::get_if<IndicatorObservable>(&f)) {
    return x[ind->coord] >= ind->threshold ? 1.0 : 0.0;
  }
  return std::get<FunctionObservable>(f).f(x, v);
}

double ergodic_average(const SkeletonPath& path, const Observable& f, double horizon) {
  if (!(horizon > 0.0) || horizon > path.horizon) {
    throw InvalidArgument("ergodic_average: horizon must lie in (0, path horizon]");
  }
  const auto* ind = std::get_if<IndicatorObservable>(&f);
  double total = 0.0;
  auto segment = [&](double t0, const Vector& x0, const Vector& v0, double t1) {
    const double len = t1 - t0;
    if (len <= 0.0) {
      return;
    }
    if (ind) {
      // Time spent with x0_c + s v0_c >= a for s in [0, len].
      const double xc = x0[ind->coord];
      const double vc = v0[ind->coord];
      if (vc == 0.0) {
        total += xc >= ind->threshold ? len : 0.0;
        return;
      }
      const double cross = (ind->threshold - xc) / vc;
      if (vc > 0.0) {
        total += len - std::clamp(cross, 0.0, len);
      } else {
        total += std::clamp(cross, 0.0, len);
      }
      return;
    }
    Vector x(x0.size());
    auto integrand = [&](double s) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = x0[i] + s * v0[i];
      }
      return evaluate(f, x, v0);
    };
    total += boost::math::quadrature::gauss<double, 10>::integrate(integrand, 0.0, len);
  };

  double t0 = path.initial.t;
  const Vector* x0 = &path.initial.x;
  const Vector* v0 = &path.initial.v;
  for (const auto& e : path.events) {
    if (e.t >= horizon) {
      break;
    }
    segment(t0, *x0, *v0, e.t);
    t0 = e.t;
    x0 = &e.x;
    v0 = &e.v;
  }
  segment(t0, *x0, *v0, horizon);
  return total / horizon;
}

}  // namespace pdmpwp
