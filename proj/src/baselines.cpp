#include "pdmpwp/baselines.hpp"

#include <cmath>

#include "pdmpwp/error.hpp"

namespace pdmpwp {

void EmConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidArgument("EM: step must be positive");
  }
  if (!(horizon >= step)) {
    throw InvalidArgument("EM: horizon must be at least one step");
  }
  if (x0.empty()) {
    throw InvalidArgument("EM: x0 must be set");
  }
  if (v0 && v0->size() != x0.size()) {
    throw InvalidArgument("EM: v0 and x0 differ in dimension");
  }
  if (!(noise_scale >= 0.0)) {
    throw InvalidArgument("EM: noise scale must be >= 0");
  }
}

EmStepper::EmStepper(const Potential& potential, const EmConfig& config)
    : potential_(&potential),
      mode_(config.mode),
      h_(config.step),
      sigma_(config.noise_scale * std::sqrt(2.0 * config.step)),
      x_(config.x0),
      grad_(config.x0.size()),
      rng_(config.seed, stream_id(config.path_index, 0)) {
  config.validate();
  if (static_cast<int>(x_.size()) != potential.dim()) {
    throw InvalidArgument("EM: x0 dimension does not match the potential");
  }
  if (mode_ == EmMode::Underdamped) {
    if (config.v0) {
      v_ = *config.v0;
    } else {
      Philox4x32 vrng(config.seed, stream_id(config.path_index, 1));
      std::normal_distribution<double> nd;
      v_.resize(x_.size());
      for (double& vi : v_) vi = nd(vrng);
    }
  }
}

void EmStepper::step() {
  potential_->gradient(x_, grad_);
  const std::size_t d = x_.size();
  if (mode_ == EmMode::Overdamped) {
    for (std::size_t j = 0; j < d; ++j) {
      x_[j] += -h_ * grad_[j] + sigma_ * normal_(rng_);
    }
  } else {
    for (std::size_t j = 0; j < d; ++j) {
      const double vj = v_[j];
      x_[j] += h_ * vj;
      v_[j] = vj - h_ * grad_[j] - h_ * vj + sigma_ * normal_(rng_);
    }
  }
  ++steps_;
}

void EmStepper::advance_to(double t) {
  const auto target = static_cast<std::uint64_t>(std::llround(t / h_));
  while (steps_ < target) step();
}

namespace {

EmPath run(const Potential& potential, const EmConfig& config) {
  EmStepper stepper(potential, config);
  const auto n = static_cast<std::size_t>(std::llround(config.horizon / config.step));
  EmPath path;
  path.dim = potential.dim();
  path.step = config.step;
  path.x.reserve((n + 1) * path.dim);
  auto record = [&] {
    path.x.insert(path.x.end(), stepper.x().begin(), stepper.x().end());
    if (config.mode == EmMode::Underdamped) {
      path.v.insert(path.v.end(), stepper.v().begin(), stepper.v().end());
    }
  };
  record();
  for (std::size_t i = 0; i < n; ++i) {
    stepper.step();
    record();
  }
  return path;
}

}  // namespace

EmPath em_underdamped(const Potential& potential, EmConfig config) {
  config.mode = EmMode::Underdamped;
  return run(potential, config);
}

EmPath em_overdamped(const Potential& potential, EmConfig config) {
  config.mode = EmMode::Overdamped;
  return run(potential, config);
}

}  // namespace pdmpwp
