#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "pdmpwp/potential.hpp"
#include "pdmpwp/rng.hpp"

namespace pdmpwp {

enum class EmMode { Overdamped, Underdamped };

struct EmConfig {
  EmMode mode = EmMode::Underdamped;
  double step = 0.01;
  double horizon = 1.0;
  Vector x0;
  /// Underdamped only; empty means v0 ~ N(0, I).
  std::optional<Vector> v0;
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  /// Scale of the Gaussian increments; 1 gives the sqrt(2h) of the diffusion.
  double noise_scale = 1.0;

  void validate() const;
};

/// Euler-Maruyama state machine for one path. Noise comes from RNG stream
/// (path, 0); a drawn v0 from stream (path, 1).
class EmStepper {
 public:
  EmStepper(const Potential& potential, const EmConfig& config);

  void step();
  /// Runs whole steps until the step count reaches round(t / h).
  void advance_to(double t);

  std::uint64_t steps() const noexcept { return steps_; }
  double time() const noexcept { return static_cast<double>(steps_) * h_; }
  const Vector& x() const noexcept { return x_; }
  const Vector& v() const noexcept { return v_; }

 private:
  const Potential* potential_;
  EmMode mode_;
  double h_;
  double sigma_;
  Vector x_;
  Vector v_;
  Vector grad_;
  Philox4x32 rng_;
  std::normal_distribution<double> normal_;
  std::uint64_t steps_ = 0;
};

/// Row-major path: x[n * dim + j] is coordinate j after n steps (n = 0..N).
struct EmPath {
  int dim = 1;
  double step = 0.01;
  Vector x;
  Vector v;  // empty for overdamped runs
  std::size_t size() const noexcept { return x.size() / static_cast<std::size_t>(dim); }
};

/// X_{n+1} = X_n + h V_n, V_{n+1} = V_n - h grad U(X_n) - h V_n + sqrt(2h) zeta_n.
EmPath em_underdamped(const Potential& potential, EmConfig config);

/// X_{n+1} = X_n - h grad U(X_n) + sqrt(2h) zeta_n.
EmPath em_overdamped(const Potential& potential, EmConfig config);

}  // namespace pdmpwp
