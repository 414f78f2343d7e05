#include <doctest.h>

#include <array>
#include <cmath>

#include "pdmpwp/baselines.hpp"
#include "pdmpwp/error.hpp"

using namespace pdmpwp;

namespace {

Potential flat() {
  CustomParams p{1, "flat", [](std::span<const double>) { return 0.0; },
                 [](std::span<const double>, std::span<double> g) { g[0] = 0.0; }};
  return make_custom(p, 0.0, 0.0);
}

using Mat2 = std::array<double, 4>;  // row-major 2x2

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}
Mat2 transpose(const Mat2& a) { return {a[0], a[2], a[1], a[3]}; }

struct Moments {
  double mean_x = 0.0;
  double var_x = 0.0;
};

// Exact law of the underdamped EM chain on U = x^2/2, started at (x0, v0).
Moments em_gaussian_moments(double h, int steps, double x0, double v0) {
  const Mat2 a = {1.0, h, -h, 1.0 - h};
  double mx = x0, mv = v0;
  Mat2 p = {0, 0, 0, 0};
  for (int n = 0; n < steps; ++n) {
    const double nx = mx + h * mv;
    mv = -h * mx + (1.0 - h) * mv;
    mx = nx;
    p = mul(mul(a, p), transpose(a));
    p[3] += 2.0 * h;
  }
  return {mx, p[0]};
}

// Continuous-time law of dx = v dt, dv = -x dt - v dt + sqrt(2) dW by RK4 on the moment ODEs.
Moments exact_gaussian_moments(double t_end, double x0, double v0) {
  using State = std::array<double, 5>;  // mx, mv, pxx, pxv, pvv
  auto rhs = [](const State& s) {
    return State{s[1], -s[0] - s[1], 2.0 * s[3], s[4] - s[2] - s[3], -2.0 * s[3] - 2.0 * s[4] + 2.0};
  };
  State s = {x0, v0, 0, 0, 0};
  const int n = 200000;
  const double dt = t_end / n;
  for (int i = 0; i < n; ++i) {
    auto axpy = [](const State& a, const State& b, double c) {
      State r;
      for (int j = 0; j < 5; ++j) r[j] = a[j] + c * b[j];
      return r;
    };
    const State k1 = rhs(s);
    const State k2 = rhs(axpy(s, k1, dt / 2));
    const State k3 = rhs(axpy(s, k2, dt / 2));
    const State k4 = rhs(axpy(s, k3, dt));
    for (int j = 0; j < 5; ++j) s[j] += dt / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  }
  return {s[0], s[2]};
}

double expected_cos(const Moments& m) { return std::cos(m.mean_x) * std::exp(-0.5 * m.var_x); }

}  // namespace

TEST_CASE("noiseless underdamped EM on a flat potential is damped free flight") {
  const Potential u = flat();
  EmConfig cfg;
  cfg.step = 0.1;
  cfg.horizon = 5.0;
  cfg.x0 = {2.0};
  cfg.v0 = Vector{1.5};
  cfg.noise_scale = 0.0;
  const EmPath path = em_underdamped(u, cfg);
  REQUIRE(path.size() == 51);
  for (std::size_t n = 0; n < path.size(); ++n) {
    const double decay = std::pow(0.9, static_cast<double>(n));
    CHECK(path.v[n] == doctest::Approx(1.5 * decay).epsilon(1e-12));
    CHECK(path.x[n] == doctest::Approx(2.0 + 1.5 * (1.0 - decay)).epsilon(1e-12));
  }
}

TEST_CASE("velocity of underdamped EM on a flat potential is a discrete OU chain") {
  const Potential u = flat();
  const double h = 0.1;
  EmConfig cfg;
  cfg.step = h;
  cfg.x0 = {0.0};
  cfg.v0 = Vector{0.0};
  cfg.seed = 17;
  EmStepper st(u, cfg);
  for (int i = 0; i < 1000; ++i) st.step();
  const int batches = 50, per_batch = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int b = 0; b < batches; ++b) {
    double acc = 0.0;
    for (int i = 0; i < per_batch; ++i) {
      st.step();
      acc += st.v()[0] * st.v()[0];
    }
    acc /= per_batch;
    sum += acc;
    sum_sq += acc * acc;
  }
  const double mean = sum / batches;
  const double se = std::sqrt((sum_sq / batches - mean * mean) / (batches - 1));
  const double target = 2.0 * h / (1.0 - (1.0 - h) * (1.0 - h));
  CHECK(std::abs(mean - target) < 4.0 * se);
  CHECK(std::abs(mean - target) < 0.03 * target);
}

TEST_CASE("overdamped EM: Gaussian stationary variance and Brownian spread") {
  const double h = 0.1;
  const int paths = 20000;
  double s2 = 0.0;
  const Potential g = make_gaussian(1);
  for (int p = 0; p < paths; ++p) {
    EmConfig cfg;
    cfg.step = h;
    cfg.horizon = 20.0;
    cfg.x0 = {0.0};
    cfg.seed = 5;
    cfg.path_index = p;
    const EmPath path = em_overdamped(g, cfg);
    s2 += path.x.back() * path.x.back();
  }
  CHECK(s2 / paths == doctest::Approx(2.0 / (2.0 - h)).epsilon(0.04));

  double b2 = 0.0, b1 = 0.0;
  const Potential u = flat();
  for (int p = 0; p < paths; ++p) {
    EmConfig cfg;
    cfg.step = 0.01;
    cfg.mode = EmMode::Overdamped;
    cfg.x0 = {3.0};
    cfg.seed = 6;
    cfg.path_index = p;
    EmStepper st(u, cfg);
    st.advance_to(1.0);
    CHECK(st.steps() == 100);
    const double dx = st.x()[0] - 3.0;
    b1 += dx;
    b2 += dx * dx;
  }
  CHECK(std::abs(b1 / paths) < 4.0 * std::sqrt(2.0 / paths));
  CHECK(b2 / paths == doctest::Approx(2.0).epsilon(0.04));
}

TEST_CASE("EM paths are deterministic per (seed, path) and distinct across paths") {
  const Potential u = make_power_law(1, 1.0);
  EmConfig cfg;
  cfg.horizon = 2.0;
  cfg.x0 = {-5.0};
  cfg.seed = 9;
  cfg.path_index = 3;
  const EmPath a = em_underdamped(u, cfg);
  const EmPath b = em_underdamped(u, cfg);
  CHECK(a.x == b.x);
  CHECK(a.v == b.v);
  cfg.path_index = 4;
  CHECK(em_underdamped(u, cfg).x != a.x);
}

TEST_CASE("underdamped EM has weak order one (cos observable, Gaussian target)") {
  const double t_end = 2.0, x0 = 1.0, v0 = 0.0;
  const double exact = expected_cos(exact_gaussian_moments(t_end, x0, v0));
  const double e1 = std::abs(expected_cos(em_gaussian_moments(0.1, 20, x0, v0)) - exact);
  const double e2 = std::abs(expected_cos(em_gaussian_moments(0.05, 40, x0, v0)) - exact);
  const double e3 = std::abs(expected_cos(em_gaussian_moments(0.025, 80, x0, v0)) - exact);
  CHECK(e2 / e1 >= 0.4);
  CHECK(e2 / e1 <= 0.6);
  CHECK(e3 / e2 >= 0.4);
  CHECK(e3 / e2 <= 0.6);

  // The simulated chain matches its own exact law.
  const Potential g = make_gaussian(1);
  const int paths = 20000;
  double s = 0.0, s2 = 0.0;
  for (int p = 0; p < paths; ++p) {
    EmConfig cfg;
    cfg.step = 0.1;
    cfg.horizon = t_end;
    cfg.x0 = {x0};
    cfg.v0 = Vector{v0};
    cfg.seed = 21;
    cfg.path_index = p;
    EmStepper st(g, cfg);
    st.advance_to(t_end);
    const double c = std::cos(st.x()[0]);
    s += c;
    s2 += c * c;
  }
  const double mean = s / paths;
  const double se = std::sqrt((s2 / paths - mean * mean) / paths);
  CHECK(std::abs(mean - expected_cos(em_gaussian_moments(0.1, 20, x0, v0))) < 4.0 * se);
}

TEST_CASE("underdamped EM stationary position variance on N(0,1) is within 3%") {
  const double h = 0.01;
  const Moments m = em_gaussian_moments(h, 20000, 0.0, 0.0);
  CHECK(m.var_x == doctest::Approx(1.0).epsilon(0.03));
  CHECK(std::abs(m.var_x - 1.0) > 0.0);
}

TEST_CASE("EM configuration errors") {
  const Potential u = make_power_law(1, 1.0);
  EmConfig cfg;
  cfg.x0 = {};
  CHECK_THROWS_AS(EmStepper(u, cfg), InvalidArgument);
  cfg.x0 = {0.0, 0.0};
  CHECK_THROWS_AS(EmStepper(u, cfg), InvalidArgument);
  cfg.x0 = {0.0};
  cfg.step = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.step = 0.1;
  cfg.v0 = Vector{1.0, 2.0};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}
