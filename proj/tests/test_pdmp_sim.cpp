#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pdmpwp/error.hpp"
#include "pdmpwp/pdmp_sim.hpp"

using namespace pdmpwp;

namespace {

SamplerSpec cauchy_spec(SamplerKind kind, double refresh) {
  const Potential u = make_power_law(1, 1.0);
  return SamplerSpec{decompose(u, kind),
                     kind == SamplerKind::ZigZag ? VelocityMeasure::rademacher(1) : VelocityMeasure::gaussian(1),
                     refresh, std::nullopt};
}

double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
  }
  return d;
}

}  // namespace

TEST_CASE("velocity moments") {
  const auto r = VelocityMeasure::rademacher(3).moments();
  CHECK(r.m2 == 1.0);
  CHECK(r.m4 == doctest::Approx(1.0 / 3.0));
  CHECK(r.m22 == 1.0);
  const auto g = VelocityMeasure::gaussian(2).moments();
  CHECK(g.m2 == 1.0);
  CHECK(g.m4 == doctest::Approx(1.0));  // E v^4 / 3 = 1
  CHECK(g.m22 == 1.0);
  // Uniform on the sphere of radius sqrt(d): E v1^2 = 1, E v1^4 = 3d/(d+2), E v1^2 v2^2 = d/(d+2).
  const auto s = VelocityMeasure::sphere(4).moments();
  CHECK(s.m2 == doctest::Approx(1.0));
  CHECK(s.m4 == doctest::Approx(4.0 / 6.0));
  CHECK(s.m22 == doctest::Approx(4.0 / 6.0));
  CHECK(VelocityMeasure::rademacher(1).moments().m22_from_d1_convention);
}

TEST_CASE("velocity samples have the advertised second moments") {
  for (auto nu : {VelocityMeasure::gaussian(3), VelocityMeasure::sphere(3), VelocityMeasure::rademacher(3)}) {
    Philox4x32 rng(5, 9);
    Vector v(3);
    double m2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      nu.sample(rng, v);
      m2 += v[0] * v[0];
      if (nu.kind() == VelocityKind::UniformSphere) {
        CHECK(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] == doctest::Approx(3.0));
      }
      if (nu.kind() == VelocityKind::RademacherProduct) CHECK(std::abs(v[1]) == 1.0);
    }
    CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("bounce operators") {
  const Potential u = make_power_law(2, 1.0);
  PdmpState s{0.0, {1.0, 2.0}, {1.0, -1.0}};
  const auto zz = bounce(decompose(u, SamplerKind::ZigZag), 0, s);
  CHECK(zz.v == Vector{-1.0, -1.0});
  CHECK(zz.x == s.x);

  s.v = {0.3, 0.8};
  const auto bps = bounce(decompose(u, SamplerKind::BouncyParticle), 0, s);
  const Vector g = u.gradient(s.x);
  const double vg = s.v[0] * g[0] + s.v[1] * g[1];
  const double vg_after = bps.v[0] * g[0] + bps.v[1] * g[1];
  CHECK(vg_after == doctest::Approx(-vg));
  CHECK(bps.v[0] * bps.v[0] + bps.v[1] * bps.v[1] == doctest::Approx(0.73));
  // Involution.
  const auto back = bounce(decompose(u, SamplerKind::BouncyParticle), 0, bps);
  CHECK(back.v[0] == doctest::Approx(s.v[0]));
  CHECK(back.v[1] == doctest::Approx(s.v[1]));
}

TEST_CASE("event rate is the positive part of v.F") {
  const Potential u = make_power_law(1, 1.0);
  const auto zz = decompose(u, SamplerKind::ZigZag);
  CHECK(event_rate(zz, 0, {0.0, {1.0}, {1.0}}) == doctest::Approx(1.0));
  CHECK(event_rate(zz, 0, {0.0, {1.0}, {-1.0}}) == 0.0);
}

TEST_CASE("first event time of the Cauchy Zig-Zag follows Lambda(t) = log(1 + t^2)") {
  const SamplerSpec spec = cauchy_spec(SamplerKind::ZigZag, 0.0);
  const int n = 20000;
  std::vector<double> times(n);
  for (int i = 0; i < n; ++i) {
    PdmpSimulator sim(spec, {0.0}, InitialVelocity::fixed_vector({1.0}), 11, i);
    const auto ev = sim.step(1e12);
    REQUIRE(ev);
    CHECK(ev->kind == EventKind::Bounce);
    times[i] = ev->t;
  }
  const double d = ks_statistic(times, [](double t) { return t * t / (1.0 + t * t); });
  CHECK(d < 1.63 / std::sqrt(n));  // 1% KS critical value
}

TEST_CASE("zig-zag and BPS leave the Cauchy law invariant") {
  for (SamplerKind kind : {SamplerKind::ZigZag, SamplerKind::BouncyParticle}) {
    const SamplerSpec spec = cauchy_spec(kind, 1.0);
    const int n = 20000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) {
      Philox4x32 init(3, stream_id(i, 250));
      const double x0 = std::tan(std::numbers::pi * (init.uniform() - 0.5));
      PdmpSimulator sim(spec, {x0}, InitialVelocity::draw(), 3, i);
      sim.advance_to(5.0);
      xs[i] = sim.state().x[0];
    }
    const double d = ks_statistic(xs, [](double x) { return 0.5 + std::atan(x) / std::numbers::pi; });
    CHECK(d < 1.63 / std::sqrt(n));
  }
}

TEST_CASE("skeleton paths are deterministic and interpolate linearly") {
  const SamplerSpec spec = cauchy_spec(SamplerKind::ZigZag, 1.0);
  const auto a = simulate(spec, {-5.0}, InitialVelocity::draw(), 99, 4, {});
  const auto b = simulate(spec, {-5.0}, InitialVelocity::draw(), 99, 4, {});
  const auto c = simulate(spec, {-5.0}, InitialVelocity::draw(), 99, 5, {});
  REQUIRE(a.events.size() > 5);
  CHECK(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].t == b.events[i].t);
    CHECK(a.events[i].x == b.events[i].x);
  }
  CHECK((c.events.size() != a.events.size() || c.events[0].t != a.events[0].t));

  for (std::size_t i = 0; i + 1 < a.events.size(); ++i) {
    const auto& e0 = a.events[i];
    const auto& e1 = a.events[i + 1];
    const double tm = 0.5 * (e0.t + e1.t);
    const PdmpState s = evaluate_at(a, tm);
    CHECK(s.x[0] == doctest::Approx(e0.x[0] + (tm - e0.t) * e0.v[0]));
    CHECK(e1.x[0] == doctest::Approx(e0.x[0] + (e1.t - e0.t) * e0.v[0]));
  }
  CHECK_THROWS_AS(evaluate_at(a, a.horizon + 1.0), InvalidArgument);
}

TEST_CASE("max_events truncates the horizon at the last event") {
  const SamplerSpec spec = cauchy_spec(SamplerKind::ZigZag, 1.0);
  SimulateOptions opt;
  opt.max_events = 10;
  const auto p = simulate(spec, {0.0}, InitialVelocity::draw(), 1e6, 1, 0, opt);
  CHECK(p.events.size() == 10);
  CHECK(p.horizon == p.events.back().t);
}

TEST_CASE("an envelope below the rate raises EnvelopeViolation") {
  SamplerSpec spec = cauchy_spec(SamplerKind::ZigZag, 0.0);
  spec.envelope = [](const FieldDecomposition&, const PdmpState&, int) { return 1e-3; };
  PdmpSimulator sim(spec, {0.0}, InitialVelocity::fixed_vector({1.0}), 1, 0);
  CHECK(sim.envelope_strategy() == EnvelopeStrategy::PerSegmentBound);
  CHECK_THROWS_AS(sim.advance_to(1e6), EnvelopeViolation);
}

TEST_CASE("unbounded gradients need a user envelope") {
  const SamplerSpec spec{decompose(make_gaussian(1), SamplerKind::ZigZag), VelocityMeasure::rademacher(1), 1.0,
                         std::nullopt};
  CHECK_THROWS_AS(PdmpSimulator(spec, {0.0}, InitialVelocity::draw(), 1, 0), InvalidArgument);
}

TEST_CASE("a looser user envelope keeps the law and costs more proposals") {
  SamplerSpec loose = cauchy_spec(SamplerKind::ZigZag, 0.0);
  loose.envelope = [](const FieldDecomposition&, const PdmpState&, int) { return 3.0; };
  const SamplerSpec tight = cauchy_spec(SamplerKind::ZigZag, 0.0);
  const int n = 20000;
  std::vector<double> times(n);
  std::uint64_t loose_props = 0, tight_props = 0;
  for (int i = 0; i < n; ++i) {
    PdmpSimulator a(loose, {0.0}, InitialVelocity::fixed_vector({1.0}), 21, i);
    times[i] = a.step(1e12)->t;
    loose_props += a.proposals();
    PdmpSimulator b(tight, {0.0}, InitialVelocity::fixed_vector({1.0}), 21, i);
    b.step(1e12);
    tight_props += b.proposals();
  }
  CHECK(ks_statistic(times, [](double t) { return t * t / (1.0 + t * t); }) < 1.63 / std::sqrt(n));
  CHECK(loose_props > 2 * tight_props);
}

TEST_CASE("ergodic average of an indicator uses exact crossing times") {
  SkeletonPath p;
  p.initial = {0.0, {-1.0}, {1.0}};
  p.events.push_back({3.0, {2.0}, {-1.0}, EventKind::Bounce, 0});
  p.horizon = 4.0;
  // x >= 0 on [1, 4] -> 3/4 of the time.
  CHECK(ergodic_average(p, IndicatorObservable{0, 0.0}, 4.0) == doctest::Approx(0.75));
  const Observable sq = FunctionObservable{[](std::span<const double> x, std::span<const double>) { return x[0] * x[0]; }};
  // int_0^3 (t-1)^2 dt + int_3^4 (5-t)^2 dt = 3 + 7/3
  CHECK(ergodic_average(p, sq, 4.0) == doctest::Approx((3.0 + 7.0 / 3.0) / 4.0));
}
