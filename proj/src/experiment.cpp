#include "pdmpwp/experiment.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "pdmpwp/baselines.hpp"
#include "pdmpwp/error.hpp"
#include "pdmpwp/parallel.hpp"
#include "pdmpwp/quadrature.hpp"

namespace pdmpwp {

namespace {

constexpr std::uint32_t kInitialVelocityChannel = 255;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_field(const std::string& s, int line) {
  if (s.empty()) throw IoError("csv line " + std::to_string(line) + ": empty field");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    throw IoError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

Vector pm1_vector(std::uint64_t seed, std::uint64_t path, int dim) {
  Philox4x32 rng(seed, stream_id(path, kInitialVelocityChannel));
  Vector v(dim);
  for (double& vi : v) vi = (rng() >> 63) ? 1.0 : -1.0;
  return v;
}

struct BlockSums {
  Vector s1;
  Vector s2;
};

}  // namespace

// ---------------------------------------------------------------------------
// Observables

double ObservableSpec::operator()(std::span<const double> x) const {
  const double xc = x[coord];
  if (kind == Kind::Indicator) return xc >= threshold ? 1.0 : 0.0;
  if (xc <= table_x.front()) return table_f.front();
  if (xc >= table_x.back()) return table_f.back();
  const std::size_t i = std::upper_bound(table_x.begin(), table_x.end(), xc) - table_x.begin();
  const double w = (xc - table_x[i - 1]) / (table_x[i] - table_x[i - 1]);
  return table_f[i - 1] + w * (table_f[i] - table_f[i - 1]);
}

double ObservableSpec::oscillation() const {
  if (kind == Kind::Indicator) return 1.0;
  const auto [lo, hi] = std::minmax_element(table_f.begin(), table_f.end());
  return *hi - *lo;
}

Vector ObservableSpec::breakpoints() const {
  if (kind == Kind::Indicator) return {threshold};
  return table_x;
}

double mu_f_quadrature(const Potential& potential, const std::function<double(double)>& f,
                       const Vector& breakpoints) {
  if (potential.dim() != 1) {
    throw InvalidArgument("mu_f_quadrature: closed quadrature needs d = 1; supply mu_f instead");
  }
  auto u = [&](double x) {
    const double xs[1] = {x};
    return potential.value(xs);
  };
  const double u0 = u(0.0);
  auto density = [&](double x) { return std::exp(u0 - u(x)); };
  constexpr double tol = 1e-11;
  const double z = quad::real_line(density, tol);

  Vector cuts = breakpoints;
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.empty()) cuts.push_back(0.0);
  constexpr double inf = std::numeric_limits<double>::infinity();
  // f is evaluated strictly inside each piece.
  auto piece = [&](double lo, double hi) {
    const double a = std::nextafter(lo, inf);
    const double b = std::nextafter(hi, -inf);
    return [&, a, b](double x) { return f(std::clamp(x, a, b)) * density(x); };
  };
  const auto left = piece(-inf, cuts.front());
  double total = quad::half_line([&](double s) { return left(-s); }, -cuts.front(), tol);
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    total += quad::interval(piece(cuts[i - 1], cuts[i]), cuts[i - 1], cuts[i], tol);
  }
  total += quad::half_line(piece(cuts.back(), inf), cuts.back(), tol);
  return total / z;
}

double mu_f_quadrature(const Potential& potential, const ObservableSpec& f) {
  if (f.coord != 0) throw InvalidArgument("mu_f_quadrature: d = 1 observables use coordinate 0");
  return mu_f_quadrature(
      potential, [&](double x) { return f(std::span<const double>(&x, 1)); }, f.breakpoints());
}

// ---------------------------------------------------------------------------
// Experiments

ErrorCurve run_error_experiment(const ExperimentConfig& cfg, SamplerChoice sampler, double mu_f) {
  cfg.validate();
  const Vector times = cfg.times();
  const std::size_t nt = times.size();
  const int d = cfg.potential.dim;
  const std::uint64_t n = cfg.n_paths;
  const std::size_t n_blocks = (n + kPathsPerBlock - 1) / kPathsPerBlock;

  std::optional<SamplerSpec> spec;
  std::optional<Potential> potential;
  if (is_pdmp(sampler)) {
    spec = build_sampler_spec(cfg, sampler);
  } else {
    potential = build_potential(cfg.potential);
  }

  auto run_block = [&](std::size_t b) {
    BlockSums sums{Vector(nt, 0.0), Vector(nt, 0.0)};
    const std::uint64_t first = b * kPathsPerBlock;
    const std::uint64_t last = std::min<std::uint64_t>(n, first + kPathsPerBlock);
    auto accumulate = [&](std::size_t k, std::span<const double> x) {
      const double f = cfg.observable(x);
      sums.s1[k] += f;
      sums.s2[k] += f * f;
    };
    for (std::uint64_t path = first; path < last; ++path) {
      if (spec) {
        InitialVelocity iv = InitialVelocity::draw();
        if (cfg.v0 == VelocityPolicy::UniformPm1) iv = InitialVelocity::fixed_vector(pm1_vector(cfg.seed, path, d));
        if (cfg.v0 == VelocityPolicy::Fixed) iv = InitialVelocity::fixed_vector(cfg.v0_fixed);
        PdmpSimulator sim(*spec, cfg.x0, iv, cfg.seed, path);
        for (std::size_t k = 0; k < nt; ++k) {
          sim.advance_to(times[k]);
          accumulate(k, sim.state().x);
        }
      } else {
        EmConfig em;
        em.mode = sampler == SamplerChoice::UnderdampedEM ? EmMode::Underdamped : EmMode::Overdamped;
        em.step = cfg.em_step;
        em.horizon = std::max(cfg.t_max, cfg.em_step);
        em.x0 = cfg.x0;
        if (cfg.em_v0 == VelocityPolicy::UniformPm1) em.v0 = pm1_vector(cfg.seed, path, d);
        if (cfg.em_v0 == VelocityPolicy::Fixed) em.v0 = cfg.em_v0_fixed;
        em.seed = cfg.seed;
        em.path_index = path;
        EmStepper stepper(*potential, em);
        for (std::size_t k = 0; k < nt; ++k) {
          stepper.advance_to(times[k]);
          accumulate(k, stepper.x());
        }
      }
    }
    return sums;
  };

  const auto blocks = run_blocks<BlockSums>(n_blocks, cfg.workers, run_block);

  ErrorCurve curve;
  curve.label = to_string(sampler);
  curve.rows.resize(nt);
  Vector column(n_blocks);
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t b = 0; b < n_blocks; ++b) column[b] = blocks[b].s1[k];
    const double s1 = pairwise_sum(column);
    for (std::size_t b = 0; b < n_blocks; ++b) column[b] = blocks[b].s2[k];
    const double s2 = pairwise_sum(column);
    ErrorRow& row = curve.rows[k];
    row.t = times[k];
    row.estimate = s1 / nd;
    row.sq_error = (row.estimate - mu_f) * (row.estimate - mu_f);
    const double var = n > 1 ? std::max(0.0, (s2 - s1 * s1 / nd) / (nd - 1.0)) : 0.0;
    row.stderr_ = std::sqrt(var / nd);
    row.n_paths = n;
  }
  return curve;
}

Figure1Bundle figure1_repro(const ErrorCurve& pdmp, const ErrorCurve& langevin, const XiCurve& xi) {
  if (pdmp.rows.empty()) throw InvalidArgument("figure1: empty PDMP curve");
  if (pdmp.rows.size() != langevin.rows.size()) throw InvalidArgument("figure1: mismatched time grids");
  for (std::size_t i = 0; i < pdmp.rows.size(); ++i) {
    if (pdmp.rows[i].t != langevin.rows[i].t) throw InvalidArgument("figure1: mismatched time grids");
  }
  Figure1Bundle bundle{pdmp, langevin, {}, 0.0};
  const double xi0 = xi(0.0);
  const double s0 = pdmp.rows.front().sq_error;
  bundle.c = s0 / xi0;
  bundle.bound.label = "bound";
  for (const auto& r : pdmp.rows) {
    const double x = xi(r.t);
    bundle.bound.rows.push_back({r.t, x, s0 * (x / xi0), 0.0, 0});
  }
  return bundle;
}

AlphaFn build_alpha(const ExperimentConfig& cfg) {
  const auto& b = cfg.bound;
  try {
    if (b.alpha == "cauchy_explicit") return AlphaFn::cauchy_explicit();
    if (b.alpha == "power") return AlphaFn::power(b.c, b.tau);
    if (b.alpha == "subexp_log") return AlphaFn::subexp_log(b.c, b.delta);
    if (b.alpha == "constant") return AlphaFn::constant(b.value);
    if (b.alpha == "rockner_wang") {
      return AlphaFn::rockner_wang_1d(build_potential(cfg.potential), TailConvention::Normalized);
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("bound: ") + e.what());
  }
  throw ConfigError("unknown bound.alpha '" + b.alpha + "'");
}

BoundsReport compute_bounds(const ExperimentConfig& cfg) {
  std::optional<RateConstants> computed;
  std::optional<CauchyExampleConstants> example;
  double c1 = 0.0, c2p = 0.0;
  auto compute = [&] {
    SamplerChoice pdmp = SamplerChoice::ZigZag;
    for (auto s : cfg.samplers) {
      if (is_pdmp(s)) {
        pdmp = s;
        break;
      }
    }
    const SamplerSpec spec = build_sampler_spec(cfg, pdmp);
    return compute_rate_constants(spec.decomposition, spec.velocity, cfg.lambda_ref);
  };
  const std::string& mode = cfg.bound.constants;
  if (mode == "computed") {
    computed = compute();
    c1 = computed->c1;
    c2p = computed->c2_prime;
  } else {
    try {
      computed = compute();
    } catch (const std::exception&) {
      computed.reset();
    }
    if (mode == "example") {
      example = cauchy_example_constants(cfg.bound.c_u, cfg.lambda_ref);
      c1 = example->c1;
      c2p = example->c2_prime;
    } else if (mode == "manual") {
      c1 = cfg.bound.c1;
      c2p = cfg.bound.c2;
    } else {
      throw ConfigError("bound.constants must be example, computed or manual");
    }
  }
  try {
    return BoundsReport{computed, example, c1, c2p, XiCurve::strong(build_alpha(cfg), c1, c2p)};
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("bound: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// I/O

std::string format_csv(const ErrorCurve& curve) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : curve.rows) {
    out += format_double(r.t) + ',' + format_double(r.estimate) + ',' + format_double(r.sq_error) + ',' +
           format_double(r.stderr_) + ',' + std::to_string(r.n_paths) + '\n';
  }
  return out;
}

ErrorCurve parse_csv(const std::string& text, std::string label) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw IoError("csv: header must be '" + std::string(kCsvHeader) + "', got '" + line + "'");
  ErrorCurve curve;
  curve.label = std::move(label);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 5) throw IoError("csv line " + std::to_string(lineno) + ": expected 5 fields");
    ErrorRow r;
    r.t = parse_field(fields[0], lineno);
    r.estimate = parse_field(fields[1], lineno);
    r.sq_error = parse_field(fields[2], lineno);
    r.stderr_ = parse_field(fields[3], lineno);
    const double n = parse_field(fields[4], lineno);
    if (!(n >= 0.0) || n != std::floor(n)) throw IoError("csv line " + std::to_string(lineno) + ": bad n_paths");
    r.n_paths = static_cast<std::uint64_t>(n);
    curve.rows.push_back(r);
  }
  return curve;
}

void write_csv(const ErrorCurve& curve, const std::string& path) { write_text(format_csv(curve), path); }

ErrorCurve read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path);
}

void write_json(const ErrorCurve& curve, const RunMetadata& meta, const std::string& path) {
  nlohmann::json j;
  j["label"] = curve.label;
  j["seed"] = meta.seed;
  j["config_hash"] = meta.config_hash;
  j["wall_time_s"] = meta.wall_time_s;
  j["workers"] = meta.workers;
  j["n_paths"] = meta.n_paths;
  j["mu_f"] = meta.mu_f;
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& r : curve.rows) {
    rows.push_back({{"t", r.t}, {"estimate", r.estimate}, {"sq_error", r.sq_error}, {"stderr", r.stderr_},
                    {"n_paths", r.n_paths}});
  }
  write_text(j.dump(2) + "\n", path);
}

void write_xi_csv(const BoundsReport& report, const ExperimentConfig& cfg, const Vector& times,
                  const std::string& path) {
  const bool cauchy = cfg.bound.alpha == "cauchy_explicit";
  std::string out = "t,xi,lambert_asymptote\n";
  for (double t : times) {
    const double asym = cauchy ? cauchy_xi_lambert_printed(t, report.c1, report.c2_prime)
                               : std::numeric_limits<double>::quiet_NaN();
    out += format_double(t) + ',' + format_double(report.xi(t)) + ',' + format_double(asym) + '\n';
  }
  write_text(out, path);
}

void write_skeleton_csv(const SkeletonPath& path, const std::string& file) {
  const std::size_t d = path.initial.x.size();
  std::string out = "t,kind,channel";
  for (std::size_t j = 0; j < d; ++j) out += ",x" + std::to_string(j);
  for (std::size_t j = 0; j < d; ++j) out += ",v" + std::to_string(j);
  out += '\n';
  auto row = [&](double t, const char* kind, int channel, const Vector& x, const Vector& v) {
    out += format_double(t) + ',' + kind + ',' + std::to_string(channel);
    for (double xi : x) out += ',' + format_double(xi);
    for (double vi : v) out += ',' + format_double(vi);
    out += '\n';
  };
  row(path.initial.t, "start", -1, path.initial.x, path.initial.v);
  for (const auto& e : path.events) {
    row(e.t, e.kind == EventKind::Bounce ? "bounce" : "refresh", e.channel, e.x, e.v);
  }
  const PdmpState end = evaluate_at(path, path.horizon);
  row(end.t, "end", -1, end.x, end.v);
  write_text(out, file);
}

}  // namespace pdmpwp
