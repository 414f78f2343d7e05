#include "pdmpwp/pdmpwp.h"

#include <chrono>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>

#include "pdmpwp/error.hpp"
#include "pdmpwp/experiment.hpp"
#include "pdmpwp/poisson_oracle.hpp"
#include "pdmpwp/rate_engine.hpp"

using namespace pdmpwp;

struct pdmp_config {
  ExperimentConfig cfg;
  std::string hash;
};

struct pdmp_experiment {
  ExperimentConfig cfg;
  std::string hash;
  double mu_f = 0.0;
  std::vector<ErrorCurve> curves;
  std::vector<SamplerChoice> samplers;
  std::vector<double> wall_times;
};

struct pdmp_path {
  SkeletonPath path;
};

struct pdmp_bounds {
  ExperimentConfig cfg;
  BoundsReport report;
};

struct pdmp_poisson {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  std::vector<std::string> names;
  std::vector<PoissonSolution> solutions;
  std::vector<PoissonEstimateReport> reports;
};

namespace {

thread_local std::string g_last_error;

pdmp_status fail(pdmp_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <class Fn>
pdmp_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PDMP_OK;
  } catch (const ConfigError& e) {
    return fail(PDMP_ERR_CONFIG, e.what());
  } catch (const EnvelopeViolation& e) {
    return fail(PDMP_ERR_ENVELOPE, e.what());
  } catch (const NumericalError& e) {
    return fail(PDMP_ERR_NUMERICAL, e.what());
  } catch (const IoError& e) {
    return fail(PDMP_ERR_IO, e.what());
  } catch (const InvalidArgument& e) {
    return fail(PDMP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(PDMP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PDMP_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

std::string join(const char* dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

extern "C" {

const char* pdmp_last_error(void) { return g_last_error.c_str(); }

const char* pdmp_version(void) { return "1.0.0"; }

pdmp_status pdmp_config_load(const char* path, pdmp_config** out) {
  return guarded([&] {
    require(path && out, "null argument");
    auto cfg = std::make_unique<pdmp_config>();
    cfg->cfg = load_config(path);
    cfg->hash = cfg->cfg.config_hash();
    *out = cfg.release();
  });
}

pdmp_status pdmp_config_parse(const char* text, pdmp_config** out) {
  return guarded([&] {
    require(text && out, "null argument");
    auto cfg = std::make_unique<pdmp_config>();
    cfg->cfg = parse_config(text);
    cfg->hash = cfg->cfg.config_hash();
    *out = cfg.release();
  });
}

void pdmp_config_free(pdmp_config* cfg) { delete cfg; }

pdmp_status pdmp_config_set_seed(pdmp_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg, "null config");
    cfg->cfg.seed = seed;
  });
}

pdmp_status pdmp_config_set_workers(pdmp_config* cfg, unsigned workers) {
  return guarded([&] {
    require(cfg && workers >= 1, "workers must be >= 1");
    cfg->cfg.workers = workers;
  });
}

pdmp_status pdmp_config_set_out_dir(pdmp_config* cfg, const char* dir) {
  return guarded([&] {
    require(cfg && dir, "null argument");
    cfg->cfg.out_dir = dir;
  });
}

const char* pdmp_config_out_dir(const pdmp_config* cfg) { return cfg ? cfg->cfg.out_dir.c_str() : ""; }

const char* pdmp_config_hash(const pdmp_config* cfg) { return cfg ? cfg->hash.c_str() : ""; }

const char* pdmp_config_poisson_csv(const pdmp_config* cfg) { return cfg ? cfg->cfg.poisson.csv.c_str() : ""; }

// ---------------------------------------------------------------------------

pdmp_status pdmp_experiment_run(const pdmp_config* cfg, pdmp_experiment** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    auto exp = std::make_unique<pdmp_experiment>();
    exp->cfg = cfg->cfg;
    exp->hash = cfg->hash;
    exp->mu_f = cfg->cfg.mu_f ? *cfg->cfg.mu_f
                              : mu_f_quadrature(build_potential(cfg->cfg.potential), cfg->cfg.observable);
    for (SamplerChoice s : cfg->cfg.samplers) {
      const auto start = std::chrono::steady_clock::now();
      exp->curves.push_back(run_error_experiment(cfg->cfg, s, exp->mu_f));
      exp->samplers.push_back(s);
      exp->wall_times.push_back(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    *out = exp.release();
  });
}

void pdmp_experiment_free(pdmp_experiment* exp) { delete exp; }

double pdmp_experiment_mu_f(const pdmp_experiment* exp) { return exp ? exp->mu_f : 0.0; }

size_t pdmp_experiment_num_curves(const pdmp_experiment* exp) { return exp ? exp->curves.size() : 0; }

const char* pdmp_experiment_curve_label(const pdmp_experiment* exp, size_t curve) {
  if (!exp || curve >= exp->curves.size()) return "";
  return exp->curves[curve].label.c_str();
}

size_t pdmp_experiment_num_rows(const pdmp_experiment* exp, size_t curve) {
  if (!exp || curve >= exp->curves.size()) return 0;
  return exp->curves[curve].rows.size();
}

pdmp_status pdmp_experiment_row(const pdmp_experiment* exp, size_t curve, size_t row, pdmp_error_row* out) {
  return guarded([&] {
    require(exp && out, "null argument");
    require(curve < exp->curves.size() && row < exp->curves[curve].rows.size(), "index out of range");
    const ErrorRow& r = exp->curves[curve].rows[row];
    *out = {r.t, r.estimate, r.sq_error, r.stderr_, r.n_paths};
  });
}

pdmp_status pdmp_experiment_write(const pdmp_experiment* exp, const char* dir) {
  return guarded([&] {
    require(exp && dir, "null argument");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + std::string(dir) + "': " + ec.message());
    const ErrorCurve* pdmp = nullptr;
    const ErrorCurve* langevin = nullptr;
    for (std::size_t i = 0; i < exp->curves.size(); ++i) {
      const ErrorCurve& c = exp->curves[i];
      write_csv(c, join(dir, c.label + ".csv"));
      RunMetadata meta{exp->cfg.seed, exp->hash, exp->wall_times[i], exp->cfg.workers, exp->cfg.n_paths,
                       exp->mu_f};
      write_json(c, meta, join(dir, c.label + ".json"));
      if (is_pdmp(exp->samplers[i]) && !pdmp) pdmp = &c;
      if (!is_pdmp(exp->samplers[i]) && !langevin) langevin = &c;
    }
    if (pdmp && langevin) {
      const BoundsReport bounds = compute_bounds(exp->cfg);
      const Figure1Bundle bundle = figure1_repro(*pdmp, *langevin, bounds.xi);
      write_csv(bundle.pdmp, join(dir, "figure1_pdmp.csv"));
      write_csv(bundle.langevin, join(dir, "figure1_langevin.csv"));
      write_csv(bundle.bound, join(dir, "figure1_bound.csv"));
    }
  });
}

// ---------------------------------------------------------------------------

pdmp_status pdmp_simulate(const pdmp_config* cfg, uint64_t path_index, pdmp_path** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    const ExperimentConfig& c = cfg->cfg;
    SamplerChoice choice = SamplerChoice::ZigZag;
    bool found = false;
    for (auto s : c.samplers) {
      if (is_pdmp(s)) {
        choice = s;
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError("simulate needs a zigzag or bps sampler");
    const SamplerSpec spec = build_sampler_spec(c, choice);
    InitialVelocity iv = InitialVelocity::draw();
    if (c.v0 == VelocityPolicy::Fixed) iv = InitialVelocity::fixed_vector(c.v0_fixed);
    auto p = std::make_unique<pdmp_path>();
    p->path = simulate(spec, c.x0, iv, c.t_max, c.seed, path_index);
    *out = p.release();
  });
}

void pdmp_path_free(pdmp_path* path) { delete path; }

size_t pdmp_path_num_events(const pdmp_path* path) { return path ? path->path.events.size() : 0; }

pdmp_status pdmp_path_position(const pdmp_path* path, double t, double* x, size_t dim) {
  return guarded([&] {
    require(path && x, "null argument");
    require(dim == path->path.initial.x.size(), "dimension mismatch");
    const PdmpState s = evaluate_at(path->path, t);
    std::copy(s.x.begin(), s.x.end(), x);
  });
}

pdmp_status pdmp_path_write_csv(const pdmp_path* path, const char* file) {
  return guarded([&] {
    require(path && file, "null argument");
    write_skeleton_csv(path->path, file);
  });
}

// ---------------------------------------------------------------------------

pdmp_status pdmp_bounds_compute(const pdmp_config* cfg, pdmp_bounds** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    *out = new pdmp_bounds{cfg->cfg, compute_bounds(cfg->cfg)};
  });
}

void pdmp_bounds_free(pdmp_bounds* b) { delete b; }

pdmp_status pdmp_bounds_constants(const pdmp_bounds* b, pdmp_constants* out) {
  return guarded([&] {
    require(b && out, "null argument");
    pdmp_constants c{};
    if (const auto& rc = b->report.computed) {
      c.has_computed = 1;
      c.kappa1 = rc->kappa1;
      c.kappa2 = rc->kappa2;
      c.r0 = rc->r0;
      c.c_p = rc->c_p;
      c.eps = rc->eps;
      c.c1 = rc->c1;
      c.c1_eps_half = rc->c1_eps_half;
      c.c2 = rc->c2;
      c.c2_prime = rc->c2_prime;
    }
    if (const auto& p = b->report.example) {
      c.has_example = 1;
      c.example_r0 = p->r0;
      c.example_c1 = p->c1;
      c.example_c2_prime = p->c2_prime;
    }
    c.xi_c1 = b->report.c1;
    c.xi_c2_prime = b->report.c2_prime;
    *out = c;
  });
}

pdmp_status pdmp_bounds_xi(const pdmp_bounds* b, double t, double* xi, double* r_star) {
  return guarded([&] {
    require(b && xi, "null argument");
    const XiPoint p = b->report.xi.evaluate(t);
    *xi = p.value;
    if (r_star) *r_star = p.r_star;
  });
}

pdmp_status pdmp_bounds_write_csv(const pdmp_bounds* b, const char* file) {
  return guarded([&] {
    require(b && file, "null argument");
    write_xi_csv(b->report, b->cfg, b->cfg.times(), file);
  });
}

// ---------------------------------------------------------------------------

pdmp_status pdmp_clt_check(const pdmp_config* cfg, pdmp_clt_result* out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    const CltResult r = clt_check(build_alpha(cfg->cfg), cfg->cfg.clt);
    out->verdict = r.verdict == CltVerdict::Holds   ? PDMP_CLT_HOLDS
                   : r.verdict == CltVerdict::Fails ? PDMP_CLT_FAILS
                                                    : PDMP_CLT_INCONCLUSIVE;
    out->margin = r.margin;
    out->numeric = r.numeric ? 1 : 0;
    std::snprintf(out->detail, sizeof out->detail, "%s", r.detail.c_str());
  });
}

// ---------------------------------------------------------------------------

size_t pdmp_rate_table_size(void) { return rate_table().size(); }

pdmp_status pdmp_rate_table_row(size_t i, const char** process, const char** power_law,
                                const char** sub_exponential) {
  static const std::vector<RateTableRow> table = rate_table();
  return guarded([&] {
    require(process && power_law && sub_exponential, "null argument");
    require(i < table.size(), "index out of range");
    *process = table[i].process.c_str();
    *power_law = table[i].scenario_a.c_str();
    *sub_exponential = table[i].scenario_b.c_str();
  });
}

pdmp_status pdmp_tau_exponent(int dim, double p, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = tau_exponent(dim, p);
  });
}

pdmp_status pdmp_lambert_w(double x, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = lambert_w(x);
  });
}

pdmp_status pdmp_alpha_cauchy_explicit(double r, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = alpha_cauchy_explicit(r);
  });
}

// ---------------------------------------------------------------------------

pdmp_status pdmp_poisson_validate(const pdmp_config* cfg, pdmp_poisson** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    const Potential u = build_potential(cfg->cfg.potential);
    if (u.dim() != 1) throw ConfigError("poisson-validate needs potential.dim = 1");
    auto p = std::make_unique<pdmp_poisson>();
    p->kappa1 = kappa1(u.hessian_lower_bound());
    p->kappa2 = kappa2(u, p->kappa1);
    for (const auto& tf : poisson_test_battery()) {
      PoissonSolution sol = solve_poisson_1d(u, tf.g, cfg->cfg.poisson.half_width, cfg->cfg.poisson.n);
      p->reports.push_back(verify_estimates(sol, p->kappa1, p->kappa2));
      p->solutions.push_back(std::move(sol));
      p->names.push_back(tf.name);
    }
    *out = p.release();
  });
}

void pdmp_poisson_free(pdmp_poisson* p) { delete p; }

size_t pdmp_poisson_num_cases(const pdmp_poisson* p) { return p ? p->reports.size() : 0; }

pdmp_status pdmp_poisson_case_at(const pdmp_poisson* p, size_t i, pdmp_poisson_case* out) {
  return guarded([&] {
    require(p && out, "null argument");
    require(i < p->reports.size(), "index out of range");
    out->name = p->names[i].c_str();
    for (int k = 0; k < 4; ++k) {
      out->ratios[k] = p->reports[i].ratios[k];
      out->holds[k] = p->reports[i].holds[k] ? 1 : 0;
    }
    out->residual = p->solutions[i].residual;
  });
}

double pdmp_poisson_kappa1(const pdmp_poisson* p) { return p ? p->kappa1 : 0.0; }

double pdmp_poisson_kappa2(const pdmp_poisson* p) { return p ? p->kappa2 : 0.0; }

pdmp_status pdmp_poisson_write_csv(const pdmp_poisson* p, size_t i, const char* file) {
  return guarded([&] {
    require(p && file, "null argument");
    require(i < p->solutions.size(), "index out of range");
    const PoissonSolution& s = p->solutions[i];
    std::FILE* f = std::fopen(file, "w");
    if (!f) throw IoError(std::string("cannot open '") + file + "'");
    std::fprintf(f, "x,u,du,d2u\n");
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", s.grid[k], s.u[k], s.du[k], s.d2u[k]);
    }
    if (std::fclose(f) != 0) throw IoError(std::string("write to '") + file + "' failed");
  });
}

}  // extern "C"
