#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pdmpwp/pdmpwp.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitOther = 1;

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out;
};

class Failure {
 public:
  explicit Failure(pdmp_status s) : status(s) {}
  pdmp_status status;
};

void check(pdmp_status s) {
  if (s != PDMP_OK) throw Failure(s);
}

int exit_code(pdmp_status s) {
  switch (s) {
    case PDMP_OK:
      return 0;
    case PDMP_ERR_CONFIG:
    case PDMP_ERR_INVALID_ARGUMENT:
      return kExitConfig;
    case PDMP_ERR_NUMERICAL:
    case PDMP_ERR_ENVELOPE:
      return kExitNumerical;
    default:
      return kExitOther;
  }
}

struct Config {
  pdmp_config* ptr = nullptr;
  ~Config() { pdmp_config_free(ptr); }
};

void load(const CommonArgs& args, Config& cfg) {
  check(args.config.empty() ? pdmp_config_parse("", &cfg.ptr) : pdmp_config_load(args.config.c_str(), &cfg.ptr));
  if (args.seed) check(pdmp_config_set_seed(cfg.ptr, *args.seed));
  if (args.workers) check(pdmp_config_set_workers(cfg.ptr, *args.workers));
  if (!args.out.empty()) check(pdmp_config_set_out_dir(cfg.ptr, args.out.c_str()));
}

std::string out_file(const Config& cfg, const char* name) {
  std::string dir = pdmp_config_out_dir(cfg.ptr);
  if (dir.empty()) dir = ".";
  return dir + "/" + name;
}

void cmd_simulate(const CommonArgs& args, std::uint64_t path_index) {
  Config cfg;
  load(args, cfg);
  pdmp_path* path = nullptr;
  check(pdmp_simulate(cfg.ptr, path_index, &path));
  std::unique_ptr<pdmp_path, void (*)(pdmp_path*)> guard(path, pdmp_path_free);
  const std::string file = out_file(cfg, "skeleton.csv");
  std::filesystem::create_directories(std::filesystem::path(file).parent_path());
  check(pdmp_path_write_csv(path, file.c_str()));
  std::printf("events: %zu\nskeleton: %s\n", pdmp_path_num_events(path), file.c_str());
}

void cmd_experiment(const CommonArgs& args) {
  Config cfg;
  load(args, cfg);
  pdmp_experiment* exp = nullptr;
  check(pdmp_experiment_run(cfg.ptr, &exp));
  std::unique_ptr<pdmp_experiment, void (*)(pdmp_experiment*)> guard(exp, pdmp_experiment_free);
  check(pdmp_experiment_write(exp, pdmp_config_out_dir(cfg.ptr)));
  std::printf("mu(f) = %.12g\n", pdmp_experiment_mu_f(exp));
  for (std::size_t c = 0; c < pdmp_experiment_num_curves(exp); ++c) {
    const std::size_t n = pdmp_experiment_num_rows(exp, c);
    pdmp_error_row first{}, last{};
    check(pdmp_experiment_row(exp, c, 0, &first));
    check(pdmp_experiment_row(exp, c, n - 1, &last));
    std::printf("%-16s rows=%zu  sq_error(t=%g)=%.4e  sq_error(t=%g)=%.4e\n",
                pdmp_experiment_curve_label(exp, c), n, first.t, first.sq_error, last.t, last.sq_error);
  }
  std::printf("output: %s (config hash %s)\n", pdmp_config_out_dir(cfg.ptr), pdmp_config_hash(cfg.ptr));
}

void cmd_bounds(const CommonArgs& args) {
  Config cfg;
  load(args, cfg);
  pdmp_bounds* b = nullptr;
  check(pdmp_bounds_compute(cfg.ptr, &b));
  std::unique_ptr<pdmp_bounds, void (*)(pdmp_bounds*)> guard(b, pdmp_bounds_free);
  pdmp_constants c{};
  check(pdmp_bounds_constants(b, &c));
  if (c.has_computed) {
    std::printf("computed constants\n");
    std::printf("  kappa1  %.12g\n  kappa2  %.12g\n  R0      %.12g\n  C_P     %.12g\n", c.kappa1, c.kappa2, c.r0,
                c.c_p);
    std::printf("  eps     %.12g\n  c1      %.12g  (eps = 1/2: %.12g)\n  c2      %.12g\n  c2'     %.12g\n", c.eps,
                c.c1, c.c1_eps_half, c.c2, c.c2_prime);
  }
  if (c.has_example) {
    std::printf("example override constants\n  R0      %.12g\n  c1      %.12g\n  c2'     %.12g\n", c.example_r0,
                c.example_c1, c.example_c2_prime);
  }
  std::printf("xi uses c1 = %.12g, c2' = %.12g\n", c.xi_c1, c.xi_c2_prime);
  const std::string file = out_file(cfg, "xi.csv");
  std::filesystem::create_directories(std::filesystem::path(file).parent_path());
  check(pdmp_bounds_write_csv(b, file.c_str()));
  std::printf("xi: %s\n", file.c_str());
}

void cmd_clt(const CommonArgs& args) {
  Config cfg;
  load(args, cfg);
  pdmp_clt_result r{};
  check(pdmp_clt_check(cfg.ptr, &r));
  const char* verdict = r.verdict == PDMP_CLT_HOLDS ? "holds" : r.verdict == PDMP_CLT_FAILS ? "fails" : "inconclusive";
  std::printf("clt: %s (margin %.6g, %s)\n%s\n", verdict, r.margin, r.numeric ? "numeric" : "analytic", r.detail);
}

void cmd_rate_table() {
  std::printf("%-42s %-18s %s\n", "process", "power-law target", "sub-exponential target");
  for (std::size_t i = 0; i < pdmp_rate_table_size(); ++i) {
    const char *p = nullptr, *a = nullptr, *b = nullptr;
    check(pdmp_rate_table_row(i, &p, &a, &b));
    std::printf("%-42s %-18s %s\n", p, a, b);
  }
}

void cmd_poisson(const CommonArgs& args, const std::string& csv) {
  Config cfg;
  load(args, cfg);
  pdmp_poisson* p = nullptr;
  check(pdmp_poisson_validate(cfg.ptr, &p));
  std::unique_ptr<pdmp_poisson, void (*)(pdmp_poisson*)> guard(p, pdmp_poisson_free);
  std::printf("kappa1 = %.12g, kappa2 = %.12g\n", pdmp_poisson_kappa1(p), pdmp_poisson_kappa2(p));
  std::printf("%-28s %12s %12s %14s %14s\n", "g", "|u|/|g|", "|u'|/|g|", "|u''|/(k1|g|)", "|U'u'|/(k2|g|)");
  bool all = true;
  for (std::size_t i = 0; i < pdmp_poisson_num_cases(p); ++i) {
    pdmp_poisson_case c{};
    check(pdmp_poisson_case_at(p, i, &c));
    std::printf("%-28s %12.6f %12.6f %14.6f %14.6f\n", c.name, c.ratios[0], c.ratios[1], c.ratios[2], c.ratios[3]);
    for (int k = 0; k < 4; ++k) all = all && c.holds[k];
  }
  std::printf("all ratios <= 1: %s\n", all ? "yes" : "no");
  std::string file = csv;
  if (file.empty() && *pdmp_config_poisson_csv(cfg.ptr)) {
    file = std::filesystem::path(pdmp_config_poisson_csv(cfg.ptr)).is_absolute() ? pdmp_config_poisson_csv(cfg.ptr)
                                                                                   : out_file(cfg, pdmp_config_poisson_csv(cfg.ptr));
  }
  if (!file.empty()) {
    const auto parent = std::filesystem::path(file).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    check(pdmp_poisson_write_csv(p, 0, file.c_str()));
    std::printf("csv: %s\n", file.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PDMP samplers, Langevin baselines and weak Poincare rate bounds"};
  app.require_subcommand(1);
  CommonArgs args;
  auto add_common = [&](CLI::App* sub, bool with_workers) {
    sub->add_option("--config", args.config, "INI config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", args.seed, "master seed (overrides the config)");
    if (with_workers) sub->add_option("--workers", args.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", args.out, "output directory (overrides the config)");
  };

  std::uint64_t path_index = 0;
  auto* simulate = app.add_subcommand("simulate", "simulate one PDMP path and dump its skeleton");
  add_common(simulate, false);
  simulate->add_option("--path", path_index, "path index (selects the RNG streams)");

  auto* experiment = app.add_subcommand("experiment", "Monte Carlo error curves");
  add_common(experiment, true);

  auto* bounds = app.add_subcommand("bounds", "rate constants and xi(t)");
  add_common(bounds, false);

  auto* clt = app.add_subcommand("clt", "CLT criterion verdict for the configured alpha");
  add_common(clt, false);

  app.add_subcommand("rate-table", "convergence exponents by process and target class");

  std::string poisson_csv;
  auto* poisson = app.add_subcommand("poisson-validate", "finite-difference check of the Poisson derivative bounds");
  add_common(poisson, false);
  poisson->add_option("--csv", poisson_csv, "dump (x, u, u', u'') for the first test function");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) cmd_simulate(args, path_index);
    if (*experiment) cmd_experiment(args);
    if (*bounds) cmd_bounds(args);
    if (*clt) cmd_clt(args);
    if (app.got_subcommand("rate-table")) cmd_rate_table();
    if (*poisson) cmd_poisson(args, poisson_csv);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", pdmp_last_error());
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOther;
  }
  return 0;
}
