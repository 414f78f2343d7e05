#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pdmpwp/error.hpp"
#include "pdmpwp/experiment.hpp"

namespace pdmpwp {

namespace {

using boost::property_tree::ptree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"experiment", {"samplers", "n_paths", "seed", "workers", "t_max", "t_step", "mu_f"}},
      {"potential", {"family", "dim", "p", "sigma", "delta", "patch_radius"}},
      {"velocity", {"kind", "lambda_ref"}},
      {"initial", {"x0", "v0", "v0_fixed"}},
      {"em", {"step", "v0", "v0_fixed"}},
      {"observable", {"kind", "coord", "threshold", "x", "f"}},
      {"bound", {"alpha", "constants", "c", "tau", "delta", "value", "c_u", "c1", "c2"}},
      {"clt", {"c1", "c2", "t_max", "points_per_decade", "tolerance", "force_numeric"}},
      {"poisson", {"half_width", "n", "csv"}},
      {"output", {"dir"}},
  };
  return s;
}

std::string trimmed(std::string s) {
  boost::algorithm::trim(s);
  return s;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string s = trimmed(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': not a number: '" + s + "'");
  }
  if (used != s.size()) {
    throw ConfigError("'" + key + "': trailing characters in '" + s + "'");
  }
  return value;
}

Vector to_vector(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
  Vector out;
  for (const auto& p : parts) out.push_back(to_double(key, p));
  return out;
}

std::uint64_t to_count(const std::string& key, const std::string& text, std::uint64_t min) {
  const double v = to_double(key, text);
  if (!(v >= static_cast<double>(min)) || v != std::floor(v) || v > 9.007199254740992e15) {
    throw ConfigError("'" + key + "': expected an integer >= " + std::to_string(min));
  }
  return static_cast<std::uint64_t>(v);
}

VelocityPolicy to_policy(const std::string& key, const std::string& text) {
  const std::string s = boost::algorithm::to_lower_copy(trimmed(text));
  if (s == "uniform_pm1") return VelocityPolicy::UniformPm1;
  if (s == "draw") return VelocityPolicy::DrawFromMeasure;
  if (s == "fixed") return VelocityPolicy::Fixed;
  throw ConfigError("'" + key + "': expected uniform_pm1, draw or fixed");
}

SamplerChoice to_sampler(const std::string& text) {
  const std::string s = boost::algorithm::to_lower_copy(trimmed(text));
  if (s == "zigzag") return SamplerChoice::ZigZag;
  if (s == "bps") return SamplerChoice::BPS;
  if (s == "underdamped_em") return SamplerChoice::UnderdampedEM;
  if (s == "overdamped_em") return SamplerChoice::OverdampedEM;
  throw ConfigError("unknown sampler '" + s + "'");
}

}  // namespace

std::string to_string(SamplerChoice s) {
  switch (s) {
    case SamplerChoice::ZigZag:
      return "zigzag";
    case SamplerChoice::BPS:
      return "bps";
    case SamplerChoice::UnderdampedEM:
      return "underdamped_em";
    case SamplerChoice::OverdampedEM:
      return "overdamped_em";
  }
  return "unknown";
}

bool is_pdmp(SamplerChoice s) noexcept { return s == SamplerChoice::ZigZag || s == SamplerChoice::BPS; }

ExperimentConfig parse_config(const std::string& text) {
  ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  ExperimentConfig cfg;
  std::ostringstream canon;
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) {
      throw ConfigError("unknown section [" + section + "]");
    }
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' outside any section");
    }
    for (const auto& [key, node] : body) {
      if (!it->second.count(key)) {
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      }
      const std::string value = trimmed(node.data());
      const std::string name = section + "." + key;
      canon << name << '=' << value << '\n';

      if (section == "experiment") {
        if (key == "samplers") {
          std::vector<std::string> parts;
          boost::algorithm::split(parts, value, boost::algorithm::is_any_of(","));
          cfg.samplers.clear();
          for (const auto& p : parts) cfg.samplers.push_back(to_sampler(p));
        } else if (key == "n_paths") {
          cfg.n_paths = to_count(name, value, 1);
        } else if (key == "seed") {
          cfg.seed = to_count(name, value, 0);
        } else if (key == "workers") {
          cfg.workers = static_cast<unsigned>(to_count(name, value, 1));
        } else if (key == "t_max") {
          cfg.t_max = to_double(name, value);
        } else if (key == "t_step") {
          cfg.t_step = to_double(name, value);
        } else if (key == "mu_f") {
          cfg.mu_f = to_double(name, value);
        }
      } else if (section == "potential") {
        if (key == "family") {
          cfg.potential.family = boost::algorithm::to_lower_copy(value);
        } else if (key == "dim") {
          cfg.potential.dim = static_cast<int>(to_count(name, value, 1));
        } else if (key == "p") {
          cfg.potential.p = to_double(name, value);
        } else if (key == "sigma") {
          cfg.potential.sigma = to_double(name, value);
        } else if (key == "delta") {
          cfg.potential.delta = to_double(name, value);
        } else if (key == "patch_radius") {
          cfg.potential.patch_radius = to_double(name, value);
        }
      } else if (section == "velocity") {
        if (key == "kind") {
          const std::string k = boost::algorithm::to_lower_copy(value);
          if (k == "rademacher") cfg.velocity = VelocityKind::RademacherProduct;
          else if (k == "gaussian") cfg.velocity = VelocityKind::StdGaussian;
          else if (k == "sphere") cfg.velocity = VelocityKind::UniformSphere;
          else if (k != "auto") throw ConfigError("'" + name + "': expected rademacher, gaussian, sphere or auto");
        } else if (key == "lambda_ref") {
          cfg.lambda_ref = to_double(name, value);
        }
      } else if (section == "initial") {
        if (key == "x0") cfg.x0 = to_vector(name, value);
        else if (key == "v0") cfg.v0 = to_policy(name, value);
        else if (key == "v0_fixed") cfg.v0_fixed = to_vector(name, value);
      } else if (section == "em") {
        if (key == "step") cfg.em_step = to_double(name, value);
        else if (key == "v0") cfg.em_v0 = to_policy(name, value);
        else if (key == "v0_fixed") cfg.em_v0_fixed = to_vector(name, value);
      } else if (section == "observable") {
        if (key == "kind") {
          const std::string k = boost::algorithm::to_lower_copy(value);
          if (k == "indicator") cfg.observable.kind = ObservableSpec::Kind::Indicator;
          else if (k == "tabulated") cfg.observable.kind = ObservableSpec::Kind::Tabulated;
          else throw ConfigError("'" + name + "': expected indicator or tabulated");
        } else if (key == "coord") {
          cfg.observable.coord = static_cast<int>(to_count(name, value, 0));
        } else if (key == "threshold") {
          cfg.observable.threshold = to_double(name, value);
        } else if (key == "x") {
          cfg.observable.table_x = to_vector(name, value);
        } else if (key == "f") {
          cfg.observable.table_f = to_vector(name, value);
        }
      } else if (section == "bound") {
        if (key == "alpha") cfg.bound.alpha = boost::algorithm::to_lower_copy(value);
        else if (key == "constants") cfg.bound.constants = boost::algorithm::to_lower_copy(value);
        else if (key == "c") cfg.bound.c = to_double(name, value);
        else if (key == "tau") cfg.bound.tau = to_double(name, value);
        else if (key == "delta") cfg.bound.delta = to_double(name, value);
        else if (key == "value") cfg.bound.value = to_double(name, value);
        else if (key == "c_u") cfg.bound.c_u = to_double(name, value);
        else if (key == "c1") cfg.bound.c1 = to_double(name, value);
        else if (key == "c2") cfg.bound.c2 = to_double(name, value);
      } else if (section == "clt") {
        if (key == "c1") cfg.clt.c1 = to_double(name, value);
        else if (key == "c2") cfg.clt.c2 = to_double(name, value);
        else if (key == "t_max") cfg.clt.t_max = to_double(name, value);
        else if (key == "points_per_decade") cfg.clt.points_per_decade = static_cast<int>(to_count(name, value, 4));
        else if (key == "tolerance") cfg.clt.extrapolation_tolerance = to_double(name, value);
        else if (key == "force_numeric") cfg.clt.force_numeric = to_double(name, value) != 0.0;
      } else if (section == "poisson") {
        if (key == "half_width") cfg.poisson.half_width = to_double(name, value);
        else if (key == "n") cfg.poisson.n = static_cast<int>(to_count(name, value, 1000));
        else if (key == "csv") cfg.poisson.csv = value;
      } else if (section == "output") {
        cfg.out_dir = value;
      }
    }
  }
  cfg.canonical = canon.str();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void ExperimentConfig::validate() const {
  if (samplers.empty()) throw ConfigError("at least one sampler is required");
  if (n_paths < 1) throw ConfigError("n_paths must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (!(t_step > 0.0) || !(t_max >= 0.0) || !std::isfinite(t_max)) {
    throw ConfigError("time grid must satisfy t_step > 0 and t_max >= 0");
  }
  const double steps = t_max / t_step;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
    throw ConfigError("t_max must be a multiple of t_step");
  }
  if (static_cast<int>(x0.size()) != potential.dim) {
    throw ConfigError("x0 has " + std::to_string(x0.size()) + " coordinates, potential has dim " +
                      std::to_string(potential.dim));
  }
  if (v0 == VelocityPolicy::Fixed && static_cast<int>(v0_fixed.size()) != potential.dim) {
    throw ConfigError("initial.v0_fixed must have dim coordinates");
  }
  if (em_v0 == VelocityPolicy::Fixed && static_cast<int>(em_v0_fixed.size()) != potential.dim) {
    throw ConfigError("em.v0_fixed must have dim coordinates");
  }
  if (!(lambda_ref >= 0.0)) throw ConfigError("lambda_ref must be >= 0");
  if (!(em_step > 0.0)) throw ConfigError("em.step must be positive");
  for (SamplerChoice s : samplers) {
    if (!is_pdmp(s)) {
      const double r = t_step / em_step;
      if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r)) {
        throw ConfigError("t_step must be a multiple of em.step");
      }
    }
    if (is_pdmp(s) && potential.family == "gaussian") {
      throw ConfigError("PDMP samplers need a bounded gradient; the gaussian family has none");
    }
    if (s == SamplerChoice::ZigZag && velocity && *velocity != VelocityKind::RademacherProduct) {
      throw ConfigError("Zig-Zag requires the Rademacher velocity law");
    }
  }
  if (observable.coord < 0 || observable.coord >= potential.dim) {
    throw ConfigError("observable.coord out of range");
  }
  if (observable.kind == ObservableSpec::Kind::Tabulated) {
    const auto& xs = observable.table_x;
    if (xs.size() < 2 || xs.size() != observable.table_f.size()) {
      throw ConfigError("tabulated observable needs matching x and f lists of length >= 2");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (!(xs[i] > xs[i - 1])) throw ConfigError("tabulated observable x must increase");
    }
    for (double f : observable.table_f) {
      if (!std::isfinite(f)) throw ConfigError("tabulated observable values must be finite");
    }
  }
}

Vector ExperimentConfig::times() const {
  const auto n = static_cast<std::size_t>(std::llround(t_max / t_step));
  Vector t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t[k] = static_cast<double>(k) * t_step;
  return t;
}

std::string ExperimentConfig::config_hash() const {
  std::ostringstream os;
  os << std::hex << std::hash<std::string>{}(canonical);
  return os.str();
}

Potential build_potential(const PotentialSpec& spec) {
  try {
    if (spec.family == "power_law") return make_power_law(spec.dim, spec.p);
    if (spec.family == "subexp") return make_subexp(spec.sigma, spec.delta, spec.patch_radius, spec.dim);
    if (spec.family == "gaussian") return make_gaussian(spec.dim);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  throw ConfigError("unknown potential family '" + spec.family + "'");
}

SamplerSpec build_sampler_spec(const ExperimentConfig& cfg, SamplerChoice sampler) {
  if (!is_pdmp(sampler)) {
    throw ConfigError("build_sampler_spec: " + to_string(sampler) + " is not a PDMP");
  }
  const Potential potential = build_potential(cfg.potential);
  const int d = cfg.potential.dim;
  const bool zz = sampler == SamplerChoice::ZigZag;
  const VelocityKind kind =
      cfg.velocity.value_or(zz ? VelocityKind::RademacherProduct : VelocityKind::StdGaussian);
  VelocityMeasure nu = kind == VelocityKind::RademacherProduct ? VelocityMeasure::rademacher(d)
                       : kind == VelocityKind::StdGaussian     ? VelocityMeasure::gaussian(d)
                                                               : VelocityMeasure::sphere(d);
  return SamplerSpec{decompose(potential, zz ? SamplerKind::ZigZag : SamplerKind::BouncyParticle),
                     std::move(nu), cfg.lambda_ref, std::nullopt};
}

}  // namespace pdmpwp
