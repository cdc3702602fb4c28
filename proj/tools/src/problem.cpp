#include "mfgcanon_cli/problem.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>

#include "mfgcanon/catalog.hpp"
#include "mfgcanon/errors.hpp"

namespace mfgcanon::cli {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> known) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ValidationError(where + ": unknown field '" + key + "'");
  }
}

double get_number(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(where + "." + key + " must be a number");
  const double out = v.get<double>();
  if (!std::isfinite(out)) throw ValidationError(where + "." + key + " must be finite");
  return out;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? get_number(obj, key, where) : fallback;
}

std::size_t get_count(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ValidationError(where + "." + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::size_t count_or(const json& obj, const char* key, std::size_t fallback, const std::string& where) {
  return obj.contains(key) ? get_count(obj, key, where) : fallback;
}

std::uint64_t get_seed(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ValidationError(where + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Distribution parse_distribution(const json& v, const std::string& where) {
  if (!v.is_string()) throw ValidationError(where + " must be \"normal\" or \"uniform\"");
  const auto s = v.get<std::string>();
  if (s == "normal") return Distribution::kNormal;
  if (s == "uniform") return Distribution::kUniform;
  throw ValidationError(where + ": unknown distribution '" + s + "'");
}

double positive(double v, const std::string& what) {
  if (!(v > 0.0)) throw ValidationError(what + " must be positive");
  return v;
}

FormKind parse_kind(const json& v) {
  if (!v.is_string()) throw ValidationError("check.kinds entries must be strings");
  const auto s = v.get<std::string>();
  for (FormKind k : {FormKind::kDispG2nd, FormKind::kDispH2nd, FormKind::kAlphaDispH,
                     FormKind::kAntiG, FormKind::kDispG1st, FormKind::kDispH1st}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("check.kinds: unknown kind '" + s + "'");
}

Matrix parse_points(const json& m) {
  reject_unknown(m, "measure", {"d", "points"});
  if (!m.contains("points") || !m.at("points").is_array() || m.at("points").empty()) {
    throw ValidationError("measure.points must be a non-empty array of points");
  }
  const json& pts = m.at("points");
  std::size_t d = 0;
  if (m.contains("d")) {
    d = get_count(m, "d", "measure");
  } else if (pts.front().is_array()) {
    d = pts.front().size();
  } else {
    d = 1;
  }
  if (d == 0) throw ValidationError("measure.d must be positive");
  Matrix out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const json& pt = pts[i];
    std::vector<double> coords;
    if (pt.is_number()) {
      coords.push_back(pt.get<double>());
    } else if (pt.is_array()) {
      for (const auto& c : pt) {
        if (!c.is_number()) throw ValidationError("measure.points entries must be numbers");
        coords.push_back(c.get<double>());
      }
    } else {
      throw ValidationError("measure.points[" + std::to_string(i) + "] must be a point");
    }
    if (coords.size() != d) {
      throw ValidationError("measure.points[" + std::to_string(i) + "] has dimension " +
                            std::to_string(coords.size()) + ", expected " + std::to_string(d));
    }
    for (std::size_t k = 0; k < d; ++k) {
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = coords[k];
    }
  }
  if (!out.allFinite()) throw ValidationError("measure.points must be finite");
  return out;
}

}  // namespace

DerivativeBounds parse_bounds(const json& j, Provenance provenance) {
  reject_unknown(j, "bounds", {"c0", "kappa_xp_lower", "kappa", "norm_pp", "norm_xx", "norm_pmu",
                               "norm_xmu", "norm_xp", "L2"});
  if (j.contains("kappa") && j.contains("kappa_xp_lower")) {
    throw ValidationError("bounds: give either kappa or kappa_xp_lower, not both");
  }
  DerivativeBounds b;
  b.c0 = number_or(j, "c0", b.c0, "bounds");
  b.kappa_xp_lower = j.contains("kappa") ? get_number(j, "kappa", "bounds")
                                         : number_or(j, "kappa_xp_lower", 0.0, "bounds");
  b.norm_pp = number_or(j, "norm_pp", b.norm_pp, "bounds");
  b.norm_xx = number_or(j, "norm_xx", 0.0, "bounds");
  b.norm_pmu = number_or(j, "norm_pmu", 0.0, "bounds");
  b.norm_xmu = number_or(j, "norm_xmu", 0.0, "bounds");
  if (j.contains("norm_xp")) b.norm_xp = get_number(j, "norm_xp", "bounds");
  if (j.contains("L2")) b.L2 = get_number(j, "L2", "bounds");
  b.provenance = provenance;
  return b;
}

LambdaParams parse_lambda(const json& j) {
  LambdaParams l;
  if (j.is_array()) {
    if (j.size() != 4) throw ValidationError("lambda must have four entries");
    for (const auto& v : j) {
      if (!v.is_number()) throw ValidationError("lambda entries must be numbers");
    }
    l = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  } else {
    reject_unknown(j, "lambda", {"l0", "l1", "l2", "l3"});
    for (const char* k : {"l0", "l1", "l2", "l3"}) {
      if (!j.contains(k)) throw ValidationError(std::string("lambda: missing ") + k);
    }
    l = {get_number(j, "l0", "lambda"), get_number(j, "l1", "lambda"),
         get_number(j, "l2", "lambda"), get_number(j, "l3", "lambda")};
  }
  l.validate();
  return l;
}

std::size_t ProblemFile::dimension() const {
  if (points) return static_cast<std::size_t>(points->rows());
  if (sampler) return sampler->d;
  if (d) return *d;
  throw ValidationError("problem has no dimension: give measure, sampler or d");
}

HamiltonianPtr ProblemFile::build_hamiltonian() const {
  if (!hamiltonian) throw ValidationError("problem has no hamiltonian");
  return hamiltonian_from_spec(*hamiltonian, dimension());
}

CostPtr ProblemFile::build_cost() const {
  if (!cost) throw ValidationError("problem has no cost");
  return cost_from_spec(*cost, dimension());
}

ProblemFile parse_problem(const json& doc, std::optional<std::uint64_t> seed_override) {
  if (!doc.is_object() || doc.empty()) throw ValidationError("empty problem");
  reject_unknown(doc, "problem",
                 {"version", "seed", "d", "hamiltonian", "cost", "bounds", "estimate_bounds",
                  "lambda", "g_semi_alpha", "prop_last", "measure", "sampler", "solver", "check",
                  "equivalence"});
  if (!doc.contains("version") || !doc.at("version").is_string() ||
      doc.at("version").get<std::string>() != kProblemVersion) {
    throw ValidationError(std::string("problem.version must be \"") + kProblemVersion + "\"");
  }

  ProblemFile p;
  p.raw = doc;
  if (doc.contains("d")) {
    p.d = get_count(doc, "d", "problem");
    if (*p.d == 0) throw ValidationError("problem.d must be positive");
  }
  if (doc.contains("hamiltonian")) p.hamiltonian = doc.at("hamiltonian");
  if (doc.contains("cost")) p.cost = doc.at("cost");
  if (doc.contains("bounds")) {
    p.bounds = parse_bounds(doc.at("bounds"));
    p.bounds->validate();
  }
  if (doc.contains("estimate_bounds")) {
    const json& e = doc.at("estimate_bounds");
    EstimateSpec spec;
    if (e.is_boolean()) {
      if (e.get<bool>()) p.estimate = spec;
    } else {
      reject_unknown(e, "estimate_bounds", {"samples", "points"});
      spec.samples = count_or(e, "samples", spec.samples, "estimate_bounds");
      spec.points = count_or(e, "points", spec.points, "estimate_bounds");
      if (spec.samples == 0 || spec.points == 0) {
        throw ValidationError("estimate_bounds: samples and points must be positive");
      }
      p.estimate = spec;
    }
  }
  if (doc.contains("lambda")) p.lambda = parse_lambda(doc.at("lambda"));
  if (doc.contains("g_semi_alpha")) p.g_semi_alpha = get_number(doc, "g_semi_alpha", "problem");
  if (doc.contains("prop_last")) {
    const json& pl = doc.at("prop_last");
    reject_unknown(pl, "prop_last", {"kappa_A0", "bounds_H0"});
    if (!pl.contains("kappa_A0") || !pl.contains("bounds_H0")) {
      throw ValidationError("prop_last needs kappa_A0 and bounds_H0");
    }
    PropLastSpec spec;
    spec.kappa_A0 = get_number(pl, "kappa_A0", "prop_last");
    spec.bounds_H0 = parse_bounds(pl.at("bounds_H0"));
    if (!spec.bounds_H0.L2) throw ValidationError("prop_last.bounds_H0 needs L2");
    p.prop_last = spec;
  }

  std::optional<std::uint64_t> sampler_seed;
  if (doc.contains("measure") && doc.contains("sampler")) {
    throw ValidationError("give either measure or sampler, not both");
  }
  if (doc.contains("measure")) p.points = parse_points(doc.at("measure"));
  if (doc.contains("sampler")) {
    const json& s = doc.at("sampler");
    reject_unknown(s, "sampler", {"seed", "N", "d", "distribution", "scale"});
    if (!s.contains("N") || !s.contains("d")) throw ValidationError("sampler needs N and d");
    SamplerSpec spec;
    spec.n = get_count(s, "N", "sampler");
    spec.d = get_count(s, "d", "sampler");
    if (spec.n == 0 || spec.d == 0) throw ValidationError("sampler: N and d must be positive");
    if (s.contains("distribution")) spec.distribution = parse_distribution(s.at("distribution"), "sampler.distribution");
    spec.scale = positive(number_or(s, "scale", 1.0, "sampler"), "sampler.scale");
    if (s.contains("seed")) sampler_seed = get_seed(s.at("seed"), "sampler.seed");
    p.sampler = spec;
  }
  if (p.d && ((p.points && *p.d != static_cast<std::size_t>(p.points->rows())) ||
              (p.sampler && *p.d != p.sampler->d))) {
    throw ValidationError("problem.d disagrees with the measure dimension");
  }

  if (seed_override) {
    p.seed = *seed_override;
  } else if (doc.contains("seed")) {
    p.seed = get_seed(doc.at("seed"), "problem.seed");
  } else if (sampler_seed) {
    p.seed = *sampler_seed;
  }

  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    reject_unknown(s, "solver", {"T", "steps", "tol", "max_iter", "method", "damping", "beta",
                                 "beta0", "picard_max_iter", "equiv_tol"});
    SolverSpec spec;
    spec.T = positive(number_or(s, "T", spec.T, "solver"), "solver.T");
    spec.steps = count_or(s, "steps", spec.steps, "solver");
    if (spec.steps == 0) throw ValidationError("solver.steps must be positive");
    spec.options.tol = positive(number_or(s, "tol", spec.options.tol, "solver"), "solver.tol");
    spec.options.max_iter = count_or(s, "max_iter", spec.options.max_iter, "solver");
    spec.options.picard_max_iter = count_or(s, "picard_max_iter", spec.options.picard_max_iter, "solver");
    spec.options.damping = number_or(s, "damping", spec.options.damping, "solver");
    if (!(spec.options.damping > 0.0 && spec.options.damping <= 1.0)) {
      throw ValidationError("solver.damping must lie in (0, 1]");
    }
    spec.equiv_tol = positive(number_or(s, "equiv_tol", spec.equiv_tol, "solver"), "solver.equiv_tol");
    if (number_or(s, "beta", 0.0, "solver") != 0.0 || number_or(s, "beta0", 0.0, "solver") != 0.0) {
      throw ValidationError("solver: only the deterministic case beta = beta0 = 0 is supported");
    }
    if (s.contains("method")) {
      const json& m = s.at("method");
      const std::string name = m.is_string() ? m.get<std::string>() : std::string();
      if (name == "shooting") {
        spec.method = SolverMethod::kShooting;
      } else if (name == "picard") {
        spec.method = SolverMethod::kPicard;
      } else {
        throw ValidationError("solver.method must be \"shooting\" or \"picard\"");
      }
    }
    p.solver = spec;
  }

  if (doc.contains("check")) {
    const json& c = doc.at("check");
    reject_unknown(c, "check", {"instances", "tolerance", "kinds", "alpha", "p_field", "perturbation"});
    p.check.instances = count_or(c, "instances", p.check.instances, "check");
    if (p.check.instances == 0) throw ValidationError("check.instances must be positive");
    if (c.contains("tolerance")) {
      p.check.tolerance = get_number(c, "tolerance", "check");
      if (*p.check.tolerance < 0.0) throw ValidationError("check.tolerance must be non-negative");
    }
    if (c.contains("kinds")) {
      if (!c.at("kinds").is_array()) throw ValidationError("check.kinds must be an array");
      for (const auto& k : c.at("kinds")) p.check.kinds.push_back(parse_kind(k));
    }
    if (c.contains("alpha")) p.check.alpha = get_number(c, "alpha", "check");
    if (c.contains("p_field")) {
      const json& pf = c.at("p_field");
      reject_unknown(pf, "check.p_field", {"distribution", "scale"});
      if (pf.contains("distribution")) {
        p.check.p_distribution = parse_distribution(pf.at("distribution"), "check.p_field.distribution");
      }
      p.check.p_scale = number_or(pf, "scale", p.check.p_scale, "check.p_field");
      if (p.check.p_scale < 0.0) throw ValidationError("check.p_field.scale must be non-negative");
    }
    p.check.perturbation = positive(number_or(c, "perturbation", p.check.perturbation, "check"),
                                    "check.perturbation");
  }

  if (doc.contains("equivalence")) {
    const json& e = doc.at("equivalence");
    reject_unknown(e, "equivalence", {"alpha"});
    if (e.contains("alpha")) p.equivalence_alpha = get_number(e, "alpha", "equivalence");
  }
  return p;
}

ProblemFile load_problem(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open problem file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("problem file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_problem(doc, seed_override);
}

}  // namespace mfgcanon::cli
