#include "mfgcanon/catalog.hpp"

#include <cmath>
#include <initializer_list>
#include <sstream>

#include "mfgcanon/builtin.hpp"
#include "mfgcanon/errors.hpp"
#include "mfgcanon/transform.hpp"

namespace mfgcanon {
namespace {

using nlohmann::json;

void require_object(const json& params, const std::string& model) {
  if (!params.is_null() && !params.is_object()) {
    throw ValidationError(model + ": params must be an object");
  }
}

void reject_unknown(const json& params, const std::string& model,
                    std::initializer_list<const char*> known) {
  if (!params.is_object()) return;
  for (const auto& [key, _] : params.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ValidationError(model + ": unknown parameter '" + key + "'");
  }
}

double number(const json& params, const char* key, std::optional<double> fallback,
              const std::string& model) {
  if (!params.is_object() || !params.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(model + ": missing parameter '" + key + "'");
  }
  const json& v = params.at(key);
  if (!v.is_number()) throw ValidationError(model + ": parameter '" + key + "' must be a number");
  const double out = v.get<double>();
  if (!std::isfinite(out)) throw ValidationError(model + ": parameter '" + key + "' must be finite");
  return out;
}

Matrix matrix_param(const json& params, const char* key, const Matrix& fallback, std::size_t d,
                    const std::string& model) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  return parse_matrix(params.at(key), d, model + ": " + key);
}

Matrix identity(std::size_t d) {
  return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

std::string spec_type(const json& spec) {
  if (!spec.is_object() || !spec.contains("type") || !spec.at("type").is_string()) {
    throw ValidationError("model spec must be an object with a string 'type'");
  }
  return spec.at("type").get<std::string>();
}

std::optional<double> spec_transform(const json& spec) {
  if (!spec.contains("transform")) return std::nullopt;
  const json& t = spec.at("transform");
  if (!t.is_object()) throw ValidationError("transform must be an object");
  for (const auto& [key, _] : t.items()) {
    if (key != "alpha") throw ValidationError("transform: unknown field '" + key + "'");
  }
  return number(t, "alpha", std::nullopt, "transform");
}

const json& spec_params(const json& spec) {
  static const json empty = json::object();
  return spec.contains("params") ? spec.at("params") : empty;
}

}  // namespace

Matrix parse_matrix(const json& value, std::size_t d, const std::string& label) {
  const auto n = static_cast<Eigen::Index>(d);
  if (value.is_number()) return value.get<double>() * identity(d);
  if (!value.is_array()) throw ValidationError(label + ": matrix must be a number or an array");
  Matrix m(n, n);
  if (!value.empty() && value.front().is_array()) {
    if (value.size() != d) {
      std::ostringstream msg;
      msg << label << ": expected " << d << " rows, got " << value.size();
      throw ValidationError(msg.str());
    }
    for (std::size_t r = 0; r < d; ++r) {
      const json& row = value.at(r);
      if (!row.is_array() || row.size() != d) throw ValidationError(label + ": ragged matrix row");
      for (std::size_t c = 0; c < d; ++c) {
        if (!row.at(c).is_number()) throw ValidationError(label + ": non-numeric entry");
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row.at(c).get<double>();
      }
    }
  } else {
    if (value.size() != d * d) {
      std::ostringstream msg;
      msg << label << ": expected " << d * d << " row-major entries, got " << value.size();
      throw ValidationError(msg.str());
    }
    for (std::size_t k = 0; k < d * d; ++k) {
      if (!value.at(k).is_number()) throw ValidationError(label + ": non-numeric entry");
      m(static_cast<Eigen::Index>(k / d), static_cast<Eigen::Index>(k % d)) = value.at(k).get<double>();
    }
  }
  if (!m.allFinite()) throw ValidationError(label + ": non-finite entry");
  return m;
}

HamiltonianPtr builtin_hamiltonian(const std::string& name, const json& params, std::size_t d) {
  if (d == 0) throw ValidationError("model dimension must be >= 1");
  require_object(params, name);
  if (name == "H_lq") {
    reject_unknown(params, name, {"P", "Q", "R", "declare_convexity"});
    const Matrix zero = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    bool convex = true;
    if (params.is_object() && params.contains("declare_convexity")) {
      if (!params.at("declare_convexity").is_boolean()) {
        throw ValidationError("H_lq: declare_convexity must be a boolean");
      }
      convex = params.at("declare_convexity").get<bool>();
    }
    return make_h_lq(matrix_param(params, "P", identity(d), d, name),
                     matrix_param(params, "Q", zero, d, name),
                     matrix_param(params, "R", zero, d, name), convex);
  }
  if (name == "H_mf") {
    reject_unknown(params, name, {"c", "q"});
    return make_h_mf(d, number(params, "c", 0.0, name), number(params, "q", 0.0, name));
  }
  if (name == "H_pxc") {
    reject_unknown(params, name, {"base", "alpha"});
    HamiltonianPtr base = (params.is_object() && params.contains("base"))
                              ? hamiltonian_from_spec(params.at("base"), d)
                              : make_h_lq(identity(d), Matrix::Zero(static_cast<Eigen::Index>(d),
                                                                    static_cast<Eigen::Index>(d)),
                                          Matrix::Zero(static_cast<Eigen::Index>(d),
                                                       static_cast<Eigen::Index>(d)));
    return make_h_pxc(std::move(base), number(params, "alpha", std::nullopt, name));
  }
  throw ValidationError("unknown Hamiltonian model '" + name + "'");
}

CostPtr builtin_cost(const std::string& name, const json& params, std::size_t d) {
  if (d == 0) throw ValidationError("model dimension must be >= 1");
  require_object(params, name);
  if (name == "G_quad") {
    reject_unknown(params, name, {"a", "b", "e"});
    return make_g_quad(d, number(params, "a", 0.0, name), number(params, "b", 0.0, name),
                       number(params, "e", 0.0, name));
  }
  if (name == "G_anti") {
    reject_unknown(params, name, {"a"});
    return make_g_anti(d, number(params, "a", std::nullopt, name));
  }
  throw ValidationError("unknown cost model '" + name + "'");
}

AnyModel builtin(const std::string& name, const json& params, std::size_t d) {
  if (name.rfind("H_", 0) == 0) return builtin_hamiltonian(name, params, d);
  if (name.rfind("G_", 0) == 0) return builtin_cost(name, params, d);
  throw ValidationError("unknown model '" + name + "'");
}

HamiltonianPtr hamiltonian_from_spec(const json& spec, std::size_t d) {
  HamiltonianPtr h = builtin_hamiltonian(spec_type(spec), spec_params(spec), d);
  if (auto alpha = spec_transform(spec)) h = transform_hamiltonian(std::move(h), *alpha);
  return h;
}

CostPtr cost_from_spec(const json& spec, std::size_t d) {
  CostPtr g = builtin_cost(spec_type(spec), spec_params(spec), d);
  if (auto alpha = spec_transform(spec)) g = transform_cost(std::move(g), *alpha);
  return g;
}

}  // namespace mfgcanon
