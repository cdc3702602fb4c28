#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "mfgcanon/models.hpp"

namespace mfgcanon {

// Built-in model catalog keyed by name, parameterized by JSON objects:
//   H_lq   {P, Q, R, declare_convexity}   matrices as row-major nested arrays,
//                                         a flat row-major array, or a scalar
//                                         meaning that multiple of I
//   H_mf   {c, q}
//   H_pxc  {base: <model spec>, alpha}   base defaults to 1/2 |p|^2
//   G_quad {a, b, e}
//   G_anti {a}
// A model spec is {type, params, transform: {alpha}}.

using AnyModel = std::variant<HamiltonianPtr, CostPtr>;

AnyModel builtin(const std::string& name, const nlohmann::json& params, std::size_t d);

HamiltonianPtr builtin_hamiltonian(const std::string& name, const nlohmann::json& params,
                                   std::size_t d);
CostPtr builtin_cost(const std::string& name, const nlohmann::json& params, std::size_t d);

/// Builds the model and applies an attached transform, if any.
HamiltonianPtr hamiltonian_from_spec(const nlohmann::json& spec, std::size_t d);
CostPtr cost_from_spec(const nlohmann::json& spec, std::size_t d);

Matrix parse_matrix(const nlohmann::json& value, std::size_t d, const std::string& label);

}  // namespace mfgcanon
