#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fredfam/calc.hpp"
#include "fredfam/family.hpp"
#include "fredfam/op_model.hpp"
#include "fredfam/param_space.hpp"
#include "fredfam/tolerances.hpp"
#include "fredfam/weyl.hpp"

// Strict readers for scenario config blocks. Every reader rejects unknown keys
// and wrong types with a SchemaError whose message starts with the field path
// (e.g. "family.assignment.0.coeffs[1]").
namespace fredfam::config {

using Json = nlohmann::json;

Complex parse_complex(const Json& j, const std::string& path);              // [re, im]
OperatorSpec parse_spec(const Json& j, const std::string& path);
ParamSpace parse_space(const Json& j, const std::string& path);
OperatorFamily parse_family(const Json& j, const std::string& path);
ComplexGrid parse_grid(const Json& j, const std::string& path);
Poly parse_poly(const Json& j, const std::string& path);

/// Explicit list `{families: [...]}` or `{n: [first, last], base, perturbation}`
/// meaning base + (1/n) * perturbation for n = first..last.
std::vector<OperatorFamily> parse_sequence(const Json& j, const std::string& path);

/// `{from, to, t: [...]}` (linear path) or `{t: [...], families: [...]}`.
/// Also returns the endpoints.
struct HomotopyInput {
    OperatorFamily fam0;
    OperatorFamily fam1;
    std::vector<PathStep> path;
};
HomotopyInput parse_homotopy(const Json& j, const std::string& path);

/// Tolerance overrides; `epsilon` and `converge_tol` are scenario-level knobs
/// kept next to the engine tolerances.
struct Knobs {
    Tolerances tol;
    std::optional<double> epsilon;  // default 2h where a grid is present
    double converge_tol = 1e-6;
};
Knobs parse_tolerances(const Json& j, const std::string& path);

} // namespace fredfam::config
