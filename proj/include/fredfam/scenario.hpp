#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fredfam/op_model.hpp"
#include "fredfam/weyl.hpp"

namespace fredfam {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class Status { Pass, Fail, Inconclusive, Error };

const char* to_string(Status s);
/// pass 0, fail 1, inconclusive 2, error 3.
int exit_code(Status s);

/// Data emit_plot_data can write: a grid set or a sampled curve.
struct PlotData {
    std::optional<GridSet> grid;
    std::optional<std::vector<Complex>> curve;
};

struct RunResult {
    std::string name;
    std::string kind;
    Status status = Status::Error;
    std::string detail;
    nlohmann::json payload = nlohmann::json::object();
    nlohmann::json provenance = nlohmann::json::object();
    PlotData plot;
};

/// Command-line overrides applied on top of the config.
struct RunOptions {
    std::optional<double> grid_h;
    std::optional<int> theta_samples;
};

/// Runs one scenario. Schema violations come back as status Error with the
/// field path in `detail`; module errors likewise, prefixed with the scenario
/// name. Hypothesis violations and inconclusive inputs give Inconclusive.
RunResult run_scenario(const nlohmann::json& config, const RunOptions& opts = {});

/// The JSON document written by `fredfam run`. No timestamps: identical
/// config and options give identical bytes.
nlohmann::json to_json(const RunResult& r);

/// CSV plot data. Grid payloads: header `re,im,member`, one row per member in
/// row-major grid order. Curves: header `re,im`. Throws SchemaError (usage
/// error) when the result carries nothing plottable.
void emit_plot_data(const RunResult& r, std::ostream& out);

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

} // namespace fredfam
