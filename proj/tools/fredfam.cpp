// fredfam: scenario runner for family indices and Weyl spectra.
//
//   fredfam run <config.json> [--out FILE] [--plot FILE] [--grid-h H] [--theta-samples N]
//
// Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 error (including usage errors).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fredfam/errors.hpp"
#include "fredfam/scenario.hpp"

namespace {

constexpr int kUsageExit = 3;

// Write via a sibling temp file and rename, so readers never see partial output.
bool write_atomic(const std::string& path, const std::string& data) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) return false;
        f << data;
        if (!f.flush()) return false;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
    return !ec;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Family index and Weyl spectrum scenario runner"};
    app.set_version_flag("--version", fredfam::kToolVersion);
    app.require_subcommand(1);

    std::string config_path, out_path, plot_path;
    std::optional<double> grid_h;
    std::optional<int> theta_samples;

    CLI::App* run = app.add_subcommand("run", "Run one scenario config and print its JSON result");
    run->add_option("config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_path, "Write the JSON result here instead of stdout");
    run->add_option("--plot", plot_path, "Write CSV plot data (grid set or curve)");
    run->add_option("--grid-h", grid_h, "Override the grid step h")->check(CLI::PositiveNumber);
    run->add_option("--theta-samples", theta_samples, "Override theta_samples")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsageExit;
    }

    nlohmann::json cfg;
    {
        std::ifstream in(config_path);
        try {
            cfg = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            std::cerr << "usage error: " << config_path << ": invalid JSON: " << e.what() << "\n";
            return kUsageExit;
        }
    }

    fredfam::RunOptions opts;
    opts.grid_h = grid_h;
    opts.theta_samples = theta_samples;
    const fredfam::RunResult result = fredfam::run_scenario(cfg, opts);
    if (!result.detail.empty()) std::cerr << result.detail << "\n";

    const std::string doc = fredfam::to_json(result).dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << doc;
    } else if (!write_atomic(out_path, doc)) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kUsageExit;
    }

    if (!plot_path.empty()) {
        std::ostringstream csv;
        try {
            fredfam::emit_plot_data(result, csv);
        } catch (const fredfam::SchemaError& e) {
            std::cerr << "usage error: " << e.what() << "\n";
            return kUsageExit;
        }
        if (!write_atomic(plot_path, csv.str())) {
            std::cerr << "error: cannot write " << plot_path << "\n";
            return kUsageExit;
        }
    }
    return fredfam::exit_code(result.status);
}
