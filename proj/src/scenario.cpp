#include "fredfam/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "fredfam/calc.hpp"
#include "fredfam/config.hpp"
#include "fredfam/errors.hpp"
#include "fredfam/family.hpp"

namespace fredfam {

using nlohmann::json;

const char* to_string(Status s) {
    switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
    case Status::Error: return "error";
    }
    return "error";
}

int exit_code(Status s) {
    switch (s) {
    case Status::Pass: return 0;
    case Status::Fail: return 1;
    case Status::Inconclusive: return 2;
    case Status::Error: return 3;
    }
    return 3;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

// ---------------------------------------------------------------- json helpers

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

json index_json(const IndexVector& v) {
    json out = json::object();
    for (const auto& [c, ind] : v) out[std::to_string(c)] = ind;
    return out;
}

// Members as [re, im] pairs sorted by (re, im).
json gridset_json(const GridSet& s) {
    auto pts = s.member_points();
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    json out = json::array();
    for (Complex z : pts) out.push_back(cjson(z));
    return out;
}

json grid_json(const ComplexGrid& g) {
    return {{"re", {g.re_min, g.re_max}}, {"im", {g.im_min, g.im_max}}, {"h", g.h}, {"nx", g.nx()}, {"ny", g.ny()}};
}

json tolerances_json(const config::Knobs& k) {
    return {{"fredholm_margin", k.tol.fredholm_margin}, {"rank_rel_tol", k.tol.rank_rel_tol},
            {"theta_samples", k.tol.theta_samples},     {"norm_theta_samples", k.tol.norm_theta_samples},
            {"oracle_n", k.tol.oracle_n},               {"decay_ratio", k.tol.decay_ratio},
            {"cluster_tol", k.tol.cluster_tol},         {"converge_tol", k.converge_tol}};
}

const char* error_name(const std::exception& e) {
    if (dynamic_cast<const SchemaError*>(&e)) return "schema";
    if (dynamic_cast<const StructuralError*>(&e)) return "structural";
    if (dynamic_cast<const KindMismatchError*>(&e)) return "kind_mismatch";
    if (dynamic_cast<const OnEssentialSpectrumError*>(&e)) return "on_essential_spectrum";
    if (dynamic_cast<const InstabilityError*>(&e)) return "instability";
    if (dynamic_cast<const NotFredholmError*>(&e)) return "not_fredholm";
    if (dynamic_cast<const DiscretizationError*>(&e)) return "discretization";
    if (dynamic_cast<const InconclusiveError*>(&e)) return "inconclusive";
    if (dynamic_cast<const IllPosedError*>(&e)) return "ill_posed";
    if (dynamic_cast<const HypothesisViolationError*>(&e)) return "hypothesis_violation";
    if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
    return "internal";
}

// ---------------------------------------------------------------- expect block

// Reads optional expectations; unknown keys are schema errors.
class Expect {
public:
    Expect(const json& j, const std::vector<std::string_view>& allowed) : j_(j) {
        if (j_.is_null()) return;
        if (!j_.is_object()) throw SchemaError("expect: expected an object");
        for (const auto& [key, v] : j_.items())
            if (key != "error" && std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                throw SchemaError("expect." + key + ": unknown key");
    }

    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

    bool boolean(const char* key, bool fallback) const {
        if (!has(key)) return fallback;
        if (!j_[key].is_boolean()) throw SchemaError(std::string("expect.") + key + ": expected a boolean");
        return j_[key].get<bool>();
    }

    IndexVector index(const char* key) const {
        IndexVector out;
        const json& v = j_[key];
        if (!v.is_object()) throw SchemaError(std::string("expect.") + key + ": expected an object");
        for (const auto& [c, ind] : v.items()) {
            if (!ind.is_number_integer()) throw SchemaError(std::string("expect.") + key + "." + c + ": expected an integer");
            try {
                out[std::stoi(c)] = ind.get<int>();
            } catch (const std::logic_error&) {
                throw SchemaError(std::string("expect.") + key + "." + c + ": component ids are integers");
            }
        }
        return out;
    }

    const json& raw(const char* key) const { return j_[key]; }

    std::optional<std::string> error() const {
        if (!has("error")) return std::nullopt;
        if (!j_["error"].is_string()) throw SchemaError("expect.error: expected a string");
        return j_["error"].get<std::string>();
    }

private:
    const json& j_;
};

// ---------------------------------------------------------------- scenario context

struct Context {
    const json& cfg;
    config::Knobs knobs;
    RunResult& out;
    const RunOptions& opts;

    const json& req(const char* key) const {
        if (!cfg.contains(key)) throw SchemaError(std::string(key) + ": missing required key");
        return cfg[key];
    }
    OperatorFamily family(const char* key) const { return config::parse_family(req(key), key); }
    ComplexGrid grid() const {
        ComplexGrid g = config::parse_grid(req("grid"), "grid");
        if (opts.grid_h) {
            g.h = *opts.grid_h;
            try {
                g.validate();
            } catch (const PreconditionError& e) {
                throw SchemaError(std::string("--grid-h: ") + e.what());
            }
        }
        return g;
    }
    double epsilon(const ComplexGrid& g) {
        const double eps = knobs.epsilon.value_or(2.0 * g.h);
        out.provenance["epsilon"] = eps;
        return eps;
    }
    Complex lambda() const {
        return cfg.contains("lambda") ? config::parse_complex(cfg["lambda"], "lambda") : Complex{};
    }
    void verdict(bool ok, const std::string& why_not) {
        out.status = ok ? Status::Pass : Status::Fail;
        if (!ok) out.detail = why_not;
    }
};

void check_keys(const json& cfg, const std::vector<std::string_view>& kind_keys) {
    for (const auto& [key, v] : cfg.items()) {
        if (key == "name" || key == "kind" || key == "tolerances" || key == "expect") continue;
        if (std::find(kind_keys.begin(), kind_keys.end(), key) == kind_keys.end())
            throw SchemaError(key + ": unknown key for this scenario kind");
    }
}

// ---------------------------------------------------------------- kinds

void run_index(Context& c, const Expect& ex) {
    const OperatorFamily fam = c.family("family");
    const Complex lambda = c.lambda();
    const IndexVector ind = family_index(fam, lambda, c.knobs.tol);
    c.out.payload = {{"lambda", cjson(lambda)}, {"index", index_json(ind)}};
    if (ex.has("index")) c.verdict(ind == ex.index("index"), "index vector differs from expect.index");
    else c.out.status = Status::Pass;
}

void run_index_poly(Context& c, const Expect& ex) {
    const OperatorFamily fam = c.family("family");
    const Poly p = config::parse_poly(c.req("poly"), "poly");
    json roots = json::array();
    for (const Root& r : poly_roots(p, c.knobs.tol.cluster_tol))
        roots.push_back({{"value", cjson(r.value)}, {"multiplicity", r.multiplicity}});
    const IndexVector via_roots = index_via_roots(fam, p, c.knobs.tol);
    const IndexVector direct = family_index(poly_apply(sample_family(fam), p), 0.0, c.knobs.tol);
    c.out.payload = {{"roots", roots}, {"index_via_roots", index_json(via_roots)}, {"index_of_image", index_json(direct)}};
    if (via_roots != direct) return c.verdict(false, "root formula disagrees with the index of p(T)");
    if (ex.has("index")) c.verdict(via_roots == ex.index("index"), "index vector differs from expect.index");
    else c.out.status = Status::Pass;
}

void run_spectral_map(Context& c, const Expect&) {
    const OperatorFamily fam = c.family("family");
    const Poly p = config::parse_poly(c.req("poly"), "poly");
    const SpectralMapResult r = spectral_map_check(fam, p, c.knobs.tol.theta_samples);
    c.out.payload = {{"hausdorff_distance", r.distance},
                     {"tolerance", r.tolerance},
                     {"theta_samples", c.knobs.tol.theta_samples},
                     {"image_samples", r.image_curve.size()}};
    c.out.plot.curve = r.image_curve;
    c.verdict(r.pass, "Hausdorff distance exceeds tolerance");
}

void run_weyl(Context& c, const Expect& ex) {
    const OperatorFamily fam = c.family("family");
    const ComplexGrid grid = c.grid();
    const GridSet w = weyl_spectrum_family(fam, grid, c.knobs.tol);
    const GridSet direct = weyl_spectrum_family_direct(fam, grid, c.knobs.tol);
    c.out.payload = {{"grid", grid_json(grid)}, {"count", w.size()}, {"direct_route_agrees", w == direct},
                     {"weyl_spectrum", gridset_json(w)}};
    c.out.plot.grid = w;
    if (!(w == direct)) return c.verdict(false, "union-of-points and direct-definition routes disagree");
    if (ex.has("count") && (!ex.raw("count").is_number_integer() || ex.raw("count").get<long long>() != (long long)w.size()))
        return c.verdict(false, "member count differs from expect.count");
    if (ex.has("disk")) {
        const json& d = ex.raw("disk");
        if (!d.is_object() || !d.contains("radius")) throw SchemaError("expect.disk: expected {center, radius}");
        const Complex center = d.contains("center") ? config::parse_complex(d["center"], "expect.disk.center") : Complex{};
        const double radius = d["radius"].get<double>();
        // Symmetric difference with the closed disk must hug the circle.
        std::size_t stray = 0;
        for (int j = 0; j < grid.ny(); ++j)
            for (int i = 0; i < grid.nx(); ++i) {
                const double r = std::abs(grid.point(i, j) - center);
                const bool in_disk = r <= radius;
                if (in_disk != w.contains(i, j) && std::abs(r - radius) > grid.h) ++stray;
            }
        c.out.payload["disk_stray_points"] = stray;
        return c.verdict(stray == 0, "Weyl set differs from the expected disk away from its boundary");
    }
    c.out.status = Status::Pass;
}

void run_homotopy(Context& c, const Expect& ex) {
    const config::HomotopyInput in = config::parse_homotopy(c.req("homotopy"), "homotopy");
    const HomotopyReport r = homotopy_invariance_check(in.fam0, in.fam1, in.path, c.knobs.tol);
    c.out.payload = {{"verified", r.verified}, {"steps", in.path.size()}};
    if (r.start) c.out.payload["start"] = index_json(*r.start);
    if (r.end) c.out.payload["end"] = index_json(*r.end);
    if (r.witness)
        c.out.payload["witness"] = {{"t", r.witness->t}, {"where", r.witness->where.str()}, {"gap", r.witness->gap}};

    if (!ex.has("verified") && !r.verified) {
        c.out.status = Status::Inconclusive;
        c.out.detail = "path leaves the Fredholm families; no claim";
        return;
    }
    const bool want = ex.boolean("verified", true);
    if (r.verified != want) return c.verdict(false, want ? "path is not Fredholm" : "path unexpectedly verified");
    if (ex.has("index") && r.start && *r.start != ex.index("index"))
        return c.verdict(false, "endpoint index differs from expect.index");
    if (ex.has("witness_t") && r.witness) {
        const json& w = ex.raw("witness_t");
        if (!w.is_array() || w.size() != 2) throw SchemaError("expect.witness_t: expected [lo, hi]");
        const double lo = w[0].get<double>(), hi = w[1].get<double>();
        return c.verdict(r.witness->t >= lo && r.witness->t <= hi, "witness t outside expect.witness_t");
    }
    c.out.status = Status::Pass;
}

void run_semicontinuity(Context& c, const Expect& ex) {
    const auto seq = config::parse_sequence(c.req("sequence"), "sequence");
    const OperatorFamily limit = c.family("limit");
    const ComplexGrid grid = c.grid();
    const double eps = c.epsilon(grid);
    const SemicontinuityResult r = semicontinuity_check(seq, limit, grid, eps, c.knobs.tol);
    c.out.payload = {{"holds", r.holds},       {"grid", grid_json(grid)},          {"distances", r.distances},
                     {"limsup", gridset_json(r.limsup)}, {"limit_weyl_count", r.limit_weyl.size()}};
    if (r.witness) c.out.payload["witness"] = cjson(*r.witness);
    c.out.plot.grid = r.limsup;
    c.verdict(r.holds == ex.boolean("holds", true), "upper semicontinuity verdict differs from expectation");
}

void run_limits(Context& c, const Expect& ex) {
    const json& s = c.req("scenario");
    if (!s.is_string()) throw SchemaError("scenario: expected a string");
    const LimitScenario which = limit_scenario_from_string(s.get<std::string>());
    const auto seq = config::parse_sequence(c.req("sequence"), "sequence");
    const OperatorFamily limit = c.family("limit");
    const ComplexGrid grid = c.grid();
    const double eps = c.epsilon(grid);
    const LimitScenarioResult r = limit_scenario_check(which, seq, limit, grid, eps, c.knobs.tol);
    c.out.payload = {{"scenario", to_string(which)},
                     {"holds", r.holds},
                     {"converged", r.report.converged},
                     {"tail_length", r.report.tail_length},
                     {"tail_policy", "last half; liminf = all, limsup = at least half"},
                     {"grid", grid_json(grid)},
                     {"liminf", gridset_json(r.report.liminf)},
                     {"limsup", gridset_json(r.report.limsup)},
                     {"limit_weyl", gridset_json(r.limit_weyl)}};
    c.out.plot.grid = r.report.liminf;
    c.verdict(r.holds == ex.boolean("holds", true), "limit verdict differs from expectation");
}

void run_ideal_check(Context& c, const Expect& ex) {
    const auto seq = config::parse_sequence(c.req("sequence"), "sequence");
    const OperatorFamily limit = c.family("limit");
    std::vector<OperatorFamily> probes;
    if (c.cfg.contains("probes")) {
        const json& p = c.cfg["probes"];
        if (!p.is_array()) throw SchemaError("probes: expected an array");
        for (std::size_t i = 0; i < p.size(); ++i)
            probes.push_back(config::parse_family(p[i], "probes[" + std::to_string(i) + "]"));
    }
    const ClosureReport r = ideal_closure_check(seq, limit, probes, c.knobs.converge_tol);
    c.out.payload = {{"closed", r.closed},
                     {"limit_compact", r.limit_compact},
                     {"ideal_property", r.ideal_property},
                     {"distances", r.distances}};
    if (!r.limit_compact) c.out.payload["limit_essential_norm"] = r.limit_essential_norm;
    if (r.ideal_property != ex.boolean("ideal_property", true))
        return c.verdict(false, "ideal property verdict differs from expectation");
    c.verdict(r.closed == ex.boolean("closed", true), "closure verdict differs from expectation");
}

} // namespace

RunResult run_scenario(const json& cfg, const RunOptions& opts) {
    RunResult out;
    out.provenance = {{"tool_version", kToolVersion}, {"config_hash", fnv1a_hex(cfg.dump())}};
    if (opts.grid_h) out.provenance["override_grid_h"] = *opts.grid_h;
    if (opts.theta_samples) out.provenance["override_theta_samples"] = *opts.theta_samples;

    std::optional<std::string> expected_error;
    try {
        if (!cfg.is_object()) throw SchemaError("<root>: expected an object");
        if (!cfg.contains("name") || !cfg["name"].is_string()) throw SchemaError("name: missing or not a string");
        if (!cfg.contains("kind") || !cfg["kind"].is_string()) throw SchemaError("kind: missing or not a string");
        out.name = cfg["name"].get<std::string>();
        out.kind = cfg["kind"].get<std::string>();

        config::Knobs knobs = cfg.contains("tolerances") ? config::parse_tolerances(cfg["tolerances"], "tolerances")
                                                         : config::Knobs{};
        if (opts.theta_samples) {
            if (*opts.theta_samples < 1) throw SchemaError("--theta-samples: expected a positive integer");
            knobs.tol.theta_samples = *opts.theta_samples;
        }
        out.provenance["tolerances"] = tolerances_json(knobs);
        Context ctx{cfg, knobs, out, opts};
        const json& ej = cfg.contains("expect") ? cfg["expect"] : json();

        using Runner = void (*)(Context&, const Expect&);
        struct KindSpec {
            const char* name;
            std::vector<std::string_view> keys;
            std::vector<std::string_view> expect_keys;
            Runner run;
        };
        const KindSpec kinds[] = {
            {"index", {"family", "lambda"}, {"index"}, run_index},
            {"index-poly", {"family", "poly"}, {"index"}, run_index_poly},
            {"spectral-map", {"family", "poly"}, {}, run_spectral_map},
            {"weyl", {"family", "grid"}, {"count", "disk"}, run_weyl},
            {"homotopy", {"homotopy"}, {"verified", "index", "witness_t"}, run_homotopy},
            {"semicontinuity", {"sequence", "limit", "grid"}, {"holds"}, run_semicontinuity},
            {"limits", {"scenario", "sequence", "limit", "grid"}, {"holds"}, run_limits},
            {"ideal-check", {"sequence", "limit", "probes"}, {"closed", "ideal_property"}, run_ideal_check},
        };
        const KindSpec* spec = nullptr;
        for (const auto& k : kinds)
            if (out.kind == k.name) spec = &k;
        if (!spec) throw SchemaError("kind: unknown scenario kind '" + out.kind + "'");
        check_keys(cfg, spec->keys);
        const Expect ex(ej, spec->expect_keys);
        expected_error = ex.error();
        spec->run(ctx, ex);
        if (expected_error) {
            out.status = Status::Fail;
            out.detail = "expected error '" + *expected_error + "' but the run completed";
        }
    } catch (const std::exception& e) {
        const std::string name = error_name(e);
        out.payload = {{"error", name}, {"message", e.what()}};
        out.plot = {};
        if (expected_error && *expected_error == name) {
            out.status = Status::Pass;
            out.detail.clear();
        } else {
            const bool soft = name == "hypothesis_violation" || name == "inconclusive";
            out.status = soft ? Status::Inconclusive : Status::Error;
            out.detail = (name == "schema" ? std::string("usage error: ")
                                           : "scenario '" + out.name + "' (" + out.kind + "): " + name + ": ") +
                         e.what();
        }
    }
    return out;
}

json to_json(const RunResult& r) {
    json j = {{"schema_version", kSchemaVersion},
              {"name", r.name},
              {"kind", r.kind},
              {"status", to_string(r.status)},
              {"payload", r.payload},
              {"provenance", r.provenance}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    return j;
}

void emit_plot_data(const RunResult& r, std::ostream& out) {
    char buf[64];
    if (r.plot.grid) {
        out << "re,im,member\n";
        const ComplexGrid& g = r.plot.grid->grid();
        for (auto [i, j] : r.plot.grid->members()) {
            const Complex z = g.point(i, j);
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,1\n", z.real(), z.imag());
            out << buf;
        }
        return;
    }
    if (r.plot.curve) {
        out << "re,im\n";
        for (Complex z : *r.plot.curve) {
            std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", z.real(), z.imag());
            out << buf;
        }
        return;
    }
    throw SchemaError("--plot: payload of a '" + r.kind + "' run is not plottable (needs a grid set or a curve)");
}

} // namespace fredfam
