#include "fredfam/config.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

#include "fredfam/errors.hpp"

namespace fredfam::config {

namespace {

std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string at_index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw SchemaError((path.empty() ? std::string("<root>") : path) + ": " + msg);
}

void expect_object(const Json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(join(path, key), "unknown key");
}

const Json& required(const Json& obj, const std::string& path, std::string_view key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(join(path, key), "missing required key");
    return *it;
}

const Json& expect_array(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

double as_number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
}

long long as_integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long long>();
}

std::size_t as_index(const Json& j, const std::string& path) {
    const long long k = as_integer(j, path);
    if (k < 0) fail(path, "expected a non-negative integer");
    return static_cast<std::size_t>(k);
}

int as_positive_int(const Json& j, const std::string& path) {
    const long long k = as_integer(j, path);
    if (k < 1 || k > 1'000'000'000) fail(path, "expected a positive integer");
    return static_cast<int>(k);
}

double as_positive(const Json& j, const std::string& path) {
    const double x = as_number(j, path);
    if (!(x > 0.0)) fail(path, "expected a positive number");
    return x;
}

std::vector<Complex> complex_list(const Json& j, const std::string& path) {
    std::vector<Complex> out;
    for (std::size_t i = 0; i < expect_array(j, path).size(); ++i) out.push_back(parse_complex(j[i], at_index(path, i)));
    return out;
}

// [[i, re, im], ...] with distinct indices.
SparseVector sparse_vector(const Json& j, const std::string& path) {
    SparseVector out;
    for (std::size_t n = 0; n < expect_array(j, path).size(); ++n) {
        const std::string p = at_index(path, n);
        if (!j[n].is_array() || j[n].size() != 3) fail(p, "expected [index, re, im]");
        const std::size_t i = as_index(j[n][0], p + "[0]");
        if (out.count(i)) fail(p, "duplicate index " + std::to_string(i));
        out[i] = {as_number(j[n][1], p + "[1]"), as_number(j[n][2], p + "[2]")};
    }
    return out;
}

FiniteRankPart compact_part(const Json& j, const std::string& path) {
    FiniteRankPart out;
    for (std::size_t n = 0; n < expect_array(j, path).size(); ++n) {
        const std::string p = at_index(path, n);
        expect_object(j[n], p, {"u", "v"});
        out.terms.push_back({sparse_vector(required(j[n], p, "u"), join(p, "u")),
                             sparse_vector(required(j[n], p, "v"), join(p, "v"))});
    }
    return out;
}

VertexId vertex_key(const std::string& key, const std::string& path) {
    if (key.empty() || key.size() > 9 || !std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; }))
        fail(path, "assignment keys must be non-negative integer strings");
    return std::stoi(key);
}

} // namespace

Complex parse_complex(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected [re, im]");
    return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

OperatorSpec parse_spec(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const Json& kind = required(j, path, "kind");
    if (!kind.is_string()) fail(join(path, "kind"), "expected a string");
    FiniteRankPart compact;

    if (kind == "toeplitz") {
        expect_object(j, path, {"kind", "coeffs", "compact"});
        if (j.contains("compact")) compact = compact_part(j["compact"], join(path, "compact"));
        const std::string p = join(path, "coeffs");
        const Json& coeffs = expect_array(required(j, path, "coeffs"), p);
        std::map<int, Complex> c;
        for (std::size_t n = 0; n < coeffs.size(); ++n) {
            const std::string q = at_index(p, n);
            if (!coeffs[n].is_array() || coeffs[n].size() != 3) fail(q, "expected [k, re, im]");
            const long long k = as_integer(coeffs[n][0], q + "[0]");
            if (std::abs(k) > 4096) fail(q + "[0]", "symbol power out of range");
            if (c.count(static_cast<int>(k))) fail(q, "duplicate power " + std::to_string(k));
            c[static_cast<int>(k)] = {as_number(coeffs[n][1], q + "[1]"), as_number(coeffs[n][2], q + "[2]")};
        }
        return OperatorSpec::toeplitz(LaurentSymbol(std::move(c)), std::move(compact));
    }
    if (kind == "diagonal") {
        expect_object(j, path, {"kind", "head", "tails", "compact"});
        if (j.contains("compact")) compact = compact_part(j["compact"], join(path, "compact"));
        DiagonalCore core;
        if (j.contains("head")) core.head = complex_list(j["head"], join(path, "head"));
        core.tails = complex_list(required(j, path, "tails"), join(path, "tails"));
        if (core.tails.empty()) fail(join(path, "tails"), "must be nonempty");
        return OperatorSpec::diagonal(std::move(core), std::move(compact));
    }
    fail(join(path, "kind"), "expected \"toeplitz\" or \"diagonal\"");
}

ParamSpace parse_space(const Json& j, const std::string& path) {
    expect_object(j, path, {"vertices", "edges"});
    ParamSpace space;
    const std::string vp = join(path, "vertices");
    const Json& vs = expect_array(required(j, path, "vertices"), vp);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const long long v = as_integer(vs[i], at_index(vp, i));
        if (v < 0 || v > 1'000'000'000) fail(at_index(vp, i), "vertex ids are non-negative integers");
        space.vertices.push_back(static_cast<VertexId>(v));
    }
    if (j.contains("edges")) {
        const std::string ep = join(path, "edges");
        const Json& es = expect_array(j["edges"], ep);
        for (std::size_t i = 0; i < es.size(); ++i) {
            const std::string q = at_index(ep, i);
            if (!es[i].is_array() || es[i].size() != 2) fail(q, "expected [a, b]");
            space.edges.emplace_back(static_cast<VertexId>(as_integer(es[i][0], q + "[0]")),
                                     static_cast<VertexId>(as_integer(es[i][1], q + "[1]")));
        }
    }
    try {
        space.validate();
    } catch (const StructuralError& e) {
        fail(path, e.what());
    }
    return space;
}

OperatorFamily parse_family(const Json& j, const std::string& path) {
    expect_object(j, path, {"space", "assignment", "edge_samples"});
    ParamSpace space = j.contains("space") ? parse_space(j["space"], join(path, "space")) : ParamSpace{};
    const std::string ap = join(path, "assignment");
    const Json& a = required(j, path, "assignment");
    if (!a.is_object()) fail(ap, "expected an object");
    std::map<VertexId, OperatorSpec> assignment;
    for (const auto& [key, value] : a.items()) {
        const std::string p = join(ap, key);
        assignment.emplace(vertex_key(key, p), parse_spec(value, p));
    }
    // A family without a space block lives on its assigned vertices, no edges.
    if (!j.contains("space"))
        for (const auto& [v, s] : assignment) space.vertices.push_back(v);
    const int k = j.contains("edge_samples") ? as_positive_int(j["edge_samples"], join(path, "edge_samples")) : 8;
    return OperatorFamily(std::move(space), std::move(assignment), k);
}

ComplexGrid parse_grid(const Json& j, const std::string& path) {
    expect_object(j, path, {"re", "im", "h"});
    ComplexGrid g;
    auto range = [&](const char* key, double& lo, double& hi) {
        const std::string p = join(path, key);
        if (!j.contains(key)) return;
        if (!j[key].is_array() || j[key].size() != 2) fail(p, "expected [min, max]");
        lo = as_number(j[key][0], p + "[0]");
        hi = as_number(j[key][1], p + "[1]");
    };
    range("re", g.re_min, g.re_max);
    range("im", g.im_min, g.im_max);
    if (j.contains("h")) g.h = as_positive(j["h"], join(path, "h"));
    try {
        g.validate();
    } catch (const PreconditionError& e) {
        fail(path, e.what());
    }
    return g;
}

Poly parse_poly(const Json& j, const std::string& path) {
    expect_object(j, path, {"coeffs"});
    std::vector<Complex> c = complex_list(required(j, path, "coeffs"), join(path, "coeffs"));
    try {
        return Poly(std::move(c));
    } catch (const PreconditionError& e) {
        fail(join(path, "coeffs"), e.what());
    }
}

std::vector<OperatorFamily> parse_sequence(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    std::vector<OperatorFamily> out;
    if (j.contains("families")) {
        expect_object(j, path, {"families"});
        const std::string p = join(path, "families");
        const Json& fs = expect_array(j["families"], p);
        for (std::size_t i = 0; i < fs.size(); ++i) out.push_back(parse_family(fs[i], at_index(p, i)));
    } else {
        expect_object(j, path, {"n", "base", "perturbation"});
        const std::string np = join(path, "n");
        const Json& n = required(j, path, "n");
        if (!n.is_array() || n.size() != 2) fail(np, "expected [first, last]");
        const int first = as_positive_int(n[0], np + "[0]");
        const int last = as_positive_int(n[1], np + "[1]");
        if (last < first || last - first > 4096) fail(np, "expected first <= last, at most 4097 terms");
        const OperatorFamily base = parse_family(required(j, path, "base"), join(path, "base"));
        const OperatorFamily pert = parse_family(required(j, path, "perturbation"), join(path, "perturbation"));
        for (int k = first; k <= last; ++k) out.push_back(combine_families(1.0, base, 1.0 / k, pert));
    }
    if (out.empty()) fail(path, "sequence is empty");
    return out;
}

HomotopyInput parse_homotopy(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::string tp = join(path, "t");
    std::vector<double> t;
    const Json& tj = expect_array(required(j, path, "t"), tp);
    for (std::size_t i = 0; i < tj.size(); ++i) {
        t.push_back(as_number(tj[i], at_index(tp, i)));
        if (t.back() < 0.0 || t.back() > 1.0) fail(at_index(tp, i), "t must lie in [0, 1]");
        if (i > 0 && t[i] <= t[i - 1]) fail(at_index(tp, i), "t must be strictly increasing");
    }
    if (t.size() < 2 || t.front() != 0.0 || t.back() != 1.0) fail(tp, "t must start at 0, end at 1, have >= 2 points");

    if (j.contains("families")) {
        expect_object(j, path, {"t", "families"});
        const std::string fp = join(path, "families");
        const Json& fs = expect_array(j["families"], fp);
        if (fs.size() != t.size()) fail(fp, "needs one family per t value");
        std::vector<PathStep> steps;
        for (std::size_t i = 0; i < fs.size(); ++i) steps.push_back({t[i], parse_family(fs[i], at_index(fp, i))});
        return {steps.front().family, steps.back().family, steps};
    }
    expect_object(j, path, {"t", "from", "to"});
    OperatorFamily f0 = parse_family(required(j, path, "from"), join(path, "from"));
    OperatorFamily f1 = parse_family(required(j, path, "to"), join(path, "to"));
    auto steps = linear_path(f0, f1, t);
    return {std::move(f0), std::move(f1), std::move(steps)};
}

Knobs parse_tolerances(const Json& j, const std::string& path) {
    expect_object(j, path,
                  {"fredholm_margin", "rank_rel_tol", "theta_samples", "norm_theta_samples", "oracle_n", "decay_ratio",
                   "cluster_tol", "epsilon", "converge_tol"});
    Knobs k;
    auto num = [&](const char* key, double& dst) {
        if (j.contains(key)) dst = as_positive(j[key], join(path, key));
    };
    auto count = [&](const char* key, int& dst) {
        if (j.contains(key)) dst = as_positive_int(j[key], join(path, key));
    };
    num("fredholm_margin", k.tol.fredholm_margin);
    num("rank_rel_tol", k.tol.rank_rel_tol);
    count("theta_samples", k.tol.theta_samples);
    count("norm_theta_samples", k.tol.norm_theta_samples);
    count("oracle_n", k.tol.oracle_n);
    num("decay_ratio", k.tol.decay_ratio);
    num("cluster_tol", k.tol.cluster_tol);
    num("converge_tol", k.converge_tol);
    if (j.contains("epsilon")) k.epsilon = as_positive(j["epsilon"], join(path, "epsilon"));
    if (k.tol.decay_ratio >= 1.0) fail(join(path, "decay_ratio"), "must be below 1");
    return k;
}

} // namespace fredfam::config
