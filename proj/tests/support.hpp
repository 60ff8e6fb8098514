#pragma once

// Shared test helpers: seeded generators, a corpus of named families, and
// oracles computed by routes independent of the library under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fredfam/family.hpp"
#include "fredfam/op_model.hpp"
#include "fredfam/param_space.hpp"

namespace testsupport {

using fredfam::Complex;
using fredfam::DiagonalCore;
using fredfam::FiniteRankPart;
using fredfam::LaurentSymbol;
using fredfam::OperatorFamily;
using fredfam::OperatorSpec;
using fredfam::ParamSpace;
using fredfam::VertexId;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline Complex random_complex(Rng& rng, double r = 1.0) { return {uniform(rng, -r, r), uniform(rng, -r, r)}; }

inline LaurentSymbol toeplitz_symbol(std::map<int, Complex> c) { return LaurentSymbol(std::move(c)); }
inline OperatorSpec toeplitz(std::map<int, Complex> c, FiniteRankPart k = {}) {
    return OperatorSpec::toeplitz(LaurentSymbol(std::move(c)), std::move(k));
}
inline OperatorSpec shift() { return toeplitz({{1, 1.0}}); }
inline OperatorSpec backward_shift() { return toeplitz({{-1, 1.0}}); }
inline OperatorSpec diagonal(std::vector<Complex> head, std::vector<Complex> tails, FiniteRankPart k = {}) {
    return OperatorSpec::diagonal(DiagonalCore{std::move(head), std::move(tails)}, std::move(k));
}

/// e_i (x) e_j^* scaled by c.
inline FiniteRankPart unit_rank_one(std::size_t i, std::size_t j, Complex c = 1.0) {
    return FiniteRankPart{{{{{i, c}}, {{j, 1.0}}}}};
}

/// Random Laurent polynomial with powers in [-deg, deg].
inline LaurentSymbol random_symbol(Rng& rng, int deg, double scale = 1.0) {
    std::map<int, Complex> c;
    for (int k = -deg; k <= deg; ++k) c[k] = random_complex(rng, scale);
    return LaurentSymbol(std::move(c));
}

/// Random finite-rank part with `rank` terms supported in [0, support).
inline FiniteRankPart random_compact(Rng& rng, int rank, int support, double scale = 1.0) {
    FiniteRankPart k;
    for (int t = 0; t < rank; ++t) {
        fredfam::SparseVector u, v;
        const int nu = uniform_int(rng, 1, 3), nv = uniform_int(rng, 1, 3);
        for (int i = 0; i < nu; ++i) u[static_cast<std::size_t>(uniform_int(rng, 0, support - 1))] = random_complex(rng, scale);
        for (int i = 0; i < nv; ++i) v[static_cast<std::size_t>(uniform_int(rng, 0, support - 1))] = random_complex(rng, scale);
        k.terms.push_back({u, v});
    }
    return k;
}

/// min over a fine theta grid of |a - lambda|, computed directly.
inline double curve_gap(const LaurentSymbol& a, Complex lambda, int samples = 8192) {
    double best = 1e300;
    for (int s = 0; s < samples; ++s) {
        const double th = 2.0 * std::numbers::pi * s / samples;
        Complex v{};
        for (const auto& [k, c] : a.coeffs()) v += c * std::polar(1.0, k * th);
        best = std::min(best, std::abs(v - lambda));
    }
    return best;
}

// ---------------------------------------------------------------- oracles

/// Winding number of a(e^{i theta}) - lambda around 0 from the roots of
/// z^m (a(z) - lambda): (#roots in the open unit disk) - m.
inline int winding_by_roots(const LaurentSymbol& a, Complex lambda) {
    std::map<int, Complex> c = a.coeffs();
    c[0] -= lambda;
    int lo = 0, hi = 0;
    for (const auto& [k, v] : c)
        if (v != Complex{}) {
            lo = std::min(lo, k);
            hi = std::max(hi, k);
        }
    const int m = -lo;
    std::vector<Complex> p(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& [k, v] : c)
        if (k >= lo && k <= hi) p[static_cast<std::size_t>(k - lo)] = v;
    while (p.size() > 1 && p.back() == Complex{}) p.pop_back();
    const int n = static_cast<int>(p.size()) - 1;
    int inside = 0;
    // Leading zeros of p are roots at the origin.
    std::size_t first = 0;
    while (first < p.size() && p[first] == Complex{}) ++first;
    inside += static_cast<int>(first);
    const int deg = n - static_cast<int>(first);
    if (deg > 0) {
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
        for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -p[first + i] / p[first + deg];
        const Eigen::VectorXcd roots = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(comp, false).eigenvalues();
        for (Eigen::Index i = 0; i < roots.size(); ++i) inside += std::abs(roots(i)) < 1.0 ? 1 : 0;
    }
    return inside - m;
}

/// Leading n x n block of the product of two operators, from truncations
/// large enough that every intermediate index is present.
inline Eigen::MatrixXcd product_block(const OperatorSpec& s, const OperatorSpec& t, std::size_t n) {
    const std::size_t big = n + s.min_truncation() + t.min_truncation() + 4;
    return (fredfam::truncate(s, big) * fredfam::truncate(t, big)).topLeftCorner(n, n);
}

/// Components by breadth-first search, labelled by smallest member.
inline std::map<VertexId, VertexId> components_bfs(const ParamSpace& space) {
    std::map<VertexId, std::set<VertexId>> adj;
    for (VertexId v : space.vertices) adj[v];
    for (auto [a, b] : space.edges) {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    std::map<VertexId, VertexId> label;
    for (auto& [start, nb] : adj) {
        if (label.count(start)) continue;
        std::vector<VertexId> seen{start};
        std::queue<VertexId> q;
        q.push(start);
        std::set<VertexId> visited{start};
        while (!q.empty()) {
            VertexId x = q.front();
            q.pop();
            for (VertexId y : adj[x])
                if (visited.insert(y).second) {
                    q.push(y);
                    seen.push_back(y);
                }
        }
        const VertexId id = *std::min_element(seen.begin(), seen.end());
        for (VertexId x : seen) label[x] = id;
    }
    return label;
}

/// Points of the closed disk |z - c| <= r on a grid, the disk oracle.
inline bool in_disk(Complex z, Complex c, double r) { return std::abs(z - c) <= r; }

// ---------------------------------------------------------------- corpus

struct CorpusEntry {
    std::string name;
    OperatorFamily family;
    Complex lambda; // a point where the family is Fredholm
};

inline ParamSpace cycle4(int base = 0) {
    return {{base, base + 1, base + 2, base + 3}, {{base, base + 1}, {base + 1, base + 2}, {base + 2, base + 3}, {base + 3, base}}};
}

inline std::vector<CorpusEntry> corpus() {
    std::vector<CorpusEntry> c;
    auto one = [](const OperatorSpec& s) { return OperatorFamily::constant(s); };
    c.push_back({"shift", one(shift()), 0.0});
    c.push_back({"backward_shift", one(backward_shift()), 0.0});
    c.push_back({"shift_backward_two_components", OperatorFamily({{0, 1}, {}}, {{0, shift()}, {1, backward_shift()}}), 0.0});
    c.push_back({"cycle_translates",
                 OperatorFamily(cycle4(), {{0, toeplitz({{1, 1.0}, {0, -0.5}})}, {1, toeplitz({{1, 1.0}, {0, Complex(0, -0.5)}})},
                                           {2, toeplitz({{1, 1.0}, {0, 0.5}})}, {3, toeplitz({{1, 1.0}, {0, Complex(0, 0.5)}})}}),
                 0.0});
    c.push_back({"path_z2", OperatorFamily({{0, 1, 2}, {{0, 1}, {1, 2}}},
                                           {{0, toeplitz({{2, 1.0}})}, {1, toeplitz({{2, 1.0}, {0, 0.3}})}, {2, toeplitz({{2, 1.0}, {0, Complex(0, -0.3)}})}}),
                 0.0});
    c.push_back({"identity", one(toeplitz({{0, 1.0}})), 0.0});
    c.push_back({"shift_big_rank_one", one(toeplitz({{1, 1.0}}, unit_rank_one(0, 0, 100.0))), 0.0});
    c.push_back({"mixed_powers_path", OperatorFamily({{0, 1}, {{0, 1}}}, {{0, toeplitz({{-2, 1.0}, {1, 0.5}})}, {1, toeplitz({{-2, 1.0}, {1, 0.3}})}}), 0.0});
    c.push_back({"diagonal_two_tails", one(diagonal({7.0}, {0.0, 1.0})), 0.5});
    c.push_back({"diagonal_harmonic_heads", one(diagonal({1.0, 0.5, 1.0 / 3, 0.25}, {0.0})), Complex(0.1, 0.2)});
    c.push_back({"two_cycles",
                 OperatorFamily(ParamSpace{{0, 1, 2, 3, 4, 5, 6, 7},
                                           {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4}}},
                                {{0, shift()}, {1, toeplitz({{1, 1.0}, {0, 0.2}})}, {2, shift()}, {3, toeplitz({{1, 1.1}})},
                                 {4, backward_shift()}, {5, toeplitz({{-1, 1.0}, {0, 0.2}})}, {6, backward_shift()}, {7, toeplitz({{-1, 0.9}})}}),
                 0.0});
    c.push_back({"double_radius", one(toeplitz({{1, 2.0}})), Complex(0.5, 0.5)});
    c.push_back({"near_circle", one(toeplitz({{1, 1.0}, {0, -0.9}})), 0.0});
    c.push_back({"shifted_circle", one(toeplitz({{1, 1.0}, {0, 3.0}})), 3.0});
    c.push_back({"ellipse", one(toeplitz({{1, 1.0}, {-1, 0.3}})), 0.1});
    c.push_back({"diagonal_with_compact", OperatorFamily({{0, 1}, {{0, 1}}}, {{0, diagonal({2.0}, {1.0, -1.0}, unit_rank_one(0, 3))}, {1, diagonal({3.0}, {1.0, Complex(0, 1)})}}), 0.0});
    c.push_back({"cubic_triangle", OperatorFamily({{0, 1, 2}, {{0, 1}, {1, 2}, {2, 0}}},
                                                  {{0, toeplitz({{3, 1.0}, {0, 0.1}})}, {1, toeplitz({{3, 1.0}, {1, 0.2}})}, {2, toeplitz({{3, 1.0}, {-1, 0.2}})}}),
                 0.0});
    c.push_back({"coanalytic_compact", one(toeplitz({{-3, 1.0}, {-1, 0.4}}, unit_rank_one(2, 5, Complex(0, 3)))), 0.0});
    c.push_back({"star_graph", OperatorFamily({{0, 1, 2, 3}, {{0, 1}, {0, 2}, {0, 3}}},
                                              {{0, toeplitz({{1, 1.0}, {-1, 0.2}})}, {1, toeplitz({{1, 1.0}})}, {2, toeplitz({{1, 1.0}, {2, 0.2}})}, {3, toeplitz({{1, Complex(0, 1)}})}}),
                 0.0});
    c.push_back({"isolated_mixed", OperatorFamily({{0, 1, 2}, {}}, {{0, toeplitz({{0, 2.0}})}, {1, toeplitz({{2, 1.0}})}, {2, toeplitz({{-1, 1.0}, {0, 0.1}})}}), 0.0});
    return c;
}

} // namespace testsupport
