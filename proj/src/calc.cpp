#include "fredfam/calc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "fredfam/errors.hpp"

namespace fredfam {

Poly::Poly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 2) throw PreconditionError("polynomial must have degree >= 1");
    if (coeffs_.back() == Complex{}) throw PreconditionError("leading coefficient must be nonzero");
}

Complex Poly::operator()(Complex z) const {
    Complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::vector<Complex> Poly::derivative() const {
    std::vector<Complex> out;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) out.push_back(static_cast<double>(k) * coeffs_[k]);
    return out;
}

Complex Poly::derivative_at(Complex z) const {
    const auto d = derivative();
    Complex acc{};
    for (auto it = d.rbegin(); it != d.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Poly operator*(const Poly& p, const Poly& q) {
    std::vector<Complex> out(p.coeffs_.size() + q.coeffs_.size() - 1);
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < q.coeffs_.size(); ++j) out[i + j] += p.coeffs_[i] * q.coeffs_[j];
    return Poly(std::move(out));
}

// ---------------------------------------------------------------- roots

RootList poly_roots(const Poly& p, double cluster_tol) {
    const int n = p.degree();
    const auto& c = p.coeffs();
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    const Eigen::VectorXcd ev = solver.eigenvalues();

    // Single-linkage clusters by union-find over pairs within tolerance.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(ev(i) - ev(j)) < cluster_tol) parent[find(j)] = find(i);

    std::map<int, std::vector<Complex>> clusters;
    for (int i = 0; i < n; ++i) clusters[find(i)].push_back(ev(i));
    RootList roots;
    for (const auto& [id, members] : clusters) {
        Complex mean = std::accumulate(members.begin(), members.end(), Complex{}) / static_cast<double>(members.size());
        roots.push_back({mean, static_cast<int>(members.size())});
    }
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return roots;
}

// ---------------------------------------------------------------- calculus

OperatorSpec poly_apply(const OperatorSpec& spec, const Poly& p) {
    const OperatorSpec id = identity_like(spec);
    const auto& c = p.coeffs();
    // Horner: acc = c_n; acc = acc*T + c_k.
    OperatorSpec acc = linear_combine(c.back(), id, 0.0, id);
    for (int k = p.degree() - 1; k >= 0; --k) acc = linear_combine(1.0, multiply(acc, spec), c[k], id);
    return acc;
}

OperatorFamily poly_apply(const OperatorFamily& fam, const Poly& p) {
    std::map<VertexId, OperatorSpec> out;
    for (const auto& [v, spec] : fam.assignment()) out.emplace(v, poly_apply(spec, p));
    return OperatorFamily(fam.space(), std::move(out), fam.edge_samples());
}

SampledFamily poly_apply(const SampledFamily& sampled, const Poly& p) {
    SampledFamily out{{}, sampled.labeling};
    out.points.reserve(sampled.points.size());
    for (const auto& pt : sampled.points) out.points.push_back({pt.where, poly_apply(pt.spec, p), pt.component});
    return out;
}

std::vector<Complex> fredholm_spectrum(const SampledFamily& sampled, int theta_samples) {
    std::vector<Complex> out;
    for (const auto& pt : sampled.points) {
        if (pt.spec.is_toeplitz()) {
            auto curve = symbol_curve(pt.spec.symbol(), theta_samples);
            out.insert(out.end(), curve.begin(), curve.end());
        } else {
            for (Complex t : pt.spec.core().tails)
                if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
        }
    }
    return out;
}

std::vector<Complex> fredholm_spectrum(const OperatorFamily& fam, int theta_samples) {
    return fredholm_spectrum(sample_family(fam), theta_samples);
}

namespace {

// max over a of the distance to the nearest point of b; b sorted by real part.
double directed_hausdorff(std::span<const Complex> a, const std::vector<Complex>& b_sorted) {
    double worst = 0.0;
    for (Complex z : a) {
        auto it = std::lower_bound(b_sorted.begin(), b_sorted.end(), z.real(),
                                   [](Complex w, double re) { return w.real() < re; });
        double best = std::numeric_limits<double>::infinity();
        for (auto r = it; r != b_sorted.end() && r->real() - z.real() < best; ++r) best = std::min(best, std::abs(*r - z));
        for (auto l = it; l != b_sorted.begin();) {
            --l;
            if (z.real() - l->real() >= best) break;
            best = std::min(best, std::abs(*l - z));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

std::vector<Complex> sorted_by_real(std::span<const Complex> x) {
    std::vector<Complex> out(x.begin(), x.end());
    std::sort(out.begin(), out.end(), [](Complex p, Complex q) { return p.real() < q.real(); });
    return out;
}

} // namespace

double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    return std::max(directed_hausdorff(a, sorted_by_real(b)), directed_hausdorff(b, sorted_by_real(a)));
}

SpectralMapResult spectral_map_check(const OperatorFamily& fam, const Poly& p, int theta_samples) {
    const SampledFamily sampled = sample_family(fam);
    const std::vector<Complex> spectrum = fredholm_spectrum(sampled, theta_samples);

    std::vector<Complex> mapped;
    mapped.reserve(spectrum.size());
    double slope = 0.0;
    for (Complex z : spectrum) {
        mapped.push_back(p(z));
        slope = std::max(slope, std::abs(p.derivative_at(z)));
    }

    SpectralMapResult r;
    r.image_curve = fredholm_spectrum(poly_apply(sampled, p), theta_samples);
    r.distance = hausdorff_distance(mapped, r.image_curve);
    r.tolerance = std::max(10.0 / theta_samples * slope, 1e-9);
    r.pass = r.distance <= r.tolerance;
    return r;
}

namespace {

std::string root_label(const Root& root) {
    return "root (" + std::to_string(root.value.real()) + ", " + std::to_string(root.value.imag()) +
           ") of multiplicity " + std::to_string(root.multiplicity);
}

} // namespace

IndexVector index_via_roots(const OperatorFamily& fam, const Poly& p, const Tolerances& tol) {
    FamilyProbe probe(sample_family(fam), tol);
    IndexVector total;
    for (VertexId c : representatives(probe.sampled().labeling)) total[c] = 0;
    for (const Root& root : poly_roots(p, tol.cluster_tol)) {
        IndexVector at_root;
        try {
            at_root = probe.index(root.value);
        } catch (const NotFredholmError& e) {
            throw IllPosedError(root_label(root) + " lies on an essential curve: " + e.what());
        } catch (const DiscretizationError& e) {
            // Samples are Fredholm at the root but an edge crosses it in between.
            throw IllPosedError(root_label(root) + " is crossed by an essential curve between samples: " + e.what());
        }
        for (const auto& [c, ind] : at_root) total[c] += root.multiplicity * ind;
    }
    return total;
}

} // namespace fredfam
