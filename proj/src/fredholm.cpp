#include "fredfam/fredholm.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include <Eigen/SVD>

#include "fredfam/errors.hpp"

namespace fredfam {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string describe(Complex z) {
    return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

// Signed crossings of the ray {lambda + t, t > 0} by the closed polygon.
int polygon_winding(std::span<const Complex> pts, Complex lambda) {
    int wn = 0;
    const std::size_t n = pts.size();
    for (std::size_t k = 0; k < n; ++k) {
        Complex a = pts[k] - lambda;
        Complex b = pts[(k + 1) % n] - lambda;
        double cross = a.real() * b.imag() - b.real() * a.imag();
        if (a.imag() <= 0.0) {
            if (b.imag() > 0.0 && cross > 0.0) ++wn;
        } else {
            if (b.imag() <= 0.0 && cross < 0.0) --wn;
        }
    }
    return wn;
}

// Singular values in ascending order.
Eigen::VectorXd ascending_singular_values(const Eigen::MatrixXcd& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    Eigen::VectorXd s = svd.singularValues();
    return s.reverse();
}

int count_null(const Eigen::VectorXd& small, const Eigen::VectorXd& large, double gap, const Tolerances& tol) {
    const double sigma_max = large.size() ? large(large.size() - 1) : 0.0;
    int count = 0;
    for (Eigen::Index k = 0; k < small.size(); ++k) {
        const double s2 = large(k);
        const bool tiny = s2 < tol.rank_rel_tol * sigma_max;
        const bool decaying = s2 <= tol.decay_ratio * small(k) && s2 < 0.5 * gap;
        if (tiny || decaying) ++count;
    }
    return count;
}

} // namespace

// ---------------------------------------------------------------- curve

SymbolCurve::SymbolCurve(LaurentSymbol symbol, int samples)
    : symbol_(std::move(symbol)), step_(kTwoPi / samples), speed_(symbol_.derivative_bound()) {
    if (samples <= 4 * symbol_.degree())
        throw PreconditionError("theta_samples = " + std::to_string(samples) +
                                " must exceed 4 * symbol degree = " + std::to_string(4 * symbol_.degree()));
    samples_ = symbol_curve(symbol_, samples);
}

double SymbolCurve::gap(Complex lambda) const {
    double best = std::numeric_limits<double>::infinity();
    for (Complex w : samples_) best = std::min(best, std::abs(w - lambda));
    return best;
}

int SymbolCurve::winding(Complex lambda, double margin) const {
    const double g = gap(lambda);
    if (g < margin)
        throw OnEssentialSpectrumError("symbol curve passes within " + std::to_string(g) + " of lambda = " +
                                       describe(lambda));
    // Every arc between consecutive samples stays within step*speed of its
    // start point. When that is below the gap, the polygon and the curve are
    // homotopic in the plane minus lambda.
    if (g > step_ * speed_) return polygon_winding(samples_, lambda);
    return winding_refined(lambda);
}

int SymbolCurve::winding_refined(Complex lambda) const {
    // Argument accumulation with bisection: an arc of parameter length dt
    // starting at w stays in the disk |z - w| <= dt*speed, so when that disk
    // misses 0 the principal argument of the chord ratio is the exact change.
    double total = 0.0;
    const std::size_t n = samples_.size();
    struct Piece {
        double t0, t1;
        Complex w0, w1;
        int depth;
    };
    std::vector<Piece> stack;
    for (std::size_t k = 0; k < n; ++k) {
        stack.push_back({step_ * k, step_ * (k + 1), samples_[k] - lambda, samples_[(k + 1) % n] - lambda, 0});
        while (!stack.empty()) {
            Piece p = stack.back();
            stack.pop_back();
            const double reach = (p.t1 - p.t0) * speed_;
            if (std::min(std::abs(p.w0), std::abs(p.w1)) > reach) {
                total += std::arg(p.w1 / p.w0);
                continue;
            }
            if (p.depth > 60)
                throw OnEssentialSpectrumError("symbol curve passes through lambda = " + describe(lambda));
            const double tm = 0.5 * (p.t0 + p.t1);
            const Complex wm = symbol_eval(symbol_, tm) - lambda;
            stack.push_back({tm, p.t1, wm, p.w1, p.depth + 1});
            stack.push_back({p.t0, tm, p.w0, wm, p.depth + 1});
        }
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

// ---------------------------------------------------------------- probe

FredholmProbe::FredholmProbe(const OperatorSpec& spec, const Tolerances& tol)
    : toeplitz_(spec.is_toeplitz()), margin_(tol.fredholm_margin) {
    if (toeplitz_)
        curve_.emplace_back(spec.symbol(), tol.theta_samples);
    else
        tails_ = spec.core().tails;
}

double FredholmProbe::essential_gap(Complex lambda) const {
    if (toeplitz_) return curve_.front().gap(lambda);
    double best = std::numeric_limits<double>::infinity();
    for (Complex t : tails_) best = std::min(best, std::abs(t - lambda));
    return best;
}

FredholmReport FredholmProbe::report(Complex lambda) const {
    FredholmReport r;
    r.essential_gap = essential_gap(lambda);
    r.fredholm = r.essential_gap >= margin_;
    if (r.fredholm && toeplitz_) r.index = -curve_.front().winding(lambda, margin_);
    return r;
}

std::span<const Complex> FredholmProbe::essential_points() const {
    if (toeplitz_) return curve_.front().samples();
    return tails_;
}

// ---------------------------------------------------------------- free functions

int winding_number(const LaurentSymbol& sym, Complex lambda, const Tolerances& tol) {
    return SymbolCurve(sym, tol.theta_samples).winding(lambda, tol.fredholm_margin);
}

FredholmReport point_fredholm(const OperatorSpec& spec, Complex lambda, const Tolerances& tol) {
    return FredholmProbe(spec, tol).report(lambda);
}

NullityDefect nullity_defect_oracle(const OperatorSpec& spec, Complex lambda, const Tolerances& tol) {
    const FredholmReport fr = point_fredholm(spec, lambda, tol);
    if (!fr.fredholm)
        throw PreconditionError("nullity/defect oracle needs a Fredholm point; essential gap at " + describe(lambda) +
                                " is " + std::to_string(fr.essential_gap));
    if (tol.oracle_n < 1) throw PreconditionError("oracle_n must be positive");

    const OperatorSpec shifted = linear_combine(1.0, spec, -lambda, identity_like(spec));
    // Rows below this many past the last column are identically zero.
    std::size_t reach = shifted.min_truncation();

    struct Spectra {
        Eigen::VectorXd direct;
        Eigen::VectorXd adjoint;
    };
    std::map<std::size_t, Spectra> cache;
    auto spectra = [&](std::size_t n) -> const Spectra& {
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
        const std::size_t rows = n + reach;
        Spectra s{ascending_singular_values(section(shifted, rows, n)),
                  ascending_singular_values(section(shifted, n, rows).adjoint())};
        return cache.emplace(n, std::move(s)).first->second;
    };
    auto estimate = [&](std::size_t n) {
        const Spectra& a = spectra(n);
        const Spectra& b = spectra(2 * n);
        return std::pair{count_null(a.direct, b.direct, fr.essential_gap, tol),
                         count_null(a.adjoint, b.adjoint, fr.essential_gap, tol)};
    };

    std::size_t n = static_cast<std::size_t>(tol.oracle_n);
    auto current = estimate(n);
    for (int doubling = 0; doubling < 2; ++doubling) {
        auto next = estimate(2 * n);
        if (next == current) return {current.first, current.second, true, static_cast<int>(n)};
        n *= 2;
        current = next;
    }
    throw InstabilityError("finite-section nullity/defect did not stabilize up to n = " + std::to_string(2 * n) +
                           "; increase oracle_n");
}

} // namespace fredfam
