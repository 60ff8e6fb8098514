#pragma once

#include <span>
#include <vector>

#include "fredfam/op_model.hpp"
#include "fredfam/tolerances.hpp"

namespace fredfam {

/// Pointwise Fredholm data of T - lambda.
struct FredholmReport {
    bool fredholm = false;
    int index = 0;              // meaningful only when fredholm
    double essential_gap = 0.0; // distance of lambda to the essential spectrum
};

/// Finite-section estimates of alpha(T - lambda) and beta(T - lambda).
struct NullityDefect {
    int nullity = 0;
    int defect = 0;
    bool stabilized = false;
    int section_size = 0; // n at which the estimate stabilized
};

/// Sampled symbol curve theta -> a(e^{i theta}), reusable across many lambdas.
class SymbolCurve {
public:
    /// Throws PreconditionError unless samples > 4 * degree(symbol).
    SymbolCurve(LaurentSymbol symbol, int samples);

    std::span<const Complex> samples() const { return samples_; }
    const LaurentSymbol& symbol() const { return symbol_; }

    /// min over samples of |a - lambda|.
    double gap(Complex lambda) const;

    /// Winding number of a - lambda around 0. Throws OnEssentialSpectrumError
    /// when the sampled gap is below `margin`.
    int winding(Complex lambda, double margin) const;

private:
    int winding_refined(Complex lambda) const;

    LaurentSymbol symbol_;
    std::vector<Complex> samples_;
    double step_;  // theta spacing
    double speed_; // bound on |da/dtheta|
};

/// Precomputed Fredholm analysis of one operator, for repeated lambda queries.
class FredholmProbe {
public:
    FredholmProbe(const OperatorSpec& spec, const Tolerances& tol);

    FredholmReport report(Complex lambda) const;
    double essential_gap(Complex lambda) const;
    /// Essential spectrum samples: the symbol curve or the tail values.
    std::span<const Complex> essential_points() const;

private:
    bool toeplitz_;
    double margin_;
    std::vector<SymbolCurve> curve_; // zero or one element
    std::vector<Complex> tails_;
};

/// Winding number of theta -> a(e^{i theta}) - lambda.
int winding_number(const LaurentSymbol& sym, Complex lambda, const Tolerances& tol = {});

/// Fredholmness and index of spec - lambda. The finite-rank part never matters.
FredholmReport point_fredholm(const OperatorSpec& spec, Complex lambda, const Tolerances& tol = {});

/// Nullity/defect of spec - lambda from singular values of finite sections.
/// Independent of the winding route; used to cross-check it.
///
/// Sections keep every nonzero row of the first n columns, so the section is
/// the exact restriction of T - lambda to span(e_0..e_{n-1}). A singular value
/// of the size-2n section is a kernel direction when it is below
/// rank_rel_tol * sigma_max, or when it contracted by decay_ratio relative to
/// the size-n section and lies below half the essential gap. The defect uses
/// the same rule on the adjoint. Throws PreconditionError when spec - lambda
/// is not Fredholm and InstabilityError when the estimate does not settle
/// after two doublings of n.
NullityDefect nullity_defect_oracle(const OperatorSpec& spec, Complex lambda, const Tolerances& tol = {});

} // namespace fredfam
