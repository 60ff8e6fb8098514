#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace fredfam {

using Complex = std::complex<double>;

/// Finitely supported vector in the sequence space, keyed by coordinate.
using SparseVector = std::map<std::size_t, Complex>;

/// Laurent polynomial a(z) = sum_k c_k z^k. Coefficients are stored exactly as
/// given. Results of arithmetic drop coefficients that are exactly zero.
class LaurentSymbol {
public:
    LaurentSymbol() = default;
    explicit LaurentSymbol(std::map<int, Complex> coeffs) : coeffs_(std::move(coeffs)) {}

    static LaurentSymbol constant(Complex c) { return LaurentSymbol({{0, c}}); }
    static LaurentSymbol monomial(int power, Complex c = 1.0) { return LaurentSymbol({{power, c}}); }

    const std::map<int, Complex>& coeffs() const noexcept { return coeffs_; }
    Complex coeff(int k) const;

    // Largest positive / most negative power with a stored coefficient (0 if none).
    int max_power() const;
    int min_power() const;
    // m such that the support lies in [-m, m].
    int degree() const { return std::max(max_power(), -min_power()); }

    // True when every stored coefficient is exactly zero.
    bool is_zero() const;
    // Polynomial in z (no negative powers) / in 1/z (no positive powers).
    bool is_analytic() const { return min_power() >= 0; }
    bool is_coanalytic() const { return max_power() <= 0; }

    // Bound on |d/dtheta a(e^{i theta})|: sum |k| |c_k|.
    double derivative_bound() const;
    double coefficient_l1() const;

    // Symbol of the adjoint Toeplitz operator: c_k -> conj(c_{-k}).
    LaurentSymbol adjoint() const;

    friend LaurentSymbol operator*(const LaurentSymbol& a, const LaurentSymbol& b);
    bool operator==(const LaurentSymbol&) const = default;

private:
    std::map<int, Complex> coeffs_;
};

/// Sum of linear combinations: alpha*a + beta*b, exact zeros dropped.
LaurentSymbol combine(Complex alpha, const LaurentSymbol& a, Complex beta, const LaurentSymbol& b);

/// a(e^{i theta}).
Complex symbol_eval(const LaurentSymbol& sym, double theta);

/// Values a(e^{2 pi i k / samples}) for k = 0..samples-1.
std::vector<Complex> symbol_curve(const LaurentSymbol& sym, int samples);

/// The rank-one operator x -> <x, v> u, i.e. matrix entries u_i conj(v_j).
struct RankOneTerm {
    SparseVector u;
    SparseVector v;
    bool operator==(const RankOneTerm&) const = default;
};

/// Finite-rank part sum_t u_t (x) v_t^*.
struct FiniteRankPart {
    std::vector<RankOneTerm> terms;

    bool empty() const { return terms.empty(); }
    // Largest coordinate appearing in any u or v.
    std::optional<std::size_t> max_support() const;
    // Operator norm of the finite-rank part (exact up to rounding).
    double norm_bound() const;
    bool operator==(const FiniteRankPart&) const = default;
};

/// Diagonal operator: position j carries head[j] for j < head.size(), then
/// tails are repeated round-robin.
struct DiagonalCore {
    std::vector<Complex> head;
    std::vector<Complex> tails;

    Complex entry(std::size_t j) const;
    // Throws PreconditionError when tails is empty.
    void validate() const;
    bool is_zero() const;
    bool operator==(const DiagonalCore&) const = default;
};

struct ToeplitzKind {
    LaurentSymbol symbol;
    bool operator==(const ToeplitzKind&) const = default;
};

struct DiagonalKind {
    DiagonalCore core;
    bool operator==(const DiagonalKind&) const = default;
};

/// A bounded operator on the square-summable sequence space:
/// (Toeplitz(a) or Diag(core)) + finite-rank part.
class OperatorSpec {
public:
    using Kind = std::variant<ToeplitzKind, DiagonalKind>;

    OperatorSpec() : kind_(ToeplitzKind{}) {}
    OperatorSpec(Kind kind, FiniteRankPart compact);

    static OperatorSpec toeplitz(LaurentSymbol symbol, FiniteRankPart compact = {});
    static OperatorSpec diagonal(DiagonalCore core, FiniteRankPart compact = {});

    bool is_toeplitz() const { return std::holds_alternative<ToeplitzKind>(kind_); }
    bool is_diagonal() const { return std::holds_alternative<DiagonalKind>(kind_); }
    const Kind& kind() const { return kind_; }
    const LaurentSymbol& symbol() const;   // PreconditionError unless Toeplitz
    const DiagonalCore& core() const;      // PreconditionError unless diagonal
    const FiniteRankPart& compact() const { return compact_; }

    // The same operator core with another finite-rank part.
    OperatorSpec with_compact(FiniteRankPart compact) const;

    // Smallest n accepted by truncate().
    std::size_t min_truncation() const;
    // Upper bound on the operator norm: sum|c_k| (or max|d_j|) + ||finite-rank part||.
    double norm_bound() const;
    // True when the non-compact core is exactly zero.
    bool core_is_zero() const;

    bool operator==(const OperatorSpec&) const = default;

private:
    Kind kind_;
    FiniteRankPart compact_;
};

/// Rows x cols leading block of the infinite matrix. No size precondition.
Eigen::MatrixXcd section(const OperatorSpec& spec, std::size_t rows, std::size_t cols);

/// n x n leading block. Throws PreconditionError when n < spec.min_truncation().
Eigen::MatrixXcd truncate(const OperatorSpec& spec, std::size_t n);

/// alpha*s + beta*t. Throws KindMismatchError for mixed kinds or diagonal cores
/// with different head or tail lengths.
OperatorSpec linear_combine(Complex alpha, const OperatorSpec& s, Complex beta, const OperatorSpec& t);

/// The operator product s*t, exactly, including the finite-rank Hankel
/// remainder T(a)T(b) - T(ab) and all cross terms with the compact parts.
OperatorSpec multiply(const OperatorSpec& s, const OperatorSpec& t);

/// Identity operator of the same kind and diagonal shape as `like`.
OperatorSpec identity_like(const OperatorSpec& like);

/// Norm of the image in the Calkin algebra: max |a| over `theta_samples` points
/// of the circle (Toeplitz), or max |tail| (diagonal).
double essential_norm(const OperatorSpec& spec, int theta_samples = 2048);

// Sparse-vector helpers used by the product rules.
SparseVector apply(const OperatorSpec& spec, const SparseVector& x);
SparseVector apply_adjoint(const OperatorSpec& spec, const SparseVector& x);
Complex inner(const SparseVector& x, const SparseVector& y); // sum x_i conj(y_i)

} // namespace fredfam
