#include "fredfam/op_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "fredfam/errors.hpp"

namespace fredfam {

namespace {

void prune(SparseVector& x) {
    std::erase_if(x, [](const auto& kv) { return kv.second == Complex{}; });
}

SparseVector scaled(Complex alpha, const SparseVector& x) {
    SparseVector out;
    for (const auto& [i, xi] : x) out[i] = alpha * xi;
    prune(out);
    return out;
}

void append_term(FiniteRankPart& part, SparseVector u, SparseVector v) {
    prune(u);
    prune(v);
    if (u.empty() || v.empty()) return;
    part.terms.push_back({std::move(u), std::move(v)});
}

// Toeplitz(a) x, restricted to non-negative coordinates.
SparseVector toeplitz_apply(const LaurentSymbol& a, const SparseVector& x) {
    SparseVector out;
    for (const auto& [j, xj] : x)
        for (const auto& [k, c] : a.coeffs()) {
            long long i = static_cast<long long>(j) + k;
            if (i >= 0) out[static_cast<std::size_t>(i)] += c * xj;
        }
    prune(out);
    return out;
}

SparseVector diagonal_apply(const DiagonalCore& d, const SparseVector& x, bool conjugate) {
    SparseVector out;
    for (const auto& [j, xj] : x) {
        Complex dj = d.entry(j);
        out[j] = (conjugate ? std::conj(dj) : dj) * xj;
    }
    prune(out);
    return out;
}

// The same diagonal operator written with a head of length `head_len` and a
// tail period of `period` (a multiple of the current one).
DiagonalCore realign(const DiagonalCore& d, std::size_t head_len, std::size_t period) {
    DiagonalCore out;
    out.head.reserve(head_len);
    for (std::size_t j = 0; j < head_len; ++j) out.head.push_back(d.entry(j));
    out.tails.reserve(period);
    for (std::size_t j = 0; j < period; ++j) out.tails.push_back(d.entry(head_len + j));
    return out;
}

void require_same_kind(const OperatorSpec& s, const OperatorSpec& t, const char* op) {
    if (s.is_toeplitz() != t.is_toeplitz())
        throw KindMismatchError(std::string(op) + ": cannot mix Toeplitz and diagonal operators");
}

} // namespace

// ---------------------------------------------------------------- symbols

Complex LaurentSymbol::coeff(int k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? Complex{} : it->second;
}

int LaurentSymbol::max_power() const {
    return coeffs_.empty() ? 0 : std::max(0, coeffs_.rbegin()->first);
}

int LaurentSymbol::min_power() const {
    return coeffs_.empty() ? 0 : std::min(0, coeffs_.begin()->first);
}

bool LaurentSymbol::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const auto& kv) { return kv.second == Complex{}; });
}

double LaurentSymbol::derivative_bound() const {
    double s = 0.0;
    for (const auto& [k, c] : coeffs_) s += std::abs(k) * std::abs(c);
    return s;
}

double LaurentSymbol::coefficient_l1() const {
    double s = 0.0;
    for (const auto& [k, c] : coeffs_) s += std::abs(c);
    return s;
}

LaurentSymbol LaurentSymbol::adjoint() const {
    std::map<int, Complex> out;
    for (const auto& [k, c] : coeffs_) out[-k] = std::conj(c);
    return LaurentSymbol(std::move(out));
}

LaurentSymbol operator*(const LaurentSymbol& a, const LaurentSymbol& b) {
    std::map<int, Complex> out;
    for (const auto& [i, ci] : a.coeffs_)
        for (const auto& [j, cj] : b.coeffs_) out[i + j] += ci * cj;
    std::erase_if(out, [](const auto& kv) { return kv.second == Complex{}; });
    return LaurentSymbol(std::move(out));
}

LaurentSymbol combine(Complex alpha, const LaurentSymbol& a, Complex beta, const LaurentSymbol& b) {
    std::map<int, Complex> out;
    for (const auto& [k, c] : a.coeffs()) out[k] += alpha * c;
    for (const auto& [k, c] : b.coeffs()) out[k] += beta * c;
    std::erase_if(out, [](const auto& kv) { return kv.second == Complex{}; });
    return LaurentSymbol(std::move(out));
}

Complex symbol_eval(const LaurentSymbol& sym, double theta) {
    Complex sum{};
    for (const auto& [k, c] : sym.coeffs()) sum += c * std::polar(1.0, k * theta);
    return sum;
}

std::vector<Complex> symbol_curve(const LaurentSymbol& sym, int samples) {
    std::vector<Complex> out(static_cast<std::size_t>(samples));
    const double step = 2.0 * std::numbers::pi / samples;
    for (int s = 0; s < samples; ++s) out[s] = symbol_eval(sym, step * s);
    return out;
}

// ---------------------------------------------------------------- parts

std::optional<std::size_t> FiniteRankPart::max_support() const {
    std::optional<std::size_t> best;
    for (const auto& t : terms)
        for (const SparseVector* x : {&t.u, &t.v})
            if (!x->empty()) {
                std::size_t m = x->rbegin()->first;
                if (!best || m > *best) best = m;
            }
    return best;
}

// Exact operator norm of sum u_t v_t^*: with U = Q_u R_u and V = Q_v R_v,
// ||U V^*|| = ||R_u R_v^*||, an r x r problem for r terms.
double FiniteRankPart::norm_bound() const {
    const auto support = max_support();
    if (!support) return 0.0;
    const Eigen::Index d = static_cast<Eigen::Index>(*support) + 1;
    const Eigen::Index r = static_cast<Eigen::Index>(terms.size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, r), v = Eigen::MatrixXcd::Zero(d, r);
    for (Eigen::Index t = 0; t < r; ++t) {
        for (const auto& [i, x] : terms[t].u) u(static_cast<Eigen::Index>(i), t) = x;
        for (const auto& [i, x] : terms[t].v) v(static_cast<Eigen::Index>(i), t) = x;
    }
    if (d <= r) return Eigen::JacobiSVD<Eigen::MatrixXcd>(u * v.adjoint()).singularValues()(0);
    const Eigen::MatrixXcd ru = Eigen::HouseholderQR<Eigen::MatrixXcd>(u).matrixQR().topRows(r).triangularView<Eigen::Upper>();
    const Eigen::MatrixXcd rv = Eigen::HouseholderQR<Eigen::MatrixXcd>(v).matrixQR().topRows(r).triangularView<Eigen::Upper>();
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(ru * rv.adjoint()).singularValues()(0);
}

Complex DiagonalCore::entry(std::size_t j) const {
    if (j < head.size()) return head[j];
    return tails[(j - head.size()) % tails.size()];
}

void DiagonalCore::validate() const {
    if (tails.empty()) throw PreconditionError("diagonal core needs at least one tail value");
}

bool DiagonalCore::is_zero() const {
    auto zero = [](Complex c) { return c == Complex{}; };
    return std::all_of(head.begin(), head.end(), zero) && std::all_of(tails.begin(), tails.end(), zero);
}

// ---------------------------------------------------------------- spec

OperatorSpec::OperatorSpec(Kind kind, FiniteRankPart compact)
    : kind_(std::move(kind)), compact_(std::move(compact)) {
    if (is_diagonal()) core().validate();
}

OperatorSpec OperatorSpec::toeplitz(LaurentSymbol symbol, FiniteRankPart compact) {
    return OperatorSpec(ToeplitzKind{std::move(symbol)}, std::move(compact));
}

OperatorSpec OperatorSpec::diagonal(DiagonalCore core, FiniteRankPart compact) {
    return OperatorSpec(DiagonalKind{std::move(core)}, std::move(compact));
}

const LaurentSymbol& OperatorSpec::symbol() const {
    if (!is_toeplitz()) throw PreconditionError("operator is not of Toeplitz kind");
    return std::get<ToeplitzKind>(kind_).symbol;
}

const DiagonalCore& OperatorSpec::core() const {
    if (!is_diagonal()) throw PreconditionError("operator is not of diagonal kind");
    return std::get<DiagonalKind>(kind_).core;
}

OperatorSpec OperatorSpec::with_compact(FiniteRankPart compact) const {
    return OperatorSpec(kind_, std::move(compact));
}

std::size_t OperatorSpec::min_truncation() const {
    std::size_t m = 0;
    if (is_toeplitz())
        m = static_cast<std::size_t>(symbol().degree());
    else
        m = core().head.size();
    if (auto s = compact_.max_support()) m = std::max(m, *s);
    return m + 1;
}

double OperatorSpec::norm_bound() const {
    double core_bound = 0.0;
    if (is_toeplitz()) {
        core_bound = symbol().coefficient_l1();
    } else {
        for (Complex d : core().head) core_bound = std::max(core_bound, std::abs(d));
        for (Complex d : core().tails) core_bound = std::max(core_bound, std::abs(d));
    }
    return core_bound + compact_.norm_bound();
}

bool OperatorSpec::core_is_zero() const {
    return is_toeplitz() ? symbol().is_zero() : core().is_zero();
}

// ---------------------------------------------------------------- matrices

Eigen::MatrixXcd section(const OperatorSpec& spec, std::size_t rows, std::size_t cols) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows),
                                                static_cast<Eigen::Index>(cols));
    if (spec.is_toeplitz()) {
        for (const auto& [k, c] : spec.symbol().coeffs())
            for (std::size_t j = 0; j < cols; ++j) {
                long long i = static_cast<long long>(j) + k;
                if (i >= 0 && static_cast<std::size_t>(i) < rows)
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += c;
            }
    } else {
        const auto& core = spec.core();
        for (std::size_t j = 0; j < std::min(rows, cols); ++j)
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = core.entry(j);
    }
    for (const auto& term : spec.compact().terms)
        for (const auto& [i, ui] : term.u) {
            if (i >= rows) continue;
            for (const auto& [j, vj] : term.v)
                if (j < cols)
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += ui * std::conj(vj);
        }
    return m;
}

Eigen::MatrixXcd truncate(const OperatorSpec& spec, std::size_t n) {
    if (n < spec.min_truncation())
        throw PreconditionError("truncation size " + std::to_string(n) +
                                " too small; minimum admissible n is " +
                                std::to_string(spec.min_truncation()));
    return section(spec, n, n);
}

// ---------------------------------------------------------------- algebra

OperatorSpec linear_combine(Complex alpha, const OperatorSpec& s, Complex beta, const OperatorSpec& t) {
    require_same_kind(s, t, "linear_combine");

    FiniteRankPart compact;
    for (const auto& term : s.compact().terms) append_term(compact, scaled(alpha, term.u), term.v);
    for (const auto& term : t.compact().terms) append_term(compact, scaled(beta, term.u), term.v);

    if (s.is_toeplitz())
        return OperatorSpec::toeplitz(combine(alpha, s.symbol(), beta, t.symbol()), std::move(compact));

    const auto& a = s.core();
    const auto& b = t.core();
    if (a.head.size() != b.head.size() || a.tails.size() != b.tails.size())
        throw KindMismatchError("linear_combine: diagonal cores differ in head or tail length");
    DiagonalCore out;
    for (std::size_t j = 0; j < a.head.size(); ++j) out.head.push_back(alpha * a.head[j] + beta * b.head[j]);
    for (std::size_t j = 0; j < a.tails.size(); ++j) out.tails.push_back(alpha * a.tails[j] + beta * b.tails[j]);
    return OperatorSpec::diagonal(std::move(out), std::move(compact));
}

SparseVector apply(const OperatorSpec& spec, const SparseVector& x) {
    SparseVector out = spec.is_toeplitz() ? toeplitz_apply(spec.symbol(), x)
                                          : diagonal_apply(spec.core(), x, false);
    for (const auto& term : spec.compact().terms) {
        Complex w = inner(x, term.v);
        for (const auto& [i, ui] : term.u) out[i] += w * ui;
    }
    prune(out);
    return out;
}

SparseVector apply_adjoint(const OperatorSpec& spec, const SparseVector& x) {
    SparseVector out = spec.is_toeplitz() ? toeplitz_apply(spec.symbol().adjoint(), x)
                                          : diagonal_apply(spec.core(), x, true);
    for (const auto& term : spec.compact().terms) {
        Complex w = inner(x, term.u);
        for (const auto& [j, vj] : term.v) out[j] += w * vj;
    }
    prune(out);
    return out;
}

Complex inner(const SparseVector& x, const SparseVector& y) {
    Complex s{};
    auto i = x.begin();
    auto j = y.begin();
    while (i != x.end() && j != y.end()) {
        if (i->first < j->first)
            ++i;
        else if (j->first < i->first)
            ++j;
        else {
            s += i->second * std::conj(j->second);
            ++i;
            ++j;
        }
    }
    return s;
}

OperatorSpec multiply(const OperatorSpec& s, const OperatorSpec& t) {
    require_same_kind(s, t, "multiply");

    // (A + K)(B + L) = AB + A L + K B + K L with A, B the Toeplitz/diagonal cores.
    const OperatorSpec s_core = s.with_compact({});
    const OperatorSpec t_core = t.with_compact({});

    FiniteRankPart compact;
    OperatorSpec::Kind kind;

    if (s.is_toeplitz()) {
        const LaurentSymbol& a = s.symbol();
        const LaurentSymbol& b = t.symbol();
        kind = ToeplitzKind{a * b};
        // T(a)T(b) - T(ab) has entries -sum_{l>=0} a_{i+l+1} b_{-(j+l+1)}, one
        // rank-one term per shift l.
        const int reach = std::min(a.max_power(), -b.min_power());
        for (int l = 0; l < reach; ++l) {
            SparseVector u, v;
            for (int i = 0; i + l + 1 <= a.max_power(); ++i) u[i] = -a.coeff(i + l + 1);
            for (int j = 0; j + l + 1 <= -b.min_power(); ++j) v[j] = std::conj(b.coeff(-(j + l + 1)));
            append_term(compact, std::move(u), std::move(v));
        }
    } else {
        const auto& a = s.core();
        const auto& b = t.core();
        const std::size_t head = std::max(a.head.size(), b.head.size());
        const std::size_t period = std::lcm(a.tails.size(), b.tails.size());
        DiagonalCore ra = realign(a, head, period);
        DiagonalCore rb = realign(b, head, period);
        DiagonalCore out;
        for (std::size_t j = 0; j < head; ++j) out.head.push_back(ra.head[j] * rb.head[j]);
        for (std::size_t j = 0; j < period; ++j) out.tails.push_back(ra.tails[j] * rb.tails[j]);
        kind = DiagonalKind{std::move(out)};
    }

    for (const auto& term : t.compact().terms) append_term(compact, apply(s_core, term.u), term.v);
    for (const auto& term : s.compact().terms) append_term(compact, term.u, apply_adjoint(t_core, term.v));
    for (const auto& ks : s.compact().terms)
        for (const auto& kt : t.compact().terms)
            append_term(compact, scaled(inner(kt.u, ks.v), ks.u), kt.v);

    return OperatorSpec(std::move(kind), std::move(compact));
}

OperatorSpec identity_like(const OperatorSpec& like) {
    if (like.is_toeplitz()) return OperatorSpec::toeplitz(LaurentSymbol::constant(1.0));
    const auto& core = like.core();
    return OperatorSpec::diagonal({std::vector<Complex>(core.head.size(), 1.0),
                                   std::vector<Complex>(core.tails.size(), 1.0)});
}

double essential_norm(const OperatorSpec& spec, int theta_samples) {
    double best = 0.0;
    if (spec.is_toeplitz()) {
        for (Complex w : symbol_curve(spec.symbol(), theta_samples)) best = std::max(best, std::abs(w));
    } else {
        for (Complex d : spec.core().tails) best = std::max(best, std::abs(d));
    }
    return best;
}

} // namespace fredfam
