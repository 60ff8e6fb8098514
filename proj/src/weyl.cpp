#include "fredfam/weyl.hpp"

#include <cmath>
#include <string>

#include "fredfam/errors.hpp"

namespace fredfam {

namespace {

// Comparisons against grid-derived distances carry this relative slack so
// that points exactly one step apart are classified consistently.
constexpr double kSlack = 1e-9;

// Marks grid points strictly closer than radius to z.
void raster_point(GridSet& set, Complex z, double radius) {
    const ComplexGrid& g = set.grid();
    const int i0 = std::max(0, static_cast<int>(std::ceil((z.real() - radius - g.re_min) / g.h)));
    const int i1 = std::min(g.nx() - 1, static_cast<int>(std::floor((z.real() + radius - g.re_min) / g.h)));
    const int j0 = std::max(0, static_cast<int>(std::ceil((z.imag() - radius - g.im_min) / g.h)));
    const int j1 = std::min(g.ny() - 1, static_cast<int>(std::floor((z.imag() + radius - g.im_min) / g.h)));
    const double limit = radius * (1.0 - kSlack);
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i)
            if (std::abs(g.point(i, j) - z) < limit) set.insert(i, j);
}

GridSet essential_raster(std::span<const Complex> points, const ComplexGrid& grid) {
    GridSet out(grid);
    for (Complex z : points) raster_point(out, z, grid.h);
    return out;
}

std::vector<double> converging_distances(const std::vector<OperatorFamily>& seq, const OperatorFamily& limit,
                                         double eps) {
    std::vector<double> d;
    for (const auto& f : seq) d.push_back(sup_norm_distance(f, limit));
    for (std::size_t k = 1; k < d.size(); ++k)
        if (d[k] > d[k - 1] * (1.0 + 1e-12))
            throw InconclusiveError("sequence distance to the limit increases at step " + std::to_string(k));
    if (d.empty() || d.back() > eps)
        throw InconclusiveError("sequence has not reached the limit: final sup-norm distance " +
                                (d.empty() ? std::string("n/a") : std::to_string(d.back())) + " exceeds " +
                                std::to_string(eps));
    return d;
}

} // namespace

// ---------------------------------------------------------------- grid

void ComplexGrid::validate() const {
    if (!(h > 0.0)) throw PreconditionError("grid step h must be positive");
    if (!(re_min < re_max) || !(im_min < im_max)) throw PreconditionError("grid bounds must be ordered");
    if ((re_max - re_min) / h > 1e4 || (im_max - im_min) / h > 1e4)
        throw PreconditionError("grid exceeds 10^4 steps per axis");
}

int ComplexGrid::nx() const { return static_cast<int>(std::lround((re_max - re_min) / h)) + 1; }
int ComplexGrid::ny() const { return static_cast<int>(std::lround((im_max - im_min) / h)) + 1; }

GridSet::GridSet(const ComplexGrid& grid) : grid_(grid) {
    grid_.validate();
    mask_.assign(static_cast<std::size_t>(grid_.nx()) * grid_.ny(), 0);
}

std::size_t GridSet::size() const {
    std::size_t n = 0;
    for (auto m : mask_) n += m;
    return n;
}

std::vector<std::pair<int, int>> GridSet::members() const {
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j < grid_.ny(); ++j)
        for (int i = 0; i < grid_.nx(); ++i)
            if (contains(i, j)) out.emplace_back(i, j);
    return out;
}

std::vector<Complex> GridSet::member_points() const {
    std::vector<Complex> out;
    for (auto [i, j] : members()) out.push_back(grid_.point(i, j));
    return out;
}

void GridSet::require_same_grid(const GridSet& other) const {
    if (!(grid_ == other.grid_)) throw PreconditionError("grid sets live on different grids");
}

GridSet& GridSet::unite(const GridSet& other) {
    require_same_grid(other);
    for (std::size_t k = 0; k < mask_.size(); ++k) mask_[k] |= other.mask_[k];
    return *this;
}

GridSet& GridSet::intersect(const GridSet& other) {
    require_same_grid(other);
    for (std::size_t k = 0; k < mask_.size(); ++k) mask_[k] &= other.mask_[k];
    return *this;
}

bool GridSet::subset_of(const GridSet& other) const {
    require_same_grid(other);
    for (std::size_t k = 0; k < mask_.size(); ++k)
        if (mask_[k] && !other.mask_[k]) return false;
    return true;
}

GridSet GridSet::dilate(double eps) const {
    const int r = static_cast<int>(std::floor(eps / grid_.h * (1.0 + kSlack)));
    const double r2 = (eps / grid_.h) * (eps / grid_.h) * (1.0 + kSlack);
    std::vector<std::pair<int, int>> offsets;
    for (int dj = -r; dj <= r; ++dj)
        for (int di = -r; di <= r; ++di)
            if (di * di + dj * dj <= r2) offsets.emplace_back(di, dj);

    GridSet out(grid_);
    for (auto [i, j] : members())
        for (auto [di, dj] : offsets) {
            const int a = i + di, b = j + dj;
            if (a >= 0 && b >= 0 && a < grid_.nx() && b < grid_.ny()) out.insert(a, b);
        }
    return out;
}

bool hausdorff_within(const GridSet& a, const GridSet& b, double eps) {
    if (a.empty() || b.empty()) return a.empty() && b.empty();
    return a.subset_of(b.dilate(eps)) && b.subset_of(a.dilate(eps));
}

// ---------------------------------------------------------------- spectra

GridSet essential_spectrum_point(const OperatorSpec& spec, const ComplexGrid& grid, const Tolerances& tol) {
    FredholmProbe probe(spec, tol);
    return essential_raster(probe.essential_points(), grid);
}

GridSet weyl_spectrum_point(const OperatorSpec& spec, const ComplexGrid& grid, const Tolerances& tol) {
    FredholmProbe probe(spec, tol);
    GridSet out = essential_raster(probe.essential_points(), grid);
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) {
            if (out.contains(i, j)) continue;
            const FredholmReport r = probe.report(grid.point(i, j));
            if (!r.fredholm || r.index != 0) out.insert(i, j);
        }
    return out;
}

GridSet weyl_spectrum_family(const OperatorFamily& fam, const ComplexGrid& grid, const Tolerances& tol) {
    GridSet out(grid);
    for (const auto& p : sample_family(fam).points) out.unite(weyl_spectrum_point(p.spec, grid, tol));
    return out;
}

GridSet weyl_spectrum_family_direct(const OperatorFamily& fam, const ComplexGrid& grid, const Tolerances& tol) {
    FamilyProbe probe(sample_family(fam), tol);
    GridSet out(grid);
    for (const auto& p : probe.probes()) out.unite(essential_raster(p.essential_points(), grid));
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) {
            if (out.contains(i, j)) continue;
            try {
                for (const auto& [c, ind] : probe.index(grid.point(i, j)))
                    if (ind != 0) {
                        out.insert(i, j);
                        break;
                    }
            } catch (const NotFredholmError&) {
                out.insert(i, j);
            } catch (const DiscretizationError&) {
                // Indices jump inside a component: the continuous family
                // crosses a non-Fredholm point between samples.
                out.insert(i, j);
            }
        }
    return out;
}

GridSet essential_spectrum_family(const OperatorFamily& fam, const ComplexGrid& grid, const Tolerances& tol) {
    GridSet out(grid);
    for (const auto& p : sample_family(fam).points) out.unite(essential_spectrum_point(p.spec, grid, tol));
    return out;
}

// ---------------------------------------------------------------- set limits

SetLimitReport kuratowski_limits(const std::vector<GridSet>& seq, double epsilon, double membership) {
    if (seq.size() < 8) throw PreconditionError("set limits need at least 8 sets");
    for (const auto& s : seq)
        if (!(s.grid() == seq.front().grid())) throw PreconditionError("set limits: grid mismatch");

    const std::size_t tail_len = seq.size() / 2;
    const std::size_t first = seq.size() - tail_len;
    const ComplexGrid& grid = seq.front().grid();

    std::vector<GridSet> near;
    near.reserve(tail_len);
    for (std::size_t k = first; k < seq.size(); ++k) near.push_back(seq[k].dilate(membership));

    SetLimitReport r;
    r.epsilon = epsilon;
    r.membership = membership;
    r.tail_length = tail_len;
    r.liminf = GridSet(grid);
    r.limsup = GridSet(grid);
    const std::size_t quorum = (tail_len + 1) / 2;
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) {
            std::size_t hits = 0;
            for (const auto& s : near) hits += s.contains(i, j) ? 1 : 0;
            if (hits == tail_len) r.liminf.insert(i, j);
            if (hits >= quorum) r.limsup.insert(i, j);
        }
    r.converged = r.limsup.subset_of(r.liminf.dilate(epsilon)) && r.liminf.subset_of(r.limsup.dilate(epsilon));
    return r;
}

SemicontinuityResult semicontinuity_check(const std::vector<OperatorFamily>& seq, const OperatorFamily& limit,
                                          const ComplexGrid& grid, double eps, const Tolerances& tol) {
    SemicontinuityResult out;
    out.distances = converging_distances(seq, limit, eps);

    std::vector<GridSet> spectra;
    spectra.reserve(seq.size());
    for (const auto& f : seq) spectra.push_back(weyl_spectrum_family(f, grid, tol));
    out.limsup = kuratowski_limits(spectra, eps, 0.0).limsup;
    out.limit_weyl = weyl_spectrum_family(limit, grid, tol);

    const GridSet allowed = out.limit_weyl.dilate(eps);
    out.holds = true;
    for (auto [i, j] : out.limsup.members())
        if (!allowed.contains(i, j)) {
            out.holds = false;
            out.witness = grid.point(i, j);
            break;
        }
    return out;
}

// ---------------------------------------------------------------- limit theorems

const char* to_string(LimitScenario s) {
    switch (s) {
    case LimitScenario::Commuting: return "commuting";
    case LimitScenario::TotallyDisconnected: return "totally_disconnected";
    case LimitScenario::Normal: return "normal";
    case LimitScenario::EssentialConvergence: return "essential_convergence";
    }
    return "?";
}

LimitScenario limit_scenario_from_string(const std::string& name) {
    for (auto s : {LimitScenario::Commuting, LimitScenario::TotallyDisconnected, LimitScenario::Normal,
                   LimitScenario::EssentialConvergence})
        if (name == to_string(s)) return s;
    throw SchemaError("unknown limit scenario '" + name + "'");
}

namespace {

void certify_commuting(const std::vector<OperatorFamily>& seq, const OperatorFamily& limit) {
    const SampledFamily lim = sample_family(limit);
    auto structural = [](const OperatorSpec& s, bool& analytic, bool& coanalytic) {
        if (!s.compact().empty()) return false;
        if (s.is_toeplitz()) {
            analytic = analytic && s.symbol().is_analytic();
            coanalytic = coanalytic && s.symbol().is_coanalytic();
        }
        return true;
    };
    bool analytic = true, coanalytic = true;
    for (const auto& p : lim.points)
        if (!structural(p.spec, analytic, coanalytic))
            throw HypothesisViolationError("commuting: limit family has a finite-rank part at " + p.where.str());

    for (std::size_t k = 0; k < seq.size(); ++k) {
        const SampledFamily s = sample_family(seq[k]);
        if (s.points.size() != lim.points.size())
            throw HypothesisViolationError("commuting: sequence member " + std::to_string(k) +
                                           " is sampled differently from the limit");
        for (std::size_t q = 0; q < s.points.size(); ++q) {
            const OperatorSpec& a = s.points[q].spec;
            const OperatorSpec& b = lim.points[q].spec;
            if (!structural(a, analytic, coanalytic))
                throw HypothesisViolationError("commuting: member " + std::to_string(k) +
                                               " has a finite-rank part at " + s.points[q].where.str());
            const std::size_t n = std::max<std::size_t>({64, a.min_truncation(), b.min_truncation()});
            const Eigen::MatrixXcd ta = truncate(a, n), tb = truncate(b, n);
            const double comm = (ta * tb - tb * ta).cwiseAbs().maxCoeff();
            if (comm > 1e-10)
                throw HypothesisViolationError("commuting: truncations of member " + std::to_string(k) +
                                               " and the limit do not commute at " + s.points[q].where.str() +
                                               " (max entry " + std::to_string(comm) + ")");
        }
    }
    if (limit.is_toeplitz() && !analytic && !coanalytic)
        throw HypothesisViolationError(
            "commuting: symbols are not polynomials in a common symbol (neither all analytic nor all coanalytic)");
}

} // namespace

LimitScenarioResult limit_scenario_check(LimitScenario scenario, const std::vector<OperatorFamily>& seq,
                                         const OperatorFamily& limit, const ComplexGrid& grid, double eps,
                                         const Tolerances& tol) {
    switch (scenario) {
    case LimitScenario::Commuting:
        certify_commuting(seq, limit);
        break;
    case LimitScenario::TotallyDisconnected:
        if (!limit.is_toeplitz()) break;
        throw HypothesisViolationError("totally_disconnected: limit family must be of diagonal kind");
    case LimitScenario::Normal: {
        auto normal = [](const OperatorFamily& f) {
            if (f.is_toeplitz()) return false;
            for (const auto& [v, s] : f.assignment())
                if (!s.compact().empty()) return false;
            return true;
        };
        if (!normal(limit)) throw HypothesisViolationError("normal: limit family is not diagonal without finite-rank part");
        for (std::size_t k = 0; k < seq.size(); ++k)
            if (!normal(seq[k]))
                throw HypothesisViolationError("normal: member " + std::to_string(k) +
                                               " is not diagonal without finite-rank part");
        break;
    }
    case LimitScenario::EssentialConvergence: {
        std::vector<GridSet> ess;
        for (const auto& f : seq) ess.push_back(essential_spectrum_family(f, grid, tol));
        const SetLimitReport er = kuratowski_limits(ess, eps, 0.0);
        const GridSet target = essential_spectrum_family(limit, grid, tol);
        if (!er.converged || !hausdorff_within(er.liminf, target, eps) || !hausdorff_within(er.limsup, target, eps))
            throw HypothesisViolationError("essential_convergence: essential spectra do not converge to the limit's");
        break;
    }
    }

    (void)converging_distances(seq, limit, eps);

    std::vector<GridSet> spectra;
    spectra.reserve(seq.size());
    for (const auto& f : seq) spectra.push_back(weyl_spectrum_family(f, grid, tol));

    LimitScenarioResult out;
    out.report = kuratowski_limits(spectra, eps, 0.0);
    out.limit_weyl = weyl_spectrum_family(limit, grid, tol);
    out.holds = out.report.converged && hausdorff_within(out.report.liminf, out.limit_weyl, eps) &&
                hausdorff_within(out.report.limsup, out.limit_weyl, eps);
    return out;
}

} // namespace fredfam
