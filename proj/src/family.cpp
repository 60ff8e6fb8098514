#include "fredfam/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fredfam/errors.hpp"

namespace fredfam {

std::string SampleLocation::str() const {
    std::ostringstream os;
    if (is_vertex())
        os << "v" << from;
    else
        os << "e(" << from << "," << to << ")@" << s;
    return os.str();
}

// ---------------------------------------------------------------- family

OperatorFamily::OperatorFamily(ParamSpace space, std::map<VertexId, OperatorSpec> assignment, int edge_samples)
    : space_(std::move(space)), assignment_(std::move(assignment)), edge_samples_(edge_samples) {
    space_.validate();
    if (edge_samples_ < 1) throw PreconditionError("edge_samples must be at least 1");
    for (VertexId v : space_.vertices)
        if (!assignment_.count(v)) throw StructuralError("vertex " + std::to_string(v) + " has no operator assigned");
    for (const auto& [v, spec] : assignment_)
        if (std::find(space_.vertices.begin(), space_.vertices.end(), v) == space_.vertices.end())
            throw StructuralError("operator assigned to undeclared vertex " + std::to_string(v));
    // linear_combine throws on incompatible kinds or shapes.
    const OperatorSpec& first = assignment_.begin()->second;
    for (const auto& [v, spec] : assignment_) (void)linear_combine(1.0, first, 0.0, spec);
}

OperatorFamily OperatorFamily::constant(const OperatorSpec& spec) {
    return OperatorFamily(ParamSpace{{0}, {}}, {{0, spec}}, 1);
}

OperatorSpec OperatorFamily::along_edge(VertexId u, VertexId v, double s) const {
    return linear_combine(1.0 - s, at(u), s, at(v));
}

bool OperatorFamily::operator==(const OperatorFamily& other) const {
    return space_ == other.space_ && assignment_ == other.assignment_ && edge_samples_ == other.edge_samples_;
}

SampledFamily sample_family(const OperatorFamily& fam) {
    SampledFamily out;
    out.labeling = components(fam.space());
    std::vector<VertexId> vertices = fam.space().vertices;
    std::sort(vertices.begin(), vertices.end());
    for (VertexId v : vertices) out.points.push_back({{v, v, 0.0}, fam.at(v), out.labeling.label.at(v)});
    const int k = fam.edge_samples();
    for (const auto& [u, v] : fam.space().canonical_edges())
        for (int j = 1; j <= k; ++j) {
            const double s = static_cast<double>(j) / (k + 1);
            out.points.push_back({{u, v, s}, fam.along_edge(u, v, s), out.labeling.label.at(u)});
        }
    return out;
}

// ---------------------------------------------------------------- index

FamilyProbe::FamilyProbe(SampledFamily sampled, const Tolerances& tol) : sampled_(std::move(sampled)) {
    probes_.reserve(sampled_.points.size());
    for (const auto& p : sampled_.points) probes_.emplace_back(p.spec, tol);
}

IndexVector FamilyProbe::index(Complex lambda) const {
    std::vector<std::string> offending;
    IndexVector out;
    std::map<VertexId, std::string> first_seen;
    std::string disagreement;
    for (std::size_t k = 0; k < probes_.size(); ++k) {
        const SampledPoint& p = sampled_.points[k];
        const FredholmReport r = probes_[k].report(lambda);
        if (!r.fredholm) {
            offending.push_back(p.where.str());
            continue;
        }
        auto [it, inserted] = out.emplace(p.component, r.index);
        if (inserted) {
            first_seen[p.component] = p.where.str();
        } else if (it->second != r.index && disagreement.empty()) {
            disagreement = "component " + std::to_string(p.component) + ": index " + std::to_string(it->second) +
                           " at " + first_seen[p.component] + " but " + std::to_string(r.index) + " at " +
                           p.where.str() + "; increase edge_samples";
        }
    }
    if (!offending.empty()) {
        std::string list;
        for (std::size_t i = 0; i < offending.size() && i < 8; ++i) list += (i ? ", " : "") + offending[i];
        if (offending.size() > 8) list += ", ...";
        throw NotFredholmError("not a Fredholm family: " + std::to_string(offending.size()) +
                                   " sample(s) within the Fredholm margin: " + list,
                               std::move(offending));
    }
    if (!disagreement.empty()) throw DiscretizationError(disagreement);
    return out;
}

double FamilyProbe::min_gap(Complex lambda) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : probes_) best = std::min(best, p.essential_gap(lambda));
    return best;
}

IndexVector family_index(const OperatorFamily& fam, Complex lambda, const Tolerances& tol) {
    return family_index(sample_family(fam), lambda, tol);
}

IndexVector family_index(const SampledFamily& sampled, Complex lambda, const Tolerances& tol) {
    return FamilyProbe(sampled, tol).index(lambda);
}

// ---------------------------------------------------------------- algebra

namespace {

void require_same_space(const OperatorFamily& s, const OperatorFamily& t, const char* op) {
    if (!(s.space() == t.space()))
        throw StructuralError(std::string(op) + ": families live on different parameter spaces");
}

} // namespace

OperatorFamily combine_families(Complex alpha, const OperatorFamily& s, Complex beta, const OperatorFamily& t) {
    require_same_space(s, t, "combine_families");
    std::map<VertexId, OperatorSpec> out;
    for (const auto& [v, spec] : s.assignment()) out.emplace(v, linear_combine(alpha, spec, beta, t.at(v)));
    return OperatorFamily(s.space(), std::move(out), std::max(s.edge_samples(), t.edge_samples()));
}

OperatorFamily compose_families(const OperatorFamily& s, const OperatorFamily& t) {
    require_same_space(s, t, "compose_families");
    std::map<VertexId, OperatorSpec> out;
    for (const auto& [v, spec] : s.assignment()) out.emplace(v, multiply(spec, t.at(v)));
    return OperatorFamily(s.space(), std::move(out), std::max(s.edge_samples(), t.edge_samples()));
}

// ---------------------------------------------------------------- homotopy

std::vector<PathStep> linear_path(const OperatorFamily& fam0, const OperatorFamily& fam1,
                                  const std::vector<double>& t_grid) {
    std::vector<PathStep> path;
    path.reserve(t_grid.size());
    for (double t : t_grid) {
        if (t == 0.0)
            path.push_back({t, fam0});
        else if (t == 1.0)
            path.push_back({t, fam1});
        else
            path.push_back({t, combine_families(1.0 - t, fam0, t, fam1)});
    }
    return path;
}

HomotopyReport homotopy_invariance_check(const OperatorFamily& fam0, const OperatorFamily& fam1,
                                         const std::vector<PathStep>& path, const Tolerances& tol) {
    if (path.size() < 2) throw PreconditionError("homotopy path needs at least two steps");
    if (!(path.front().family == fam0) || !(path.back().family == fam1))
        throw PreconditionError("homotopy path endpoints do not match the given families");
    for (const auto& step : path)
        if (!(step.family.space() == fam0.space()))
            throw PreconditionError("homotopy path leaves the parameter space of its endpoints");

    HomotopyReport report;
    std::vector<IndexVector> indices;
    for (const auto& step : path) {
        const SampledFamily sampled = sample_family(step.family);
        FamilyProbe probe(sampled, tol);
        bool step_ok = true;
        for (std::size_t k = 0; k < sampled.points.size(); ++k) {
            const double gap = probe.probes()[k].essential_gap(0.0);
            if (gap < tol.fredholm_margin) {
                step_ok = false;
                if (!report.witness || gap < report.witness->gap)
                    report.witness = HomotopyWitness{step.t, sampled.points[k].where, gap};
            }
        }
        if (step_ok && !report.witness) indices.push_back(probe.index(0.0));
    }
    if (report.witness) return report;

    report.start = indices.front();
    report.end = indices.back();
    for (std::size_t k = 1; k < indices.size(); ++k)
        if (indices[k] != indices.front())
            throw DiscretizationError("index changes along a Fredholm path between t = " +
                                      std::to_string(path[k - 1].t) + " and t = " + std::to_string(path[k].t) +
                                      "; refine the t-grid or edge_samples");
    report.verified = true;
    return report;
}

// ---------------------------------------------------------------- openness

double local_constancy_radius(const OperatorFamily& fam, Complex lambda, const Tolerances& tol) {
    FamilyProbe probe(sample_family(fam), tol);
    (void)probe.index(lambda); // throws for non-Fredholm families
    return 0.5 * probe.min_gap(lambda);
}

// ---------------------------------------------------------------- compact families

bool is_compact_family(const OperatorFamily& fam) {
    const SampledFamily sampled = sample_family(fam);
    return std::all_of(sampled.points.begin(), sampled.points.end(),
                       [](const SampledPoint& p) { return p.spec.core_is_zero(); });
}

double sup_norm_distance(const OperatorFamily& s, const OperatorFamily& t) {
    const SampledFamily diff = sample_family(combine_families(1.0, s, -1.0, t));
    double best = 0.0;
    for (const auto& p : diff.points) best = std::max(best, p.spec.norm_bound());
    return best;
}

double sup_essential_distance(const OperatorFamily& s, const OperatorFamily& t, int theta_samples) {
    const SampledFamily diff = sample_family(combine_families(1.0, s, -1.0, t));
    double best = 0.0;
    for (const auto& p : diff.points) best = std::max(best, essential_norm(p.spec, theta_samples));
    return best;
}

ClosureReport ideal_closure_check(const std::vector<OperatorFamily>& seq, const OperatorFamily& limit,
                                  const std::vector<OperatorFamily>& probes, double converge_tol) {
    if (seq.empty()) throw PreconditionError("closure check needs a nonempty sequence");
    ClosureReport report;
    for (std::size_t k = 0; k < seq.size(); ++k)
        if (!is_compact_family(seq[k]))
            throw PreconditionError("sequence member " + std::to_string(k) + " is not a compact family");

    report.ideal_property = true;
    for (const auto& k : seq)
        for (const auto& a : probes)
            if (!is_compact_family(compose_families(a, k)) || !is_compact_family(compose_families(k, a)))
                report.ideal_property = false;

    for (const auto& k : seq) report.distances.push_back(sup_norm_distance(k, limit));

    report.limit_compact = is_compact_family(limit);
    if (!report.limit_compact) {
        double ess = 0.0;
        for (const auto& p : sample_family(limit).points) ess = std::max(ess, essential_norm(p.spec));
        report.limit_essential_norm = ess;
        return report;
    }

    for (std::size_t k = 1; k < report.distances.size(); ++k)
        if (report.distances[k] > report.distances[k - 1] * (1.0 + 1e-12))
            throw InconclusiveError("distances to the limit increase at step " + std::to_string(k));
    if (report.distances.back() > converge_tol)
        throw InconclusiveError("sequence has not converged: final distance " +
                                std::to_string(report.distances.back()) + " exceeds " + std::to_string(converge_tol));
    report.closed = report.ideal_property;
    return report;
}

// ---------------------------------------------------------------- quotient

bool quotient_invertible(const OperatorFamily& fam, Complex lambda, const Tolerances& tol) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : sample_family(fam).points) {
        if (p.spec.is_toeplitz()) {
            for (Complex w : symbol_curve(p.spec.symbol(), tol.theta_samples))
                best = std::min(best, std::abs(w - lambda));
        } else {
            for (Complex t : p.spec.core().tails) best = std::min(best, std::abs(t - lambda));
        }
    }
    return best >= tol.fredholm_margin;
}

} // namespace fredfam
