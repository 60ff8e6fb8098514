#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fredfam/fredholm.hpp"
#include "fredfam/op_model.hpp"
#include "fredfam/param_space.hpp"
#include "fredfam/tolerances.hpp"

namespace fredfam {

/// Index of a family: one integer per connected component, keyed by the
/// component id (smallest vertex of the component).
using IndexVector = std::map<VertexId, int>;

/// Where a sample sits: a vertex (from == to, s == 0) or the point
/// (1-s)*from + s*to on an edge.
struct SampleLocation {
    VertexId from = 0;
    VertexId to = 0;
    double s = 0.0;

    bool is_vertex() const { return from == to; }
    std::string str() const;
    bool operator==(const SampleLocation&) const = default;
};

struct SampledPoint {
    SampleLocation where;
    OperatorSpec spec;
    VertexId component = 0;
};

struct SampledFamily {
    std::vector<SampledPoint> points;
    ComponentLabeling labeling;
};

/// Continuous map from a finite graph into the model operators: one spec per
/// vertex, coefficientwise linear interpolation along edges.
class OperatorFamily {
public:
    /// Throws StructuralError for a bad space or a vertex without assignment,
    /// KindMismatchError when two vertex specs cannot be combined, and
    /// PreconditionError for edge_samples < 1.
    OperatorFamily(ParamSpace space, std::map<VertexId, OperatorSpec> assignment, int edge_samples = 8);

    /// Single-vertex family.
    static OperatorFamily constant(const OperatorSpec& spec);

    const ParamSpace& space() const { return space_; }
    const std::map<VertexId, OperatorSpec>& assignment() const { return assignment_; }
    const OperatorSpec& at(VertexId v) const { return assignment_.at(v); }
    int edge_samples() const { return edge_samples_; }
    bool is_toeplitz() const { return assignment_.begin()->second.is_toeplitz(); }

    /// Interpolated operator at parameter s of the edge (u, v).
    OperatorSpec along_edge(VertexId u, VertexId v, double s) const;

    bool operator==(const OperatorFamily& other) const;

private:
    ParamSpace space_;
    std::map<VertexId, OperatorSpec> assignment_;
    int edge_samples_;
};

/// Vertices in ascending order, then canonical edges in lexicographic order
/// with interior points s = j / (edge_samples + 1).
SampledFamily sample_family(const OperatorFamily& fam);

/// Fredholm probes over all samples of a family, for repeated lambda queries.
class FamilyProbe {
public:
    FamilyProbe(SampledFamily sampled, const Tolerances& tol);

    const SampledFamily& sampled() const { return sampled_; }
    const std::vector<FredholmProbe>& probes() const { return probes_; }

    /// Index vector of the family minus lambda. Throws NotFredholmError with
    /// the offending samples, or DiscretizationError when one component
    /// reports two different indices.
    IndexVector index(Complex lambda) const;
    /// min over samples of the essential gap.
    double min_gap(Complex lambda) const;

private:
    SampledFamily sampled_;
    std::vector<FredholmProbe> probes_;
};

IndexVector family_index(const OperatorFamily& fam, Complex lambda, const Tolerances& tol = {});
IndexVector family_index(const SampledFamily& sampled, Complex lambda, const Tolerances& tol = {});

/// Pointwise alpha*s + beta*t on the same space.
OperatorFamily combine_families(Complex alpha, const OperatorFamily& s, Complex beta, const OperatorFamily& t);

/// Vertexwise product. Along edges the result interpolates the products.
/// Throws StructuralError when the spaces differ.
OperatorFamily compose_families(const OperatorFamily& s, const OperatorFamily& t);

struct PathStep {
    double t = 0.0;
    OperatorFamily family;
};

/// path[k].t = t_grid[k], family (1-t)*fam0 + t*fam1 vertexwise.
std::vector<PathStep> linear_path(const OperatorFamily& fam0, const OperatorFamily& fam1,
                                  const std::vector<double>& t_grid);

struct HomotopyWitness {
    double t = 0.0;
    SampleLocation where;
    double gap = 0.0;
};

struct HomotopyReport {
    bool verified = false;
    std::optional<IndexVector> start;
    std::optional<IndexVector> end;
    // Sample with the smallest essential gap among those failing Fredholmness.
    std::optional<HomotopyWitness> witness;
};

/// Checks that every (t, x) on the path is Fredholm at lambda = 0 and, if so,
/// that the endpoint index vectors agree. Throws PreconditionError when the
/// path does not start at fam0 and end at fam1 on one space.
HomotopyReport homotopy_invariance_check(const OperatorFamily& fam0, const OperatorFamily& fam1,
                                         const std::vector<PathStep>& path, const Tolerances& tol = {});

/// Half the smallest essential gap over the samples. Any family within this
/// essential-norm distance at every sample has the same index vector.
double local_constancy_radius(const OperatorFamily& fam, Complex lambda, const Tolerances& tol = {});

/// Compactness is structural: every sample has an exactly zero core.
bool is_compact_family(const OperatorFamily& fam);

/// max over samples of norm_bound(s_x - t_x).
double sup_norm_distance(const OperatorFamily& s, const OperatorFamily& t);
/// max over samples of essential_norm(s_x - t_x).
double sup_essential_distance(const OperatorFamily& s, const OperatorFamily& t, int theta_samples = 2048);

struct ClosureReport {
    bool closed = false;          // limit is compact and the ideal property held
    bool limit_compact = false;
    bool ideal_property = false;  // probe*K and K*probe compact for every member K
    std::vector<double> distances;
    double limit_essential_norm = 0.0; // lower bound on the distance of any compact family to the limit
};

/// Closedness of the compact families. Every sequence member must be compact
/// (PreconditionError otherwise). A non-compact limit is rejected with its
/// essential norm as certificate, since no compact family comes closer to it.
/// For a compact limit the sup-norm distances must be nonincreasing and end
/// below `converge_tol`, else InconclusiveError.
ClosureReport ideal_closure_check(const std::vector<OperatorFamily>& seq, const OperatorFamily& limit,
                                  const std::vector<OperatorFamily>& probes, double converge_tol = 1e-6);

/// Invertibility of the family in C(X, Calkin): the symbol curves (or tail
/// sets) stay at least the Fredholm margin away from lambda at every sample.
bool quotient_invertible(const OperatorFamily& fam, Complex lambda, const Tolerances& tol = {});

} // namespace fredfam
