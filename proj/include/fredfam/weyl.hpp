#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fredfam/family.hpp"
#include "fredfam/op_model.hpp"
#include "fredfam/tolerances.hpp"

namespace fredfam {

/// Rectangular grid re_min + i*h, im_min + j*h covering the given bounds.
struct ComplexGrid {
    double re_min = -2.0;
    double re_max = 2.0;
    double im_min = -2.0;
    double im_max = 2.0;
    double h = 0.05;

    /// Throws PreconditionError for unordered bounds, h <= 0 or more than
    /// 10^4 steps per axis.
    void validate() const;
    int nx() const;
    int ny() const;
    Complex point(int i, int j) const { return {re_min + i * h, im_min + j * h}; }
    bool operator==(const ComplexGrid&) const = default;
};

/// Subset of a grid, stored as a row-major mask (j outer, i inner).
class GridSet {
public:
    GridSet() = default;
    explicit GridSet(const ComplexGrid& grid);

    const ComplexGrid& grid() const { return grid_; }
    bool contains(int i, int j) const { return mask_[index(i, j)] != 0; }
    void insert(int i, int j) { mask_[index(i, j)] = 1; }
    std::size_t size() const;
    bool empty() const { return size() == 0; }
    /// Member indices in row-major order.
    std::vector<std::pair<int, int>> members() const;
    std::vector<Complex> member_points() const;

    GridSet& unite(const GridSet& other);
    GridSet& intersect(const GridSet& other);
    bool subset_of(const GridSet& other) const;
    /// Grid points within Euclidean distance eps of a member.
    GridSet dilate(double eps) const;

    bool operator==(const GridSet& other) const = default;

private:
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * grid_.nx() + i; }
    void require_same_grid(const GridSet& other) const;

    ComplexGrid grid_;
    std::vector<std::uint8_t> mask_;
};

/// Hausdorff distance at most eps, measured on the grid: each set lies in the
/// eps-dilation of the other. Two empty sets match; empty vs nonempty does not.
bool hausdorff_within(const GridSet& a, const GridSet& b, double eps);

/// Grid points closer than h to the essential spectrum of spec (symbol curve
/// samples or tail values).
GridSet essential_spectrum_point(const OperatorSpec& spec, const ComplexGrid& grid, const Tolerances& tol = {});

/// Grid points where spec - lambda is not Fredholm of index 0, together with
/// the essential raster so that isolated essential points stay visible.
GridSet weyl_spectrum_point(const OperatorSpec& spec, const ComplexGrid& grid, const Tolerances& tol = {});

/// Union of weyl_spectrum_point over all samples of the family.
GridSet weyl_spectrum_family(const OperatorFamily& fam, const ComplexGrid& grid, const Tolerances& tol = {});

/// The family Weyl spectrum straight from the definition: lambda is a member
/// when family_index(fam, lambda) fails (not Fredholm, or indices disagree
/// within a component) or has a nonzero entry, or lambda is in the essential
/// raster. Must agree with weyl_spectrum_family.
GridSet weyl_spectrum_family_direct(const OperatorFamily& fam, const ComplexGrid& grid, const Tolerances& tol = {});

/// Union of essential_spectrum_point over all samples of the family.
GridSet essential_spectrum_family(const OperatorFamily& fam, const ComplexGrid& grid, const Tolerances& tol = {});

struct SetLimitReport {
    GridSet liminf;
    GridSet limsup;
    bool converged = false;
    double epsilon = 0.0;
    double membership = 0.0;
    std::size_t tail_length = 0;
};

/// Discrete lower/upper limits over the last half T of the sequence:
///   liminf = {g : dist(g, A_n) <= membership for all n in T}
///   limsup = {g : dist(g, A_n) <= membership for at least half of T}
/// converged when each of the two lies in the epsilon-dilation of the other.
/// Needs at least 8 sets on one grid.
SetLimitReport kuratowski_limits(const std::vector<GridSet>& seq, double epsilon, double membership);
inline SetLimitReport kuratowski_limits(const std::vector<GridSet>& seq, double epsilon) {
    return kuratowski_limits(seq, epsilon, epsilon);
}

struct SemicontinuityResult {
    bool holds = false;
    GridSet limsup;
    GridSet limit_weyl;
    std::optional<Complex> witness; // limsup point outside the dilated limit spectrum
    std::vector<double> distances;
};

/// Upper semicontinuity of the Weyl spectrum along seq -> limit: the upper
/// limit of the Weyl sets lies in the eps-dilation of the limit's Weyl set.
/// Upper limits use exact grid membership. Throws InconclusiveError unless the
/// sup-norm distances to the limit are nonincreasing and end at most eps.
SemicontinuityResult semicontinuity_check(const std::vector<OperatorFamily>& seq, const OperatorFamily& limit,
                                          const ComplexGrid& grid, double eps, const Tolerances& tol = {});

enum class LimitScenario { Commuting, TotallyDisconnected, Normal, EssentialConvergence };

const char* to_string(LimitScenario s);
/// Throws SchemaError for an unknown name.
LimitScenario limit_scenario_from_string(const std::string& name);

struct LimitScenarioResult {
    bool holds = false;
    SetLimitReport report;
    GridSet limit_weyl;
};

/// Certifies the scenario hypothesis (HypothesisViolationError otherwise),
/// then checks that the Weyl sets of seq converge to the limit's Weyl set
/// within eps.
LimitScenarioResult limit_scenario_check(LimitScenario scenario, const std::vector<OperatorFamily>& seq,
                                         const OperatorFamily& limit, const ComplexGrid& grid, double eps,
                                         const Tolerances& tol = {});

} // namespace fredfam
