#pragma once

#include <span>
#include <vector>

#include "fredfam/family.hpp"
#include "fredfam/op_model.hpp"
#include "fredfam/tolerances.hpp"

namespace fredfam {

/// Polynomial with complex coefficients in ascending degree.
class Poly {
public:
    /// Throws PreconditionError unless degree >= 1 with a nonzero leading coefficient.
    explicit Poly(std::vector<Complex> coeffs);

    const std::vector<Complex>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    Complex operator()(Complex z) const;
    /// Derivative; for degree 1 this is a nonzero constant and is returned as
    /// plain coefficients (not a Poly, which needs degree >= 1).
    std::vector<Complex> derivative() const;
    Complex derivative_at(Complex z) const;

    friend Poly operator*(const Poly& p, const Poly& q);

private:
    std::vector<Complex> coeffs_;
};

struct Root {
    Complex value;
    int multiplicity = 1;
};
using RootList = std::vector<Root>;

/// Roots from companion-matrix eigenvalues; roots closer than cluster_tol are
/// merged (single linkage) into one root whose multiplicity is the cluster size.
RootList poly_roots(const Poly& p, double cluster_tol = 1e-7);

/// p(T) within the model class (Horner with exact products).
OperatorSpec poly_apply(const OperatorSpec& spec, const Poly& p);
/// Vertexwise p(T_x); along edges the result interpolates the vertex values.
OperatorFamily poly_apply(const OperatorFamily& fam, const Poly& p);
/// p(T_x) at every sample, the exact image family at those points.
SampledFamily poly_apply(const SampledFamily& sampled, const Poly& p);

/// Union over samples of the symbol curve (theta_samples points each) or of
/// the tail values.
std::vector<Complex> fredholm_spectrum(const SampledFamily& sampled, int theta_samples);
std::vector<Complex> fredholm_spectrum(const OperatorFamily& fam, int theta_samples);

/// Symmetric Hausdorff distance between finite point clouds.
double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b);

struct SpectralMapResult {
    bool pass = false;
    double distance = 0.0;
    double tolerance = 0.0;
    std::vector<Complex> image_curve; // sigma_F(p(T)) samples
};

/// Compares p(sigma_F(T)) with sigma_F(p(T)) at the family's samples.
/// Tolerance: 10 / theta_samples * max |p'| over sigma_F(T), floored at 1e-9.
SpectralMapResult spectral_map_check(const OperatorFamily& fam, const Poly& p, int theta_samples);

/// ind(p(T)) per component as sum_i n_i * ind(T - lambda_i) over the roots.
/// Throws IllPosedError when a root is within the Fredholm margin of an
/// essential curve.
IndexVector index_via_roots(const OperatorFamily& fam, const Poly& p, const Tolerances& tol = {});

} // namespace fredfam
