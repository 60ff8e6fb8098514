#pragma once

namespace fredfam {

// Numerical knobs shared by all engines. Defaults are the documented ones;
// scenario configs may override each field and every run reports the
// effective values.
struct Tolerances {
    // delta: lambda is Fredholm only if its distance to the essential
    // spectrum is at least this.
    double fredholm_margin = 1e-6;
    // tau: singular values below rank_rel_tol * sigma_max count as zero.
    double rank_rel_tol = 1e-8;
    // Samples on the unit circle for winding numbers and essential gaps.
    int theta_samples = 4096;
    // Samples used by essential_norm.
    int norm_theta_samples = 2048;
    // Smallest finite section used by the nullity/defect oracle.
    int oracle_n = 64;
    // A singular value that shrinks by at least this factor when the section
    // doubles (and sits below half the essential gap) is a kernel direction.
    double decay_ratio = 0.25;
    // rho: polynomial roots closer than this are merged.
    double cluster_tol = 1e-7;
};

} // namespace fredfam
