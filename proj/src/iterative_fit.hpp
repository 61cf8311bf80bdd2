#pragma once

#include "lsq_fit.hpp"
#include "orientation.hpp"

#include <cstdint>
#include <vector>

namespace ef {

/// Initial cumulative rotation for the outer loop. random draws a uniform-ish
/// rotation from the seeded generator; fisher aligns with the eigenvectors of
/// the data scatter matrix and falls back to random when the scatter is
/// nearly singular; identity starts from the data frame as-is.
enum class InitMode { random, fisher, identity };

struct FitConfig {
    double k_max = 1e10;
    int max_outer_iterations = 100;
    double off_diag_tol = 1e-8; // relative off-diagonal threshold on K
    double trace_tol = 1e-6;    // |trace(V) - 3| threshold on the eigenvector update
    InitMode init_mode = InitMode::random;
    std::uint64_t rng_seed = 0;
    CenterMode center_mode = CenterMode::fixed_origin;
};

struct IterationRecord {
    int outer_iter = 0;
    double k_used = 0;
    double omega = 0;          // algebraic distance of the inner fit in the rotated frame
    double off_diag_ratio = 0; // max |off-diagonal| / max |diagonal| of the rotated-frame K
    std::array<double, 3> axes_estimate{};      // descending
    std::array<double, 3> euler_estimate_deg{}; // alpha, beta, gamma
    bool inner_accepted = false;
};

struct EllipsoidGeometry {
    std::array<double, 3> semi_axes{}; // descending
    EulerAngles euler{};
    Vec3 center{};
};

struct FitReport {
    EllipsoidGeometry geometry{};
    SymMatrix3 fisher_original_frame{}; // K/scale in the data frame
    Mat3 rotation{};                    // columns are principal directions, descending axes
    int outer_iterations = 0;
    int total_inner_iterations = 0;
    std::vector<IterationRecord> trace;
    bool converged = false;
    bool axis_degenerate = false;
    bool gimbal_lock = false;
    bool init_fallback_random = false;
};

/// The full fitter: repeatedly rotates the points by the cumulative rotation,
/// solves the constrained problem with the strict acceptance rule, and folds
/// the principal directions of the recovered quadratic form back into the
/// cumulative rotation until its off-diagonal entries vanish relative to the
/// diagonal. Stalls (ten consecutive non-improving iterations) return the
/// best rotation seen with converged = false. Throws FitFailed when the
/// inner solver repeatedly produces no usable quadric.
FitReport fit_ellipsoid(const PointSet& points, const FitConfig& config = {});

/// One constrained fit in the data frame with the ellipsoid-only acceptance
/// rule and no outer refinement. converged mirrors the acceptance flag.
FitReport fit_single_pass(const PointSet& points, const FitConfig& config = {});

} // namespace ef
