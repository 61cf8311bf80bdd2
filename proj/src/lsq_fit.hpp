#pragma once

#include "quadric.hpp"

namespace ef {

/// Whether the affine block of the model carries the linear terms. With six
/// data points the full ten-coefficient model is underdetermined, so the
/// default pins the center at the origin (p = q = r = 0) and estimates only
/// the seven remaining coefficients.
enum class CenterMode { fixed_origin, free_center };

/// Acceptance rule for one pass of the k-doubling loop.
///  - strict: accept only when the unconstrained least-squares direction is
///    feasible (v^T C(k) v > 0) and the resulting quadric is an ellipsoid.
///  - ellipsoid_only: accept the minimum-eigenvalue admissible candidate of
///    the constrained problem as soon as it is an ellipsoid.
enum class Acceptance { strict, ellipsoid_only };

struct SinglePassFit {
    QuadricCoeffs coeffs{};   // normalized so that v^T C(k_used) v = 1 when possible
    bool has_coeffs = false;  // false when no admissible candidate existed at all
    bool accepted = false;    // acceptance rule satisfied before k exceeded the cap
    double k_used = 0;        // value of k at the returned solution
    double lambda = 0;        // constrained eigenvalue of the returned candidate
    int inner_iterations = 0; // number of k values tried
};

/// Precomputed, k-independent factorization of the fitting problem for a
/// fixed point set: RMS scaling, column equilibration, projection of the
/// affine columns, and the SVD of the projected quadratic design block.
class LsqProblem {
public:
    LsqProblem(const PointSet& points, CenterMode center_mode);

    /// Solves the constrained problem at a single k. Does not iterate.
    SinglePassFit solve_at(double k, Acceptance acceptance) const;

    double rms_scale() const { return s_; }

private:
    struct Candidate {
        double lambda = 0;
        std::vector<double> v1; // 6-vector, equilibrated coordinates
    };

    QuadricCoeffs finish(std::vector<double> v1s) const;
    Matrix equilibrated_constraint(double k) const;

    CenterMode center_mode_;
    double s_ = 1;              // RMS point norm
    std::vector<double> c_;     // E1 column norms (equilibration)
    Matrix e1s_;                // N x 6, equilibrated quadratic design block
    Matrix e2_;                 // N x 1 or N x 4 affine block
    std::vector<double> sigma_; // singular values of the projected block
    Matrix v_;                  // right singular vectors, 6 x 6
};

/// The k-doubling loop: starts at k = 4 and doubles until the acceptance rule
/// fires or k exceeds k_max, in which case the last admissible candidate is
/// returned with accepted = false. Requires at least six points.
SinglePassFit inner_fit(const PointSet& points, Acceptance acceptance, double k_max = 1e10,
                        CenterMode center_mode = CenterMode::fixed_origin);

} // namespace ef
