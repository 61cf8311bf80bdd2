#pragma once

#include "quadric.hpp"

namespace ef {

/// Z-Y-X Euler angles in degrees: R = Rz(gamma) * Ry(beta) * Rx(alpha) with
/// the element formulas of the rotation parameterization used throughout
/// this project (see euler_to_matrix). Ranges: beta in (-90, 90],
/// alpha and gamma in (-180, 180].
struct EulerAngles {
    double alpha_deg = 0;
    double beta_deg = 0;
    double gamma_deg = 0;
    bool gimbal_lock = false;
};

Mat3 euler_to_matrix(const EulerAngles& angles);

/// Inverts euler_to_matrix: beta = -asin(R31), alpha = atan2(R21, R11),
/// gamma = atan2(R32, R33). Near |cos(beta)| = 0 the alpha/gamma split is
/// not identifiable; alpha is set to 0 and the gimbal_lock flag raised.
/// Requires r proper orthogonal to 1e-8.
EulerAngles matrix_to_euler(const Mat3& r);

/// Recovers Euler angles from a fitted cumulative rotation by scanning the
/// 24 proper axis-relabelings of r (column permutations and sign patterns
/// with det = +1). Each candidate's angles are extracted, the rotation is
/// rebuilt from them, and the candidate is accepted only when the rebuilt
/// rotation reprojects the points onto the candidate's own projection to
/// relative L-inf 1e-6. Among accepted candidates, one with all angles in
/// [0, 90] degrees is preferred; remaining ties resolve to the smallest
/// |alpha|+|beta|+|gamma|. Throws OrientationAmbiguous when no candidate
/// passes.
EulerAngles recover_orientation(const PointSet& points, const Mat3& r);

/// The 24 rotation matrices of the octahedral group (signed permutation
/// matrices with det = +1), in a fixed deterministic order.
const std::array<Mat3, 24>& proper_relabelings();

} // namespace ef
