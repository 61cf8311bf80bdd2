#pragma once

#include "linalg.hpp"

#include <array>
#include <utility>
#include <vector>

namespace ef {

using linalg::Mat3;
using linalg::Matrix;
using linalg::SymMatrix3;
using linalg::Vec3;

using PointSet = std::vector<Vec3>;

/// Coefficients of the general second-degree surface
///   a x^2 + b y^2 + c z^2 + 2f yz + 2g xz + 2h xy + 2p x + 2q y + 2r z + d = 0
struct QuadricCoeffs {
    double a = 0, b = 0, c = 0;
    double f = 0, g = 0, h = 0;
    double p = 0, q = 0, r = 0;
    double d = 0;

    std::array<double, 10> as_array() const { return {a, b, c, f, g, h, p, q, r, d}; }
    static QuadricCoeffs from_array(const std::array<double, 10>& v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]};
    }
    SymMatrix3 quadratic_part() const { return {a, b, c, f, g, h}; }
};

/// 10xN design matrix; column i is
/// (x^2, y^2, z^2, 2yz, 2xz, 2xy, 2x, 2y, 2z, 1)^T for point i.
Matrix design_matrix(const PointSet& points);

/// (I, J) = (a+b+c, ab+bc+ac-f^2-g^2-h^2).
std::pair<double, double> invariants_IJ(const QuadricCoeffs& v);

/// 10x10 symmetric constraint matrix: upper-left 6x6 block has diagonal
/// (-1,-1,-1,-k,-k,-k) and k/2-1 in the off-diagonal 3x3 corner; rows and
/// columns 7..10 are zero. Satisfies v^T C v = kJ - I^2. Requires k >= 4.
Matrix constraint_matrix(double k);

/// v^T C(k) v evaluated directly (same value as the matrix quadratic form).
double constraint_value(const QuadricCoeffs& v, double k);

/// Algebraic distance: sum over columns of (v^T X_i)^2.
double algebraic_distance(const QuadricCoeffs& v, const Matrix& dm);

struct FisherForm {
    SymMatrix3 k_normalized; // K/scale; (x - center)^T (K/scale) (x - center) = 1 on the surface
    Vec3 center{};
    double scale = 0; // always > 0 on return
};

/// Recovers the centered quadratic form from quadric coefficients. The sign
/// of v is flipped internally if needed so that scale > 0. Throws
/// DegenerateQuadric when K is singular and NotAnEllipsoid when the scale
/// vanishes.
FisherForm quadric_to_fisher(const QuadricCoeffs& v);

/// True when quadric_to_fisher succeeds and K/scale is positive definite.
bool is_ellipsoid(const QuadricCoeffs& v);

} // namespace ef
