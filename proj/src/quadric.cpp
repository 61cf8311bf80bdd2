#include "quadric.hpp"

#include "error.hpp"

#include <cmath>

namespace ef {

Matrix design_matrix(const PointSet& points) {
    if (points.empty()) throw InvalidInput("design_matrix: empty point set");
    const int n = int(points.size());
    Matrix dm(10, n);
    for (int i = 0; i < n; ++i) {
        const auto& p = points[size_t(i)];
        const double x = p[0], y = p[1], z = p[2];
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
            throw InvalidInput("design_matrix: non-finite coordinate");
        dm(0, i) = x * x;
        dm(1, i) = y * y;
        dm(2, i) = z * z;
        dm(3, i) = 2 * y * z;
        dm(4, i) = 2 * x * z;
        dm(5, i) = 2 * x * y;
        dm(6, i) = 2 * x;
        dm(7, i) = 2 * y;
        dm(8, i) = 2 * z;
        dm(9, i) = 1.0;
    }
    return dm;
}

std::pair<double, double> invariants_IJ(const QuadricCoeffs& v) {
    const double I = v.a + v.b + v.c;
    const double J = v.a * v.b + v.b * v.c + v.a * v.c - v.f * v.f - v.g * v.g - v.h * v.h;
    return {I, J};
}

Matrix constraint_matrix(double k) {
    if (!(k >= 4.0)) throw InvalidInput("constraint_matrix: requires k >= 4");
    Matrix c(10, 10);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            c(i, j) = (i == j) ? -1.0 : k / 2.0 - 1.0;
    for (int i = 3; i < 6; ++i) c(i, i) = -k;
    return c;
}

double constraint_value(const QuadricCoeffs& v, double k) {
    const auto [I, J] = invariants_IJ(v);
    return k * J - I * I;
}

double algebraic_distance(const QuadricCoeffs& v, const Matrix& dm) {
    if (dm.rows() != 10) throw InvalidInput("algebraic_distance: design matrix must have 10 rows");
    const auto coef = v.as_array();
    double sum = 0;
    for (int i = 0; i < dm.cols(); ++i) {
        double e = 0;
        for (int r = 0; r < 10; ++r) e += coef[size_t(r)] * dm(r, i);
        sum += e * e;
    }
    return sum;
}

FisherForm quadric_to_fisher(const QuadricCoeffs& v) {
    Matrix km(3, 3);
    const Mat3 kf = v.quadratic_part().full();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) km(i, j) = kf(i, j);

    // singularity check at relative threshold 1e-12
    const auto svd = linalg::jacobi_svd(km);
    if (svd.sigma[2] <= 1e-12 * svd.sigma[0] || svd.sigma[0] == 0.0)
        throw DegenerateQuadric("quadric_to_fisher: singular quadratic part");

    const std::vector<double> rhs = {-v.p, -v.q, -v.r};
    const std::vector<double> ctr = linalg::solve_linear(km, rhs);

    double ctk = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ctk += ctr[size_t(i)] * kf(i, j) * ctr[size_t(j)];
    double scale = ctk - v.d;
    double sign = 1.0;
    if (scale < 0) {
        sign = -1.0;
        scale = -scale;
    }
    if (scale == 0.0 || !std::isfinite(scale))
        throw NotAnEllipsoid("quadric_to_fisher: degenerate scale");

    FisherForm out;
    out.scale = scale;
    out.center = {ctr[0], ctr[1], ctr[2]};
    out.k_normalized = {sign * v.a / scale, sign * v.b / scale, sign * v.c / scale,
                        sign * v.f / scale, sign * v.g / scale, sign * v.h / scale};
    return out;
}

bool is_ellipsoid(const QuadricCoeffs& v) {
    try {
        const FisherForm ff = quadric_to_fisher(v);
        const auto eig = linalg::sym_eigen(ff.k_normalized);
        return eig.values.back() > 0;
    } catch (const Error&) {
        return false;
    }
}

} // namespace ef
