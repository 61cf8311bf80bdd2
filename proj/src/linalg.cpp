#include "linalg.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ef::linalg {

Mat3 Mat3::identity() {
    Mat3 r;
    r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return r;
}

Mat3 Mat3::transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = (*this)(j, i);
    return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
            r(i, j) = s;
        }
    return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
    Vec3 r{};
    for (int i = 0; i < 3; ++i)
        r[size_t(i)] = (*this)(i, 0) * v[0] + (*this)(i, 1) * v[1] + (*this)(i, 2) * v[2];
    return r;
}

double Mat3::det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Mat3 SymMatrix3::full() const {
    Mat3 r;
    r.m = {a, h, g, h, b, f, g, f, c};
    return r;
}

SymMatrix3 SymMatrix3::from_full(const Mat3& m) {
    SymMatrix3 s;
    s.a = m(0, 0);
    s.b = m(1, 1);
    s.c = m(2, 2);
    s.f = 0.5 * (m(1, 2) + m(2, 1));
    s.g = 0.5 * (m(0, 2) + m(2, 0));
    s.h = 0.5 * (m(0, 1) + m(1, 0));
    return s;
}

double SymMatrix3::max_diag_abs() const {
    return std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
}

double SymMatrix3::max_offdiag_abs() const {
    return std::max({std::fabs(f), std::fabs(g), std::fabs(h)});
}

Matrix Matrix::identity(int n) {
    Matrix r(n, n);
    for (int i = 0; i < n; ++i) r(i, i) = 1.0;
    return r;
}

Matrix Matrix::transposed() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            r(j, i) = (*this)(i, j);
    return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < o.cols_; ++j)
                r(i, j) += aik * o(k, j);
        }
    return r;
}

std::vector<double> Matrix::operator*(const std::vector<double>& v) const {
    std::vector<double> r(size_t(rows_), 0.0);
    for (int i = 0; i < rows_; ++i) {
        double s = 0;
        for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * v[size_t(j)];
        r[size_t(i)] = s;
    }
    return r;
}

double Matrix::max_abs() const {
    double m = 0;
    for (double x : a_) m = std::max(m, std::fabs(x));
    return m;
}

bool Matrix::all_finite() const {
    return std::all_of(a_.begin(), a_.end(), [](double x) { return std::isfinite(x); });
}

namespace {

// One cyclic Jacobi pass over all off-diagonal pairs; returns the largest
// off-diagonal magnitude seen before rotating.
double jacobi_sweep(Matrix& a, Matrix& v) {
    const int n = a.rows();
    double off = 0;
    for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
            const double apq = a(p, q);
            off = std::max(off, std::fabs(apq));
            if (apq == 0.0) continue;
            const double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
            double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
            if (theta < 0) t = -t;
            const double c = 1.0 / std::sqrt(t * t + 1.0);
            const double s = t * c;
            for (int i = 0; i < n; ++i) {
                const double aip = a(i, p), aiq = a(i, q);
                a(i, p) = c * aip - s * aiq;
                a(i, q) = s * aip + c * aiq;
            }
            for (int i = 0; i < n; ++i) {
                const double api = a(p, i), aqi = a(q, i);
                a(p, i) = c * api - s * aqi;
                a(q, i) = s * api + c * aqi;
            }
            for (int i = 0; i < n; ++i) {
                const double vip = v(i, p), viq = v(i, q);
                v(i, p) = c * vip - s * viq;
                v(i, q) = s * vip + c * viq;
            }
            a(p, q) = 0.0;
            a(q, p) = 0.0;
        }
    }
    return off;
}

} // namespace

EigenDecomposition sym_eigen(const Matrix& m) {
    const int n = m.rows();
    if (n != m.cols()) throw InvalidInput("sym_eigen: matrix must be square");
    if (!m.all_finite()) throw InvalidInput("sym_eigen: non-finite input");
    double asym = 0, scale = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            asym = std::max(asym, std::fabs(m(i, j) - m(j, i)));
            scale = std::max(scale, std::fabs(m(i, j)));
        }
    if (asym > 1e-12 * std::max(scale, 1e-300))
        throw InvalidInput("sym_eigen: matrix is not symmetric");

    Matrix a = m;
    // enforce exact symmetry before iterating
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double x = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = x;
            a(j, i) = x;
        }
    Matrix v = Matrix::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        const double off = jacobi_sweep(a, v);
        if (off <= 1e-300 || off <= 1e-16 * std::max(scale, 1e-300)) break;
    }

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) > a(j, j); });

    EigenDecomposition r;
    r.values.resize(size_t(n));
    r.vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        r.values[size_t(j)] = a(order[size_t(j)], order[size_t(j)]);
        for (int i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[size_t(j)]);
    }
    return r;
}

EigenDecomposition sym_eigen(const SymMatrix3& m) {
    Matrix a(3, 3);
    const Mat3 f = m.full();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = f(i, j);
    return sym_eigen(a);
}

Mat3 make_proper(const Mat3& v) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += v(k, i) * v(k, j);
            if (std::fabs(s - (i == j ? 1.0 : 0.0)) > 1e-8)
                throw InvalidInput("make_proper: columns are not orthonormal");
        }
    Mat3 r = v;
    std::array<double, 3> colmax{};
    for (int j = 0; j < 3; ++j) {
        int imax = 0;
        for (int i = 1; i < 3; ++i)
            if (std::fabs(r(i, j)) > std::fabs(r(imax, j))) imax = i;
        colmax[size_t(j)] = std::fabs(r(imax, j));
        if (r(imax, j) < 0)
            for (int i = 0; i < 3; ++i) r(i, j) = -r(i, j);
    }
    if (r.det() < 0) {
        int jflip = 0;
        for (int j = 1; j < 3; ++j)
            if (colmax[size_t(j)] <= colmax[size_t(jflip)]) jflip = j;
        for (int i = 0; i < 3; ++i) r(i, jflip) = -r(i, jflip);
    }
    return r;
}

Svd jacobi_svd(const Matrix& a) {
    const int m = a.rows(), n = a.cols();
    if (m < n) throw InvalidInput("jacobi_svd: requires rows >= cols");
    Matrix u = a;
    Matrix v = Matrix::identity(n);

    auto coldot = [&](int i, int j) {
        double s = 0;
        for (int r = 0; r < m; ++r) s += u(r, i) * u(r, j);
        return s;
    };

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double app = coldot(p, p);
                const double aqq = coldot(q, q);
                const double apq = coldot(p, q);
                if (std::fabs(apq) <= 1e-15 * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int r = 0; r < m; ++r) {
                    const double up = u(r, p), uq = u(r, q);
                    u(r, p) = c * up - s * uq;
                    u(r, q) = s * up + c * uq;
                }
                for (int r = 0; r < n; ++r) {
                    const double vp = v(r, p), vq = v(r, q);
                    v(r, p) = c * vp - s * vq;
                    v(r, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) sigma[size_t(j)] = std::sqrt(std::max(coldot(j, j), 0.0));

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return sigma[size_t(i)] > sigma[size_t(j)]; });

    Svd out;
    out.sigma.resize(size_t(n));
    out.u = Matrix(m, n);
    out.v = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[size_t(j)];
        const double s = sigma[size_t(src)];
        out.sigma[size_t(j)] = s;
        for (int r = 0; r < n; ++r) out.v(r, j) = v(r, src);
        if (s > 0)
            for (int r = 0; r < m; ++r) out.u(r, j) = u(r, src) / s;
    }
    return out;
}

std::vector<double> solve_linear(const Matrix& a, const std::vector<double>& b) {
    if (a.rows() != int(b.size()))
        throw InvalidInput("solve_linear: dimension mismatch");
    if (a.rows() < a.cols()) {
        // pad with zero rows so jacobi_svd applies; least-squares unaffected
        Matrix ap(a.cols(), a.cols());
        std::vector<double> bp(size_t(a.cols()), 0.0);
        for (int i = 0; i < a.rows(); ++i) {
            bp[size_t(i)] = b[size_t(i)];
            for (int j = 0; j < a.cols(); ++j) ap(i, j) = a(i, j);
        }
        return solve_linear(ap, bp);
    }
    const Svd svd = jacobi_svd(a);
    const double smax = svd.sigma.empty() ? 0.0 : svd.sigma[0];
    const double cut = 1e-12 * smax;
    std::vector<double> x(size_t(a.cols()), 0.0);
    for (int j = 0; j < a.cols(); ++j) {
        const double s = svd.sigma[size_t(j)];
        if (s <= cut) continue;
        double utb = 0;
        for (int i = 0; i < a.rows(); ++i) utb += svd.u(i, j) * b[size_t(i)];
        const double coef = utb / s;
        for (int i = 0; i < a.cols(); ++i) x[size_t(i)] += coef * svd.v(i, j);
    }
    return x;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm_inf(const std::vector<double>& x) {
    double m = 0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

} // namespace ef::linalg
