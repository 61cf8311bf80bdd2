#include "lsq_fit.hpp"

#include "error.hpp"

#include <cmath>
#include <vector>

namespace ef {

namespace {

Matrix columns(const Matrix& m, const std::vector<int>& idx) {
    Matrix out(m.rows(), int(idx.size()));
    for (int r = 0; r < m.rows(); ++r)
        for (int j = 0; j < int(idx.size()); ++j) out(r, j) = m(r, idx[size_t(j)]);
    return out;
}

/// Pseudo-inverse of a small symmetric matrix, eigenvalues cut at 1e-12
/// relative magnitude.
Matrix sym_pinv(const Matrix& m) {
    const auto eig = linalg::sym_eigen(m);
    const int n = m.rows();
    double wmax = 0;
    for (double w : eig.values) wmax = std::max(wmax, std::fabs(w));
    Matrix out(n, n);
    for (int k = 0; k < n; ++k) {
        const double w = eig.values[size_t(k)];
        if (std::fabs(w) <= 1e-12 * wmax) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(i, j) += eig.vectors(i, k) * eig.vectors(j, k) / w;
    }
    return out;
}

/// Thin QR by modified Gram-Schmidt; rank-deficient columns are dropped.
Matrix orthonormal_basis(const Matrix& m) {
    const int rows = m.rows();
    std::vector<std::vector<double>> q;
    for (int j = 0; j < m.cols(); ++j) {
        std::vector<double> col(static_cast<size_t>(rows));
        double norm0 = 0;
        for (int r = 0; r < rows; ++r) {
            col[size_t(r)] = m(r, j);
            norm0 += col[size_t(r)] * col[size_t(r)];
        }
        norm0 = std::sqrt(norm0);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : q) {
                double proj = 0;
                for (int r = 0; r < rows; ++r) proj += u[size_t(r)] * col[size_t(r)];
                for (int r = 0; r < rows; ++r) col[size_t(r)] -= proj * u[size_t(r)];
            }
        }
        double norm = 0;
        for (double x : col) norm += x * x;
        norm = std::sqrt(norm);
        if (norm <= 1e-12 * std::max(norm0, 1e-300)) continue;
        for (auto& x : col) x /= norm;
        q.push_back(std::move(col));
    }
    Matrix out(rows, int(q.size()));
    for (int j = 0; j < int(q.size()); ++j)
        for (int r = 0; r < rows; ++r) out(r, j) = q[size_t(j)][size_t(r)];
    return out;
}

} // namespace

LsqProblem::LsqProblem(const PointSet& points, CenterMode center_mode)
    : center_mode_(center_mode) {
    const int n = int(points.size());
    if (n < 6) throw InvalidInput("LsqProblem: at least six points required");

    double ms = 0;
    for (const auto& p : points) ms += p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    s_ = std::sqrt(ms / n);
    if (!(s_ > 0) || !std::isfinite(s_))
        throw InvalidInput("LsqProblem: degenerate point set scale");

    Matrix e1(n, 6);
    const int n2 = center_mode == CenterMode::free_center ? 4 : 1;
    e2_ = Matrix(n, n2);
    for (int i = 0; i < n; ++i) {
        const double x = points[size_t(i)][0] / s_;
        const double y = points[size_t(i)][1] / s_;
        const double z = points[size_t(i)][2] / s_;
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
            throw InvalidInput("LsqProblem: non-finite coordinate");
        e1(i, 0) = x * x;
        e1(i, 1) = y * y;
        e1(i, 2) = z * z;
        e1(i, 3) = 2 * y * z;
        e1(i, 4) = 2 * x * z;
        e1(i, 5) = 2 * x * y;
        if (center_mode == CenterMode::free_center) {
            e2_(i, 0) = 2 * x;
            e2_(i, 1) = 2 * y;
            e2_(i, 2) = 2 * z;
            e2_(i, 3) = 1.0;
        } else {
            e2_(i, 0) = 1.0;
        }
    }

    c_.assign(6, 0.0);
    for (int j = 0; j < 6; ++j) {
        double norm = 0;
        for (int i = 0; i < n; ++i) norm += e1(i, j) * e1(i, j);
        c_[size_t(j)] = std::sqrt(norm);
        if (c_[size_t(j)] == 0) c_[size_t(j)] = 1;
    }
    e1s_ = Matrix(n, 6);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 6; ++j) e1s_(i, j) = e1(i, j) / c_[size_t(j)];

    const Matrix q2 = orthonormal_basis(e2_);
    Matrix f = e1s_;
    if (q2.cols() > 0) {
        const Matrix proj = q2 * (q2.transposed() * e1s_);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 6; ++j) f(i, j) -= proj(i, j);
    }
    const auto svd = linalg::jacobi_svd(f);
    sigma_ = svd.sigma;
    v_ = svd.v;
}

Matrix LsqProblem::equilibrated_constraint(double k) const {
    Matrix cs(6, 6);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            cs(i, j) = (i == j ? -1.0 : k / 2.0 - 1.0) / (c_[size_t(i)] * c_[size_t(j)]);
    for (int i = 3; i < 6; ++i) cs(i, i) = -k / (c_[size_t(i)] * c_[size_t(i)]);
    return cs;
}

QuadricCoeffs LsqProblem::finish(std::vector<double> v1s) const {
    std::vector<double> rhs = e1s_ * v1s;
    for (auto& x : rhs) x = -x;
    const std::vector<double> v2 = linalg::solve_linear(e2_, rhs);

    QuadricCoeffs out;
    out.a = v1s[0] / c_[0] / (s_ * s_);
    out.b = v1s[1] / c_[1] / (s_ * s_);
    out.c = v1s[2] / c_[2] / (s_ * s_);
    out.f = v1s[3] / c_[3] / (s_ * s_);
    out.g = v1s[4] / c_[4] / (s_ * s_);
    out.h = v1s[5] / c_[5] / (s_ * s_);
    if (center_mode_ == CenterMode::free_center) {
        out.p = v2[0] / s_;
        out.q = v2[1] / s_;
        out.r = v2[2] / s_;
        out.d = v2[3];
    } else {
        out.d = v2[0];
    }
    return out;
}

SinglePassFit LsqProblem::solve_at(double k, Acceptance acceptance) const {
    const Matrix cs = equilibrated_constraint(k);
    const double smax = sigma_.empty() ? 0.0 : sigma_[0];

    std::vector<int> null_idx, range_idx;
    for (int j = 0; j < 6; ++j) {
        if (sigma_[size_t(j)] <= 1e-10 * smax)
            null_idx.push_back(j);
        else
            range_idx.push_back(j);
    }
    const Matrix n0 = columns(v_, null_idx);
    const Matrix ur = columns(v_, range_idx);

    std::vector<Candidate> candidates;
    Matrix b0, pinv_b0;
    if (n0.cols() > 0) {
        b0 = n0.transposed() * (cs * n0);
        pinv_b0 = sym_pinv(b0);
        const auto eig = linalg::sym_eigen(b0);
        if (eig.values[0] > 0) {
            Candidate cand;
            cand.lambda = 0.0;
            cand.v1.assign(6, 0.0);
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < n0.cols(); ++j) cand.v1[size_t(i)] += n0(i, j) * eig.vectors(j, 0);
            candidates.push_back(std::move(cand));
        }
    }
    if (ur.cols() > 0) {
        Matrix ct = ur.transposed() * (cs * ur);
        if (n0.cols() > 0) {
            const Matrix x = ur.transposed() * (cs * n0);
            const Matrix corr = x * (pinv_b0 * x.transposed());
            for (int i = 0; i < ct.rows(); ++i)
                for (int j = 0; j < ct.cols(); ++j) ct(i, j) -= corr(i, j);
        }
        const int nr = ct.rows();
        Matrix fm(nr, nr);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nr; ++j)
                fm(i, j) = (ct(i, j) + ct(j, i)) / 2.0 /
                           (sigma_[size_t(range_idx[size_t(i)])] * sigma_[size_t(range_idx[size_t(j)])]);
        const auto eig = linalg::sym_eigen(fm);
        for (int j = 0; j < nr; ++j) {
            const double mu = eig.values[size_t(j)];
            if (!(mu > 0)) continue;
            Candidate cand;
            cand.lambda = 1.0 / mu;
            cand.v1.assign(6, 0.0);
            for (int i = 0; i < 6; ++i)
                for (int l = 0; l < nr; ++l)
                    cand.v1[size_t(i)] +=
                        ur(i, l) * eig.vectors(l, j) / sigma_[size_t(range_idx[size_t(l)])];
            if (n0.cols() > 0) {
                // remove the null-space component that violates the deflated pencil
                const std::vector<double> w = pinv_b0 * (n0.transposed() * (cs * cand.v1));
                for (int i = 0; i < 6; ++i)
                    for (int l = 0; l < n0.cols(); ++l) cand.v1[size_t(i)] -= n0(i, l) * w[size_t(l)];
            }
            candidates.push_back(std::move(cand));
        }
    }

    const Candidate* best = nullptr;
    std::vector<Candidate> admissible;
    for (auto& cand : candidates) {
        const std::vector<double> csv = cs * cand.v1;
        const double q = linalg::dot(cand.v1, csv);
        if (!(q > 0)) continue;
        const double rq = std::sqrt(q);
        for (auto& x : cand.v1) x /= rq;
        admissible.push_back(cand);
    }
    for (const auto& cand : admissible)
        if (best == nullptr || cand.lambda < best->lambda) best = &cand;

    SinglePassFit out;
    out.k_used = k;

    if (acceptance == Acceptance::strict) {
        std::vector<double> v_unc(6);
        for (int i = 0; i < 6; ++i) v_unc[size_t(i)] = v_(i, 5);
        const double q = linalg::dot(v_unc, cs * v_unc);
        if (q > 0) {
            const double rq = std::sqrt(q);
            for (auto& x : v_unc) x /= rq;
            QuadricCoeffs coeffs = finish(v_unc);
            if (is_ellipsoid(coeffs)) {
                const double cc = constraint_value(coeffs, k);
                if (cc > 0) {
                    auto arr = coeffs.as_array();
                    const double rc = std::sqrt(cc);
                    for (auto& x : arr) x /= rc;
                    out.coeffs = QuadricCoeffs::from_array(arr);
                    out.has_coeffs = true;
                    out.accepted = true;
                    // residual of the unconstrained direction under the data metric
                    double om = 0;
                    for (int j = 0; j < 6; ++j) {
                        double proj = 0;
                        for (int i = 0; i < 6; ++i) proj += v_(i, j) * v_unc[size_t(i)];
                        om += sigma_[size_t(j)] * sigma_[size_t(j)] * proj * proj;
                    }
                    out.lambda = om;
                    return out;
                }
            }
        }
    }

    if (best != nullptr) {
        QuadricCoeffs coeffs = finish(best->v1);
        out.lambda = best->lambda;
        const bool ell = is_ellipsoid(coeffs);
        const double cc = constraint_value(coeffs, k);
        if (cc > 0) {
            auto arr = coeffs.as_array();
            const double rc = std::sqrt(cc);
            for (auto& x : arr) x /= rc;
            coeffs = QuadricCoeffs::from_array(arr);
        }
        out.coeffs = coeffs;
        out.has_coeffs = true;
        out.accepted = acceptance == Acceptance::ellipsoid_only && ell;
    }
    return out;
}

SinglePassFit inner_fit(const PointSet& points, Acceptance acceptance, double k_max,
                        CenterMode center_mode) {
    if (!(k_max >= 4.0)) throw InvalidInput("inner_fit: k_max must be at least 4");
    const LsqProblem problem(points, center_mode);
    double k = 4.0;
    int iterations = 0;
    while (true) {
        ++iterations;
        SinglePassFit result = problem.solve_at(k, acceptance);
        result.inner_iterations = iterations;
        if (result.accepted || k > k_max) return result;
        k *= 2.0;
    }
}

} // namespace ef
