#include "iterative_fit.hpp"

#include "error.hpp"

#include <cmath>
#include <random>

namespace ef {

namespace {

Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = normal(rng);
    const Matrix mtm = m.transposed() * m;
    const auto eig = linalg::sym_eigen(mtm);
    Mat3 v;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v(i, j) = eig.vectors(i, j);
    return linalg::make_proper(v).transposed();
}

PointSet rotate_points(const PointSet& points, const Mat3& rc) {
    PointSet out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(rc * p);
    return out;
}

/// Eigenvectors of a symmetric form ordered by ascending eigenvalue, i.e.
/// descending semi-axis.
struct PrincipalFrame {
    std::array<double, 3> eigenvalues{}; // ascending
    Mat3 vectors;                        // columns match eigenvalues
};

PrincipalFrame principal_frame(const SymMatrix3& k) {
    const auto eig = linalg::sym_eigen(k);
    PrincipalFrame out;
    for (int j = 0; j < 3; ++j) {
        out.eigenvalues[size_t(j)] = eig.values[size_t(2 - j)];
        for (int i = 0; i < 3; ++i) out.vectors(i, j) = eig.vectors(i, 2 - j);
    }
    return out;
}

/// Within each cluster of (numerically) equal eigenvalues the eigenvector
/// basis is arbitrary; replace it by the projection of the coordinate axes
/// onto the cluster's eigenspace so that degenerate fits report a stable,
/// axis-aligned orientation.
void canonicalize_degenerate(PrincipalFrame& pf) {
    const double wmax = std::max(
        {std::fabs(pf.eigenvalues[0]), std::fabs(pf.eigenvalues[1]), std::fabs(pf.eigenvalues[2])});
    const double tol = 1e-9 * wmax;
    int start = 0;
    while (start < 3) {
        int end = start + 1;
        while (end < 3 &&
               std::fabs(pf.eigenvalues[size_t(end)] - pf.eigenvalues[size_t(end - 1)]) <= tol)
            ++end;
        const int dim = end - start;
        if (dim > 1) {
            // projector onto the eigenspace
            Mat3 proj{};
            for (int c = start; c < end; ++c)
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) proj(i, j) += pf.vectors(i, c) * pf.vectors(j, c);
            // Gram-Schmidt over projected coordinate axes
            std::vector<Vec3> basis;
            for (int k = 0; k < 3 && int(basis.size()) < dim; ++k) {
                Vec3 v = {proj(0, k), proj(1, k), proj(2, k)};
                for (const Vec3& u : basis) {
                    const double s = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
                    for (int i = 0; i < 3; ++i) v[size_t(i)] -= s * u[size_t(i)];
                }
                const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
                if (n < 1e-8) continue;
                for (auto& x : v) x /= n;
                basis.push_back(v);
            }
            if (int(basis.size()) == dim)
                for (int c = start; c < end; ++c)
                    for (int i = 0; i < 3; ++i) pf.vectors(i, c) = basis[size_t(c - start)][size_t(i)];
        }
        start = end;
    }
}

std::array<double, 3> axes_from_eigenvalues(const std::array<double, 3>& w) {
    std::array<double, 3> axes{};
    for (int i = 0; i < 3; ++i) {
        const double a = std::fabs(w[size_t(i)]);
        axes[size_t(i)] = a > 0 ? 1.0 / std::sqrt(a) : 0.0;
    }
    return axes;
}

bool degenerate_axes(const std::array<double, 3>& w) {
    const double wmax = std::max({std::fabs(w[0]), std::fabs(w[1]), std::fabs(w[2])});
    return std::fabs(w[0] - w[1]) <= 1e-9 * wmax || std::fabs(w[1] - w[2]) <= 1e-9 * wmax ||
           std::fabs(w[0] - w[2]) <= 1e-9 * wmax;
}

SymMatrix3 rotate_form(const SymMatrix3& k, const Mat3& rc) {
    // K in the data frame: Rc^T K_rot Rc
    return SymMatrix3::from_full(rc.transposed() * k.full() * rc);
}

} // namespace

FitReport fit_ellipsoid(const PointSet& points, const FitConfig& config) {
    if (points.size() < 6) throw InvalidInput("fit_ellipsoid: at least six points required");
    if (config.max_outer_iterations < 1)
        throw InvalidInput("fit_ellipsoid: max_outer_iterations must be positive");

    std::mt19937_64 rng(config.rng_seed);

    FitReport report;
    Mat3 rc = Mat3::identity();
    switch (config.init_mode) {
    case InitMode::identity:
        break;
    case InitMode::fisher: {
        Matrix scatter(3, 3);
        for (const auto& p : points)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) scatter(i, j) += p[size_t(i)] * p[size_t(j)];
        const auto eig = linalg::sym_eigen(scatter);
        if (eig.values[0] > 0 && eig.values[2] > 1e-12 * eig.values[0]) {
            Mat3 v;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) v(i, j) = eig.vectors(i, j);
            rc = linalg::make_proper(v).transposed();
        } else {
            rc = random_rotation(rng);
            report.init_fallback_random = true;
        }
        break;
    }
    case InitMode::random:
        rc = random_rotation(rng);
        break;
    }

    bool converged = false;
    int inner_failures = 0;
    int stall_count = 0;
    double prev_ratio = -1;
    double best_ratio = -1;
    Mat3 best_rc = rc;

    for (int iter = 0; iter < config.max_outer_iterations; ++iter) {
        ++report.outer_iterations;
        const PointSet rotated = rotate_points(points, rc);
        const SinglePassFit pass =
            inner_fit(rotated, Acceptance::strict, config.k_max, config.center_mode);
        report.total_inner_iterations += pass.inner_iterations;

        IterationRecord rec;
        rec.outer_iter = report.outer_iterations;
        rec.k_used = pass.k_used;
        rec.inner_accepted = pass.accepted;

        FisherForm fisher;
        bool have_fisher = false;
        if (pass.has_coeffs) {
            try {
                fisher = quadric_to_fisher(pass.coeffs);
                have_fisher = true;
            } catch (const Error&) {
            }
        }
        if (!have_fisher) {
            report.trace.push_back(rec);
            if (++inner_failures > 5)
                throw FitFailed("fit_ellipsoid: constrained solver produced no usable quadric");
            rc = random_rotation(rng);
            stall_count = 0;
            prev_ratio = -1;
            continue;
        }

        rec.omega = algebraic_distance(pass.coeffs, design_matrix(rotated));

        const auto eig = linalg::sym_eigen(fisher.k_normalized);
        Mat3 v;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) v(i, j) = eig.vectors(i, j);
        v = linalg::make_proper(v);

        const double offd = fisher.k_normalized.max_offdiag_abs();
        const double diag = fisher.k_normalized.max_diag_abs();
        const double ratio = diag > 0 ? offd / diag : 0.0;
        rec.off_diag_ratio = ratio;

        const SymMatrix3 k_data = rotate_form(fisher.k_normalized, rc);
        const PrincipalFrame pf = principal_frame(k_data);
        rec.axes_estimate = axes_from_eigenvalues(pf.eigenvalues);
        try {
            const EulerAngles est = recover_orientation(points, linalg::make_proper(pf.vectors));
            rec.euler_estimate_deg = {est.alpha_deg, est.beta_deg, est.gamma_deg};
        } catch (const Error&) {
        }
        report.trace.push_back(rec);

        if (best_ratio < 0 || ratio < best_ratio) {
            best_ratio = ratio;
            best_rc = rc;
        }
        if (prev_ratio >= 0 && ratio >= prev_ratio) {
            if (++stall_count >= 10) {
                rc = best_rc;
                break;
            }
        } else {
            stall_count = 0;
        }
        prev_ratio = ratio;

        const bool conv =
            offd <= config.off_diag_tol * diag && std::fabs(v.trace() - 3.0) <= config.trace_tol;
        rc = v.transposed() * rc;
        if (conv) {
            converged = true;
            break;
        }
    }

    // final fit with the settled rotation
    const PointSet rotated = rotate_points(points, rc);
    const SinglePassFit pass =
        inner_fit(rotated, Acceptance::strict, config.k_max, config.center_mode);
    report.total_inner_iterations += pass.inner_iterations;
    if (!pass.has_coeffs)
        throw FitFailed("fit_ellipsoid: final constrained fit produced no candidate");
    const FisherForm fisher = quadric_to_fisher(pass.coeffs);

    const SymMatrix3 k_data = rotate_form(fisher.k_normalized, rc);
    PrincipalFrame pf = principal_frame(k_data);
    canonicalize_degenerate(pf);

    report.fisher_original_frame = k_data;
    report.rotation = linalg::make_proper(pf.vectors);
    report.converged = converged && pass.accepted;
    report.axis_degenerate = degenerate_axes(pf.eigenvalues);

    report.geometry.semi_axes = axes_from_eigenvalues(pf.eigenvalues);
    report.geometry.euler = recover_orientation(points, report.rotation);
    report.gimbal_lock = report.geometry.euler.gimbal_lock;
    if (config.center_mode == CenterMode::free_center)
        report.geometry.center = rc.transposed() * fisher.center;
    return report;
}

FitReport fit_single_pass(const PointSet& points, const FitConfig& config) {
    if (points.size() < 6) throw InvalidInput("fit_single_pass: at least six points required");
    const SinglePassFit pass =
        inner_fit(points, Acceptance::ellipsoid_only, config.k_max, config.center_mode);

    FitReport report;
    report.outer_iterations = 1;
    report.total_inner_iterations = pass.inner_iterations;
    if (!pass.has_coeffs)
        throw FitFailed("fit_single_pass: constrained solver produced no candidate");

    const FisherForm fisher = quadric_to_fisher(pass.coeffs);
    PrincipalFrame pf = principal_frame(fisher.k_normalized);
    canonicalize_degenerate(pf);

    report.fisher_original_frame = fisher.k_normalized;
    report.rotation = linalg::make_proper(pf.vectors);
    report.converged = pass.accepted;
    report.axis_degenerate = degenerate_axes(pf.eigenvalues);

    IterationRecord rec;
    rec.outer_iter = 1;
    rec.k_used = pass.k_used;
    rec.omega = algebraic_distance(pass.coeffs, design_matrix(points));
    const double diag = fisher.k_normalized.max_diag_abs();
    rec.off_diag_ratio = diag > 0 ? fisher.k_normalized.max_offdiag_abs() / diag : 0.0;
    rec.axes_estimate = axes_from_eigenvalues(pf.eigenvalues);
    rec.inner_accepted = pass.accepted;

    report.geometry.semi_axes = rec.axes_estimate;
    report.geometry.euler = recover_orientation(points, report.rotation);
    report.gimbal_lock = report.geometry.euler.gimbal_lock;
    rec.euler_estimate_deg = {report.geometry.euler.alpha_deg, report.geometry.euler.beta_deg,
                              report.geometry.euler.gamma_deg};
    report.trace.push_back(rec);
    if (config.center_mode == CenterMode::free_center) report.geometry.center = fisher.center;
    return report;
}

} // namespace ef
