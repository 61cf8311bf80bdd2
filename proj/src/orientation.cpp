#include "orientation.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ef {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

bool is_proper_orthogonal(const Mat3& r, double tol) {
    const Mat3 rrt = r * r.transposed();
    double err = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            err = std::max(err, std::fabs(rrt(i, j) - (i == j ? 1.0 : 0.0)));
    return err <= tol && r.det() > 0;
}

} // namespace

Mat3 euler_to_matrix(const EulerAngles& angles) {
    const double a = angles.alpha_deg * kDegToRad;
    const double b = angles.beta_deg * kDegToRad;
    const double g = angles.gamma_deg * kDegToRad;
    const double ca = std::cos(a), sa = std::sin(a);
    const double cb = std::cos(b), sb = std::sin(b);
    const double cg = std::cos(g), sg = std::sin(g);
    Mat3 r;
    r(0, 0) = ca * cb;
    r(0, 1) = sg * sb * ca - cg * sa;
    r(0, 2) = cg * sb * ca + sg * sa;
    r(1, 0) = cb * sa;
    r(1, 1) = sg * sa * sb + cg * ca;
    r(1, 2) = cg * sa * sb - sg * ca;
    r(2, 0) = -sb;
    r(2, 1) = sg * cb;
    r(2, 2) = cg * cb;
    return r;
}

EulerAngles matrix_to_euler(const Mat3& r) {
    if (!is_proper_orthogonal(r, 1e-8))
        throw InvalidInput("matrix_to_euler: input is not a proper rotation");
    EulerAngles out;
    const double s = std::clamp(r(2, 0), -1.0, 1.0);
    double beta = -std::asin(s);
    if (std::fabs(std::cos(beta)) < 1e-9) {
        out.gimbal_lock = true;
        out.alpha_deg = 0.0;
        out.beta_deg = beta * kRadToDeg;
        // With alpha = 0, the remaining rotation resolves from the upper block.
        if (s < 0)
            out.gamma_deg = std::atan2(r(0, 1), r(1, 1)) * kRadToDeg;
        else
            out.gamma_deg = std::atan2(-r(0, 1), r(1, 1)) * kRadToDeg;
        return out;
    }
    out.beta_deg = beta * kRadToDeg;
    out.alpha_deg = std::atan2(r(1, 0), r(0, 0)) * kRadToDeg;
    out.gamma_deg = std::atan2(r(2, 1), r(2, 2)) * kRadToDeg;
    return out;
}

const std::array<Mat3, 24>& proper_relabelings() {
    static const std::array<Mat3, 24> table = [] {
        std::array<Mat3, 24> out{};
        int count = 0;
        int perm[3] = {0, 1, 2};
        std::array<int, 6 * 3> perms{};
        int np = 0;
        std::sort(perm, perm + 3);
        do {
            for (int j = 0; j < 3; ++j) perms[size_t(np * 3 + j)] = perm[j];
            ++np;
        } while (std::next_permutation(perm, perm + 3));
        for (int ip = 0; ip < np; ++ip) {
            for (int smask = 0; smask < 8; ++smask) {
                Mat3 m{};
                for (int j = 0; j < 3; ++j) {
                    const int row = perms[size_t(ip * 3 + j)];
                    m(row, j) = (smask >> j) & 1 ? -1.0 : 1.0;
                }
                if (m.det() > 0) out[size_t(count++)] = m;
            }
        }
        return out;
    }();
    return table;
}

EulerAngles recover_orientation(const PointSet& points, const Mat3& r) {
    if (!is_proper_orthogonal(r, 1e-6))
        throw InvalidInput("recover_orientation: input is not a proper rotation");

    struct Candidate {
        EulerAngles angles;
        double score = 0;
        bool in_box = false;
    };
    std::vector<Candidate> accepted;

    double pscale = 0;
    for (const auto& p : points)
        pscale = std::max({pscale, std::fabs(p[0]), std::fabs(p[1]), std::fabs(p[2])});
    if (pscale == 0) pscale = 1;

    for (const Mat3& pi : proper_relabelings()) {
        const Mat3 cand = (r * pi).transposed();
        EulerAngles ang;
        try {
            ang = matrix_to_euler(cand);
        } catch (const Error&) {
            continue;
        }
        const Mat3 rebuilt = euler_to_matrix(ang);
        // reprojection consistency between candidate and its rebuilt rotation
        double err = 0;
        for (const auto& p : points) {
            const Vec3 q1 = cand * p;
            const Vec3 q2 = rebuilt * p;
            for (int i = 0; i < 3; ++i) err = std::max(err, std::fabs(q1[size_t(i)] - q2[size_t(i)]));
        }
        if (err > 1e-6 * pscale) continue;

        Candidate c;
        c.angles = ang;
        const double tol = 1e-6;
        c.in_box = ang.alpha_deg >= -tol && ang.alpha_deg <= 90 + tol &&
                   ang.beta_deg >= -tol && ang.beta_deg <= 90 + tol &&
                   ang.gamma_deg >= -tol && ang.gamma_deg <= 90 + tol;
        c.score = std::fabs(ang.alpha_deg) + std::fabs(ang.beta_deg) + std::fabs(ang.gamma_deg);
        accepted.push_back(c);
    }

    if (accepted.empty())
        throw OrientationAmbiguous("recover_orientation: no candidate relabeling passed the reprojection test");

    std::stable_sort(accepted.begin(), accepted.end(), [](const Candidate& x, const Candidate& y) {
        if (x.in_box != y.in_box) return x.in_box;
        if (x.score != y.score) return x.score < y.score;
        if (x.angles.alpha_deg != y.angles.alpha_deg) return x.angles.alpha_deg < y.angles.alpha_deg;
        if (x.angles.beta_deg != y.angles.beta_deg) return x.angles.beta_deg < y.angles.beta_deg;
        return x.angles.gamma_deg < y.angles.gamma_deg;
    });
    return accepted.front().angles;
}

} // namespace ef
