#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ellipsoidfit.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <string>

namespace {

struct PointsGuard {
    ef_points* p = nullptr;
    ~PointsGuard() { ef_points_destroy(p); }
};

struct ReportGuard {
    ef_report* r = nullptr;
    ~ReportGuard() { ef_report_destroy(r); }
};

double worst_rel_err(const double got[3], std::array<double, 3> want) {
    std::sort(want.begin(), want.end(), std::greater<>());
    double e = 0;
    for (int i = 0; i < 3; ++i)
        e = std::max(e, std::fabs(got[i] - want[size_t(i)]) / want[size_t(i)]);
    return e;
}

} // namespace

TEST_CASE("config defaults") {
    ef_fit_config cfg;
    std::memset(&cfg, 0xff, sizeof cfg);
    ef_fit_config_init(&cfg);
    CHECK(cfg.k_max == 1e10);
    CHECK(cfg.max_outer_iterations == 100);
    CHECK(cfg.off_diag_tol == 1e-8);
    CHECK(cfg.trace_tol == 1e-6);
    CHECK(cfg.init_mode == EF_INIT_RANDOM);
    CHECK(cfg.rng_seed == 0);
    CHECK(cfg.center_mode == EF_CENTER_FIXED_ORIGIN);
    ef_fit_config_init(nullptr); // must not crash
}

TEST_CASE("point set create/get round trip") {
    const double coords[] = {1, 2, 3, 4, 5, 6};
    PointsGuard pts;
    REQUIRE(ef_points_create(coords, 2, &pts.p) == EF_OK);
    CHECK(ef_points_count(pts.p) == 2);
    double xyz[3];
    REQUIRE(ef_points_get(pts.p, 1, xyz) == EF_OK);
    CHECK(xyz[0] == 4);
    CHECK(xyz[2] == 6);
    CHECK(ef_points_get(pts.p, 2, xyz) == EF_INVALID_INPUT);
    CHECK(std::string(ef_last_error_message()).size() > 0);

    ef_points* out = nullptr;
    CHECK(ef_points_create(nullptr, 2, &out) == EF_INVALID_INPUT);
    CHECK(ef_points_create(coords, 0, &out) == EF_INVALID_INPUT);
    CHECK(ef_points_count(nullptr) == 0);
}

TEST_CASE("generate + fit recovers a rotated ellipsoid through the C interface") {
    const double axes[3] = {12, 10, 8};
    const double ang[3] = {30, 80, 70};
    PointsGuard pts;
    REQUIRE(ef_points_generate(axes, ang, 6, 1, 0.0, &pts.p) == EF_OK);
    REQUIRE(ef_points_count(pts.p) == 6);

    ef_fit_config cfg;
    ef_fit_config_init(&cfg);
    cfg.rng_seed = 1;
    ReportGuard rep;
    REQUIRE(ef_fit(pts.p, &cfg, &rep.r) == EF_OK);
    CHECK(ef_report_converged(rep.r) == 1);

    double got[3], euler[3], rot[9], fisher[9], center[3];
    REQUIRE(ef_report_semi_axes(rep.r, got) == EF_OK);
    CHECK(worst_rel_err(got, {12, 10, 8}) < 1e-8);
    REQUIRE(ef_report_euler_deg(rep.r, euler) == EF_OK);
    CHECK(std::fabs(euler[0] - 30) < 1e-6);
    CHECK(std::fabs(euler[1] - 80) < 1e-6);
    CHECK(std::fabs(euler[2] - 70) < 1e-6);
    REQUIRE(ef_report_center(rep.r, center) == EF_OK);
    CHECK(center[0] == 0.0);

    REQUIRE(ef_report_rotation(rep.r, rot) == EF_OK);
    double err = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += rot[3 * i + k] * rot[3 * j + k];
            err = std::max(err, std::fabs(s - (i == j ? 1.0 : 0.0)));
        }
    CHECK(err < 1e-10);

    REQUIRE(ef_report_fisher(rep.r, fisher) == EF_OK);
    CHECK(fisher[1] == doctest::Approx(fisher[3])); // symmetric

    CHECK(ef_report_outer_iterations(rep.r) >= 1);
    CHECK(ef_report_total_inner_iterations(rep.r) >= 1);
    CHECK(ef_report_gimbal_lock(rep.r) == 0);
    CHECK(ef_report_axis_degenerate(rep.r) == 0);

    const size_t n = ef_report_trace_size(rep.r);
    REQUIRE(n >= 1);
    ef_trace_row row;
    REQUIRE(ef_report_trace_get(rep.r, n - 1, &row) == EF_OK);
    CHECK(row.outer_iter == int(n));
    CHECK(row.k_used >= 4.0);
    CHECK(row.off_diag_ratio <= 1e-8);
    CHECK(ef_report_trace_get(rep.r, n, &row) == EF_INVALID_INPUT);
}

TEST_CASE("single-pass entry point exposes the naive result") {
    const double axes[3] = {5, 3, 1};
    const double ang[3] = {0, 0, 0};
    PointsGuard pts;
    REQUIRE(ef_points_generate(axes, ang, 6, 0, 0.0, &pts.p) == EF_OK);
    ReportGuard rep;
    REQUIRE(ef_fit_single_pass(pts.p, nullptr, &rep.r) == EF_OK);
    CHECK(ef_report_outer_iterations(rep.r) == 1);
    double got[3];
    REQUIRE(ef_report_semi_axes(rep.r, got) == EF_OK);
    // the single pass is expected to be off at this elongation
    CHECK(worst_rel_err(got, {5, 3, 1}) > 0.05);
}

TEST_CASE("error paths set status codes and messages") {
    const double bad_axes[3] = {1, -1, 1};
    const double ang[3] = {0, 0, 0};
    ef_points* out = nullptr;
    CHECK(ef_points_generate(bad_axes, ang, 6, 0, 0.0, &out) == EF_INVALID_INPUT);
    CHECK(std::string(ef_last_error_message()).find("semi-axes") != std::string::npos);

    const double good_axes[3] = {1, 1, 1};
    CHECK(ef_points_generate(good_axes, ang, 5, 0, 0.0, &out) == EF_INVALID_INPUT);

    const double g_bad[9] = {1, 0, 0, 0, 1, 0, 0, 0, -1};
    CHECK(ef_points_sample_quadric(g_bad, 1.0, 10, 0, &out) == EF_INVALID_INPUT);

    ef_report* rep = nullptr;
    CHECK(ef_fit(nullptr, nullptr, &rep) == EF_INVALID_INPUT);
}

TEST_CASE("sample_quadric through the C interface") {
    const double g[9] = {2, 0.1, 0, 0.1, 1, 0, 0, 0, 0.5};
    PointsGuard pts;
    REQUIRE(ef_points_sample_quadric(g, 0.03, 100, 5, &pts.p) == EF_OK);
    CHECK(ef_points_count(pts.p) == 100);
    for (size_t i = 0; i < 100; ++i) {
        double p[3];
        REQUIRE(ef_points_get(pts.p, i, p) == EF_OK);
        double q = 0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) q += p[a] * g[3 * a + b] * p[b];
        CHECK(q == doctest::Approx(0.03).epsilon(1e-12));
    }
}

TEST_CASE("version string") {
    CHECK(std::string(ef_version()).size() > 0);
}
