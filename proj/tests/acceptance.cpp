// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion regenerates its data sets from fixed
// parameters and seed sweeps.
#include "error.hpp"
#include "iterative_fit.hpp"
#include "synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace ef;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
    std::printf("%s: %s (%s)\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    if (!ok) ++g_failures;
}

PointSet gen(std::array<double, 3> axes, std::array<double, 3> ang, uint64_t seed, int n = 6) {
    SynthSpec spec;
    spec.semi_axes = axes;
    spec.euler_deg = ang;
    spec.n_points = n;
    spec.seed = seed;
    return generate(spec);
}

double worst_rel_err(const std::array<double, 3>& got, std::array<double, 3> want) {
    std::sort(want.begin(), want.end(), std::greater<>());
    double e = 0;
    for (int i = 0; i < 3; ++i)
        e = std::max(e, std::fabs(got[size_t(i)] - want[size_t(i)]) / want[size_t(i)]);
    return e;
}

double worst_angle_err(const EulerAngles& got, const std::array<double, 3>& want) {
    return std::max({std::fabs(got.alpha_deg - want[0]), std::fabs(got.beta_deg - want[1]),
                     std::fabs(got.gamma_deg - want[2])});
}

double rotation_defect(const Mat3& r) {
    const Mat3 rrt = r * r.transposed();
    double e = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e = std::max(e, std::fabs(rrt(i, j) - (i == j ? 1.0 : 0.0)));
    return e;
}

struct SweepResult {
    int ok = 0;
    int trials = 0;
    double max_time_s = 0;
    double max_rot_defect = 0;
    double max_surface_resid = 0;
    std::vector<int> outers, inners;
};

SweepResult sweep(std::array<double, 3> axes, std::array<double, 3> ang, int n_seeds,
                  double axis_tol, double angle_tol) {
    SweepResult res;
    for (uint64_t seed = 0; seed < uint64_t(n_seeds); ++seed) {
        const PointSet pts = gen(axes, ang, seed);
        FitConfig cfg;
        cfg.rng_seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        FitReport rep;
        try {
            rep = fit_ellipsoid(pts, cfg);
        } catch (const Error&) {
            ++res.trials;
            continue;
        }
        res.max_time_s = std::max(
            res.max_time_s,
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        ++res.trials;
        res.outers.push_back(rep.outer_iterations);
        res.inners.push_back(rep.total_inner_iterations);
        res.max_rot_defect = std::max(res.max_rot_defect, rotation_defect(rep.rotation));
        const Mat3 k = rep.fisher_original_frame.full();
        for (const auto& p : pts) {
            double q = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) q += p[size_t(i)] * k(i, j) * p[size_t(j)];
            res.max_surface_resid = std::max(res.max_surface_resid, std::fabs(q - 1.0));
        }
        if (rep.converged && worst_rel_err(rep.geometry.semi_axes, axes) <= axis_tol &&
            worst_angle_err(rep.geometry.euler, ang) <= angle_tol)
            ++res.ok;
    }
    return res;
}

double median_of(std::vector<int> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? double(v[n / 2]) : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

SweepResult g_chi4; // shared between criteria 5 and 6

void criterion1() {
    const SweepResult r = sweep({12, 10, 8}, {0, 0, 0}, 50, 1e-3, 0.01);
    report("criterion 1: aligned chi=1.5 axes (12,10,8) to 1e-3 and 0.01 deg, 50/50, <0.1s",
           r.ok == 50 && r.max_time_s < 0.1,
           fmt("ok=%d/50 max_time=%.3fs", r.ok, r.max_time_s));
}

void criterion2() {
    const SweepResult a = sweep({5, 3, 1}, {0, 0, 0}, 50, 1e-3, 0.01);
    const SweepResult b = sweep({10, 6, 1}, {0, 0, 0}, 50, 1e-3, 0.01);
    report("criterion 2: aligned chi=5 and chi=10 axes to 1e-3, 50/50 each",
           a.ok == 50 && b.ok == 50, fmt("(5,3,1)=%d/50 (10,6,1)=%d/50", a.ok, b.ok));
}

void criterion3() {
    const SweepResult a = sweep({12, 10, 8}, {30, 80, 70}, 50, 1e-2, 0.1);
    const SweepResult b = sweep({1, 3, 5}, {70, 10, 30}, 50, 1e-2, 0.1);
    const SweepResult c = sweep({10, 3, 1}, {50, 60, 40}, 50, 1e-2, 0.1);
    report("criterion 3: rotated cases axes to 1e-2 and angles to 0.1 deg, >=48/50 each",
           a.ok >= 48 && b.ok >= 48 && c.ok >= 48,
           fmt("case4=%d case5=%d case6=%d", a.ok, b.ok, c.ok));
}

void criterion4() {
    struct Case {
        std::array<double, 3> axes;
        std::array<double, 3> ang;
    };
    const Case cases[] = {{{5, 3, 1}, {0, 0, 0}},
                          {{10, 6, 1}, {0, 0, 0}},
                          {{10, 3, 1}, {50, 60, 40}}};
    bool all_ok = true;
    std::string detail;
    for (const Case& c : cases) {
        int base_bad = 0, iter_good = 0;
        for (uint64_t seed = 0; seed < 50; ++seed) {
            const PointSet pts = gen(c.axes, c.ang, seed);
            FitConfig cfg;
            cfg.rng_seed = seed;
            try {
                const FitReport single = fit_single_pass(pts, cfg);
                if (worst_rel_err(single.geometry.semi_axes, c.axes) > 0.05) ++base_bad;
            } catch (const Error&) {
                ++base_bad;
            }
            try {
                const FitReport full = fit_ellipsoid(pts, cfg);
                if (worst_rel_err(full.geometry.semi_axes, c.axes) < 0.01) ++iter_good;
            } catch (const Error&) {
            }
        }
        all_ok = all_ok && base_bad >= 40 && iter_good >= 48;
        detail += fmt("[base_bad=%d iter_good=%d] ", base_bad, iter_good);
    }
    report("criterion 4: single-pass off by >5% on >=40/50 seeds while iterative stays <1%",
           all_ok, detail);
}

void criterion5() {
    SweepResult r;
    double max_final_offdiag = 0;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        const PointSet pts = gen({10000, 50, 1}, {30, 80, 70}, seed);
        FitConfig cfg;
        cfg.rng_seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        FitReport rep;
        try {
            rep = fit_ellipsoid(pts, cfg);
        } catch (const Error&) {
            ++r.trials;
            continue;
        }
        r.max_time_s = std::max(
            r.max_time_s,
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        ++r.trials;
        r.outers.push_back(rep.outer_iterations);
        r.inners.push_back(rep.total_inner_iterations);
        r.max_rot_defect = std::max(r.max_rot_defect, rotation_defect(rep.rotation));
        const bool ok = rep.converged && rep.outer_iterations <= 100 &&
                        worst_rel_err(rep.geometry.semi_axes, {10000, 50, 1}) <= 1e-3 &&
                        worst_angle_err(rep.geometry.euler, {30, 80, 70}) <= 0.1;
        if (ok) {
            ++r.ok;
            max_final_offdiag = std::max(max_final_offdiag, rep.trace.back().off_diag_ratio);
        }
    }
    g_chi4 = r;
    report("criterion 5: chi=1e4 axes to 1e-3 and angles to 0.1 deg, >=45/50, <5s, trace settles",
           r.ok >= 45 && r.max_time_s < 5.0 && max_final_offdiag <= 1e-8,
           fmt("ok=%d/50 max_time=%.3fs final_offdiag=%.2e", r.ok, r.max_time_s,
               max_final_offdiag));
}

void criterion6() {
    const double mo = median_of(g_chi4.outers);
    const double mi = median_of(g_chi4.inners);
    report("criterion 6: chi=1e4 median inner iterations <=80 and median outer <=40",
           mi <= 80.0 && mo <= 40.0, fmt("median_inner=%.1f median_outer=%.1f", mi, mo));
}

void criterion7() {
    std::mt19937_64 rng(2024);
    bool ok = true;
    std::string detail;

    // (a) rotation orthonormality over a spread of fits
    {
        double worst = 0;
        const std::array<std::array<double, 3>, 3> axes_set = {
            {{12, 10, 8}, {10, 3, 1}, {10000, 50, 1}}};
        const std::array<std::array<double, 3>, 3> ang_set = {
            {{0, 0, 0}, {50, 60, 40}, {30, 80, 70}}};
        for (int c = 0; c < 3; ++c)
            for (uint64_t seed = 0; seed < 10; ++seed) {
                FitConfig cfg;
                cfg.rng_seed = seed;
                const FitReport rep =
                    fit_ellipsoid(gen(axes_set[size_t(c)], ang_set[size_t(c)], seed), cfg);
                worst = std::max(worst, rotation_defect(rep.rotation));
            }
        ok = ok && worst <= 1e-10;
        detail += fmt("a:%.1e ", worst);
    }

    // (b) accepted inner fits satisfy the unit constraint
    {
        double worst = 0;
        for (uint64_t seed = 0; seed < 20; ++seed) {
            const PointSet pts = gen({10, 6, 1}, {0, 0, 0}, seed);
            const SinglePassFit fit = inner_fit(pts, Acceptance::strict);
            if (fit.accepted)
                worst = std::max(worst, std::fabs(constraint_value(fit.coeffs, fit.k_used) - 1.0));
        }
        ok = ok && worst <= 1e-8;
        detail += fmt("b:%.1e ", worst);
    }

    // (c) the constraint quadratic form equals kJ - I^2
    {
        std::normal_distribution<double> d(0.0, 1.0);
        std::uniform_real_distribution<double> kd(4.0, 1e10);
        double worst = 0;
        for (int rep = 0; rep < 10000; ++rep) {
            std::array<double, 10> varr{};
            for (auto& x : varr) x = d(rng);
            const QuadricCoeffs v = QuadricCoeffs::from_array(varr);
            const double k = kd(rng);
            const Matrix c = constraint_matrix(k);
            double got = 0;
            for (int i = 0; i < 10; ++i)
                for (int j = 0; j < 10; ++j) got += varr[size_t(i)] * c(i, j) * varr[size_t(j)];
            const auto [I, J] = invariants_IJ(v);
            const double want = k * J - I * I;
            worst = std::max(worst, std::fabs(got - want) / std::max(1.0, std::fabs(want)));
        }
        ok = ok && worst <= 1e-12;
        detail += fmt("c:%.1e ", worst);
    }

    // (d) noiseless fits pass through the data points
    {
        double worst = 0;
        for (uint64_t seed = 0; seed < 10; ++seed) {
            const PointSet pts = gen({10, 3, 1}, {50, 60, 40}, seed);
            FitConfig cfg;
            cfg.rng_seed = seed;
            const FitReport rep = fit_ellipsoid(pts, cfg);
            const Mat3 k = rep.fisher_original_frame.full();
            for (const auto& p : pts) {
                double q = 0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) q += p[size_t(i)] * k(i, j) * p[size_t(j)];
                worst = std::max(worst, std::fabs(q - 1.0));
            }
        }
        ok = ok && worst <= 1e-6;
        detail += fmt("d:%.1e ", worst);
    }

    // (e) Euler round trip
    {
        std::uniform_real_distribution<double> wide(-179.9, 179.9), mid(-89.9, 89.9);
        double worst = 0;
        for (int rep = 0; rep < 10000; ++rep) {
            const EulerAngles in{wide(rng), mid(rng), wide(rng)};
            const EulerAngles out = matrix_to_euler(euler_to_matrix(in));
            worst = std::max({worst, std::fabs(out.alpha_deg - in.alpha_deg),
                              std::fabs(out.beta_deg - in.beta_deg),
                              std::fabs(out.gamma_deg - in.gamma_deg)});
        }
        ok = ok && worst <= 1e-9;
        detail += fmt("e:%.1e ", worst);
    }

    // (f) scale equivariance and rotation invariance of the fitted semi-axes
    {
        double worst = 0;
        for (uint64_t seed = 0; seed < 5; ++seed) {
            const PointSet pts = gen({10, 6, 1}, {15, 35, 55}, seed);
            FitConfig cfg;
            cfg.rng_seed = seed;
            const FitReport base = fit_ellipsoid(pts, cfg);
            const double s = 3.25;
            PointSet scaled = pts;
            for (auto& p : scaled)
                for (auto& x : p) x *= s;
            const FitReport rs = fit_ellipsoid(scaled, cfg);
            const Mat3 extra = euler_to_matrix({33, 21, -40});
            PointSet rotated;
            for (const auto& p : pts) rotated.push_back(extra * p);
            const FitReport rr = fit_ellipsoid(rotated, cfg);
            for (int i = 0; i < 3; ++i) {
                const double b = base.geometry.semi_axes[size_t(i)];
                worst = std::max(worst,
                                 std::fabs(rs.geometry.semi_axes[size_t(i)] / s - b) / b);
                worst = std::max(worst, std::fabs(rr.geometry.semi_axes[size_t(i)] - b) / b);
            }
        }
        ok = ok && worst <= 1e-6;
        detail += fmt("f:%.1e ", worst);
    }

    // (g) metric recovery from sampled level sets
    {
        std::uniform_real_distribution<double> angd(-80.0, 80.0), ld(0.2, 5.0);
        double worst = 0;
        for (int inst = 0; inst < 100; ++inst) {
            const Mat3 r = euler_to_matrix({angd(rng), angd(rng) / 2, angd(rng)});
            Mat3 d{};
            d(0, 0) = ld(rng);
            d(1, 1) = ld(rng);
            d(2, 2) = ld(rng);
            const SymMatrix3 g = SymMatrix3::from_full(r.transposed() * d * r);
            const PointSet pts = sample_quadric(g, 1.0, 6, uint64_t(inst));
            FitConfig cfg;
            cfg.rng_seed = uint64_t(inst);
            const FitReport rep = fit_ellipsoid(pts, cfg);
            const Mat3 gf = g.full();
            const Mat3 kf = rep.fisher_original_frame.full();
            double gmax = 0;
            for (double x : gf.m) gmax = std::max(gmax, std::fabs(x));
            for (int i = 0; i < 9; ++i)
                worst = std::max(worst, std::fabs(kf.m[size_t(i)] - gf.m[size_t(i)]) / gmax);
        }
        ok = ok && worst <= 1e-6;
        detail += fmt("g:%.1e", worst);
    }

    report("criterion 7: property suite (rotations, constraint, surface, Euler, equivariance, "
           "metric recovery)",
           ok, detail);
}

void criterion8() {
    // fixed SPD metric, level 0.03; fit from six samples, then spray 40000
    // points on the fitted surface and verify they sit on the true level set
    const Mat3 r = euler_to_matrix({20, 40, 60});
    Mat3 d{};
    d(0, 0) = 0.5;
    d(1, 1) = 1.2;
    d(2, 2) = 3.7;
    const SymMatrix3 g = SymMatrix3::from_full(r.transposed() * d * r);
    const double level = 0.03;

    const PointSet pts = sample_quadric(g, level, 6, 42);
    FitConfig cfg;
    cfg.rng_seed = 42;
    const FitReport rep = fit_ellipsoid(pts, cfg);

    const PointSet spray = sample_quadric(rep.fisher_original_frame, 1.0, 40000, 7);
    const Mat3 gf = g.full();
    double lo = 1e300, hi = -1e300;
    for (const auto& p : spray) {
        double q = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) q += p[size_t(i)] * gf(i, j) * p[size_t(j)];
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    const bool ok = rep.converged && lo >= level * (1 - 1e-4) && hi <= level * (1 + 1e-4);
    report("criterion 8: resampled fitted surface stays within 1e-4 of the true level 0.03", ok,
           fmt("range=[%.8f, %.8f]", lo, hi));
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
