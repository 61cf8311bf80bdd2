#include "ellipsoidfit.h"

#include "error.hpp"
#include "iterative_fit.hpp"
#include "synth.hpp"

#include <memory>
#include <string>

struct ef_points {
    ef::PointSet points;
};

struct ef_report {
    ef::FitReport report;
};

namespace {

thread_local std::string g_last_error;

ef_status set_error(ef_status code, const char* msg) {
    g_last_error = msg ? msg : "";
    return code;
}

ef_status from_exception(const ef::Error& e) {
    switch (e.code()) {
    case ef::ErrorCode::invalid_input: return set_error(EF_INVALID_INPUT, e.what());
    case ef::ErrorCode::degenerate_quadric: return set_error(EF_DEGENERATE_QUADRIC, e.what());
    case ef::ErrorCode::not_an_ellipsoid: return set_error(EF_NOT_AN_ELLIPSOID, e.what());
    case ef::ErrorCode::fit_failed: return set_error(EF_FIT_FAILED, e.what());
    case ef::ErrorCode::orientation_ambiguous: return set_error(EF_ORIENTATION_AMBIGUOUS, e.what());
    }
    return set_error(EF_UNKNOWN, e.what());
}

template <typename Fn>
ef_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ef::Error& e) {
        return from_exception(e);
    } catch (const std::exception& e) {
        return set_error(EF_UNKNOWN, e.what());
    } catch (...) {
        return set_error(EF_UNKNOWN, "unknown error");
    }
}

ef::FitConfig to_config(const ef_fit_config* cfg) {
    ef::FitConfig out;
    if (!cfg) return out;
    out.k_max = cfg->k_max;
    out.max_outer_iterations = cfg->max_outer_iterations;
    out.off_diag_tol = cfg->off_diag_tol;
    out.trace_tol = cfg->trace_tol;
    switch (cfg->init_mode) {
    case EF_INIT_FISHER: out.init_mode = ef::InitMode::fisher; break;
    case EF_INIT_IDENTITY: out.init_mode = ef::InitMode::identity; break;
    default: out.init_mode = ef::InitMode::random; break;
    }
    out.rng_seed = cfg->rng_seed;
    out.center_mode =
        cfg->center_mode == EF_CENTER_FREE ? ef::CenterMode::free_center : ef::CenterMode::fixed_origin;
    return out;
}

} // namespace

extern "C" {

void ef_fit_config_init(ef_fit_config* cfg) {
    if (!cfg) return;
    const ef::FitConfig d;
    cfg->k_max = d.k_max;
    cfg->max_outer_iterations = d.max_outer_iterations;
    cfg->off_diag_tol = d.off_diag_tol;
    cfg->trace_tol = d.trace_tol;
    cfg->init_mode = EF_INIT_RANDOM;
    cfg->rng_seed = d.rng_seed;
    cfg->center_mode = EF_CENTER_FIXED_ORIGIN;
}

ef_status ef_points_create(const double* coords, size_t n, ef_points** out) {
    if (!coords || !out || n == 0) return set_error(EF_INVALID_INPUT, "null argument");
    return guarded([&] {
        auto pts = std::make_unique<ef_points>();
        pts->points.reserve(n);
        for (size_t i = 0; i < n; ++i)
            pts->points.push_back({coords[3 * i], coords[3 * i + 1], coords[3 * i + 2]});
        *out = pts.release();
        return EF_OK;
    });
}

void ef_points_destroy(ef_points* pts) { delete pts; }

size_t ef_points_count(const ef_points* pts) { return pts ? pts->points.size() : 0; }

ef_status ef_points_get(const ef_points* pts, size_t index, double xyz[3]) {
    if (!pts || !xyz) return set_error(EF_INVALID_INPUT, "null argument");
    if (index >= pts->points.size()) return set_error(EF_INVALID_INPUT, "index out of range");
    for (int i = 0; i < 3; ++i) xyz[i] = pts->points[index][size_t(i)];
    return EF_OK;
}

ef_status ef_points_generate(const double semi_axes[3], const double euler_deg[3], size_t n,
                             uint64_t seed, double noise_sigma, ef_points** out) {
    if (!semi_axes || !euler_deg || !out) return set_error(EF_INVALID_INPUT, "null argument");
    return guarded([&] {
        ef::SynthSpec spec;
        spec.semi_axes = {semi_axes[0], semi_axes[1], semi_axes[2]};
        spec.euler_deg = {euler_deg[0], euler_deg[1], euler_deg[2]};
        spec.n_points = int(n);
        spec.seed = seed;
        spec.noise_sigma = noise_sigma;
        auto pts = std::make_unique<ef_points>();
        pts->points = ef::generate(spec);
        *out = pts.release();
        return EF_OK;
    });
}

ef_status ef_points_sample_quadric(const double g[9], double level, size_t n, uint64_t seed,
                                   ef_points** out) {
    if (!g || !out) return set_error(EF_INVALID_INPUT, "null argument");
    return guarded([&] {
        ef::Mat3 m;
        for (int i = 0; i < 9; ++i) m.m[size_t(i)] = g[i];
        auto pts = std::make_unique<ef_points>();
        pts->points = ef::sample_quadric(ef::SymMatrix3::from_full(m), level, int(n), seed);
        *out = pts.release();
        return EF_OK;
    });
}

ef_status ef_fit(const ef_points* pts, const ef_fit_config* cfg, ef_report** out) {
    if (!pts || !out) return set_error(EF_INVALID_INPUT, "null argument");
    return guarded([&] {
        auto rep = std::make_unique<ef_report>();
        rep->report = ef::fit_ellipsoid(pts->points, to_config(cfg));
        *out = rep.release();
        return EF_OK;
    });
}

ef_status ef_fit_single_pass(const ef_points* pts, const ef_fit_config* cfg, ef_report** out) {
    if (!pts || !out) return set_error(EF_INVALID_INPUT, "null argument");
    return guarded([&] {
        auto rep = std::make_unique<ef_report>();
        rep->report = ef::fit_single_pass(pts->points, to_config(cfg));
        *out = rep.release();
        return EF_OK;
    });
}

void ef_report_destroy(ef_report* rep) { delete rep; }

ef_status ef_report_semi_axes(const ef_report* rep, double axes[3]) {
    if (!rep || !axes) return set_error(EF_INVALID_INPUT, "null argument");
    for (int i = 0; i < 3; ++i) axes[i] = rep->report.geometry.semi_axes[size_t(i)];
    return EF_OK;
}

ef_status ef_report_euler_deg(const ef_report* rep, double euler[3]) {
    if (!rep || !euler) return set_error(EF_INVALID_INPUT, "null argument");
    euler[0] = rep->report.geometry.euler.alpha_deg;
    euler[1] = rep->report.geometry.euler.beta_deg;
    euler[2] = rep->report.geometry.euler.gamma_deg;
    return EF_OK;
}

ef_status ef_report_center(const ef_report* rep, double center[3]) {
    if (!rep || !center) return set_error(EF_INVALID_INPUT, "null argument");
    for (int i = 0; i < 3; ++i) center[i] = rep->report.geometry.center[size_t(i)];
    return EF_OK;
}

ef_status ef_report_rotation(const ef_report* rep, double r[9]) {
    if (!rep || !r) return set_error(EF_INVALID_INPUT, "null argument");
    for (int i = 0; i < 9; ++i) r[i] = rep->report.rotation.m[size_t(i)];
    return EF_OK;
}

ef_status ef_report_fisher(const ef_report* rep, double k[9]) {
    if (!rep || !k) return set_error(EF_INVALID_INPUT, "null argument");
    const ef::Mat3 f = rep->report.fisher_original_frame.full();
    for (int i = 0; i < 9; ++i) k[i] = f.m[size_t(i)];
    return EF_OK;
}

int ef_report_converged(const ef_report* rep) { return rep && rep->report.converged ? 1 : 0; }

int ef_report_axis_degenerate(const ef_report* rep) {
    return rep && rep->report.axis_degenerate ? 1 : 0;
}

int ef_report_gimbal_lock(const ef_report* rep) { return rep && rep->report.gimbal_lock ? 1 : 0; }

int ef_report_outer_iterations(const ef_report* rep) {
    return rep ? rep->report.outer_iterations : 0;
}

int ef_report_total_inner_iterations(const ef_report* rep) {
    return rep ? rep->report.total_inner_iterations : 0;
}

size_t ef_report_trace_size(const ef_report* rep) { return rep ? rep->report.trace.size() : 0; }

ef_status ef_report_trace_get(const ef_report* rep, size_t index, ef_trace_row* row) {
    if (!rep || !row) return set_error(EF_INVALID_INPUT, "null argument");
    if (index >= rep->report.trace.size()) return set_error(EF_INVALID_INPUT, "index out of range");
    const ef::IterationRecord& rec = rep->report.trace[index];
    row->outer_iter = rec.outer_iter;
    row->k_used = rec.k_used;
    row->omega = rec.omega;
    row->off_diag_ratio = rec.off_diag_ratio;
    for (int i = 0; i < 3; ++i) {
        row->axes_estimate[i] = rec.axes_estimate[size_t(i)];
        row->euler_estimate_deg[i] = rec.euler_estimate_deg[size_t(i)];
    }
    row->inner_accepted = rec.inner_accepted ? 1 : 0;
    return EF_OK;
}

const char* ef_last_error_message(void) { return g_last_error.c_str(); }

const char* ef_version(void) { return "1.0.0"; }

} // extern "C"
