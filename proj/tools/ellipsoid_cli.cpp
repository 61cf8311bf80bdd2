// Command-line front end for the ellipsoidfit shared library.
//
// Subcommands:
//   generate  - sample points on a known ellipsoid and write them as CSV
//   fit       - iterative fit of a points CSV, JSON report out
//   baseline  - single-pass fit (no rotation refinement), same JSON schema
//   compare   - run both methods over repeated trials, CSV summary out
//
// Exit codes: 0 success/converged, 1 usage, 2 fit failed or not converged,
// 3 I/O error.

#include <ellipsoidfit.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFit = 2;
constexpr int kExitIo = 3;

struct GenSpec {
    std::vector<double> semi_axes{1, 1, 1};
    std::vector<double> euler_deg{0, 0, 0};
    size_t n_points = 6;
    uint64_t seed = 0;
    double noise_sigma = 0;
};

struct FitFlags {
    ef_fit_config cfg{};
    std::string init = "random";
    bool free_center = false;
};

void apply_fit_flags(FitFlags& flags) {
    if (flags.init == "fisher")
        flags.cfg.init_mode = EF_INIT_FISHER;
    else if (flags.init == "identity")
        flags.cfg.init_mode = EF_INIT_IDENTITY;
    else
        flags.cfg.init_mode = EF_INIT_RANDOM;
    flags.cfg.center_mode = flags.free_center ? EF_CENTER_FREE : EF_CENTER_FIXED_ORIGIN;
}

void add_fit_options(CLI::App* cmd, FitFlags& flags, bool with_seed = true) {
    cmd->add_option("--k-max", flags.cfg.k_max, "Constraint-weight cap");
    cmd->add_option("--max-outer", flags.cfg.max_outer_iterations, "Outer iteration cap");
    cmd->add_option("--off-diag-tol", flags.cfg.off_diag_tol, "Relative off-diagonal tolerance");
    cmd->add_option("--trace-tol", flags.cfg.trace_tol, "Eigenvector-trace tolerance");
    if (with_seed)
        cmd->add_option("--seed", flags.cfg.rng_seed, "RNG seed for the rotation initializer");
    cmd->add_option("--init", flags.init, "Initial rotation: random, fisher, identity")
        ->check(CLI::IsMember({"random", "fisher", "identity"}));
    cmd->add_flag("--free-center", flags.free_center, "Estimate the center (default: fixed at origin)");
}

json config_json(const ef_fit_config& cfg) {
    return json{{"k_max", cfg.k_max},
                {"max_outer_iterations", cfg.max_outer_iterations},
                {"off_diag_tol", cfg.off_diag_tol},
                {"trace_tol", cfg.trace_tol},
                {"init_mode", cfg.init_mode == EF_INIT_FISHER    ? "fisher"
                              : cfg.init_mode == EF_INIT_IDENTITY ? "identity"
                                                                  : "random"},
                {"rng_seed", cfg.rng_seed},
                {"center_mode", cfg.center_mode == EF_CENTER_FREE ? "free" : "fixed-origin"}};
}

json make_manifest(const std::string& command, uint64_t seed, const std::string& input,
                   const std::string& output, double wall_time_s) {
    return json{{"command", command}, {"seed", seed},           {"input", input},
                {"output", output},   {"wall_time_s", wall_time_s}, {"version", ef_version()}};
}

bool load_spec_file(const std::string& path, GenSpec& spec, std::string& err) {
    std::ifstream in(path);
    if (!in) {
        err = "cannot open spec file: " + path;
        return false;
    }
    json j;
    try {
        in >> j;
        if (j.contains("semi_axes")) spec.semi_axes = j["semi_axes"].get<std::vector<double>>();
        if (j.contains("euler_deg")) spec.euler_deg = j["euler_deg"].get<std::vector<double>>();
        if (j.contains("n_points")) spec.n_points = j["n_points"].get<size_t>();
        if (j.contains("seed")) spec.seed = j["seed"].get<uint64_t>();
        if (j.contains("noise_sigma")) spec.noise_sigma = j["noise_sigma"].get<double>();
    } catch (const std::exception& e) {
        err = std::string("bad spec file: ") + e.what();
        return false;
    }
    if (spec.semi_axes.size() != 3 || spec.euler_deg.size() != 3) {
        err = "spec file: semi_axes and euler_deg must have three entries";
        return false;
    }
    return true;
}

bool write_points_csv(const std::string& path, const ef_points* pts, const json& manifest,
                      std::string& err) {
    std::ofstream out(path);
    if (!out) {
        err = "cannot open output file: " + path;
        return false;
    }
    out << "# manifest: " << manifest.dump() << "\n";
    out << "x,y,z\n";
    char buf[128];
    for (size_t i = 0; i < ef_points_count(pts); ++i) {
        double xyz[3];
        ef_points_get(pts, i, xyz);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", xyz[0], xyz[1], xyz[2]);
        out << buf;
    }
    return bool(out);
}

bool read_points_csv(const std::string& path, std::vector<double>& coords, std::string& err) {
    std::ifstream in(path);
    if (!in) {
        err = "cannot open input file: " + path;
        return false;
    }
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            std::string squashed = line;
            squashed.erase(std::remove_if(squashed.begin(), squashed.end(),
                                          [](unsigned char c) { return std::isspace(c); }),
                           squashed.end());
            if (squashed == "x,y,z") continue;
            err = "expected header x,y,z in " + path;
            return false;
        }
        std::istringstream ss(line);
        std::string field;
        int got = 0;
        while (std::getline(ss, field, ',') && got < 3) {
            try {
                coords.push_back(std::stod(field));
            } catch (const std::exception&) {
                err = "bad number in " + path + ": " + field;
                return false;
            }
            ++got;
        }
        if (got != 3) {
            err = "expected three comma-separated values per line in " + path;
            return false;
        }
    }
    if (coords.size() < 18) {
        err = "need at least six points in " + path;
        return false;
    }
    return true;
}

json report_json(const ef_report* rep, const std::string& method) {
    double axes[3], euler[3], center[3], rot[9], fisher[9];
    ef_report_semi_axes(rep, axes);
    ef_report_euler_deg(rep, euler);
    ef_report_center(rep, center);
    ef_report_rotation(rep, rot);
    ef_report_fisher(rep, fisher);

    json trace = json::array();
    for (size_t i = 0; i < ef_report_trace_size(rep); ++i) {
        ef_trace_row row;
        ef_report_trace_get(rep, i, &row);
        trace.push_back(json{{"outer_iter", row.outer_iter},
                             {"k_used", row.k_used},
                             {"omega", row.omega},
                             {"off_diag_norm", row.off_diag_ratio},
                             {"axes_estimate", {row.axes_estimate[0], row.axes_estimate[1],
                                                row.axes_estimate[2]}},
                             {"euler_estimate_deg",
                              {row.euler_estimate_deg[0], row.euler_estimate_deg[1],
                               row.euler_estimate_deg[2]}},
                             {"inner_accepted", bool(row.inner_accepted)}});
    }

    return json{{"schema", "ellipsoidfit/report-v1"},
                {"method", method},
                {"converged", bool(ef_report_converged(rep))},
                {"semi_axes", {axes[0], axes[1], axes[2]}},
                {"euler_deg", {euler[0], euler[1], euler[2]}},
                {"center", {center[0], center[1], center[2]}},
                {"rotation", std::vector<double>(rot, rot + 9)},
                {"fisher", std::vector<double>(fisher, fisher + 9)},
                {"outer_iterations", ef_report_outer_iterations(rep)},
                {"total_inner_iterations", ef_report_total_inner_iterations(rep)},
                {"axis_degenerate", bool(ef_report_axis_degenerate(rep))},
                {"gimbal_lock", bool(ef_report_gimbal_lock(rep))},
                {"trace", trace}};
}

bool write_json(const std::string& path, const json& j, std::string& err) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << "\n";
        return true;
    }
    std::ofstream out(path);
    if (!out) {
        err = "cannot open output file: " + path;
        return false;
    }
    out << j.dump(2) << "\n";
    return bool(out);
}

int run_fit_like(const std::string& method, const std::string& input, const std::string& output,
                 FitFlags& flags) {
    apply_fit_flags(flags);
    std::vector<double> coords;
    std::string err;
    if (!read_points_csv(input, coords, err)) {
        std::cerr << "error: " << err << "\n";
        return kExitIo;
    }
    ef_points* pts = nullptr;
    if (ef_points_create(coords.data(), coords.size() / 3, &pts) != EF_OK) {
        std::cerr << "error: " << ef_last_error_message() << "\n";
        return kExitIo;
    }

    const auto t0 = std::chrono::steady_clock::now();
    ef_report* rep = nullptr;
    const ef_status st = method == "single-pass" ? ef_fit_single_pass(pts, &flags.cfg, &rep)
                                                 : ef_fit(pts, &flags.cfg, &rep);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ef_points_destroy(pts);

    json j;
    int code = kExitOk;
    if (st != EF_OK) {
        j = json{{"schema", "ellipsoidfit/report-v1"},
                 {"method", method},
                 {"error", {{"status", int(st)}, {"message", ef_last_error_message()}}}};
        code = kExitFit;
    } else {
        j = report_json(rep, method);
        if (!ef_report_converged(rep)) code = kExitFit;
        ef_report_destroy(rep);
    }
    j["manifest"] = make_manifest(method == "single-pass" ? "baseline" : "fit", flags.cfg.rng_seed,
                                  input, output, wall);
    j["manifest"]["config"] = config_json(flags.cfg);
    if (!write_json(output, j, err)) {
        std::cerr << "error: " << err << "\n";
        return kExitIo;
    }
    return code;
}

double max_rel_axis_err(const double got[3], std::vector<double> want) {
    std::sort(want.begin(), want.end(), std::greater<>());
    double worst = 0;
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::fabs(got[i] - want[size_t(i)]) / want[size_t(i)]);
    return worst;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ellipsoid fitting from 3-D point samples"};
    app.require_subcommand(1);

    // generate
    GenSpec gen;
    std::string gen_spec_file, gen_output = "points.csv";
    auto* cmd_gen = app.add_subcommand("generate", "Sample points on a known ellipsoid");
    cmd_gen->add_option("--spec", gen_spec_file, "JSON spec file (flags override)");
    cmd_gen->add_option("-A", gen.semi_axes[0], "First semi-axis");
    cmd_gen->add_option("-B", gen.semi_axes[1], "Second semi-axis");
    cmd_gen->add_option("-C", gen.semi_axes[2], "Third semi-axis");
    cmd_gen->add_option("--alpha", gen.euler_deg[0], "Euler angle alpha (deg)");
    cmd_gen->add_option("--beta", gen.euler_deg[1], "Euler angle beta (deg)");
    cmd_gen->add_option("--gamma", gen.euler_deg[2], "Euler angle gamma (deg)");
    cmd_gen->add_option("-n,--points", gen.n_points, "Number of points");
    cmd_gen->add_option("--seed", gen.seed, "RNG seed");
    cmd_gen->add_option("--noise", gen.noise_sigma, "Gaussian noise sigma");
    cmd_gen->add_option("-o,--output", gen_output, "Output CSV path");

    // fit / baseline
    FitFlags fit_flags, base_flags;
    ef_fit_config_init(&fit_flags.cfg);
    ef_fit_config_init(&base_flags.cfg);
    std::string fit_input, fit_output, base_input, base_output;
    auto* cmd_fit = app.add_subcommand("fit", "Iterative ellipsoid fit");
    cmd_fit->add_option("input", fit_input, "Points CSV")->required();
    cmd_fit->add_option("-o,--output", fit_output, "Report JSON path (default stdout)");
    add_fit_options(cmd_fit, fit_flags);

    auto* cmd_base = app.add_subcommand("baseline", "Single-pass fit, no rotation refinement");
    cmd_base->add_option("input", base_input, "Points CSV")->required();
    cmd_base->add_option("-o,--output", base_output, "Report JSON path (default stdout)");
    add_fit_options(cmd_base, base_flags);

    // compare
    GenSpec cmp;
    FitFlags cmp_flags;
    ef_fit_config_init(&cmp_flags.cfg);
    std::string cmp_spec_file, cmp_output = "summary.csv", cmp_methods = "iterative,single-pass";
    std::string cmp_trace_prefix;
    int cmp_trials = 10;
    auto* cmd_cmp = app.add_subcommand("compare", "Run methods over repeated trials");
    cmd_cmp->add_option("--spec", cmp_spec_file, "JSON spec file (flags override)");
    cmd_cmp->add_option("-A", cmp.semi_axes[0], "First semi-axis");
    cmd_cmp->add_option("-B", cmp.semi_axes[1], "Second semi-axis");
    cmd_cmp->add_option("-C", cmp.semi_axes[2], "Third semi-axis");
    cmd_cmp->add_option("--alpha", cmp.euler_deg[0], "Euler angle alpha (deg)");
    cmd_cmp->add_option("--beta", cmp.euler_deg[1], "Euler angle beta (deg)");
    cmd_cmp->add_option("--gamma", cmp.euler_deg[2], "Euler angle gamma (deg)");
    cmd_cmp->add_option("-n,--points", cmp.n_points, "Points per trial");
    cmd_cmp->add_option("--noise", cmp.noise_sigma, "Gaussian noise sigma");
    cmd_cmp->add_option("--seed", cmp.seed, "Base RNG seed; trial t uses seed+t");
    cmd_cmp->add_option("--trials", cmp_trials, "Number of trials")->check(CLI::PositiveNumber);
    cmd_cmp->add_option("--methods", cmp_methods, "Comma list: iterative,single-pass");
    cmd_cmp->add_option("--emit-trace", cmp_trace_prefix,
                        "Prefix for per-trial convergence trace CSVs");
    cmd_cmp->add_option("-o,--output", cmp_output, "Summary CSV path");
    add_fit_options(cmd_cmp, cmp_flags, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    std::string err;

    if (cmd_gen->parsed()) {
        if (!gen_spec_file.empty()) {
            GenSpec from_file = gen;
            if (!load_spec_file(gen_spec_file, from_file, err)) {
                std::cerr << "error: " << err << "\n";
                return kExitIo;
            }
            // flags given explicitly win over the file
            if (!cmd_gen->count("-A")) gen.semi_axes[0] = from_file.semi_axes[0];
            if (!cmd_gen->count("-B")) gen.semi_axes[1] = from_file.semi_axes[1];
            if (!cmd_gen->count("-C")) gen.semi_axes[2] = from_file.semi_axes[2];
            if (!cmd_gen->count("--alpha")) gen.euler_deg[0] = from_file.euler_deg[0];
            if (!cmd_gen->count("--beta")) gen.euler_deg[1] = from_file.euler_deg[1];
            if (!cmd_gen->count("--gamma")) gen.euler_deg[2] = from_file.euler_deg[2];
            if (!cmd_gen->count("--points") && !cmd_gen->count("-n")) gen.n_points = from_file.n_points;
            if (!cmd_gen->count("--seed")) gen.seed = from_file.seed;
            if (!cmd_gen->count("--noise")) gen.noise_sigma = from_file.noise_sigma;
        }
        const auto t0 = std::chrono::steady_clock::now();
        ef_points* pts = nullptr;
        if (ef_points_generate(gen.semi_axes.data(), gen.euler_deg.data(), gen.n_points, gen.seed,
                               gen.noise_sigma, &pts) != EF_OK) {
            std::cerr << "error: " << ef_last_error_message() << "\n";
            return kExitUsage;
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json manifest = make_manifest("generate", gen.seed, "", gen_output, wall);
        manifest["spec"] = json{{"semi_axes", gen.semi_axes},
                                {"euler_deg", gen.euler_deg},
                                {"n_points", gen.n_points},
                                {"noise_sigma", gen.noise_sigma}};
        const bool ok = write_points_csv(gen_output, pts, manifest, err);
        ef_points_destroy(pts);
        if (!ok) {
            std::cerr << "error: " << err << "\n";
            return kExitIo;
        }
        std::cout << manifest.dump(2) << "\n";
        return kExitOk;
    }

    if (cmd_fit->parsed()) return run_fit_like("iterative", fit_input, fit_output, fit_flags);
    if (cmd_base->parsed()) return run_fit_like("single-pass", base_input, base_output, base_flags);

    // compare
    if (!cmp_spec_file.empty()) {
        GenSpec from_file = cmp;
        if (!load_spec_file(cmp_spec_file, from_file, err)) {
            std::cerr << "error: " << err << "\n";
            return kExitIo;
        }
        if (!cmd_cmp->count("-A")) cmp.semi_axes[0] = from_file.semi_axes[0];
        if (!cmd_cmp->count("-B")) cmp.semi_axes[1] = from_file.semi_axes[1];
        if (!cmd_cmp->count("-C")) cmp.semi_axes[2] = from_file.semi_axes[2];
        if (!cmd_cmp->count("--alpha")) cmp.euler_deg[0] = from_file.euler_deg[0];
        if (!cmd_cmp->count("--beta")) cmp.euler_deg[1] = from_file.euler_deg[1];
        if (!cmd_cmp->count("--gamma")) cmp.euler_deg[2] = from_file.euler_deg[2];
        if (!cmd_cmp->count("--points") && !cmd_cmp->count("-n")) cmp.n_points = from_file.n_points;
        if (!cmd_cmp->count("--seed")) cmp.seed = from_file.seed;
        if (!cmd_cmp->count("--noise")) cmp.noise_sigma = from_file.noise_sigma;
    }
    apply_fit_flags(cmp_flags);

    std::vector<std::string> methods;
    {
        std::istringstream ss(cmp_methods);
        std::string m;
        while (std::getline(ss, m, ',')) {
            if (m != "iterative" && m != "single-pass") {
                std::cerr << "error: unknown method: " << m << "\n";
                return kExitUsage;
            }
            methods.push_back(m);
        }
    }
    if (methods.empty()) {
        std::cerr << "error: no methods selected\n";
        return kExitUsage;
    }

    std::ofstream summary(cmp_output);
    if (!summary) {
        std::cerr << "error: cannot open output file: " << cmp_output << "\n";
        return kExitIo;
    }
    json manifest = make_manifest("compare", cmp.seed, cmp_spec_file, cmp_output, 0.0);
    manifest["config"] = config_json(cmp_flags.cfg);
    manifest["spec"] = json{{"semi_axes", cmp.semi_axes},
                            {"euler_deg", cmp.euler_deg},
                            {"n_points", cmp.n_points},
                            {"noise_sigma", cmp.noise_sigma},
                            {"trials", cmp_trials},
                            {"methods", methods}};
    summary << "# manifest: " << manifest.dump() << "\n";
    summary << "trial,method,converged,rel_err_axes,abs_err_alpha,abs_err_beta,abs_err_gamma,"
               "outer_iterations,inner_iterations\n";

    std::vector<double> axes_sorted = cmp.semi_axes;
    std::sort(axes_sorted.begin(), axes_sorted.end(), std::greater<>());

    struct Agg {
        double max_axis = 0, max_a = 0, max_b = 0, max_g = 0;
        std::vector<int> outers, inners;
        int failures = 0;
    };
    std::vector<Agg> agg(methods.size());
    char buf[256];

    for (int trial = 0; trial < cmp_trials; ++trial) {
        const uint64_t seed = cmp.seed + uint64_t(trial);
        ef_points* pts = nullptr;
        if (ef_points_generate(cmp.semi_axes.data(), cmp.euler_deg.data(), cmp.n_points, seed,
                               cmp.noise_sigma, &pts) != EF_OK) {
            std::cerr << "error: " << ef_last_error_message() << "\n";
            return kExitUsage;
        }
        for (size_t mi = 0; mi < methods.size(); ++mi) {
            ef_fit_config cfg = cmp_flags.cfg;
            cfg.rng_seed = seed;
            ef_report* rep = nullptr;
            const ef_status st = methods[mi] == "single-pass"
                                     ? ef_fit_single_pass(pts, &cfg, &rep)
                                     : ef_fit(pts, &cfg, &rep);
            if (st != EF_OK) {
                summary << trial << "," << methods[mi] << ",0,nan,nan,nan,nan,0,0\n";
                ++agg[mi].failures;
                continue;
            }
            double axes[3], euler[3];
            ef_report_semi_axes(rep, axes);
            ef_report_euler_deg(rep, euler);
            const double ea = max_rel_axis_err(axes, cmp.semi_axes);
            const double da = std::fabs(euler[0] - cmp.euler_deg[0]);
            const double db = std::fabs(euler[1] - cmp.euler_deg[1]);
            const double dg = std::fabs(euler[2] - cmp.euler_deg[2]);
            std::snprintf(buf, sizeof buf, "%d,%s,%d,%.17g,%.17g,%.17g,%.17g,%d,%d\n", trial,
                          methods[mi].c_str(), ef_report_converged(rep), ea, da, db, dg,
                          ef_report_outer_iterations(rep), ef_report_total_inner_iterations(rep));
            summary << buf;
            auto& a = agg[mi];
            a.max_axis = std::max(a.max_axis, ea);
            a.max_a = std::max(a.max_a, da);
            a.max_b = std::max(a.max_b, db);
            a.max_g = std::max(a.max_g, dg);
            a.outers.push_back(ef_report_outer_iterations(rep));
            a.inners.push_back(ef_report_total_inner_iterations(rep));

            if (!cmp_trace_prefix.empty()) {
                const std::string tpath = cmp_trace_prefix + "_" + methods[mi] + "_" +
                                          std::to_string(trial) + ".csv";
                std::ofstream tf(tpath);
                if (!tf) {
                    std::cerr << "error: cannot open trace file: " << tpath << "\n";
                    ef_report_destroy(rep);
                    ef_points_destroy(pts);
                    return kExitIo;
                }
                tf << "outer_iter,inner_k,omega,off_diag_norm,abs_err_A,abs_err_B,abs_err_C,"
                      "abs_err_alpha,abs_err_beta,abs_err_gamma\n";
                for (size_t ti = 0; ti < ef_report_trace_size(rep); ++ti) {
                    ef_trace_row row;
                    ef_report_trace_get(rep, ti, &row);
                    std::snprintf(buf, sizeof buf,
                                  "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                                  row.outer_iter, row.k_used, row.omega, row.off_diag_ratio,
                                  std::fabs(row.axes_estimate[0] - axes_sorted[0]),
                                  std::fabs(row.axes_estimate[1] - axes_sorted[1]),
                                  std::fabs(row.axes_estimate[2] - axes_sorted[2]),
                                  std::fabs(row.euler_estimate_deg[0] - cmp.euler_deg[0]),
                                  std::fabs(row.euler_estimate_deg[1] - cmp.euler_deg[1]),
                                  std::fabs(row.euler_estimate_deg[2] - cmp.euler_deg[2]));
                    tf << buf;
                }
            }
            ef_report_destroy(rep);
        }
        ef_points_destroy(pts);
    }

    auto median = [](std::vector<int> v) -> double {
        if (v.empty()) return 0;
        std::sort(v.begin(), v.end());
        const size_t n = v.size();
        return n % 2 ? double(v[n / 2]) : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    for (size_t mi = 0; mi < methods.size(); ++mi) {
        std::snprintf(buf, sizeof buf, "aggregate,%s,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      methods[mi].c_str(), agg[mi].failures == 0, agg[mi].max_axis, agg[mi].max_a,
                      agg[mi].max_b, agg[mi].max_g, median(agg[mi].outers), median(agg[mi].inners));
        summary << buf;
    }
    if (!summary) {
        std::cerr << "error: failed writing " << cmp_output << "\n";
        return kExitIo;
    }
    return kExitOk;
}
