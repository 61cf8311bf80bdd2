#include "synth.hpp"

#include "error.hpp"

#include <cmath>
#include <random>

namespace ef {

PointSet generate(const SynthSpec& spec) {
    const auto [A, B, C] = spec.semi_axes;
    if (!(A > 0) || !(B > 0) || !(C > 0))
        throw InvalidInput("generate: semi-axes must be positive");
    if (spec.n_points < 6) throw InvalidInput("generate: need at least 6 points");
    if (spec.noise_sigma < 0) throw InvalidInput("generate: negative noise sigma");
    if (!(spec.theta_range[0] <= spec.theta_range[1]) || !(spec.phi_range[0] <= spec.phi_range[1]))
        throw InvalidInput("generate: invalid angle range");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> theta_dist(spec.theta_range[0], spec.theta_range[1]);
    std::uniform_real_distribution<double> phi_dist(spec.phi_range[0], spec.phi_range[1]);
    std::normal_distribution<double> noise(0.0, 1.0);

    const Mat3 rt = euler_to_matrix({spec.euler_deg[0], spec.euler_deg[1], spec.euler_deg[2]}).transposed();

    PointSet out;
    out.reserve(size_t(spec.n_points));
    for (int i = 0; i < spec.n_points; ++i) {
        const double th = theta_dist(rng);
        const double ph = phi_dist(rng);
        const Vec3 e = {A * std::cos(th) * std::cos(ph), B * std::cos(th) * std::sin(ph),
                        C * std::sin(th)};
        Vec3 p = rt * e;
        if (spec.noise_sigma > 0)
            for (auto& x : p) x += spec.noise_sigma * noise(rng);
        out.push_back(p);
    }
    return out;
}

PointSet sample_quadric(const SymMatrix3& g, double level, int n, std::uint64_t seed) {
    if (!(level > 0)) throw InvalidInput("sample_quadric: level must be positive");
    if (n < 6) throw InvalidInput("sample_quadric: need at least 6 points");
    const auto eig = linalg::sym_eigen(g);
    if (!(eig.values.back() > 0))
        throw InvalidInput("sample_quadric: matrix is not positive definite");

    const Mat3 gm = g.full();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    PointSet out;
    out.reserve(size_t(n));
    while (int(out.size()) < n) {
        Vec3 u = {normal(rng), normal(rng), normal(rng)};
        const double len = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
        if (len < 1e-12) continue;
        for (auto& x : u) x /= len;
        double q = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) q += u[size_t(i)] * gm(i, j) * u[size_t(j)];
        const double radius = std::sqrt(level / q);
        out.push_back({radius * u[0], radius * u[1], radius * u[2]});
    }
    return out;
}

} // namespace ef
