#pragma once

#include "orientation.hpp"
#include "quadric.hpp"

#include <cstdint>
#include <numbers>

namespace ef {

/// Parameters for sampling points on an ellipsoid surface in polar form:
///   e_i = (A cos(theta_i) cos(phi_i), B cos(theta_i) sin(phi_i), C sin(theta_i))
///   p_i = R^T e_i + noise
/// with theta uniform on theta_range and phi uniform on phi_range. The
/// default theta range [0, pi] still covers the full surface because the
/// polar factor changes sign over it.
struct SynthSpec {
    std::array<double, 3> semi_axes{1, 1, 1};   // A, B, C > 0
    std::array<double, 3> euler_deg{0, 0, 0};   // alpha, beta, gamma
    int n_points = 6;
    std::uint64_t seed = 0;
    double noise_sigma = 0;
    std::array<double, 2> theta_range{0, std::numbers::pi};
    std::array<double, 2> phi_range{0, 2 * std::numbers::pi};
};

PointSet generate(const SynthSpec& spec);

/// Samples n points on the surface p^T g p = level for symmetric positive
/// definite g: directions uniform on the unit sphere, scaled radially onto
/// the surface.
PointSet sample_quadric(const SymMatrix3& g, double level, int n, std::uint64_t seed);

} // namespace ef
