#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pb/diagram.hpp"
#include "pb/homology.hpp"

namespace pb {

// Named fixture points used by the feature-extraction designs.
inline constexpr pd_point fixture_p1{0.1, 0.8};
inline constexpr pd_point fixture_p2{0.3, 0.7};
inline constexpr pd_point fixture_p3{0.7, 0.9};

struct random_pd_spec {
    double tau = 0.02;
    int count = 50;
    std::uint64_t seed = 0;
};

// Diagonal-hugging random diagram: x uniform in [0,1], y standard normal,
// candidate (x - tau|y|/2, x + tau|y|/2); candidates leaving [0,1] are
// redrawn, which preserves the marginal shape of the accepted points.
inline persistence_diagram random_pd(const random_pd_spec& spec)
{
    if (spec.tau <= 0.0) throw std::invalid_argument("random_pd: tau must be positive");
    if (spec.count < 1) throw std::invalid_argument("random_pd: count must be >= 1");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    std::normal_distribution<double> ny(0.0, 1.0);
    persistence_diagram pd;
    pd.points.reserve(spec.count);
    while (static_cast<int>(pd.size()) < spec.count) {
        const double x = ux(rng);
        const double y = std::abs(ny(rng));
        const double b = x - spec.tau * y / 2.0;
        const double d = x + spec.tau * y / 2.0;
        if (b >= 0.0 && d <= 1.0)
            pd.points.push_back({b, d});
    }
    return pd;
}

enum class shape_kind { circle, concentric, two_circles, cluster, two_clusters };

inline shape_kind parse_shape_kind(const std::string& name)
{
    if (name == "circle") return shape_kind::circle;
    if (name == "concentric") return shape_kind::concentric;
    if (name == "two_circles") return shape_kind::two_circles;
    if (name == "cluster") return shape_kind::cluster;
    if (name == "two_clusters") return shape_kind::two_clusters;
    throw std::runtime_error("unknown shape kind '" + name + "'");
}

// Toy geometries inside [-0.5, 0.5]^2, plus isotropic Gaussian jitter.
// Even indices vs odd indices split the two-part shapes evenly.
inline point_cloud sample_shape(shape_kind kind, int n, double noise, std::uint64_t seed)
{
    if (n < 1) throw std::invalid_argument("sample_shape: n must be >= 1");
    if (noise < 0.0) throw std::invalid_argument("sample_shape: noise must be >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    std::uniform_real_distribution<double> half(0.0, 0.5);
    // stddev 0 is outside normal_distribution's contract, so noise-free
    // sampling skips the jitter draws entirely
    std::normal_distribution<double> jitter(0.0, noise > 0.0 ? noise : 1.0);
    point_cloud pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        double x = 0.0, y = 0.0;
        switch (kind) {
        case shape_kind::circle: {
            const double th = angle(rng);
            x = 0.4 * std::cos(th);
            y = 0.4 * std::sin(th);
            break;
        }
        case shape_kind::concentric: {
            const double th = angle(rng);
            const double r = i % 2 == 0 ? 0.2 : 0.4;
            x = r * std::cos(th);
            y = r * std::sin(th);
            break;
        }
        case shape_kind::two_circles: {
            const double th = angle(rng);
            const double cx = i % 2 == 0 ? -0.25 : 0.25;
            x = cx + 0.2 * std::cos(th);
            y = 0.2 * std::sin(th);
            break;
        }
        case shape_kind::cluster:
            x = unit(rng);
            y = unit(rng);
            break;
        case shape_kind::two_clusters: {
            // 0.5-side squares at opposite corners of the domain.
            const double lo = i % 2 == 0 ? -0.5 : 0.0;
            x = lo + half(rng);
            y = lo + half(rng);
            break;
        }
        }
        if (noise > 0.0) {
            x += jitter(rng);
            y += jitter(rng);
        }
        pts.push_back({x, y});
    }
    return pts;
}

struct orbit_spec {
    double M0 = 3.0, M1 = 1.0, M2 = 4.0, M3 = 4.0;
    std::optional<std::array<double, 3>> initial; // drawn from (1,2)x(0,1)^2 when absent
    int iterations = 2000;
    std::uint64_t seed = 0;
};

// K(x) = (1 - exp(-x)) / x extended continuously by K(0) = 1.
inline double lindstrom_k(double x)
{
    if (x == 0.0) return 1.0;
    return (1.0 - std::exp(-x)) / x;
}

// Orbit of the three-species discrete food-chain map; returns the states
// after each of `iterations` steps as a 3-D point cloud.
inline point_cloud lindstrom_orbit(const orbit_spec& spec)
{
    if (spec.iterations < 1) throw std::invalid_argument("lindstrom_orbit: iterations must be >= 1");
    double X, Y, Z;
    if (spec.initial) {
        X = (*spec.initial)[0];
        Y = (*spec.initial)[1];
        Z = (*spec.initial)[2];
    } else {
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> ux(1.0, 2.0), uy(0.0, 1.0), uz(0.0, 1.0);
        X = ux(rng);
        Y = uy(rng);
        Z = uz(rng);
    }
    point_cloud orbit;
    orbit.reserve(spec.iterations);
    for (int t = 1; t <= spec.iterations; ++t) {
        const double Xn = spec.M0 * X * std::exp(-Y) / (1.0 + X * std::max(std::exp(-Y), lindstrom_k(Z) * lindstrom_k(Y)));
        const double Yn = spec.M1 * X * Y * std::exp(-Z) * lindstrom_k(Y) * lindstrom_k(spec.M3 * Y * Z);
        const double Zn = spec.M2 * Y * Z;
        X = Xn;
        Y = Yn;
        Z = Zn;
        if (!std::isfinite(X) || !std::isfinite(Y) || !std::isfinite(Z))
            throw std::runtime_error("lindstrom_orbit: non-finite state at step " + std::to_string(t));
        orbit.push_back({X, Y, Z});
    }
    return orbit;
}

} // namespace pb
