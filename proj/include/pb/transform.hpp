#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pb/diagram.hpp"

namespace pb {

// Parameters of the eminence assignment. epsilon is the (Euclidean,
// birth-death plane) open-ball radius of the density count, M caps the
// count, L caps the persistence, m is the corpus-level normalization
// constant. L == 0 means "use m", the usual choice.
struct eminence_config {
    double epsilon = 0.0;
    int M = 10;
    double L = 0.0;
    double m = 1.0;

    double effective_L() const { return L > 0.0 ? L : m; }
};

struct fit_sample {
    double s = 0.0;
    double t = 0.0;
    double z = 0.0;
};

// Normalized (s,t,z) triples feeding the surface fit; (s,t) in [0,1]^2.
struct fit_dataset {
    std::vector<fit_sample> samples;
    double m_used = 1.0;
};

// Birth-death -> birth-persistence, (x,y) |-> (x, y-x).
inline std::vector<std::pair<double, double>> to_birth_persistence(const persistence_diagram& pd)
{
    std::vector<std::pair<double, double>> out;
    out.reserve(pd.size());
    for (const auto& p : pd.points)
        out.emplace_back(p.birth, p.death - p.birth);
    return out;
}

// Corpus-level normalization constant: slightly above the largest
// coordinate seen anywhere, so normalized data stays inside [0,1]^2.
inline double choose_m(std::span<const persistence_diagram> diagrams, double margin)
{
    double mx = 0.0;
    bool any = false;
    for (const auto& pd : diagrams)
        for (const auto& p : pd.points) {
            any = true;
            mx = std::max({mx, p.birth, p.death});
        }
    if (!any)
        throw std::runtime_error("choose_m: all diagrams empty, m undefined");
    if (mx <= 0.0)
        throw std::runtime_error("choose_m: all coordinates zero, m undefined");
    return (1.0 + margin) * mx;
}

inline std::vector<std::pair<double, double>> normalize(
    const std::vector<std::pair<double, double>>& points, double m)
{
    if (m <= 0.0) throw std::invalid_argument("normalize: m must be positive");
    std::vector<std::pair<double, double>> out;
    out.reserve(points.size());
    for (const auto& [x, y] : points) {
        if (x < 0.0 || y < 0.0 || x > m || y > m)
            throw std::runtime_error("normalize: point (" + std::to_string(x) + "," + std::to_string(y) +
                                     ") outside [0," + std::to_string(m) + "]^2");
        out.emplace_back(x / m, y / m);
    }
    return out;
}

// f of the eminence definition: identity up to L, constant L beyond.
inline double persistence_cap(double x, double L)
{
    return x <= L ? x : L;
}

// z_l = min(n_eps, M) * f(pers_l). n_eps counts diagram points (the center
// included) in the open epsilon-ball around (birth, death); epsilon = 0
// means no density weighting, n := 1.
inline std::vector<double> eminence(const persistence_diagram& pd, const eminence_config& cfg)
{
    if (cfg.epsilon < 0.0) throw std::invalid_argument("eminence: epsilon must be >= 0");
    if (cfg.M < 1) throw std::invalid_argument("eminence: M must be >= 1");
    const double L = cfg.effective_L();
    const std::size_t n = pd.size();
    std::vector<double> z(n, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
        int count = 1;
        if (cfg.epsilon > 0.0) {
            count = 0;
            const double eps2 = cfg.epsilon * cfg.epsilon;
            for (std::size_t j = 0; j < n; ++j) {
                const double dx = pd.points[j].birth - pd.points[l].birth;
                const double dy = pd.points[j].death - pd.points[l].death;
                if (dx * dx + dy * dy < eps2) ++count;
            }
        }
        const double pers = pd.points[l].death - pd.points[l].birth;
        z[l] = std::min(count, cfg.M) * persistence_cap(pers, L);
    }
    return z;
}

// Full preprocessing pipeline: birth-persistence transform, normalization
// by m, eminence heights. Sample count equals the diagram point count.
inline fit_dataset prepare_fit_data(const persistence_diagram& pd, const eminence_config& cfg)
{
    if (cfg.m <= 0.0) throw std::invalid_argument("prepare_fit_data: m must be positive");
    for (const auto& p : pd.points)
        if (p.birth > cfg.m || p.death > cfg.m)
            throw std::runtime_error("prepare_fit_data: coordinate exceeds m");
    const auto bp = normalize(to_birth_persistence(pd), cfg.m);
    const auto z = eminence(pd, cfg);
    fit_dataset out;
    out.m_used = cfg.m;
    out.samples.reserve(pd.size());
    for (std::size_t l = 0; l < pd.size(); ++l)
        out.samples.push_back({bp[l].first, bp[l].second, z[l]});
    return out;
}

} // namespace pb
