#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pb/bspline.hpp"
#include "pb/transform.hpp"

namespace pb {

// Fixed-count iteration; no residual-based early stop, so identical inputs
// give identical vectors. step_scale multiplies the proven-safe weight 1/C;
// values above 1 (up to 2) are accepted but outside the convergence
// guarantee.
struct lspia_config {
    int h = 20;
    int iterations = 100;
    double step_scale = 1.0;
};

struct lspia_trace {
    std::vector<double> residual_norms; // ||Z - B Ztilde||_2 after each update
    pb_grid final_grid;
};

namespace detail {

inline void validate(const lspia_config& cfg)
{
    if (cfg.h < 5) throw std::invalid_argument("lspia: h must be >= 5");
    if (cfg.iterations < 1) throw std::invalid_argument("lspia: iterations must be >= 1");
    if (!(cfg.step_scale > 0.0) || cfg.step_scale > 2.0)
        throw std::invalid_argument("lspia: step_scale must lie in (0, 2]");
}

inline double norm2(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace detail

// mu = step_scale / C where C is the largest column sum of B; with
// step_scale = 1 the iteration below is provably convergent.
inline double step_weight(const basis_matrix& B, double step_scale = 1.0)
{
    if (B.rows() == 0) throw std::runtime_error("step_weight: empty dataset");
    const auto sums = B.column_sums();
    const double C = *std::max_element(sums.begin(), sums.end());
    return step_scale / C;
}

// Residual-feedback iteration from the zero grid:
//   Ztilde <- Ztilde + mu B^T (Z - B Ztilde)
// run for exactly N steps. The residual r = Z - B Ztilde is carried along
// (r <- r - mu B B^T r), so each step costs two sparse passes; its 2-norm
// is recorded after every update.
inline lspia_trace lspia_fit(const fit_dataset& data, const lspia_config& cfg)
{
    detail::validate(cfg);
    if (data.samples.empty()) throw std::runtime_error("lspia_fit: empty dataset");

    std::vector<std::pair<double, double>> sites;
    std::vector<double> Z;
    sites.reserve(data.samples.size());
    Z.reserve(data.samples.size());
    for (const auto& smp : data.samples) {
        sites.emplace_back(smp.s, smp.t);
        Z.push_back(smp.z);
    }
    const basis_matrix B(std::move(sites), cfg.h);
    const double mu = step_weight(B, cfg.step_scale);

    const std::size_t k = B.rows();
    std::vector<double> zt(B.cols(), 0.0);  // control heights, zero init
    std::vector<double> r = Z;              // residual of the zero grid
    std::vector<double> u(B.cols(), 0.0), w(k, 0.0);

    lspia_trace trace;
    trace.residual_norms.reserve(cfg.iterations);
    for (int beta = 0; beta < cfg.iterations; ++beta) {
        B.apply_transpose(r.data(), u.data());
        for (int c = 0; c < B.cols(); ++c) zt[c] += mu * u[c];
        B.apply(u.data(), w.data());
        for (std::size_t l = 0; l < k; ++l) r[l] -= mu * w[l];
        const double rn = detail::norm2(r);
        if (!std::isfinite(rn)) throw std::runtime_error("lspia_fit: non-finite residual at iteration " + std::to_string(beta + 1));
        trace.residual_norms.push_back(rn);
    }
    trace.final_grid.h = cfg.h;
    trace.final_grid.z = std::move(zt);
    return trace;
}

// One-dimensional analogue for H0 diagrams (all births zero): fit
// (t_l, z_l) with a clamped cubic curve of h control points.
inline std::vector<double> lspia_fit_curve(std::span<const std::pair<double, double>> data, int h, int N)
{
    if (h < 5) throw std::invalid_argument("lspia_fit_curve: h must be >= 5");
    if (N < 1) throw std::invalid_argument("lspia_fit_curve: iterations must be >= 1");
    if (data.empty()) throw std::runtime_error("lspia_fit_curve: empty dataset");

    const knot_vector kv(h);
    const std::size_t k = data.size();
    std::vector<basis_span> rows;
    rows.reserve(k);
    for (const auto& [t, z] : data) {
        if (t < 0.0 || t > 1.0) throw std::runtime_error("lspia_fit_curve: site outside [0,1]");
        rows.push_back(active_basis(t, kv));
    }
    std::vector<double> colsum(h, 0.0);
    for (const auto& row : rows)
        for (int a = 0; a < 4; ++a) colsum[row.first + a] += row.v[a];
    const double mu = 1.0 / *std::max_element(colsum.begin(), colsum.end());

    std::vector<double> ctrl(h, 0.0), r(k);
    for (std::size_t l = 0; l < k; ++l) r[l] = data[l].second;
    std::vector<double> u(h, 0.0);
    for (int beta = 0; beta < N; ++beta) {
        std::fill(u.begin(), u.end(), 0.0);
        for (std::size_t l = 0; l < k; ++l)
            for (int a = 0; a < 4; ++a) u[rows[l].first + a] += rows[l].v[a] * r[l];
        for (int c = 0; c < h; ++c) ctrl[c] += mu * u[c];
        for (std::size_t l = 0; l < k; ++l) {
            double w = 0.0;
            for (int a = 0; a < 4; ++a) w += rows[l].v[a] * u[rows[l].first + a];
            r[l] -= mu * w;
        }
    }
    return ctrl;
}

// Diagram -> feature vector. Empty diagrams vectorize to zero: the zero
// initialization is already the fixed point when there is nothing to fit.
inline persistence_vector vectorize(const persistence_diagram& pd, const eminence_config& em, const lspia_config& cfg)
{
    detail::validate(cfg);
    if (pd.empty())
        return to_vector(pb_grid(cfg.h));
    return to_vector(lspia_fit(prepare_fit_data(pd, em), cfg).final_grid);
}

// Grids captured after each checkpoint iteration count of a single run;
// checkpoints must be strictly increasing. Iteration prefixes of LSPIA are
// deterministic, so one pass provides every intermediate vector.
inline std::vector<persistence_vector> lspia_checkpoints(const fit_dataset& data, int h,
                                                         std::span<const int> checkpoints,
                                                         double step_scale = 1.0)
{
    if (checkpoints.empty()) throw std::invalid_argument("lspia_checkpoints: no checkpoints");
    for (std::size_t i = 0; i + 1 < checkpoints.size(); ++i)
        if (checkpoints[i] >= checkpoints[i + 1])
            throw std::invalid_argument("lspia_checkpoints: checkpoints must be strictly increasing");
    if (checkpoints.front() < 1) throw std::invalid_argument("lspia_checkpoints: checkpoints must be >= 1");

    std::vector<std::pair<double, double>> sites;
    std::vector<double> Z;
    for (const auto& smp : data.samples) {
        sites.emplace_back(smp.s, smp.t);
        Z.push_back(smp.z);
    }
    const basis_matrix B(std::move(sites), h);
    const double mu = step_weight(B, step_scale);

    std::vector<double> zt(B.cols(), 0.0), r = Z, u(B.cols(), 0.0), w(B.rows(), 0.0);
    std::vector<persistence_vector> out;
    std::size_t next = 0;
    for (int beta = 1; beta <= checkpoints.back(); ++beta) {
        B.apply_transpose(r.data(), u.data());
        for (int c = 0; c < B.cols(); ++c) zt[c] += mu * u[c];
        B.apply(u.data(), w.data());
        for (std::size_t l = 0; l < B.rows(); ++l) r[l] -= mu * w[l];
        if (beta == checkpoints[next]) {
            out.push_back({h, zt});
            ++next;
        }
    }
    return out;
}

} // namespace pb
