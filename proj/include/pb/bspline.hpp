#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pb/util.hpp"

namespace pb {

// Clamped uniform cubic knots on [0,1]: four zeros, interior knots
// j/(h-3) for j = 1..h-4, four ones. This yields exactly h basis
// functions per direction, matching an h x h control grid. h >= 5 keeps
// at least one interior knot; the degenerate Bezier case is rejected.
struct knot_vector {
    int h = 0;
    std::vector<double> knots; // h + 4 values

    explicit knot_vector(int h_) : h(h_)
    {
        if (h < 5) throw std::invalid_argument("knot_vector: h must be >= 5");
        knots.assign(4, 0.0);
        for (int j = 1; j <= h - 4; ++j)
            knots.push_back(static_cast<double>(j) / (h - 3));
        knots.insert(knots.end(), 4, 1.0);
    }
};

namespace detail {

// Degree-0 indicator with the final nonempty span closed on the right, so
// that the partition of unity extends to t = 1.
inline bool deg0(const std::vector<double>& k, int i, double t)
{
    if (t >= k[i] && t < k[i + 1]) return true;
    return t == k.back() && k[i] < k.back() && k[i + 1] == k.back();
}

inline double cox_de_boor(const std::vector<double>& k, int i, int d, double t)
{
    if (d == 0) return deg0(k, i, t) ? 1.0 : 0.0;
    double v = 0.0;
    const double den_l = k[i + d] - k[i];
    if (den_l > 0.0) v += (t - k[i]) / den_l * cox_de_boor(k, i, d - 1, t);
    const double den_r = k[i + d + 1] - k[i + 1];
    if (den_r > 0.0) v += (k[i + d + 1] - t) / den_r * cox_de_boor(k, i + 1, d - 1, t);
    return v;
}

} // namespace detail

// Single basis function by the textbook recursion (0/0 terms dropped).
// i is zero-based, i in [0, h).
inline double basis_value(int i, double t, const knot_vector& kv)
{
    if (i < 0 || i >= kv.h) throw std::invalid_argument("basis_value: index out of range");
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("basis_value: t outside [0,1]");
    return detail::cox_de_boor(kv.knots, i, 3, t);
}

// The four nonvanishing cubic basis values at t: indices first..first+3.
struct basis_span {
    int first = 0;
    std::array<double, 4> v{};
};

// Triangular evaluation of the nonzero basis functions (no 0/0 cases on a
// nonempty span). Equivalent to basis_value on the active indices.
inline basis_span active_basis(double t, const knot_vector& kv)
{
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("active_basis: t outside [0,1]");
    // Clamped ends interpolate exactly; the triangular recurrence below only
    // reproduces the 1 to within an ulp when interior knots are not binary
    // fractions, so pin the endpoint values.
    if (t == 0.0) return {0, {1.0, 0.0, 0.0, 0.0}};
    if (t == 1.0) return {kv.h - 4, {0.0, 0.0, 0.0, 1.0}};
    const auto& k = kv.knots;
    // Locate the nonempty span [k_j, k_{j+1}) containing t, j in [3, h-1];
    // t = 1 falls in the closed final span.
    int lo = 3, hi = kv.h - 1, j = hi;
    if (t < k.back()) {
        while (lo <= hi) {
            const int mid = (lo + hi) / 2;
            if (t < k[mid]) hi = mid - 1;
            else if (t >= k[mid + 1]) lo = mid + 1;
            else { j = mid; break; }
        }
    }
    basis_span out;
    out.first = j - 3;
    std::array<double, 4> left{}, right{};
    out.v[0] = 1.0;
    for (int d = 1; d <= 3; ++d) {
        left[d] = t - k[j + 1 - d];
        right[d] = k[j + d] - t;
        double saved = 0.0;
        for (int r = 0; r < d; ++r) {
            const double tmp = out.v[r] / (right[r + 1] + left[d - r]);
            out.v[r] = saved + right[r + 1] * tmp;
            saved = left[d - r] * tmp;
        }
        out.v[d] = saved;
    }
    return out;
}

// k x h^2 tensor-product collocation matrix, kept in factored sparse form:
// row l stores the two active 1-D spans, so the <= 16 nonzero entries
// B_i(s_l) B_j(t_l) never materialize as a dense row.
class basis_matrix {
public:
    struct row {
        int fs = 0, ft = 0;
        std::array<double, 4> bs{}, bt{};
    };

    basis_matrix(std::vector<std::pair<double, double>> sites, int h)
        : h_(h), sites_(std::move(sites)), kv_(h)
    {
        rows_.reserve(sites_.size());
        for (const auto& [s, t] : sites_) {
            if (s < 0.0 || s > 1.0 || t < 0.0 || t > 1.0)
                throw std::runtime_error("basis_matrix: site (" + std::to_string(s) + "," +
                                         std::to_string(t) + ") outside the unit square");
            const auto a = active_basis(s, kv_);
            const auto b = active_basis(t, kv_);
            rows_.push_back({a.first, b.first, a.v, b.v});
        }
    }

    int h() const { return h_; }
    int cols() const { return h_ * h_; }
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::pair<double, double>>& sites() const { return sites_; }
    const row& row_data(std::size_t l) const { return rows_[l]; }

    // Dense probe, mostly for tests: entry (l, (i*h)+j).
    double entry(std::size_t l, int col) const
    {
        const auto& r = rows_[l];
        const int i = col / h_, j = col % h_;
        if (i < r.fs || i > r.fs + 3 || j < r.ft || j > r.ft + 3) return 0.0;
        return r.bs[i - r.fs] * r.bt[j - r.ft];
    }

    // out = B x, x of length h^2, out of length k.
    void apply(const double* x, double* out) const
    {
        for (std::size_t l = 0; l < rows_.size(); ++l) {
            const auto& r = rows_[l];
            double acc = 0.0;
            for (int a = 0; a < 4; ++a) {
                const double* base = x + (r.fs + a) * h_ + r.ft;
                double inner = 0.0;
                for (int b = 0; b < 4; ++b) inner += r.bt[b] * base[b];
                acc += r.bs[a] * inner;
            }
            out[l] = acc;
        }
    }

    // out = B^T r (overwritten), r of length k, out of length h^2.
    void apply_transpose(const double* r, double* out) const
    {
        for (int c = 0; c < cols(); ++c) out[c] = 0.0;
        for (std::size_t l = 0; l < rows_.size(); ++l) {
            const auto& w = rows_[l];
            const double rl = r[l];
            for (int a = 0; a < 4; ++a) {
                double* base = out + (w.fs + a) * h_ + w.ft;
                const double wa = w.bs[a] * rl;
                for (int b = 0; b < 4; ++b) base[b] += wa * w.bt[b];
            }
        }
    }

    std::vector<double> column_sums() const
    {
        std::vector<double> sums(cols(), 0.0);
        for (const auto& w : rows_)
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    sums[(w.fs + a) * h_ + w.ft + b] += w.bs[a] * w.bt[b];
        return sums;
    }

    // Row-major dense copy for the direct least-squares oracle.
    std::vector<double> dense() const
    {
        std::vector<double> m(rows() * cols(), 0.0);
        for (std::size_t l = 0; l < rows_.size(); ++l) {
            const auto& w = rows_[l];
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    m[l * cols() + (w.fs + a) * h_ + w.ft + b] = w.bs[a] * w.bt[b];
        }
        return m;
    }

private:
    int h_;
    std::vector<std::pair<double, double>> sites_;
    knot_vector kv_;
    std::vector<row> rows_;
};

// h x h control-point heights, row-major: z[i*h + j] pairs basis i in s
// with basis j in t.
struct pb_grid {
    int h = 0;
    std::vector<double> z;

    pb_grid() = default;
    explicit pb_grid(int h_) : h(h_), z(static_cast<std::size_t>(h_) * h_, 0.0) {}
};

// Lexicographic (row-major) flattening of the grid; the feature vector.
struct persistence_vector {
    int h = 0;
    std::vector<double> values;
};

inline persistence_vector to_vector(const pb_grid& g)
{
    return {g.h, g.z};
}

inline pb_grid from_vector(const persistence_vector& v)
{
    if (static_cast<std::size_t>(v.h) * v.h != v.values.size())
        throw std::runtime_error("from_vector: length " + std::to_string(v.values.size()) +
                                 " does not match h=" + std::to_string(v.h));
    pb_grid g(v.h);
    g.z = v.values;
    return g;
}

// Infer h from the length; rejects non-square lengths.
inline persistence_vector make_persistence_vector(std::vector<double> values)
{
    const auto n = values.size();
    const int h = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (static_cast<std::size_t>(h) * h != n)
        throw std::runtime_error("make_persistence_vector: length " + std::to_string(n) + " is not a perfect square");
    return {h, std::move(values)};
}

inline double eval_surface(const pb_grid& g, double s, double t)
{
    const knot_vector kv(g.h);
    const auto a = active_basis(s, kv);
    const auto b = active_basis(t, kv);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        double inner = 0.0;
        for (int j = 0; j < 4; ++j)
            inner += b.v[j] * g.z[(a.first + i) * g.h + b.first + j];
        acc += a.v[i] * inner;
    }
    return acc;
}

inline double eval_curve(std::span<const double> ctrl, double t)
{
    const knot_vector kv(static_cast<int>(ctrl.size()));
    const auto a = active_basis(t, kv);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) acc += a.v[i] * ctrl[a.first + i];
    return acc;
}

// samples x samples lattice over the unit square, row index a maps to
// s = a/(samples-1), column index b to t = b/(samples-1). Row-major.
inline std::vector<double> reconstruct_surface(const persistence_vector& v, int samples)
{
    if (samples < 2) throw std::invalid_argument("reconstruct_surface: samples must be >= 2");
    const pb_grid g = from_vector(v);
    std::vector<double> field(static_cast<std::size_t>(samples) * samples, 0.0);
    for (int a = 0; a < samples; ++a)
        for (int b = 0; b < samples; ++b)
            field[static_cast<std::size_t>(a) * samples + b] =
                eval_surface(g, static_cast<double>(a) / (samples - 1), static_cast<double>(b) / (samples - 1));
    return field;
}

inline void write_vector_json(const persistence_vector& v, std::ostream& out)
{
    out << "{\"h\": " << v.h << ", \"values\": [";
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        if (i) out << ", ";
        out << format_double(v.values[i]);
    }
    out << "]}\n";
}

inline void write_height_field_csv(const std::vector<double>& field, int samples, std::ostream& out)
{
    for (int a = 0; a < samples; ++a) {
        for (int b = 0; b < samples; ++b) {
            if (b) out << ',';
            out << format_double(field[static_cast<std::size_t>(a) * samples + b]);
        }
        out << '\n';
    }
}

} // namespace pb
