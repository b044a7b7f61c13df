#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pb/bspline.hpp"
#include "pb/diagram.hpp"
#include "pb/util.hpp"

namespace pb {

namespace detail {

// Hungarian algorithm with potentials (shortest augmenting paths), O(n^3).
// cost is n x n row-major and finite; returns the minimal assignment total.
inline double solve_assignment(const std::vector<double>& cost, int n)
{
    if (n == 0) return 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j)
                if (!used[j]) {
                    const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                    if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                    if (minv[j] < delta) { delta = minv[j]; j1 = j; }
                }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j) total += cost[(p[j] - 1) * n + (j - 1)];
    return total;
}

// Diagonal-augmented ground costs under the sup norm: both diagrams are
// extended with diagonal slots so a bijection always exists. Matching a
// point to any diagonal slot costs its sup-norm distance to the diagonal,
// (death - birth)/2; diagonal-diagonal pairs are free. Square matrix of
// side |pd1| + |pd2|, row-major.
inline std::vector<double> augmented_costs(const persistence_diagram& a, const persistence_diagram& b)
{
    const int n1 = static_cast<int>(a.size()), n2 = static_cast<int>(b.size());
    const int n = n1 + n2;
    std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = 0.0;
            if (i < n1 && j < n2)
                v = std::max(std::abs(a.points[i].birth - b.points[j].birth),
                             std::abs(a.points[i].death - b.points[j].death));
            else if (i < n1)
                v = (a.points[i].death - a.points[i].birth) / 2.0;
            else if (j < n2)
                v = (b.points[j].death - b.points[j].birth) / 2.0;
            c[static_cast<std::size_t>(i) * n + j] = v;
        }
    return c;
}

// Perfect matching at threshold lambda (edges where cost <= lambda) via
// Kuhn's augmenting paths.
inline bool feasible_at(const std::vector<double>& cost, int n, double lambda)
{
    std::vector<int> match_col(n, -1), match_row(n, -1);
    std::vector<char> visited(n, 0);
    auto try_augment = [&](auto&& self, int i) -> bool {
        for (int j = 0; j < n; ++j) {
            if (visited[j] || cost[static_cast<std::size_t>(i) * n + j] > lambda) continue;
            visited[j] = 1;
            if (match_col[j] < 0 || self(self, match_col[j])) {
                match_col[j] = i;
                match_row[i] = j;
                return true;
            }
        }
        return false;
    };
    for (int i = 0; i < n; ++i) {
        std::fill(visited.begin(), visited.end(), 0);
        if (!try_augment(try_augment, i)) return false;
    }
    return true;
}

} // namespace detail

inline double bottleneck(const persistence_diagram& pd1, const persistence_diagram& pd2)
{
    const int n = static_cast<int>(pd1.size() + pd2.size());
    if (n == 0) return 0.0;
    const auto cost = detail::augmented_costs(pd1, pd2);
    std::vector<double> cand(cost);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    // Smallest candidate threshold admitting a perfect matching: the
    // optimum is always attained at a matrix entry.
    std::size_t lo = 0, hi = cand.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (detail::feasible_at(cost, n, cand[mid])) hi = mid;
        else lo = mid + 1;
    }
    return cand[lo];
}

// Exact p-Wasserstein with sup-norm ground cost and diagonal augmentation;
// p = infinity dispatches to the bottleneck matching.
inline double wasserstein(const persistence_diagram& pd1, const persistence_diagram& pd2, double p)
{
    if (std::isinf(p)) return bottleneck(pd1, pd2);
    if (!(p >= 1.0)) throw std::invalid_argument("wasserstein: p must be >= 1");
    const int n = static_cast<int>(pd1.size() + pd2.size());
    if (n == 0) return 0.0;
    auto cost = detail::augmented_costs(pd1, pd2);
    for (double& c : cost) c = std::pow(c, p);
    const double total = detail::solve_assignment(cost, n);
    return std::pow(total, 1.0 / p);
}

// Exhaustive matching enumeration, ground truth for small inputs.
inline double brute_force_distance(const persistence_diagram& pd1, const persistence_diagram& pd2, double p)
{
    if (!std::isinf(p) && !(p >= 1.0)) throw std::invalid_argument("brute_force_distance: p must be >= 1");
    const int n = static_cast<int>(pd1.size() + pd2.size());
    if (n > 8) throw std::runtime_error("brute_force_distance: diagrams too large (|pd1|+|pd2| must be <= 8)");
    if (n == 0) return 0.0;
    const auto cost = detail::augmented_costs(pd1, pd2);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double c = cost[static_cast<std::size_t>(i) * n + perm[i]];
            if (std::isinf(p)) acc = std::max(acc, c);
            else acc += std::pow(c, p);
        }
        best = std::min(best, acc);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::isinf(p) ? best : std::pow(best, 1.0 / p);
}

// ||v1 - v2||_p for p in [1, inf].
inline double vector_distance(const persistence_vector& v1, const persistence_vector& v2, double p)
{
    if (v1.values.size() != v2.values.size())
        throw std::runtime_error("vector_distance: length mismatch");
    if (!std::isinf(p) && !(p >= 1.0)) throw std::invalid_argument("vector_distance: p must be >= 1");
    double acc = 0.0;
    for (std::size_t i = 0; i < v1.values.size(); ++i) {
        const double d = std::abs(v1.values[i] - v2.values[i]);
        if (std::isinf(p)) acc = std::max(acc, d);
        else acc += std::pow(d, p);
    }
    return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

inline double vector_norm(const persistence_vector& v, double p)
{
    persistence_vector zero{v.h, std::vector<double>(v.values.size(), 0.0)};
    return vector_distance(v, zero, p);
}

struct distance_matrix {
    std::vector<std::string> labels;
    std::vector<double> values; // n x n row-major

    int n() const { return static_cast<int>(labels.size()); }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n() + j]; }
};

// Symmetric pairwise matrix; each unordered pair is evaluated once.
template <class T, class Metric>
distance_matrix pairwise_distances(const std::vector<T>& items, std::vector<std::string> labels, Metric d)
{
    const int n = static_cast<int>(items.size());
    if (labels.size() != items.size()) throw std::invalid_argument("pairwise_distances: label count mismatch");
    distance_matrix m;
    m.labels = std::move(labels);
    m.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = d(items[i], items[j]);
            m.values[static_cast<std::size_t>(i) * n + j] = v;
            m.values[static_cast<std::size_t>(j) * n + i] = v;
        }
    return m;
}

inline void write_distance_matrix_csv(const distance_matrix& m, std::ostream& out)
{
    for (int j = 0; j < m.n(); ++j) {
        if (j) out << ',';
        out << m.labels[j];
    }
    out << '\n';
    for (int i = 0; i < m.n(); ++i) {
        for (int j = 0; j < m.n(); ++j) {
            if (j) out << ',';
            out << format_double(m.at(i, j));
        }
        out << '\n';
    }
}

} // namespace pb
