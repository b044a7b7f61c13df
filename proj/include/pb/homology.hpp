#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pb/diagram.hpp"
#include "pb/util.hpp"

namespace pb {

// A vertex, edge or triangle of the Rips complex; unused vertex slots are
// -1. value is the filtration time: 0 for vertices, the pairwise distance
// for edges, the longest edge (diameter convention) for triangles.
struct simplex {
    double value = 0.0;
    int dim = 0;
    std::array<int, 3> v{-1, -1, -1};
};

struct filtration {
    int max_dim = 1;
    double r_max = 0.0;
    std::vector<simplex> simplices; // sorted by (value, dim, vertex order)
};

using point_cloud = std::vector<std::vector<double>>;

namespace detail {

inline double euclidean(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline std::uint64_t simplex_key(const std::array<int, 3>& v)
{
    return ((static_cast<std::uint64_t>(v[0] + 1) << 40) |
            (static_cast<std::uint64_t>(v[1] + 1) << 20) |
            static_cast<std::uint64_t>(v[2] + 1));
}

} // namespace detail

// Vietoris-Rips filtration up to triangles. Sizes are capped: the triangle
// census is cubic in n and this toolkit is deliberately desk-scale.
inline filtration vr_filtration(const point_cloud& points, int max_dim, double r_max)
{
    if (max_dim != 1 && max_dim != 2) throw std::invalid_argument("vr_filtration: max_dim must be 1 or 2");
    const int n = static_cast<int>(points.size());
    const int guard = max_dim == 1 ? 400 : 150;
    if (n > guard)
        throw std::runtime_error("vr_filtration: " + std::to_string(n) + " points exceeds the max_dim=" +
                                 std::to_string(max_dim) + " guard of " + std::to_string(guard));
    if (!(r_max >= 0.0)) throw std::invalid_argument("vr_filtration: r_max must be >= 0");
    for (const auto& p : points)
        if (p.size() != points.front().size())
            throw std::runtime_error("vr_filtration: inconsistent point dimensions");

    filtration f;
    f.max_dim = max_dim;
    f.r_max = r_max;
    for (int i = 0; i < n; ++i)
        f.simplices.push_back({0.0, 0, {i, -1, -1}});

    std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = detail::euclidean(points[i], points[j]);
            dist[static_cast<std::size_t>(i) * n + j] = d;
            dist[static_cast<std::size_t>(j) * n + i] = d;
            if (d <= r_max)
                f.simplices.push_back({d, 1, {i, j, -1}});
        }
    if (max_dim == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double dij = dist[static_cast<std::size_t>(i) * n + j];
                if (dij > r_max) continue;
                for (int k = j + 1; k < n; ++k) {
                    const double m = std::max({dij, dist[static_cast<std::size_t>(i) * n + k],
                                               dist[static_cast<std::size_t>(j) * n + k]});
                    if (m <= r_max)
                        f.simplices.push_back({m, 2, {i, j, k}});
                }
            }
    }
    std::sort(f.simplices.begin(), f.simplices.end(), [](const simplex& a, const simplex& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.dim != b.dim) return a.dim < b.dim;
        return a.v < b.v;
    });
    return f;
}

// One entry per creator simplex: (birth index, death index), death -1 when
// the class survives to r_max.
inline std::vector<std::pair<int, int>> reduce_and_pair(const filtration& f)
{
    const int m = static_cast<int>(f.simplices.size());
    std::unordered_map<std::uint64_t, int> index;
    index.reserve(m * 2);
    for (int i = 0; i < m; ++i)
        index[detail::simplex_key(f.simplices[i].v)] = i;

    // Z2 boundary columns, ascending row indices; low = back().
    std::vector<std::vector<int>> cols(m);
    std::vector<int> pivot_of(m, -1); // row -> index of the column pinned there
    std::vector<char> is_creator(m, 0);
    std::vector<int> scratch;

    for (int idx = 0; idx < m; ++idx) {
        const simplex& s = f.simplices[idx];
        std::vector<int> col;
        if (s.dim > 0) {
            for (int drop = 0; drop <= s.dim; ++drop) {
                std::array<int, 3> face{-1, -1, -1};
                int w = 0;
                for (int r = 0; r <= s.dim; ++r)
                    if (r != drop) face[w++] = s.v[r];
                const auto it = index.find(detail::simplex_key(face));
                if (it == index.end() || it->second >= idx)
                    throw std::runtime_error("reduce_and_pair: face ordering violated at simplex " + std::to_string(idx));
                col.push_back(it->second);
            }
            std::sort(col.begin(), col.end());
        }
        // Left-to-right reduction: cancel the lowest one against the column
        // already pinned to that row until the pivot is fresh or the column
        // is exhausted.
        while (!col.empty() && pivot_of[col.back()] != -1) {
            const auto& other = cols[pivot_of[col.back()]];
            scratch.clear();
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                          std::back_inserter(scratch));
            col.swap(scratch);
        }
        if (col.empty()) is_creator[idx] = 1;
        else pivot_of[col.back()] = idx;
        cols[idx] = std::move(col);
    }

    // A pinned row is always a creator, so pivot_of doubles as the killer map.
    std::vector<std::pair<int, int>> pairs;
    for (int idx = 0; idx < m; ++idx)
        if (is_creator[idx])
            pairs.emplace_back(idx, pivot_of[idx]);
    return pairs;
}

struct homology_output {
    persistence_diagram h0_reduced; // the everlasting component(s) removed
    persistence_diagram h1;         // positive-persistence classes only
};

// End-to-end Rips persistence. Zero-persistence pairs are dropped: they
// carry no eminence and no metric weight. H1 classes still alive at r_max
// are dropped too (finite persistence is assumed throughout); a note goes
// to stderr since that usually means r_max was chosen too small.
inline homology_output persistence_diagrams(const point_cloud& points, int max_dim, double r_max)
{
    const filtration f = vr_filtration(points, max_dim, r_max);
    const auto pairs = reduce_and_pair(f);
    homology_output out;
    out.h0_reduced.homology_dim = 0;
    out.h1.homology_dim = 1;
    int h1_unpaired = 0;
    for (const auto& [b, d] : pairs) {
        const simplex& birth = f.simplices[b];
        if (birth.dim == 0) {
            if (d != -1 && f.simplices[d].value > birth.value)
                out.h0_reduced.points.push_back({birth.value, f.simplices[d].value});
        } else if (birth.dim == 1 && max_dim >= 2) {
            if (d == -1) ++h1_unpaired;
            else if (f.simplices[d].value > birth.value)
                out.h1.points.push_back({birth.value, f.simplices[d].value});
        }
    }
    if (h1_unpaired > 0)
        std::cerr << "note: dropped " << h1_unpaired << " H1 class(es) still alive at r_max=" << r_max << "\n";
    return out;
}

// Point-cloud CSV: header `x,y` or `x,y,z`, one point per row.
inline point_cloud parse_point_cloud(std::istream& in)
{
    std::string line;
    int line_no = 0;
    std::size_t dims = 0;
    point_cloud pts;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (dims == 0) {
            if (t == "x,y") dims = 2;
            else if (t == "x,y,z") dims = 3;
            else throw std::runtime_error("line " + std::to_string(line_no) + ": expected header 'x,y' or 'x,y,z'");
            continue;
        }
        std::vector<double> p;
        std::size_t pos = 0;
        while (pos <= t.size()) {
            const auto comma = t.find(',', pos);
            const std::string tok = t.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            p.push_back(detail::parse_number(tok, line_no));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (p.size() != dims)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " + std::to_string(dims) + " coordinates");
        pts.push_back(std::move(p));
    }
    if (dims == 0) throw std::runtime_error("missing point-cloud header");
    return pts;
}

inline void write_point_cloud(const point_cloud& pts, std::ostream& out)
{
    const std::size_t dims = pts.empty() ? 2 : pts.front().size();
    out << (dims == 3 ? "x,y,z" : "x,y") << '\n';
    for (const auto& p : pts) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) out << ',';
            out << format_double(p[i]);
        }
        out << '\n';
    }
}

} // namespace pb
