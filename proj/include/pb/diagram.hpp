#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pb/util.hpp"

namespace pb {

struct pd_point {
    double birth = 0.0;
    double death = 0.0;

    friend bool operator==(const pd_point&, const pd_point&) = default;
};

// Finite multiset of (birth, death) pairs with 0 <= birth <= death < inf.
// Duplicates are meaningful and preserved.
struct persistence_diagram {
    std::vector<pd_point> points;
    int homology_dim = 1;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

struct perturbation_spec {
    double tau = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& tok, int line_no)
{
    const std::string t = trim(tok);
    double v = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw std::runtime_error("line " + std::to_string(line_no) + ": malformed number '" + t + "'");
    if (std::isnan(v))
        throw std::runtime_error("line " + std::to_string(line_no) + ": malformed number '" + t + "'");
    return v;
}

} // namespace detail

// CSV reader. Accepts optional leading '#' comments (a `# dim=<n>` comment
// sets the homology dimension), then a `birth,death` header, then one pair
// per line. All failures report the 1-based line number.
inline persistence_diagram parse_diagram(std::istream& in)
{
    persistence_diagram pd;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            if (header_seen)
                throw std::runtime_error("line " + std::to_string(line_no) + ": comment after header");
            auto pos = t.find("dim=");
            if (pos != std::string::npos)
                pd.homology_dim = static_cast<int>(detail::parse_number(t.substr(pos + 4), line_no));
            continue;
        }
        if (!header_seen) {
            if (t != "birth,death")
                throw std::runtime_error("line " + std::to_string(line_no) + ": expected header 'birth,death', got '" + t + "'");
            header_seen = true;
            continue;
        }
        auto comma = t.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'birth,death' pair");
        const double birth = detail::parse_number(t.substr(0, comma), line_no);
        const double death = detail::parse_number(t.substr(comma + 1), line_no);
        if (std::isinf(birth) || std::isinf(death))
            throw std::runtime_error("line " + std::to_string(line_no) + ": infinite death (finite persistence required)");
        if (birth < 0.0)
            throw std::runtime_error("line " + std::to_string(line_no) + ": negative birth");
        if (death < birth)
            throw std::runtime_error("death < birth at line " + std::to_string(line_no));
        pd.points.push_back({birth, death});
    }
    if (!header_seen)
        throw std::runtime_error("missing 'birth,death' header");
    return pd;
}

inline void serialize_diagram(const persistence_diagram& pd, std::ostream& out)
{
    out << "# dim=" << pd.homology_dim << "\n";
    out << "birth,death\n";
    for (const auto& p : pd.points)
        out << format_double(p.birth) << ',' << format_double(p.death) << '\n';
}

// Displace each point by (+-tau*r1, +-tau*r2), r uniform in (0,1), signs
// fair coins. Order violations are clamped (birth up to 0, death up to
// birth), which keeps every output within sup-distance tau of its source.
inline persistence_diagram perturb_diagram(const persistence_diagram& pd, const perturbation_spec& spec)
{
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(std::nextafter(0.0, 1.0), 1.0);
    std::bernoulli_distribution coin(0.5);
    persistence_diagram out;
    out.homology_dim = pd.homology_dim;
    out.points.reserve(pd.size());
    for (const auto& p : pd.points) {
        const double r1 = unit(rng);
        const bool s1 = coin(rng);
        const double r2 = unit(rng);
        const bool s2 = coin(rng);
        double b = p.birth + (s1 ? 1.0 : -1.0) * spec.tau * r1;
        double d = p.death + (s2 ? 1.0 : -1.0) * spec.tau * r2;
        b = std::max(b, 0.0);
        d = std::max(d, b);
        out.points.push_back({b, d});
    }
    return out;
}

} // namespace pb
