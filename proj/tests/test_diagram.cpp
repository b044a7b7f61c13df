#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "pb/diagram.hpp"

using namespace pb;

namespace {

persistence_diagram parse_str(const std::string& s)
{
    std::istringstream in(s);
    return parse_diagram(in);
}

} // namespace

TEST_CASE("parse basics")
{
    const auto pd = parse_str("birth,death\n0.1,0.8\n");
    REQUIRE(pd.size() == 1);
    REQUIRE(pd.points[0] == pd_point{0.1, 0.8});
    REQUIRE(pd.homology_dim == 1);

    REQUIRE(parse_str("birth,death\n").empty());
    REQUIRE(parse_str("# dim=0\nbirth,death\n0,0\n").homology_dim == 0);
    REQUIRE(parse_str("# dim=0\nbirth,death\n0,0\n").points[0] == pd_point{0.0, 0.0});
}

TEST_CASE("parse failures name the line")
{
    REQUIRE_THROWS_WITH(parse_str("birth,death\n0.5,0.2\n"), "death < birth at line 2");
    REQUIRE_THROWS_WITH(parse_str("birth,death\n0.1,0.2\n-0.3,0.5\n"),
                        Catch::Matchers::ContainsSubstring("line 3") &&
                            Catch::Matchers::ContainsSubstring("negative birth"));
    REQUIRE_THROWS_WITH(parse_str("birth,death\nfoo,0.5\n"),
                        Catch::Matchers::ContainsSubstring("line 2") &&
                            Catch::Matchers::ContainsSubstring("malformed"));
    REQUIRE_THROWS_WITH(parse_str("birth,death\n0.1,inf\n"),
                        Catch::Matchers::ContainsSubstring("infinite death"));
    REQUIRE_THROWS_WITH(parse_str("0.1,0.8\n"), Catch::Matchers::ContainsSubstring("header"));
    REQUIRE_THROWS_WITH(parse_str(""), Catch::Matchers::ContainsSubstring("header"));
    REQUIRE_THROWS_WITH(parse_str("birth,death\n0.1\n"), Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("serialize matches the documented layout")
{
    persistence_diagram pd;
    pd.points = {{0.1, 0.8}};
    std::ostringstream out;
    serialize_diagram(pd, out);
    REQUIRE(out.str() == "# dim=1\nbirth,death\n0.1,0.8\n");

    persistence_diagram empty;
    std::ostringstream out2;
    serialize_diagram(empty, out2);
    REQUIRE(out2.str() == "# dim=1\nbirth,death\n");
}

TEST_CASE("round trip is exact for awkward doubles")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    persistence_diagram pd;
    pd.homology_dim = 2;
    for (int i = 0; i < 200; ++i) {
        const double b = unit(rng) / 3.0;
        pd.points.push_back({b, b + unit(rng) / 7.0});
    }
    std::ostringstream out;
    serialize_diagram(pd, out);
    const auto back = parse_str(out.str());
    REQUIRE(back.homology_dim == pd.homology_dim);
    REQUIRE(back.points.size() == pd.points.size());
    for (std::size_t i = 0; i < pd.size(); ++i)
        REQUIRE(back.points[i] == pd.points[i]);
}

TEST_CASE("perturbation stays within tau and preserves validity")
{
    persistence_diagram pd;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
        const double b = unit(rng);
        pd.points.push_back({b, b + 0.015 * unit(rng)}); // includes near-diagonal points
    }
    const double tau = 0.02;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto q = perturb_diagram(pd, {tau, seed});
        REQUIRE(q.size() == pd.size());
        for (std::size_t i = 0; i < pd.size(); ++i) {
            REQUIRE(q.points[i].birth >= 0.0);
            REQUIRE(q.points[i].birth <= q.points[i].death);
            REQUIRE(std::abs(q.points[i].birth - pd.points[i].birth) <= tau + 1e-15);
            REQUIRE(std::abs(q.points[i].death - pd.points[i].death) <= tau + 1e-15);
        }
    }

    const auto same = perturb_diagram(pd, {0.0, 42});
    for (std::size_t i = 0; i < pd.size(); ++i) REQUIRE(same.points[i] == pd.points[i]);

    const auto a = perturb_diagram(pd, {0.02, 9});
    const auto b = perturb_diagram(pd, {0.02, 9});
    for (std::size_t i = 0; i < pd.size(); ++i) REQUIRE(a.points[i] == b.points[i]);
}
