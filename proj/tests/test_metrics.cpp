#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "pb/metrics.hpp"

using namespace pb;

namespace {

persistence_diagram make_pd(std::initializer_list<pd_point> pts)
{
    persistence_diagram pd;
    pd.points = pts;
    return pd;
}

persistence_diagram random_pd_small(std::mt19937_64& rng, int max_points)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    persistence_diagram pd;
    const int n = static_cast<int>(rng() % (max_points + 1));
    for (int i = 0; i < n; ++i) {
        const double b = unit(rng);
        pd.points.push_back({b, b + unit(rng)});
    }
    return pd;
}

} // namespace

TEST_CASE("distance between a diagram and itself is zero")
{
    const auto pd = make_pd({{0.1, 0.5}, {0.2, 0.9}, {0.0, 0.3}});
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()})
        REQUIRE(wasserstein(pd, pd, p) == 0.0);
    REQUIRE(bottleneck(pd, pd) == 0.0);
    REQUIRE(wasserstein({}, {}, 1.0) == 0.0);
    REQUIRE(bottleneck({}, {}) == 0.0);
}

TEST_CASE("single point against the empty diagram")
{
    const auto pd = make_pd({{0.2, 0.8}});
    // only route: project onto the diagonal at half the persistence
    for (double p : {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
        REQUIRE(wasserstein(pd, {}, p) == Catch::Approx(0.3).margin(1e-15));
        REQUIRE(wasserstein({}, pd, p) == Catch::Approx(0.3).margin(1e-15));
    }
    REQUIRE(bottleneck(pd, {}) == Catch::Approx(0.3).margin(1e-15));
}

TEST_CASE("direct match beats the diagonal when points are close")
{
    const auto a = make_pd({{0.0, 1.0}});
    const auto b = make_pd({{0.0, 0.8}});
    // sup-norm match costs 0.2; the diagonal detour would cost 0.5 + 0.4
    REQUIRE(wasserstein(a, b, 1.0) == Catch::Approx(0.2).margin(1e-15));
    REQUIRE(wasserstein(a, b, 2.0) == Catch::Approx(0.2).margin(1e-15));
    REQUIRE(bottleneck(a, b) == Catch::Approx(0.2).margin(1e-15));
}

TEST_CASE("diagonal detour wins for far-apart points")
{
    const auto a = make_pd({{0.0, 0.2}});
    const auto b = make_pd({{0.7, 0.9}});
    // matching directly costs 0.7; dropping both to the diagonal costs 0.1 each
    REQUIRE(wasserstein(a, b, 1.0) == Catch::Approx(0.2).margin(1e-15));
    REQUIRE(bottleneck(a, b) == Catch::Approx(0.1).margin(1e-15));
}

TEST_CASE("hungarian agrees with exhaustive enumeration")
{
    std::mt19937_64 rng(67);
    const double inf = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_pd_small(rng, 4);
        const auto b = random_pd_small(rng, 4);
        for (double p : {1.0, 2.0, inf}) {
            const double fast = wasserstein(a, b, p);
            const double slow = brute_force_distance(a, b, p);
            REQUIRE(std::abs(fast - slow) < 1e-9);
        }
        REQUIRE(std::abs(bottleneck(a, b) - brute_force_distance(a, b, inf)) < 1e-9);
    }
}

TEST_CASE("metric axioms on random triples")
{
    std::mt19937_64 rng(71);
    const double inf = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 60; ++trial) {
        const auto a = random_pd_small(rng, 4);
        const auto b = random_pd_small(rng, 4);
        const auto c = random_pd_small(rng, 4);
        for (double p : {1.0, 2.0, inf}) {
            const double ab = wasserstein(a, b, p);
            REQUIRE(ab >= 0.0);
            // same matched costs either way; only the summation order differs
            REQUIRE(std::abs(ab - wasserstein(b, a, p)) < 1e-12);
            REQUIRE(ab <= wasserstein(a, c, p) + wasserstein(c, b, p) + 1e-9);
        }
    }
}

TEST_CASE("argument validation")
{
    const auto pd = make_pd({{0.1, 0.4}});
    REQUIRE_THROWS(wasserstein(pd, pd, 0.5));
    REQUIRE_THROWS(brute_force_distance(pd, pd, 0.0));

    persistence_diagram big;
    for (int i = 0; i < 9; ++i) big.points.push_back({0.0, 1.0});
    REQUIRE_THROWS(brute_force_distance(big, {}, 1.0));
}

TEST_CASE("vector distances")
{
    const persistence_vector a{0, {1.0, 2.0, 3.0}};
    const persistence_vector b{0, {0.0, 4.0, 3.0}};
    REQUIRE(vector_distance(a, b, 1.0) == Catch::Approx(3.0).margin(1e-15));
    REQUIRE(vector_distance(a, b, 2.0) == Catch::Approx(std::sqrt(5.0)).margin(1e-15));
    REQUIRE(vector_distance(a, b, std::numeric_limits<double>::infinity()) == Catch::Approx(2.0).margin(1e-15));
    REQUIRE(vector_distance(a, a, 1.0) == 0.0);

    const persistence_vector shorter{0, {1.0}};
    REQUIRE_THROWS(vector_distance(a, shorter, 2.0));
    REQUIRE_THROWS(vector_distance(a, b, 0.9));

    REQUIRE(vector_norm(a, 1.0) == Catch::Approx(6.0).margin(1e-15));
    REQUIRE(vector_norm(b, std::numeric_limits<double>::infinity()) == Catch::Approx(4.0).margin(1e-15));
}

TEST_CASE("pairwise matrix is symmetric with a zero diagonal")
{
    std::mt19937_64 rng(73);
    std::vector<persistence_diagram> pds;
    std::vector<std::string> labels;
    for (int i = 0; i < 5; ++i) {
        pds.push_back(random_pd_small(rng, 4));
        labels.push_back("pd" + std::to_string(i));
    }
    const auto m = pairwise_distances(pds, labels, [](const auto& x, const auto& y) {
        return wasserstein(x, y, 2.0);
    });
    REQUIRE(m.n() == 5);
    for (int i = 0; i < 5; ++i) {
        REQUIRE(m.at(i, i) == 0.0);
        for (int j = 0; j < 5; ++j) {
            REQUIRE(m.at(i, j) == m.at(j, i));
            // entries are computed once with i < j; match that call exactly
            if (i < j) REQUIRE(m.at(i, j) == wasserstein(pds[i], pds[j], 2.0));
        }
    }

    REQUIRE_THROWS(pairwise_distances(pds, {"too", "few"}, [](const auto&, const auto&) { return 0.0; }));
}

TEST_CASE("distance matrix csv layout")
{
    distance_matrix m;
    m.labels = {"a", "b"};
    m.values = {0.0, 0.5, 0.5, 0.0};
    std::ostringstream out;
    write_distance_matrix_csv(m, out);
    REQUIRE(out.str() == "a,b\n0,0.5\n0.5,0\n");
}
