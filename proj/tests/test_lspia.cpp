#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pb/lspia.hpp"
#include "pb/lsq_oracle.hpp"

using namespace pb;

namespace {

fit_dataset sites_to_data(const std::vector<std::pair<double, double>>& sites, const std::vector<double>& z)
{
    fit_dataset d;
    for (std::size_t i = 0; i < sites.size(); ++i)
        d.samples.push_back({sites[i].first, sites[i].second, z[i]});
    return d;
}

std::vector<std::pair<double, double>> random_sites(int k, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, double>> sites;
    for (int i = 0; i < k; ++i) sites.emplace_back(unit(rng), unit(rng));
    return sites;
}

// Greville tensor grid: the collocation sites with a comfortably bounded
// condition number. Purely random scatters leave near-zero singular values
// whose modes converge too slowly for tight finite-N comparisons.
std::vector<std::pair<double, double>> greville_sites(int h)
{
    const knot_vector kv(h);
    std::vector<double> g(h);
    for (int i = 0; i < h; ++i) g[i] = (kv.knots[i + 1] + kv.knots[i + 2] + kv.knots[i + 3]) / 3.0;
    std::vector<std::pair<double, double>> sites;
    for (double s : g)
        for (double t : g) sites.emplace_back(s, t);
    return sites;
}

} // namespace

TEST_CASE("step weight")
{
    REQUIRE(step_weight(basis_matrix({{0.0, 0.0}}, 5)) == 1.0);
    REQUIRE(step_weight(basis_matrix({{0.0, 0.0}, {0.0, 0.0}}, 5)) == 0.5);

    std::mt19937_64 rng(29);
    const basis_matrix B(random_sites(40, rng), 6);
    REQUIRE(step_weight(B) > 0.0);
    REQUIRE_THROWS(step_weight(basis_matrix({}, 5)));
}

TEST_CASE("one step on a corner sample interpolates it")
{
    const auto data = sites_to_data({{0.0, 0.0}}, {1.0});
    const auto trace = lspia_fit(data, {5, 1, 1.0});
    REQUIRE(trace.residual_norms.size() == 1);
    REQUIRE(trace.residual_norms[0] == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(trace.final_grid.z[0] == Catch::Approx(1.0).margin(1e-15));
    for (int c = 1; c < 25; ++c) REQUIRE(trace.final_grid.z[c] == 0.0);
}

TEST_CASE("constant data is reproduced at the sites")
{
    const auto sites = greville_sites(6);
    const std::vector<double> z(sites.size(), 0.8);
    const auto trace = lspia_fit(sites_to_data(sites, z), {6, 20000, 1.0});
    for (const auto& [s, t] : sites)
        REQUIRE(std::abs(eval_surface(trace.final_grid, s, t) - 0.8) < 1e-8);
}

TEST_CASE("residual trace is recorded after each update and stays bounded")
{
    std::mt19937_64 rng(37);
    const auto sites = random_sites(25, rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> z;
    for (int i = 0; i < 25; ++i) z.push_back(unit(rng));
    const auto trace = lspia_fit(sites_to_data(sites, z), {5, 200, 1.0});
    REQUIRE(trace.residual_norms.size() == 200);
    double z_norm = 0.0;
    for (double v : z) z_norm += v * v;
    z_norm = std::sqrt(z_norm);
    for (double r : trace.residual_norms) {
        REQUIRE(std::isfinite(r));
        REQUIRE(r <= z_norm + 1e-12);
    }
}

TEST_CASE("normal-equation residual decreases monotonically")
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int inst = 0; inst < 50; ++inst) {
        const int k = 5 + static_cast<int>(rng() % 30);
        const int h = 5 + static_cast<int>(rng() % 3);
        const auto sites = random_sites(k, rng);
        std::vector<double> z;
        for (int i = 0; i < k; ++i) z.push_back(unit(rng));
        const basis_matrix B(sites, h);
        const double mu = step_weight(B);

        std::vector<double> zt(B.cols(), 0.0), r = z, u(B.cols()), w(k);
        double prev = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 60; ++it) {
            B.apply_transpose(r.data(), u.data());
            double un = 0.0;
            for (double v : u) un += v * v;
            un = std::sqrt(un); // ||B^T r||, the normal-equation residual
            REQUIRE(un <= prev + 1e-12);
            prev = un;
            for (int c = 0; c < B.cols(); ++c) zt[c] += mu * u[c];
            B.apply(u.data(), w.data());
            for (int l = 0; l < k; ++l) r[l] -= mu * w[l];
        }
    }
}

TEST_CASE("minimum-norm oracle basics")
{
    const basis_matrix B({{0.0, 0.0}}, 5);
    const auto v = min_norm_lsq(B, std::vector<double>{1.0});
    REQUIRE(v.values[0] == Catch::Approx(1.0).margin(1e-12));
    for (int c = 1; c < 25; ++c) REQUIRE(std::abs(v.values[c]) < 1e-12);

    std::mt19937_64 rng(43);
    const auto sites = random_sites(20, rng);
    const basis_matrix B2(sites, 5);
    const auto zero = min_norm_lsq(B2, std::vector<double>(20, 0.0));
    for (double x : zero.values) REQUIRE(x == 0.0);

    // consistent system: constant data is achievable, so the residual is 0
    const std::vector<double> z(20, 0.8);
    const auto fit = min_norm_lsq(B2, z);
    std::vector<double> bx(20);
    B2.apply(fit.values.data(), bx.data());
    for (double x : bx) REQUIRE(std::abs(x - 0.8) < 1e-10);
}

TEST_CASE("iteration limit matches the pseudo-inverse solution")
{
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto sites = greville_sites(5);
    for (int e = 0; e < 5; ++e) sites.emplace_back(unit(rng), unit(rng));
    std::vector<double> z;
    for (std::size_t i = 0; i < sites.size(); ++i) z.push_back(unit(rng));

    const auto trace = lspia_fit(sites_to_data(sites, z), {5, 10000, 1.0});
    const auto oracle = min_norm_lsq(basis_matrix(sites, 5), z);
    double err = 0.0;
    for (int c = 0; c < 25; ++c)
        err = std::max(err, std::abs(trace.final_grid.z[c] - oracle.values[c]));
    REQUIRE(err < 1e-6);
}

TEST_CASE("duplicated inconsistent samples average out")
{
    // two samples at the same corner with different heights: least squares
    // lands on the mean, and the minimum-norm solution keeps it in a single
    // control point
    const auto data = sites_to_data({{0.0, 0.0}, {0.0, 0.0}}, {1.0, 3.0});
    const auto trace = lspia_fit(data, {5, 4000, 1.0});
    REQUIRE(trace.final_grid.z[0] == Catch::Approx(2.0).margin(1e-9));
    const auto oracle = min_norm_lsq(basis_matrix({{0.0, 0.0}, {0.0, 0.0}}, 5), std::vector<double>{1.0, 3.0});
    REQUIRE(oracle.values[0] == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("vectorizing is linear in the heights at fixed sites")
{
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto sites = random_sites(24, rng);
    std::vector<double> z;
    for (int i = 0; i < 24; ++i) z.push_back(unit(rng));
    std::vector<double> z3(z);
    for (double& v : z3) v *= 3.0;

    const auto a = lspia_fit(sites_to_data(sites, z), {6, 100, 1.0});
    const auto b = lspia_fit(sites_to_data(sites, z3), {6, 100, 1.0});
    for (int c = 0; c < 36; ++c)
        REQUIRE(b.final_grid.z[c] == Catch::Approx(3.0 * a.final_grid.z[c]).margin(1e-12));
}

TEST_CASE("curve fitting")
{
    const std::vector<std::pair<double, double>> one{{0.0, 1.0}};
    const auto ctrl = lspia_fit_curve(one, 5, 1);
    REQUIRE(ctrl[0] == Catch::Approx(1.0).margin(1e-15));
    for (int i = 1; i < 5; ++i) REQUIRE(ctrl[i] == 0.0);

    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, double>> data;
    for (int i = 0; i < 20; ++i) data.emplace_back(unit(rng), 1.4);
    const auto c2 = lspia_fit_curve(data, 6, 2000);
    for (const auto& [t, z] : data)
        REQUIRE(std::abs(eval_curve(c2, t) - z) < 1e-8);

    REQUIRE_THROWS(lspia_fit_curve({}, 5, 10));
}

TEST_CASE("vectorize handles empty and degenerate diagrams")
{
    eminence_config em;
    em.m = 1.0;
    const lspia_config cfg{6, 50, 1.0};

    const auto zero = vectorize(persistence_diagram{}, em, cfg);
    REQUIRE(zero.h == 6);
    REQUIRE(zero.values.size() == 36);
    for (double v : zero.values) REQUIRE(v == 0.0);

    persistence_diagram diag;
    diag.points = {{0.0, 0.0}};
    for (double v : vectorize(diag, em, cfg).values) REQUIRE(v == 0.0);

    persistence_diagram pd;
    pd.points = {{0.1, 0.6}, {0.3, 0.9}};
    const auto v1 = vectorize(pd, em, cfg);
    const auto v2 = vectorize(pd, em, cfg);
    REQUIRE(v1.values == v2.values);
}

TEST_CASE("checkpoints are exact iteration prefixes")
{
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto sites = random_sites(15, rng);
    std::vector<double> z;
    for (int i = 0; i < 15; ++i) z.push_back(unit(rng));
    const auto data = sites_to_data(sites, z);

    const std::vector<int> Ns{3, 7, 12};
    const auto snaps = lspia_checkpoints(data, 5, Ns);
    REQUIRE(snaps.size() == 3);
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        const auto direct = lspia_fit(data, {5, Ns[i], 1.0});
        REQUIRE(snaps[i].values == direct.final_grid.z);
    }

    REQUIRE_THROWS(lspia_checkpoints(data, 5, std::vector<int>{5, 5}));
}
