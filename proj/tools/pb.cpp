// pb: persistence-diagram vectorization toolkit. Subcommands cover the
// whole pipeline: generate synthetic data, compute Rips persistence,
// vectorize diagrams, measure distances, reconstruct surfaces, and run the
// bundled studies. Batch-oriented: files in, files out, seeded RNG.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pb/datasets.hpp"
#include "pb/diagram.hpp"
#include "pb/experiments.hpp"
#include "pb/homology.hpp"
#include "pb/lspia.hpp"
#include "pb/metrics.hpp"
#include "pb/transform.hpp"

namespace {

pb::persistence_diagram read_diagram_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return pb::parse_diagram(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

pb::point_cloud read_cloud_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return pb::parse_point_cloud(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

// Write through a callback; "-" selects stdout.
template <class Fn>
void write_output(const std::string& path, Fn&& fn)
{
    if (path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    fn(out);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string stem(const std::string& path)
{
    const auto slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return name;
}

std::vector<double> parse_double_list(const std::string& csv)
{
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(std::stod(tok));
    if (out.empty()) throw std::runtime_error("empty list '" + csv + "'");
    return out;
}

struct vectorize_opts {
    std::vector<std::string> inputs;
    int grid = 20;
    int iters = 100;
    double epsilon = 0.0;
    double m = 0.0;
    double margin = 0.01;
    int density_cap = 10;
    double persistence_cap = 0.0;
    double step_scale = 1.0;
    std::string out;
};

void run_vectorize(const vectorize_opts& o)
{
    std::vector<pb::persistence_diagram> pds;
    for (const auto& p : o.inputs) pds.push_back(read_diagram_file(p));
    pb::eminence_config em;
    em.epsilon = o.epsilon;
    em.M = o.density_cap;
    em.L = o.persistence_cap;
    em.m = o.m > 0.0 ? o.m : pb::choose_m(pds, o.margin);
    const pb::lspia_config cfg{o.grid, o.iters, o.step_scale};

    write_output(o.out, [&](std::ostream& os) {
        if (pds.size() == 1) {
            pb::write_vector_json(pb::vectorize(pds[0], em, cfg), os);
            return;
        }
        for (std::size_t i = 0; i < pds.size(); ++i) {
            const auto v = pb::vectorize(pds[i], em, cfg);
            os << "{\"id\": \"" << stem(o.inputs[i]) << "\", \"h\": " << v.h << ", \"values\": [";
            for (std::size_t j = 0; j < v.values.size(); ++j) {
                if (j) os << ", ";
                os << pb::format_double(v.values[j]);
            }
            os << "]}\n";
        }
    });
}

struct distance_opts {
    std::string metric;
    double p = 2.0;
    std::vector<std::string> inputs;
    std::string out;
};

void run_distance(const distance_opts& o)
{
    std::vector<pb::persistence_diagram> pds;
    std::vector<std::string> labels;
    for (const auto& path : o.inputs) {
        pds.push_back(read_diagram_file(path));
        labels.push_back(stem(path));
    }
    auto dist = [&](const pb::persistence_diagram& a, const pb::persistence_diagram& b) {
        return o.metric == "bottleneck" ? pb::bottleneck(a, b) : pb::wasserstein(a, b, o.p);
    };
    if (pds.size() == 2 && o.out.empty()) {
        std::cout << pb::format_double(dist(pds[0], pds[1])) << "\n";
        return;
    }
    if (o.out.empty())
        throw CLI::ValidationError("distance", "--out is required for more than two inputs");
    const auto dm = pb::pairwise_distances(pds, labels, dist);
    write_output(o.out, [&](std::ostream& os) { pb::write_distance_matrix_csv(dm, os); });
}

struct homology_opts {
    std::string input;
    int maxdim = 2;
    double rmax = 0.0;
    std::string out_h1, out_h0;
};

void run_homology(const homology_opts& o)
{
    const auto pts = read_cloud_file(o.input);
    const auto result = pb::persistence_diagrams(pts, o.maxdim, o.rmax);
    if (o.out_h1.empty() && o.out_h0.empty()) {
        pb::serialize_diagram(result.h1, std::cout);
        return;
    }
    if (!o.out_h1.empty())
        write_output(o.out_h1, [&](std::ostream& os) { pb::serialize_diagram(result.h1, os); });
    if (!o.out_h0.empty())
        write_output(o.out_h0, [&](std::ostream& os) { pb::serialize_diagram(result.h0_reduced, os); });
}

struct generate_opts {
    std::string kind;
    std::string out;
    std::uint64_t seed = 0;
    double tau = 0.02;
    int count = 50;
    std::string shape;
    int n = 150;
    double noise = 0.025;
    double m0 = 3.0, m1 = 1.0, m2 = 4.0, m3 = 4.0;
    int iters = 2000;
    std::vector<double> initial;
};

void run_generate(const generate_opts& o)
{
    if (o.kind == "random-pd") {
        const auto pd = pb::random_pd({o.tau, o.count, o.seed});
        write_output(o.out, [&](std::ostream& os) { pb::serialize_diagram(pd, os); });
    } else if (o.kind == "shape") {
        if (o.shape.empty())
            throw CLI::ValidationError("generate", "--shape is required with --kind shape");
        const auto pts = pb::sample_shape(pb::parse_shape_kind(o.shape), o.n, o.noise, o.seed);
        write_output(o.out, [&](std::ostream& os) { pb::write_point_cloud(pts, os); });
    } else {
        pb::orbit_spec spec{o.m0, o.m1, o.m2, o.m3, std::nullopt, o.iters, o.seed};
        if (!o.initial.empty()) {
            if (o.initial.size() != 3)
                throw CLI::ValidationError("generate", "--initial needs exactly three values");
            spec.initial = std::array<double, 3>{o.initial[0], o.initial[1], o.initial[2]};
        }
        const auto orbit = pb::lindstrom_orbit(spec);
        write_output(o.out, [&](std::ostream& os) { pb::write_point_cloud(orbit, os); });
    }
}

struct experiment_opts {
    std::string suite;
    std::uint64_t seed = 1;
    std::string out;
    int pds = 100;
    double tau = 1.0;
    std::string epsilons = "0,0.1";
    int points = 150;
    int clouds = 20;
};

void run_experiment(const experiment_opts& o)
{
    if (o.suite == "ratio") {
        std::mt19937_64 rng(pb::derive_seed(o.seed, 0));
        std::normal_distribution<double> size_dist(200.0, 10.0);
        std::vector<pb::persistence_diagram> pds;
        for (int i = 0; i < o.pds; ++i) {
            const int pts = std::max(1, static_cast<int>(std::lround(size_dist(rng))));
            pds.push_back(pb::random_pd({o.tau, pts, pb::derive_seed(o.seed, 1 + i)}));
        }
        const std::vector<int> Ns{10, 100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
        pb::eminence_config em;
        em.m = 1.0;
        const auto curve = pb::compute_ratio_curve(pds, Ns, em, 20);
        write_output(o.out, [&](std::ostream& os) { pb::write_ratio_curve_csv(curve, os); });
    } else if (o.suite == "features") {
        const auto eps = parse_double_list(o.epsilons);
        const auto reports = pb::feature_extraction_suite(o.seed, eps);
        write_output(o.out, [&](std::ostream& os) {
            os << "[\n";
            for (std::size_t i = 0; i < reports.size(); ++i) {
                const auto& r = reports[i];
                const std::vector<std::pair<std::string, std::string>> params{
                    {"epsilon", pb::format_double(r.epsilon)}, {"seed", std::to_string(o.seed)},
                    {"h", "20"}, {"iterations", "100"}};
                pb::write_report_json(os, "features_design1", r.design1, params);
                os << ",\n";
                pb::write_report_json(os, "features_design2", r.design2, params);
                if (i + 1 < reports.size()) os << ",\n";
            }
            os << "]\n";
        });
    } else if (o.suite == "overperformance") {
        const auto rep = pb::overperformance_suite(o.seed);
        write_output(o.out, [&](std::ostream& os) {
            pb::write_report_json(os, "overperformance", rep,
                                  {{"seed", std::to_string(o.seed)}, {"h", "20"}, {"iterations", "100"}});
        });
    } else {
        const auto rep = pb::shape_suite(o.seed, o.points, o.clouds);
        write_output(o.out, [&](std::ostream& os) {
            pb::write_report_json(os, "shapes", rep,
                                  {{"seed", std::to_string(o.seed)},
                                   {"points_per_cloud", std::to_string(o.points)},
                                   {"clouds_per_class", std::to_string(o.clouds)},
                                   {"rmax", pb::format_double(pb::shape_suite_rmax)}});
        });
    }
}

struct reconstruct_opts {
    std::string input;
    int samples = 50;
    std::string out;
};

void run_reconstruct(const reconstruct_opts& o)
{
    std::ifstream in(o.input);
    if (!in) throw std::runtime_error("cannot open '" + o.input + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(o.input + ": invalid JSON: " + e.what());
    }
    if (!j.contains("h") || !j.contains("values"))
        throw std::runtime_error(o.input + ": expected fields 'h' and 'values'");
    pb::persistence_vector v;
    v.h = j["h"].get<int>();
    v.values = j["values"].get<std::vector<double>>();
    const auto field = pb::reconstruct_surface(v, o.samples);
    write_output(o.out, [&](std::ostream& os) { pb::write_height_field_csv(field, o.samples, os); });
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"persistence-diagram vectorization by B-spline surface fitting"};
    app.require_subcommand(1);

    vectorize_opts vo;
    auto* vec = app.add_subcommand("vectorize", "fit diagrams and emit persistence vectors");
    vec->add_option("--input", vo.inputs, "diagram CSV file(s)")->required()->expected(1, -1);
    vec->add_option("--grid", vo.grid, "control grid size h (h x h)")->capture_default_str();
    vec->add_option("--iters", vo.iters, "LSPIA iteration count")->capture_default_str();
    vec->add_option("--epsilon", vo.epsilon, "eminence density radius")->capture_default_str();
    vec->add_option("--m", vo.m, "normalization constant (0 = derive from inputs)")->capture_default_str();
    vec->add_option("--margin", vo.margin, "margin used when deriving m")->capture_default_str();
    vec->add_option("--density-cap", vo.density_cap, "eminence density cap M")->capture_default_str();
    vec->add_option("--persistence-cap", vo.persistence_cap, "persistence cap L (0 = use m)")->capture_default_str();
    vec->add_option("--step-scale", vo.step_scale, "multiplier on the 1/C step weight")->capture_default_str();
    vec->add_option("--out", vo.out, "output JSON (single input) or JSONL (batch); - for stdout")->required();
    vec->callback([&] { run_vectorize(vo); });

    distance_opts dopt;
    auto* dist = app.add_subcommand("distance", "distances between diagrams");
    dist->add_option("--metric", dopt.metric, "wasserstein or bottleneck")
        ->required()
        ->check(CLI::IsMember({"wasserstein", "bottleneck"}));
    dist->add_option("--p", dopt.p, "Wasserstein order (>= 1, inf allowed)")->capture_default_str();
    dist->add_option("inputs", dopt.inputs, "diagram CSV files")->required()->expected(2, -1);
    dist->add_option("--out", dopt.out, "distance-matrix CSV (required for >2 inputs)");
    dist->callback([&] { run_distance(dopt); });

    homology_opts ho;
    auto* hom = app.add_subcommand("homology", "Vietoris-Rips persistence of a point cloud");
    hom->add_option("--input", ho.input, "point-cloud CSV")->required();
    hom->add_option("--maxdim", ho.maxdim, "1 (H0 only) or 2 (H0 and H1)")->capture_default_str();
    hom->add_option("--rmax", ho.rmax, "filtration radius cap")->required();
    hom->add_option("--out-h1", ho.out_h1, "H1 diagram CSV");
    hom->add_option("--out-h0", ho.out_h0, "reduced H0 diagram CSV");
    hom->callback([&] { run_homology(ho); });

    generate_opts go;
    auto* gen = app.add_subcommand("generate", "synthetic diagrams, shapes, and orbits");
    gen->add_option("--kind", go.kind, "random-pd, shape, or lindstrom")
        ->required()
        ->check(CLI::IsMember({"random-pd", "shape", "lindstrom"}));
    gen->add_option("--out", go.out, "output file; - for stdout")->required();
    gen->add_option("--seed", go.seed, "RNG seed")->capture_default_str();
    gen->add_option("--tau", go.tau, "random-pd: diagonal spread")->capture_default_str();
    gen->add_option("--count", go.count, "random-pd: number of points")->capture_default_str();
    gen->add_option("--shape", go.shape, "shape: circle, concentric, two_circles, cluster, two_clusters");
    gen->add_option("--n", go.n, "shape: points per cloud")->capture_default_str();
    gen->add_option("--noise", go.noise, "shape: Gaussian noise sigma")->capture_default_str();
    gen->add_option("--m0", go.m0, "lindstrom: M0")->capture_default_str();
    gen->add_option("--m1", go.m1, "lindstrom: M1")->capture_default_str();
    gen->add_option("--m2", go.m2, "lindstrom: M2")->capture_default_str();
    gen->add_option("--m3", go.m3, "lindstrom: M3")->capture_default_str();
    gen->add_option("--iters", go.iters, "lindstrom: iteration count")->capture_default_str();
    gen->add_option("--initial", go.initial, "lindstrom: X0 Y0 Z0 (default: random in (1,2)x(0,1)^2)")
        ->expected(3);
    gen->callback([&] { run_generate(go); });

    experiment_opts eo;
    auto* exp = app.add_subcommand("experiment", "bundled studies");
    exp->add_option("--suite", eo.suite, "ratio, features, overperformance, or shapes")
        ->required()
        ->check(CLI::IsMember({"ratio", "features", "overperformance", "shapes"}));
    exp->add_option("--seed", eo.seed, "master seed")->capture_default_str();
    exp->add_option("--out", eo.out, "report file (CSV for ratio, JSON otherwise); - for stdout")->required();
    exp->add_option("--pds", eo.pds, "ratio: number of diagrams")->capture_default_str();
    exp->add_option("--tau", eo.tau, "ratio: random-pd spread")->capture_default_str();
    exp->add_option("--epsilons", eo.epsilons, "features: comma-separated density radii")->capture_default_str();
    exp->add_option("--points", eo.points, "shapes: points per cloud")->capture_default_str();
    exp->add_option("--clouds", eo.clouds, "shapes: clouds per class")->capture_default_str();
    exp->callback([&] { run_experiment(eo); });

    reconstruct_opts ro;
    auto* rec = app.add_subcommand("reconstruct", "sample the surface described by a persistence vector");
    rec->add_option("--input", ro.input, "persistence-vector JSON")->required();
    rec->add_option("--samples", ro.samples, "lattice resolution per axis")->capture_default_str();
    rec->add_option("--out", ro.out, "height-field CSV; - for stdout")->required();
    rec->callback([&] { run_reconstruct(ro); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
