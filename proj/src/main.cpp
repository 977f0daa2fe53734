#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jetext/extension.hpp"
#include "jetext/jet_io.hpp"
#include "jetext/metrics.hpp"
#include "jetext/report.hpp"
#include "jetext/seminorms.hpp"
#include "jetext/sparse_graph.hpp"

namespace {

using namespace jetext;

// One config object serves every subcommand; fields a command ignores are
// simply unused. quad_order == 0 means "auto": max(4, m + 1) once m is known.
struct RunConfig {
    std::string input;
    std::string density;
    std::string out_dir = ".";
    double tau = 4.0;
    double gamma_tilde = 180.0;
    int depth_cap = 0;  // 0: resolving_depth from the data
    double inflate = 4.0;
    double epsilon = 0.1;
    int quad_order = 0;
    int quad_cells = 8;
    int grid = 33;
    int res = 16;
    uint64_t seed = 1;

    // gen only
    int gen_n = 2;
    int gen_m = 2;
    int gen_points = 12;
    double gen_p = 0.0;  // 0: defaults to 2n
};

JetField load_field(const RunConfig& cfg) {
    if (cfg.input.empty()) throw config_error("an input jet file is required (-i/--input)");
    std::ifstream in(cfg.input, std::ios::binary);
    if (!in) throw config_error("cannot open input file '" + cfg.input + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_jet_field(buf.str());
}

std::filesystem::path emit(const RunConfig& cfg, const std::string& name,
                           const std::string& text) {
    std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write '" + path.string() + "'");
    out << text;
    out.flush();
    if (!out) throw config_error("write failed for '" + path.string() + "'");
    std::cout << "wrote " << path.string() << "\n";
    return path;
}

// Whitney cover plus everything the downstream stages hang off it.
struct Pipeline {
    JetField field;
    LacunaConstants consts;
    WhitneyCover cover;
    DyadicNets nets;
    LacunaSet lacunae;
};

Pipeline build_pipeline(const RunConfig& cfg) {
    Pipeline pl;
    pl.field = load_field(cfg);
    pl.consts.tau = cfg.tau;
    pl.consts.gamma_tilde = cfg.gamma_tilde;
    int cap = cfg.depth_cap > 0 ? cfg.depth_cap
                                : resolving_depth(pl.field.points, cfg.inflate);
    pl.cover = whitney_decompose(pl.field.points, cfg.inflate, cap);
    pl.nets = build_dyadic_nets(pl.field.points);
    pl.lacunae = classify_lacunae(pl.cover);
    project_lacunae(pl.lacunae, pl.cover, pl.nets, pl.consts);
    return pl;
}

ExtensionPlan make_plan(const Pipeline& pl) {
    return plan_extension(pl.field, pl.cover, pl.lacunae, pl.consts);
}

int effective_order(const RunConfig& cfg, int m) {
    return cfg.quad_order > 0 ? cfg.quad_order : std::max(4, m + 1);
}

QuadratureSpec make_quad(const RunConfig& cfg, const Pipeline& pl) {
    QuadratureSpec quad;
    quad.order = effective_order(cfg, pl.field.m);
    quad.cells_per_axis = cfg.quad_cells;
    quad.window = pl.cover.window;
    return quad;
}

// Bounding cube of E inflated about its center, half-side a power of two.
// Same shape as the Whitney window but without the grid machinery; used by
// the subcommands that never build a cover.
Cube data_window(const std::vector<Point>& E, double inflate) {
    Point lo = E[0], hi = E[0];
    for (const Point& x : E) {
        for (int i = 0; i < x.dim; ++i) {
            lo[i] = std::min(lo[i], x[i]);
            hi[i] = std::max(hi[i], x[i]);
        }
    }
    Cube box;
    box.center.dim = E[0].dim;
    double raw_half = 0.0;
    for (int i = 0; i < E[0].dim; ++i) {
        box.center[i] = 0.5 * (lo[i] + hi[i]);
        raw_half = std::max(raw_half, 0.5 * (hi[i] - lo[i]));
    }
    if (raw_half == 0.0) raw_half = 0.5;
    box.half_side = next_pow2_at_least(raw_half * inflate);
    return box;
}

std::vector<double> point_values(const JetField& f) {
    std::vector<double> vals;
    vals.reserve(f.points.size());
    for (size_t i = 0; i < f.points.size(); ++i) {
        MultiIndex zero;
        zero.dim = f.dim;
        vals.push_back(poly_coeff(f.polys[i], zero));
    }
    return vals;
}

std::string alpha_digits(const MultiIndex& a) {
    std::string s;
    for (int i = 0; i < a.dim; ++i) s += static_cast<char>('0' + a[i]);
    return s;
}

void cmd_decompose(const RunConfig& cfg) {
    Pipeline pl = build_pipeline(cfg);
    std::ostringstream os;
    write_cover(pl.cover, os);
    emit(cfg, "cover.json", os.str());
    std::cout << "cubes " << pl.cover.cubes.size() << ", collar measure "
              << format_double(pl.cover.collar_measure) << "\n";
}

void cmd_lacunae(const RunConfig& cfg) {
    Pipeline pl = build_pipeline(cfg);
    std::ostringstream os;
    write_lacunae(pl.lacunae, pl.cover, os);
    emit(cfg, "lacunae.json", os.str());
    size_t true_count = 0;
    for (const Lacuna& l : pl.lacunae.lacunae) true_count += l.is_true ? 1 : 0;
    std::cout << "lacunae " << pl.lacunae.lacunae.size() << " (" << true_count
              << " true), contacts " << contacting_pairs(pl.lacunae, pl.cover).size() << "\n";
}

void cmd_graph(const RunConfig& cfg) {
    Pipeline pl = build_pipeline(cfg);
    SparseGraph g = build_graph(pl.cover, pl.lacunae, pl.consts);
    SparsityReport rep = verify_sparse(g);

    std::ostringstream gj, gd;
    write_graph_json(g, gj);
    write_graph_dot(g, gd);
    emit(cfg, "graph.json", gj.str());
    emit(cfg, "graph.dot", gd.str());

    std::vector<int> degree(g.points.size(), 0);
    for (const GraphEdge& e : g.edges) {
        degree[static_cast<size_t>(e.u)] += 1;
        degree[static_cast<size_t>(e.v)] += 1;
    }
    int max_degree = degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());

    // Geodesic stretch over seeded sample pairs; the direct distance never
    // exceeds the path length, so stretch >= 1 whenever it is defined.
    bool connected = graph_connected(g);
    double stretch_max = 0.0;
    if (connected && g.points.size() > 1) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(g.points.size()) - 1);
        for (int trial = 0; trial < 200; ++trial) {
            int a = pick(rng), b = pick(rng);
            if (a == b) continue;
            double direct = uniform_dist(g.points[static_cast<size_t>(a)],
                                         g.points[static_cast<size_t>(b)]);
            stretch_max = std::max(stretch_max, graph_geodesic(g, a, b).length / direct);
        }
    }

    JsonWriter w;
    w.begin_object();
    w.kv("vertices", g.points.size());
    w.kv("edges", g.edges.size());
    w.kv("gamma", g.gamma);
    w.kv("connected", connected);
    w.kv("max_degree", max_degree);
    w.kv("geodesic_stretch_max", stretch_max);
    w.key("violations").begin_array();
    for (const std::string& v : rep.violations) w.value(v);
    w.end_array();
    w.end_object();
    emit(cfg, "sparsity.json", w.str() + "\n");

    if (!rep.ok()) {
        throw invariant_error("sparse graph certificates failed " +
                              std::to_string(rep.violations.size()) + " check(s)");
    }
    if (!connected) throw invariant_error("sparse graph is disconnected");
}

void cmd_seminorm(const RunConfig& cfg) {
    Pipeline pl = build_pipeline(cfg);
    ExtensionPlan plan = make_plan(pl);
    QuadratureSpec quad = make_quad(cfg, pl);
    SparseGraph g = build_graph(pl.cover, pl.lacunae, pl.consts);

    double gn = graph_seminorm(pl.field, g, pl.field.p);
    WindowedLp sharp = sharp_max_lp(pl.field, quad);
    SobolevResult sob = sobolev_seminorm(plan, pl.field.p, quad);

    JsonWriter w;
    w.begin_object();
    w.kv("n", pl.field.dim);
    w.kv("m", pl.field.m);
    w.kv("p", pl.field.p);
    w.kv("points", pl.field.points.size());
    w.kv("pair_gamma", pl.consts.gamma());
    w.kv("graph_seminorm", gn);
    if (pl.field.points.size() <= 8) {
        w.kv("trace_bruteforce", trace_norm_bruteforce(pl.field, pl.field.p, pl.consts.gamma()));
    }
    w.key("sharp_lp").begin_object();
    w.kv("value", sharp.value);
    w.kv("tail_bound", sharp.tail_bound);
    w.end_object();
    w.key("sobolev").begin_object();
    w.kv("value", sob.value);
    w.kv("collar_measure", sob.collar.measure);
    w.kv("collar_bound", sob.collar.bound);
    w.end_object();
    if (pl.field.m == 1) {
        PhiPsi pp = phi_psi_m1(pl.field.points, point_values(pl.field), pl.field.p, quad);
        w.kv("phi", pp.phi);
        w.kv("phi_exhaustive", pp.phi_exhaustive);
        w.kv("psi", pp.psi);
        w.kv("psi_tail", pp.psi_tail);
    }
    w.end_object();
    emit(cfg, "seminorm.json", w.str() + "\n");
}

void cmd_extend(const RunConfig& cfg) {
    Pipeline pl = build_pipeline(cfg);
    ExtensionPlan plan = make_plan(pl);
    for (const MultiIndex& alpha : multi_indices_up_to(pl.field.dim, pl.field.m - 1)) {
        std::ostringstream os;
        write_extension_grid(plan, alpha, cfg.grid, os);
        emit(cfg, "extension_" + alpha_digits(alpha) + ".csv", os.str());
    }
}

void cmd_wmp(const RunConfig& cfg) {
    Pipeline pl = build_pipeline(cfg);
    ExtensionPlan plan = make_plan(pl);
    WmpParts parts = wmp_norm_parts(plan, cfg.epsilon, pl.field.p, pl.consts.gamma());

    JsonWriter w;
    w.begin_object();
    w.kv("epsilon", cfg.epsilon);
    w.kv("p", pl.field.p);
    w.kv("data_norm", parts.data_norm);
    w.kv("pair_part", parts.pair_part);
    w.kv("pair_part_exhaustive", parts.pair_part_exhaustive);
    w.kv("lacuna_part", parts.lacuna_part);
    w.kv("total", parts.total);
    w.end_object();
    emit(cfg, "wmp.json", w.str() + "\n");

    // Truncated extension on the window grid, same layout as the extension
    // CSVs; collar cells are skipped.
    int dim = pl.field.dim;
    MultiIndex zero;
    zero.dim = dim;
    std::ostringstream os;
    for (int i = 0; i < dim; ++i) os << "x" << i << ",";
    os << "alpha,value\n";
    const Cube& win = pl.cover.window;
    double step = win.diam() / cfg.grid;
    int idx[kMaxDim] = {0, 0, 0};
    size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<size_t>(cfg.grid);
    for (size_t flat = 0; flat < total; ++flat) {
        Point x;
        x.dim = dim;
        for (int i = 0; i < dim; ++i) {
            x[i] = win.center[i] - win.half_side + (idx[i] + 0.5) * step;
        }
        if (!support_cubes(pl.cover, x).empty()) {
            double v = extend_eval_wmp(plan, x, zero, cfg.epsilon);
            for (int i = 0; i < dim; ++i) os << format_double(x[i]) << ",";
            os << alpha_digits(zero) << "," << format_double(v) << "\n";
        }
        for (int i = 0; i < dim; ++i) {
            if (++idx[i] < cfg.grid) break;
            idx[i] = 0;
        }
    }
    emit(cfg, "wmp_grid.csv", os.str());
}

void cmd_metric(const RunConfig& cfg) {
    JetField field = load_field(cfg);
    DensityField h;
    if (!cfg.density.empty()) {
        std::ifstream in(cfg.density, std::ios::binary);
        if (!in) throw config_error("cannot open density file '" + cfg.density + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        h = parse_density(buf.str());
        if (h.dim() != field.dim) throw config_error("density dimension does not match the field");
    } else {
        Cube box = data_window(field.points, cfg.inflate);
        double q = (field.dim + field.p) / 2.0;
        h = sharp_density(field.points, point_values(field), box, cfg.res, q);
    }

    std::ostringstream dj;
    write_density(h, dj);
    emit(cfg, "density.json", dj.str());

    int stride = field.dim == 3 ? 2 : 1;
    MetricSample sample = build_metric_sample(h, field.points, stride, 4.0);
    std::ostringstream mc;
    write_metric_csv(sample, mc);
    emit(cfg, "metric.csv", mc.str());
    std::cout << "sites " << sample.sites.size() << " (lattice " << sample.lattice_count
              << "), q " << format_double(h.q) << "\n";
}

void cmd_mcshane(const RunConfig& cfg) {
    JetField field = load_field(cfg);
    if (field.m != 1) throw config_error("mcshane extends first-order data; m must be 1");
    Cube box = data_window(field.points, cfg.inflate);
    L1pExtension ext = l1p_extend(field.points, point_values(field), field.p, box, cfg.res);

    int dim = field.dim;
    std::ostringstream os;
    for (int i = 0; i < dim; ++i) os << "x" << i << ",";
    os << "value\n";
    double step = box.diam() / cfg.grid;
    int idx[kMaxDim] = {0, 0, 0};
    size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<size_t>(cfg.grid);
    for (size_t flat = 0; flat < total; ++flat) {
        Point x;
        x.dim = dim;
        for (int i = 0; i < dim; ++i) {
            x[i] = box.center[i] - box.half_side + (idx[i] + 0.5) * step;
        }
        for (int i = 0; i < dim; ++i) os << format_double(x[i]) << ",";
        os << format_double(ext.eval(x)) << "\n";
        for (int i = 0; i < dim; ++i) {
            if (++idx[i] < cfg.grid) break;
            idx[i] = 0;
        }
    }
    emit(cfg, "mcshane.csv", os.str());
}

struct Suite {
    std::string name;
    size_t checks = 0;
    std::vector<std::string> violations;

    void expect(bool ok, const std::string& what) {
        checks += 1;
        if (!ok && violations.size() < 20) violations.push_back(what);
        if (!ok && violations.size() == 20) violations.push_back("... further violations elided");
    }
};

void cmd_verify(const RunConfig& cfg) {
    Pipeline pl = build_pipeline(cfg);
    std::vector<Suite> suites;

    {
        Suite s;
        s.name = "whitney";
        for (size_t i = 0; i < pl.cover.cubes.size(); ++i) {
            const Cube& q = pl.cover.cubes[i];
            double d = uniform_dist(q, pl.cover.E);
            s.expect(q.diam() <= d && d <= 4.0 * q.diam(),
                     "cube " + std::to_string(i) + " breaks diam <= dist <= 4 diam");
            bool meets = false;
            Cube nine = dilate(q, 9.0);
            for (const Point& x : pl.cover.E) meets = meets || cube_contains(nine, x);
            s.expect(meets, "cube " + std::to_string(i) + " has empty (9Q) cap E");
        }
        suites.push_back(std::move(s));
    }

    {
        Suite s;
        s.name = "partition_of_unity";
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const Cube& win = pl.cover.window;
        for (int trial = 0; trial < 1000; ++trial) {
            Point x;
            x.dim = win.dim();
            for (int i = 0; i < win.dim(); ++i) x[i] = win.center[i] + win.half_side * u(rng);
            PouJets pj = pou_jets(pl.cover, x, 0);
            if (pj.cubes.empty()) continue;  // collar or a data point
            double sum = 0.0;
            bool supported = true;
            for (size_t k = 0; k < pj.cubes.size(); ++k) {
                sum += pj.jets[k].coeffs[0];
                supported = supported &&
                            cube_contains(dilate(pl.cover.cubes[static_cast<size_t>(pj.cubes[k])],
                                                 9.0 / 8.0),
                                          x);
            }
            s.expect(std::abs(sum - 1.0) <= 1e-9, "bump sum off by more than 1e-9");
            s.expect(supported, "bump listed outside its 9/8 dilate");
        }
        suites.push_back(std::move(s));
    }

    {
        Suite s;
        s.name = "lacunae";
        for (size_t li = 0; li < pl.lacunae.lacunae.size(); ++li) {
            const Lacuna& l = pl.lacunae.lacunae[li];
            s.expect(!l.V.empty(), "lacuna " + std::to_string(li) + " has empty V");
            s.expect(l.center >= 0, "lacuna " + std::to_string(li) + " has no center");
            if (l.center < 0) continue;
            if (l.V.size() == 1) {
                s.expect(l.center == l.V[0],
                         "singleton lacuna " + std::to_string(li) + " not centered on its point");
            }
            const Point& c = pl.cover.E[static_cast<size_t>(l.center)];
            for (int q : l.cube_ids) {
                s.expect(cube_contains(dilate(pl.cover.cubes[static_cast<size_t>(q)],
                                              pl.consts.gamma_tilde),
                                       c),
                         "center of lacuna " + std::to_string(li) + " escapes gamma_tilde * Q");
            }
        }
        // Touching cubes of different-center lacunae stay small against the
        // center separation.
        for (size_t qi = 0; qi < pl.cover.cubes.size(); ++qi) {
            int la = pl.lacunae.cube_to_lacuna[qi];
            for (int qj : touching(pl.cover, static_cast<int>(qi))) {
                if (qj <= static_cast<int>(qi)) continue;
                int lb = pl.lacunae.cube_to_lacuna[static_cast<size_t>(qj)];
                if (la == lb) continue;
                int ca = pl.lacunae.lacunae[static_cast<size_t>(la)].center;
                int cb = pl.lacunae.lacunae[static_cast<size_t>(lb)].center;
                if (ca == cb) continue;
                double sep = uniform_dist(pl.cover.E[static_cast<size_t>(ca)],
                                          pl.cover.E[static_cast<size_t>(cb)]);
                double lhs = pl.cover.cubes[qi].diam() +
                             pl.cover.cubes[static_cast<size_t>(qj)].diam();
                s.expect(lhs <= pl.consts.gamma_tilde * sep,
                         "touching cubes outgrow their center separation");
            }
        }
        suites.push_back(std::move(s));
    }

    {
        Suite s;
        s.name = "sparse_graph";
        SparseGraph g = build_graph(pl.cover, pl.lacunae, pl.consts);
        SparsityReport rep = verify_sparse(g);
        for (const std::string& v : rep.violations) s.expect(false, v);
        s.expect(graph_connected(g), "graph is disconnected");
        s.checks += 1;  // the certificate suite counts as one check when clean
        suites.push_back(std::move(s));
    }

    {
        Suite s;
        s.name = "extension";
        try {
            ExtensionPlan plan = make_plan(pl);
            for (size_t i = 0; i < pl.field.points.size(); ++i) {
                for (const MultiIndex& a : multi_indices_up_to(pl.field.dim, pl.field.m - 1)) {
                    double got = extend_eval(plan, pl.field.points[i], a);
                    double want = poly_coeff(pl.field.polys[i], a);
                    s.expect(got == want, "extension disagrees with a jet on E");
                }
            }
        } catch (const invariant_error& e) {
            s.expect(false, std::string("plan_extension: ") + e.what());
        }
        suites.push_back(std::move(s));
    }

    size_t total_violations = 0;
    JsonWriter w;
    w.begin_object();
    w.key("suites").begin_array();
    for (const Suite& s : suites) {
        total_violations += s.violations.size();
        w.begin_object();
        w.kv("name", s.name);
        w.kv("checks", s.checks);
        w.key("violations").begin_array();
        for (const std::string& v : s.violations) w.value(v);
        w.end_array();
        w.end_object();
        std::cout << s.name << ": " << (s.violations.empty() ? "PASS" : "FAIL") << " ("
                  << s.checks << " checks)\n";
    }
    w.end_array();
    w.kv("ok", total_violations == 0);
    w.end_object();
    emit(cfg, "verify.json", w.str() + "\n");

    if (total_violations > 0) {
        throw invariant_error(std::to_string(total_violations) +
                              " invariant violation(s), see verify.json");
    }
}

void cmd_gen(const RunConfig& cfg) {
    if (cfg.gen_n < 1 || cfg.gen_n > kMaxDim) throw config_error("gen: n must lie in 1..3");
    if (cfg.gen_m < 1 || cfg.gen_m > kMaxJetOrder) throw config_error("gen: m must lie in 1..4");
    if (cfg.gen_points < 1) throw config_error("gen: need at least one point");
    if (cfg.gen_points > 512) throw capacity_error("gen: caps at 512 points");
    double p = cfg.gen_p > 0.0 ? cfg.gen_p : 2.0 * cfg.gen_n;
    if (p <= cfg.gen_n) throw config_error("gen: p must exceed n");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> coeff(-1.5, 1.5);

    // Unit-box sample with separation a fixed fraction of the mean spacing,
    // so drawing never stalls at any admissible count.
    double min_sep = 0.2 * std::pow(static_cast<double>(cfg.gen_points),
                                    -1.0 / static_cast<double>(cfg.gen_n));
    std::vector<Point> E;
    int stale = 0;
    while (static_cast<int>(E.size()) < cfg.gen_points) {
        Point x;
        x.dim = cfg.gen_n;
        for (int i = 0; i < cfg.gen_n; ++i) x[i] = u01(rng);
        if (uniform_dist(x, E) >= min_sep) {
            E.push_back(x);
            stale = 0;
        } else if (++stale > 100000) {
            throw capacity_error("gen: separation target unreachable");
        }
    }

    JetField f;
    f.dim = cfg.gen_n;
    f.m = cfg.gen_m;
    f.p = p;
    f.points = E;
    for (const Point& x : E) {
        Poly poly = make_poly(x, cfg.gen_m - 1);
        for (double& c : poly.coeffs) c = coeff(rng);
        f.polys.push_back(std::move(poly));
    }
    validate_field(f);
    emit(cfg, "instance.json", write_jet_field(f) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jet extension pipeline: Whitney covers, lacunae, sparse graphs, "
                 "trace seminorms, and near-optimal extensions of polynomial jets"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("-i,--input", cfg.input, "jet field JSON file");
    app.add_option("-o,--out", cfg.out_dir, "output directory")->capture_default_str();
    app.add_option("--tau", cfg.tau, "lacuna scale constant")->capture_default_str();
    app.add_option("--gamma", cfg.gamma_tilde, "lacuna dilation constant gamma_tilde")
        ->capture_default_str();
    app.add_option("--depth-cap", cfg.depth_cap, "subdivision depth cap (0: resolve from data)")
        ->capture_default_str();
    app.add_option("--inflate", cfg.inflate, "window inflation factor")->capture_default_str();
    app.add_option("--epsilon", cfg.epsilon, "truncation scale for wmp")->capture_default_str();
    app.add_option("--order", cfg.quad_order, "quadrature order (0: max(4, m + 1))")
        ->capture_default_str();
    app.add_option("--cells", cfg.quad_cells, "quadrature cells per axis on windows")
        ->capture_default_str();
    app.add_option("--grid", cfg.grid, "output grid resolution per axis")->capture_default_str();
    app.add_option("--res", cfg.res, "density grid resolution per axis")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed driving all randomness")->capture_default_str();

    CLI::App* c_decompose = app.add_subcommand("decompose", "emit the Whitney cover");
    CLI::App* c_lacunae = app.add_subcommand("lacunae", "classify and project lacunae");
    CLI::App* c_graph = app.add_subcommand("graph", "build the sparse center graph");
    CLI::App* c_seminorm = app.add_subcommand("seminorm", "report every trace functional");
    CLI::App* c_extend = app.add_subcommand("extend", "sample the extension on a grid");
    CLI::App* c_wmp = app.add_subcommand("wmp", "truncated extension and its norm parts");
    CLI::App* c_metric = app.add_subcommand("metric", "density metric dumps");
    c_metric->add_option("--density", cfg.density, "density JSON replacing the sharp density");
    CLI::App* c_mcshane = app.add_subcommand("mcshane", "first-order extension grid");
    CLI::App* c_verify = app.add_subcommand("verify", "run the full invariant suite");
    CLI::App* c_gen = app.add_subcommand("gen", "generate a random jet instance");
    c_gen->add_option("--n", cfg.gen_n, "ambient dimension")->capture_default_str();
    c_gen->add_option("--m", cfg.gen_m, "jet order")->capture_default_str();
    c_gen->add_option("--points", cfg.gen_points, "point count")->capture_default_str();
    c_gen->add_option("--p", cfg.gen_p, "integrability exponent (0: 2n)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (c_decompose->parsed()) cmd_decompose(cfg);
        if (c_lacunae->parsed()) cmd_lacunae(cfg);
        if (c_graph->parsed()) cmd_graph(cfg);
        if (c_seminorm->parsed()) cmd_seminorm(cfg);
        if (c_extend->parsed()) cmd_extend(cfg);
        if (c_wmp->parsed()) cmd_wmp(cfg);
        if (c_metric->parsed()) cmd_metric(cfg);
        if (c_mcshane->parsed()) cmd_mcshane(cfg);
        if (c_verify->parsed()) cmd_verify(cfg);
        if (c_gen->parsed()) cmd_gen(cfg);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const invariant_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const capacity_error& e) {
        std::cerr << "capacity exceeded: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
