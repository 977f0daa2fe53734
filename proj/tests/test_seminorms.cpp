#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "jetext/extension.hpp"
#include "jetext/seminorms.hpp"
#include "jetext/sparse_graph.hpp"

using namespace jetext;

namespace {

std::vector<Point> random_points(std::mt19937_64& rng, int dim, int count, double span) {
    std::uniform_real_distribution<double> u(0.0, span);
    std::vector<Point> pts;
    while (static_cast<int>(pts.size()) < count) {
        Point x;
        x.dim = dim;
        for (int i = 0; i < dim; ++i) x[i] = u(rng);
        bool ok = std::all_of(pts.begin(), pts.end(), [&](const Point& y) {
            return uniform_dist(x, y) > 0.05 * span;
        });
        if (ok) pts.push_back(x);
    }
    return pts;
}

JetField random_field(std::mt19937_64& rng, const std::vector<Point>& E, int m, double p) {
    JetField f;
    f.points = E;
    f.m = m;
    f.p = p;
    f.dim = E[0].dim;
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (const Point& x : E) {
        Poly poly = make_poly(x, m - 1);
        for (double& c : poly.coeffs) c = u(rng);
        f.polys.push_back(poly);
    }
    return f;
}

JetField constant_field(const std::vector<Point>& E, const std::vector<double>& f, double p) {
    JetField out;
    out.points = E;
    out.m = 1;
    out.p = p;
    out.dim = E[0].dim;
    for (size_t i = 0; i < E.size(); ++i) {
        Poly c = make_poly(E[i], 0);
        c.coeffs[0] = f[i];
        out.polys.push_back(c);
    }
    return out;
}

ExtensionPlan build_plan(const std::vector<Point>& E, const JetField& field, int extra_depth = 0) {
    int depth = resolving_depth(E, 4.0) + extra_depth;
    WhitneyCover cover = whitney_decompose(E, 4.0, depth);
    LacunaSet set = classify_lacunae(cover);
    DyadicNets nets = build_dyadic_nets(E);
    LacunaConstants consts;
    project_lacunae(set, cover, nets, consts);
    return plan_extension(field, cover, set, consts);
}

std::vector<Point> line_points(std::initializer_list<double> xs) {
    std::vector<Point> pts;
    for (double v : xs) pts.push_back(make_point({v}));
    return pts;
}

Cube window_for(const std::vector<Point>& E, double factor) {
    Point lo = E[0];
    Point hi = E[0];
    for (const Point& q : E) {
        for (int k = 0; k < q.dim; ++k) {
            lo[k] = std::min(lo[k], q[k]);
            hi[k] = std::max(hi[k], q[k]);
        }
    }
    Cube w;
    w.center.dim = E[0].dim;
    double spread = 0.0;
    for (int k = 0; k < w.center.dim; ++k) {
        w.center[k] = 0.5 * (lo[k] + hi[k]);
        spread = std::max(spread, 0.5 * (hi[k] - lo[k]));
    }
    w.half_side = std::max(factor * spread, 1e-3);
    return w;
}

}  // namespace

TEST_CASE("gauss rules hit polynomials and stay symmetric") {
    for (int g = 1; g <= 10; ++g) {
        const GaussRule& rule = gauss_legendre(g);
        REQUIRE(rule.nodes.size() == static_cast<size_t>(g));
        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        for (int i = 0; i < g; ++i) {
            CHECK(rule.nodes[static_cast<size_t>(i)] ==
                  -rule.nodes[static_cast<size_t>(g - 1 - i)]);  // mirrored construction is bitwise
            if (i > 0) CHECK(rule.nodes[static_cast<size_t>(i)] > rule.nodes[static_cast<size_t>(i - 1)]);
        }
        // exactness through degree 2g-1: int x^k over [-1,1]
        for (int k = 0; k <= 2 * g - 1; ++k) {
            double acc = 0.0;
            for (int i = 0; i < g; ++i) {
                acc += rule.weights[static_cast<size_t>(i)] *
                       std::pow(rule.nodes[static_cast<size_t>(i)], k);
            }
            double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
            CHECK(std::abs(acc - exact) < 1e-13);
        }
    }
    CHECK_THROWS_AS(gauss_legendre(0), config_error);
    CHECK_THROWS_AS(gauss_legendre(33), config_error);
}

TEST_CASE("pair families reproduce the frozen trace values") {
    // single pair, m=1: |1-0|^2 / 1^(2-1) = 1
    JetField two = constant_field(line_points({0.0, 1.0}), {0.0, 1.0}, 2.0);
    CHECK(trace_norm_bruteforce(two, 2.0, 3.0) == doctest::Approx(1.0).epsilon(1e-15));

    // single pair, m=2, p=3: better ordering evaluates at 0 and yields 2^(1/3)
    JetField jets;
    jets.points = line_points({0.0, 1.0});
    jets.m = 2;
    jets.p = 3.0;
    jets.dim = 1;
    jets.polys.push_back(make_poly(jets.points[0], 1));
    Poly p1 = make_poly(jets.points[1], 1);
    p1.coeffs[1] = 1.0;  // P_1(x) = x - 1
    jets.polys.push_back(p1);
    CHECK(trace_norm_bruteforce(jets, 3.0, 3.0) ==
          doctest::Approx(1.2599210498948732).epsilon(1e-14));

    // global polynomial: every jet difference vanishes identically
    std::mt19937_64 rng(2024);
    std::vector<Point> pts = random_points(rng, 2, 5, 3.0);
    Poly g = make_poly(make_point({0.0, 0.0}), 1);
    g.coeffs = {0.7, -1.2, 0.4};
    JetField flat = field_from_polynomial(g, pts, 2, 3.5);
    // rebasing the same polynomial leaves coefficient roundoff behind
    CHECK(trace_norm_bruteforce(flat, 3.5, 3.0) < 1e-12);

    JetField nine = constant_field(line_points({0, 1, 2, 3, 4, 5, 6, 7, 8}),
                                   {0, 0, 0, 0, 0, 0, 0, 0, 0}, 2.0);
    CHECK_THROWS_AS(trace_norm_bruteforce(nine, 2.0, 3.0), config_error);
    CHECK_THROWS_AS(trace_norm_bruteforce(two, 0.5, 3.0), config_error);
    CHECK_THROWS_AS(trace_norm_bruteforce(two, 2.0, 0.5), config_error);
}

TEST_CASE("certificates prune the three-point family as derived") {
    JetField f = constant_field(line_points({0.0, 1.0, 3.0}), {0.0, 1.0, 0.0}, 2.0);
    // gamma=3: best certified family is {(0,1),(1,3)} with sum 3/2; the
    // all-pairs family fails because the floor cubes of (1,3) and (0,3)
    // overlap around their midpoints 2 and 3/2
    CHECK(trace_norm_bruteforce(f, 2.0, 3.0) == doctest::Approx(1.224744871391589).epsilon(1e-14));
    // gamma=1 certificates span the pairs themselves; every two pairs here
    // collide, so only singletons survive and the best is the (0,1) term
    CHECK(trace_norm_bruteforce(f, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

    std::mt19937_64 rng(77);
    for (int inst = 0; inst < 12; ++inst) {
        int dim = 1 + inst % 2;
        std::vector<Point> pts = random_points(rng, dim, 5, 2.0);
        JetField field = random_field(rng, pts, 1 + inst % 3, static_cast<double>(dim) + 1.5);
        double v1 = trace_norm_bruteforce(field, field.p, 1.0);
        double v2 = trace_norm_bruteforce(field, field.p, 3.0);
        double v3 = trace_norm_bruteforce(field, field.p, 12.0);
        CHECK(v1 <= v2 * (1.0 + 1e-12));
        CHECK(v2 <= v3 * (1.0 + 1e-12));
    }
}

TEST_CASE("sharp maximal function matches the hand formula") {
    JetField two = constant_field(line_points({0.0, 1.0}), {0.0, 1.0}, 2.0);
    CHECK(sharp_max_eval(two, make_point({3.0})) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(sharp_max_eval(two, make_point({0.5})) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sharp_max_eval(two, make_point({-1.0})) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    JetField lone = constant_field(line_points({0.25}), {4.0}, 2.0);
    CHECK(sharp_max_eval(lone, make_point({2.0})) == 0.0);
    CHECK_THROWS_AS(sharp_max_eval(two, make_point({0.0, 0.0})), config_error);

    // global polynomial: identical polynomials cancel at every x
    std::mt19937_64 rng(31);
    std::vector<Point> pts = random_points(rng, 1, 4, 2.0);
    Poly g = make_poly(make_point({0.0}), 2);
    g.coeffs = {1.0, -0.3, 0.8};
    JetField flat = field_from_polynomial(g, pts, 3, 2.5);
    for (double xv : {-1.0, 0.3, 1.7, 5.0}) {
        CHECK(sharp_max_eval(flat, make_point({xv})) < 1e-12);
    }

    // independent enumeration over ordered pairs on a 2d jet field
    std::vector<Point> pts2 = random_points(rng, 2, 5, 2.0);
    JetField field2 = random_field(rng, pts2, 2, 3.0);
    MultiIndex zero = make_multi_index({0, 0});
    for (int t = 0; t < 10; ++t) {
        Point x = make_point({5.0 * (t % 4) / 3.0 - 1.0, 5.0 * (t % 3) / 2.0 - 1.0});
        double brute = 0.0;
        for (size_t a = 0; a < pts2.size(); ++a) {
            for (size_t b = 0; b < pts2.size(); ++b) {
                if (a == b) continue;
                double num = std::abs(poly_eval_deriv(field2.polys[a], zero, x) -
                                      poly_eval_deriv(field2.polys[b], zero, x));
                double den = std::pow(uniform_dist(x, pts2[a]), 2) +
                             std::pow(uniform_dist(x, pts2[b]), 2);
                brute = std::max(brute, num / den);
            }
        }
        CHECK(sharp_max_eval(field2, x) == doctest::Approx(brute).epsilon(1e-15));
    }
}

TEST_CASE("sharp L_p quadrature brackets the frozen norm") {
    JetField two = constant_field(line_points({0.0, 1.0}), {0.0, 1.0}, 2.0);
    QuadratureSpec quad;
    quad.order = 6;
    quad.cells_per_axis = 68;  // cell width 1/4 puts the kinks at 0 and 1 on cell faces
    quad.window.center = make_point({0.5});
    quad.window.half_side = 8.5;
    WindowedLp lp = sharp_max_lp(two, quad);
    CHECK(lp.value == doctest::Approx(1.3932610920384718).epsilon(1e-7));
    // true whole-line square integral is 2; the window holds 33/17 of it and
    // the tail envelope 2/8.5 dominates the missing 1/17
    double whole = lp.value * lp.value + lp.tail_bound * lp.tail_bound;
    CHECK(lp.value * lp.value <= 2.0);
    CHECK(whole >= 2.0);
    CHECK(lp.tail_bound == doctest::Approx(std::sqrt(2.0 / 8.5)).epsilon(1e-12));

    JetField lone = constant_field(line_points({0.25}), {4.0}, 2.0);
    WindowedLp empty = sharp_max_lp(lone, quad);
    CHECK(empty.value == 0.0);
    CHECK(empty.tail_bound == 0.0);

    QuadratureSpec bad = quad;
    bad.window.half_side = 0.8;  // holds E but not twice the spread
    CHECK_THROWS_AS(sharp_max_lp(two, bad), config_error);
    bad.window.center = make_point({30.0});
    bad.window.half_side = 2.0;
    CHECK_THROWS_AS(sharp_max_lp(two, bad), config_error);
    bad = quad;
    bad.order = 1;
    CHECK_THROWS_AS(sharp_max_lp(two, bad), config_error);
    bad = quad;
    bad.cells_per_axis = 0;
    CHECK_THROWS_AS(sharp_max_lp(two, bad), config_error);
}

TEST_CASE("phi and psi reproduce the frozen two-point integrals") {
    std::vector<Point> E = line_points({0.0, 1.0});
    std::vector<double> f = {0.0, 1.0};
    QuadratureSpec quad;
    quad.order = 6;
    quad.cells_per_axis = 68;
    quad.window.center = make_point({0.5});
    quad.window.half_side = 8.5;
    PhiPsi pp = phi_psi_m1(E, f, 2.0, quad);
    CHECK(pp.phi == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pp.phi_exhaustive);
    CHECK(pp.psi * pp.psi == doctest::Approx(3.024081008158348).epsilon(1e-9));
    // pi is the whole-line value; the bracket must straddle it
    CHECK(pp.psi * pp.psi <= 3.14159265358979324);
    CHECK(pp.psi * pp.psi + pp.psi_tail * pp.psi_tail >= 3.14159265358979324);

    PhiPsi flat = phi_psi_m1(E, {0.7, 0.7}, 2.0, quad);
    CHECK(flat.phi == 0.0);
    CHECK(flat.psi == 0.0);
    CHECK(flat.psi_tail == 0.0);

    CHECK_THROWS_AS(phi_psi_m1(E, {1.0}, 2.0, quad), config_error);
    CHECK_THROWS_AS(phi_psi_m1(E, f, 1.0, quad), config_error);
    CHECK_THROWS_AS(phi_psi_m1({}, {}, 2.0, quad), config_error);
}

TEST_CASE("phi equals the constant-field brute force verbatim") {
    std::mt19937_64 rng(4096);
    QuadratureSpec quad;
    quad.order = 4;
    quad.cells_per_axis = 12;
    for (int inst = 0; inst < 10; ++inst) {
        int dim = 1 + inst % 2;
        int count = 3 + inst % 4;  // up to 6 points
        std::vector<Point> E = random_points(rng, dim, count, 2.0);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        std::vector<double> f;
        for (int i = 0; i < count; ++i) f.push_back(u(rng));
        double p = dim + 1.0 + 0.5 * (inst % 3);
        quad.window = window_for(E, 4.0);
        PhiPsi pp = phi_psi_m1(E, f, p, quad);
        JetField field = constant_field(E, f, p);
        CHECK(pp.phi == trace_norm_bruteforce(field, p, kDefaultPairGamma));
        CHECK(pp.phi_exhaustive);
    }
}

TEST_CASE("phi and psi track each other within a stable window") {
    std::mt19937_64 rng(515);
    double lo = kInf;
    double hi = 0.0;
    for (int inst = 0; inst < 16; ++inst) {
        int dim = 1 + inst % 2;
        int count = 3 + inst % 3;
        std::vector<Point> E = random_points(rng, dim, count, 2.0);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        std::vector<double> f;
        for (int i = 0; i < count; ++i) f.push_back(u(rng));
        double p = dim + 1.5;
        QuadratureSpec quad;
        quad.order = 5;
        quad.cells_per_axis = dim == 1 ? 48 : 12;
        quad.window = window_for(E, 6.0);
        PhiPsi pp = phi_psi_m1(E, f, p, quad);
        REQUIRE(pp.phi > 0.0);
        REQUIRE(pp.psi > 0.0);
        double r = pp.phi / pp.psi;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    MESSAGE("phi/psi ratio window: [", lo, ", ", hi, "]");
    CHECK(lo > 0.02);
    CHECK(hi < 50.0);
    CHECK(hi / lo < 100.0);  // the equivalence constants depend only on n and p
}

TEST_CASE("sobolev seminorm of a reproduced polynomial sits at the noise floor") {
    std::mt19937_64 rng(99);
    for (int dim = 1; dim <= 2; ++dim) {
        int m = dim == 1 ? 3 : 2;
        std::vector<Point> E = random_points(rng, dim, 4, 2.0);
        Poly g = make_poly(make_point(dim == 1 ? std::initializer_list<double>{0.0}
                                               : std::initializer_list<double>{0.0, 0.0}),
                           m - 1);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (double& c : g.coeffs) c = u(rng);
        JetField field = field_from_polynomial(g, E, m, dim + 1.5);
        ExtensionPlan plan = build_plan(E, field);
        QuadratureSpec quad;
        quad.order = m + 1;
        quad.window = plan.cover.window;
        SobolevResult res = sobolev_seminorm(plan, field.p, quad);
        // D^alpha F vanishes identically for |alpha| = m; what remains is
        // bump-derivative roundoff
        CHECK(res.value < 1e-6);
        CHECK(res.collar.measure == plan.cover.collar_measure);
        CHECK(res.collar.bound < 1e-6);
    }
}

TEST_CASE("sobolev seminorm is stable under depth and window growth") {
    std::mt19937_64 rng(123);
    std::vector<Point> E = random_points(rng, 1, 4, 2.0);
    JetField field = random_field(rng, E, 2, 2.5);
    ExtensionPlan base = build_plan(E, field);
    ExtensionPlan deeper = build_plan(E, field, 1);
    QuadratureSpec quad;
    quad.order = 4;
    quad.window = base.cover.window;
    SobolevResult a = sobolev_seminorm(base, field.p, quad);
    REQUIRE(a.value > 0.0);
    SobolevResult b = sobolev_seminorm(deeper, field.p, quad);
    CHECK(b.value == doctest::Approx(a.value).epsilon(0.05));

    // a larger quad window adds exactly zero: outside the cover window the
    // extension is one polynomial of degree m-1
    QuadratureSpec wide = quad;
    wide.window = dilate(quad.window, 2.0);
    SobolevResult c = sobolev_seminorm(base, field.p, wide);
    CHECK(c.value == a.value);

    QuadratureSpec bad = quad;
    bad.window.half_side = 0.5 * base.cover.window.half_side;
    CHECK_THROWS_AS(sobolev_seminorm(base, field.p, bad), config_error);
    bad = quad;
    bad.order = 1;
    CHECK_THROWS_AS(sobolev_seminorm(base, field.p, bad), config_error);
    CHECK_THROWS_AS(sobolev_seminorm(base, 0.9, quad), config_error);
}

TEST_CASE("seminorm chain: graph below brute force below the extension") {
    std::mt19937_64 rng(808);
    double worst_chain = 0.0;
    for (int inst = 0; inst < 6; ++inst) {
        std::vector<Point> E = random_points(rng, 1, 5, 2.0);
        int m = 1 + inst % 2;
        JetField field = random_field(rng, E, m, 2.5);
        int depth = resolving_depth(E, 4.0);
        WhitneyCover cover = whitney_decompose(E, 4.0, depth);
        LacunaSet set = classify_lacunae(cover);
        DyadicNets nets = build_dyadic_nets(E);
        LacunaConstants consts;
        project_lacunae(set, cover, nets, consts);
        SparseGraph graph = build_graph(cover, set, consts);
        ExtensionPlan plan = plan_extension(field, cover, set, consts);
        // the chain needs the edge family admissible at the brute-force gamma
        REQUIRE(graph.gamma == kDefaultPairGamma);

        double gn = graph_seminorm(field, graph, field.p);
        double bf = trace_norm_bruteforce(field, field.p, kDefaultPairGamma);
        QuadratureSpec quad;
        quad.order = m + 2;
        quad.window = cover.window;
        double sob = sobolev_seminorm(plan, field.p, quad).value;
        REQUIRE(bf > 0.0);
        REQUIRE(sob > 0.0);
        CHECK(gn <= bf * (1.0 + 1e-12));
        worst_chain = std::max(worst_chain, bf / sob);
    }
    MESSAGE("largest brute-force / sobolev ratio: ", worst_chain);
    CHECK(worst_chain < 100.0);
}

TEST_CASE("oscillation sums match the linear hand count") {
    double slope = 1.7;
    auto G = [&](const Point& x) { return slope * x[0]; };
    std::vector<Cube> cubes;
    std::vector<Point> marks;
    double len = 0.3;
    for (int i = 0; i < 4; ++i) {
        Cube q;
        q.center = make_point({1.0 * i});
        q.half_side = len / 2.0;
        cubes.push_back(q);
        marks.push_back(make_point({1.0 * i + len / 2.0}));
    }
    double expect = 4.0 * slope * slope * len / 4.0;
    CHECK(oscillation_sum(G, cubes, marks, 2.0) == doctest::Approx(expect).epsilon(1e-12));

    auto C = [](const Point&) { return 3.25; };
    CHECK(oscillation_sum(C, cubes, marks, 2.0) == 0.0);
    std::vector<Point> centers;
    for (const Cube& q : cubes) centers.push_back(q.center);
    CHECK(oscillation_sum(G, cubes, centers, 2.0) == 0.0);

    std::vector<Cube> uneven = cubes;
    uneven[1].half_side *= 2.0;
    CHECK_THROWS_AS(oscillation_sum(G, uneven, marks, 2.0), config_error);
    std::vector<Cube> overlap = cubes;
    overlap[1].center = make_point({0.1});
    CHECK_THROWS_AS(oscillation_sum(G, overlap, marks, 2.0), config_error);
    std::vector<Point> outside = marks;
    outside[2] = make_point({9.0});
    CHECK_THROWS_AS(oscillation_sum(G, cubes, outside, 2.0), config_error);
    CHECK_THROWS_AS(oscillation_sum(G, cubes, centers, -1.0), config_error);
    CHECK_THROWS_AS(oscillation_sum(G, {}, {}, 2.0), config_error);
}

TEST_CASE("oscillation of extension derivatives stays bounded over random families") {
    std::mt19937_64 rng(2718);
    std::vector<Point> E = line_points({0.1, 0.9, 1.7});
    JetField field = random_field(rng, E, 2, 2.5);
    ExtensionPlan plan = build_plan(E, field);
    MultiIndex beta = make_multi_index({1});  // |beta| = m-1
    auto G = [&](const Point& x) { return extend_eval(plan, x, beta); };
    std::uniform_real_distribution<double> u(0.05, 0.12);
    double biggest = 0.0;
    for (int fam = 0; fam < 40; ++fam) {
        double len = u(rng);
        std::vector<Cube> cubes;
        std::vector<Point> marks;
        std::uniform_real_distribution<double> off(-0.5, 0.5);
        for (int i = 0; i < 5; ++i) {
            Cube q;
            // spaced along a line between the data points, clear of the collar
            q.center = make_point({0.25 + 0.3 * i + 0.02 * off(rng)});
            q.half_side = len / 2.0;
            if (!support_cubes(plan.cover, q.center).empty()) {
                cubes.push_back(q);
                marks.push_back(make_point({q.center[0] + off(rng) * len}));
            }
        }
        if (cubes.size() < 2) continue;
        bool usable = std::all_of(cubes.begin(), cubes.end(), [&](const Cube& q) {
            Point lo = make_point({q.center[0] - q.half_side});
            Point hi = make_point({q.center[0] + q.half_side});
            return !support_cubes(plan.cover, lo).empty() && !support_cubes(plan.cover, hi).empty();
        });
        if (!usable) continue;
        biggest = std::max(biggest, oscillation_sum(G, cubes, marks, field.p));
    }
    MESSAGE("largest oscillation sum: ", biggest);
    CHECK(biggest > 0.0);
    // empirical cap: first derivatives jump hard where touching cubes carry
    // centers a gamma_tilde-dilate apart, so the honest scale is large
    CHECK(biggest < 1e7);
}

TEST_CASE("wmp parts: trivial cases and the eps saturation") {
    std::vector<Point> E = line_points({0.0, 1.0});
    JetField zero = constant_field(E, {0.0, 0.0}, 2.0);
    ExtensionPlan plan = build_plan(E, zero);
    WmpParts parts = wmp_norm_parts(plan, 0.25, 2.0);
    CHECK(parts.data_norm == 0.0);
    CHECK(parts.pair_part == 0.0);
    CHECK(parts.lacuna_part == 0.0);
    CHECK(parts.total == 0.0);
    CHECK(parts.pair_part_exhaustive);

    JetField live = constant_field(E, {0.75, -0.5}, 2.0);
    ExtensionPlan lplan = build_plan(E, live);
    // eps beyond the window diameter: the pair cap is inactive
    double eps_big = lplan.cover.window.diam() * 2.0;
    WmpParts big = wmp_norm_parts(lplan, eps_big, 2.0);
    CHECK(big.pair_part == trace_norm_bruteforce(live, 2.0, kDefaultPairGamma));
    // eps below the pair distance: the pair part dies, the rest survives
    WmpParts small = wmp_norm_parts(lplan, 0.25, 2.0);
    CHECK(small.pair_part == 0.0);
    // separation is 1, so each cell weight is min(0.25, 0.5) = 0.25
    double expect_data = std::sqrt(0.25 * (0.75 * 0.75 + 0.5 * 0.5));
    CHECK(small.data_norm == doctest::Approx(expect_data).epsilon(1e-14));
    CHECK(small.total == doctest::Approx(small.data_norm + small.lacuna_part).epsilon(1e-15));

    // lacuna part recomputed directly from the formula
    double acc = 0.0;
    for (const Lacuna& l : lplan.lacunae.lacunae) {
        double dl = std::min(0.25, lacuna_diam(l, lplan.cover));
        double v = std::abs(poly_coeff(lplan.field.polys[static_cast<size_t>(l.center)],
                                       make_multi_index({0})));
        acc += std::pow(dl, 1.0) * std::pow(v, 2.0);
    }
    CHECK(small.lacuna_part == doctest::Approx(std::sqrt(acc)).epsilon(1e-14));

    CHECK_THROWS_AS(wmp_norm_parts(lplan, 0.0, 2.0), config_error);
    CHECK_THROWS_AS(wmp_norm_parts(lplan, 0.25, 0.5), config_error);
    CHECK_THROWS_AS(wmp_norm_parts(lplan, 0.25, 2.0, 0.1), config_error);
}

TEST_CASE("wmp parts grow with eps and scale with the field") {
    std::mt19937_64 rng(1337);
    std::vector<Point> E = random_points(rng, 1, 5, 2.0);
    JetField field = random_field(rng, E, 2, 2.5);
    ExtensionPlan plan = build_plan(E, field);
    WmpParts w1 = wmp_norm_parts(plan, 0.05, 2.5);
    WmpParts w2 = wmp_norm_parts(plan, 0.4, 2.5);
    WmpParts w3 = wmp_norm_parts(plan, 3.0, 2.5);
    CHECK(w1.data_norm <= w2.data_norm * (1.0 + 1e-12));
    CHECK(w2.data_norm <= w3.data_norm * (1.0 + 1e-12));
    CHECK(w1.pair_part <= w2.pair_part * (1.0 + 1e-12));
    CHECK(w2.pair_part <= w3.pair_part * (1.0 + 1e-12));
    CHECK(w1.lacuna_part <= w2.lacuna_part * (1.0 + 1e-12));
    CHECK(w2.lacuna_part <= w3.lacuna_part * (1.0 + 1e-12));

    double c = 2.5;
    JetField scaled = field_scaled(field, c);
    ExtensionPlan splan = build_plan(E, scaled);
    WmpParts ws = wmp_norm_parts(splan, 0.4, 2.5);
    CHECK(ws.data_norm == doctest::Approx(c * w2.data_norm).epsilon(1e-12));
    CHECK(ws.pair_part == doctest::Approx(c * w2.pair_part).epsilon(1e-12));
    CHECK(ws.lacuna_part == doctest::Approx(c * w2.lacuna_part).epsilon(1e-12));
    CHECK(ws.total == doctest::Approx(c * w2.total).epsilon(1e-12));
}

TEST_CASE("every functional is positively homogeneous") {
    std::mt19937_64 rng(5150);
    std::vector<Point> E = random_points(rng, 1, 4, 2.0);
    JetField field = random_field(rng, E, 2, 2.5);
    double c = 0.37;
    JetField scaled = field_scaled(field, c);

    CHECK(trace_norm_bruteforce(scaled, 2.5, 3.0) ==
          doctest::Approx(c * trace_norm_bruteforce(field, 2.5, 3.0)).epsilon(1e-12));

    Point probe = make_point({1.234});
    CHECK(sharp_max_eval(scaled, probe) ==
          doctest::Approx(c * sharp_max_eval(field, probe)).epsilon(1e-12));

    QuadratureSpec quad;
    quad.order = 4;
    quad.cells_per_axis = 24;
    quad.window = window_for(E, 6.0);
    WindowedLp a = sharp_max_lp(field, quad);
    WindowedLp b = sharp_max_lp(scaled, quad);
    CHECK(b.value == doctest::Approx(c * a.value).epsilon(1e-12));
    CHECK(b.tail_bound == doctest::Approx(c * a.tail_bound).epsilon(1e-12));

    ExtensionPlan plan = build_plan(E, field);
    ExtensionPlan splan = build_plan(E, field_scaled(field, c));
    QuadratureSpec sq;
    sq.order = 4;
    sq.window = plan.cover.window;
    SobolevResult sa = sobolev_seminorm(plan, field.p, sq);
    SobolevResult sb = sobolev_seminorm(splan, field.p, sq);
    CHECK(sb.value == doctest::Approx(c * sa.value).epsilon(1e-12));
}
