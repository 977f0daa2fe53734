#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "jetext/whitney.hpp"

using namespace jetext;

namespace {

std::vector<Point> random_points(std::mt19937_64& rng, int dim, int count, double span) {
    std::uniform_real_distribution<double> u(0.0, span);
    std::vector<Point> pts;
    while (static_cast<int>(pts.size()) < count) {
        Point x;
        x.dim = dim;
        for (int i = 0; i < dim; ++i) x[i] = u(rng);
        if (std::none_of(pts.begin(), pts.end(), [&](const Point& y) { return y == x; })) {
            pts.push_back(x);
        }
    }
    return pts;
}

Point random_covered_point(std::mt19937_64& rng, const WhitneyCover& cover) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Point x;
        x.dim = cover.window.dim();
        for (int i = 0; i < x.dim; ++i) {
            x[i] = cover.window.center[i] + u(rng) * cover.window.half_side;
        }
        if (locate_cube(cover, x) >= 0) return x;
    }
}

void check_whitney_bounds(const WhitneyCover& cover) {
    for (const Cube& q : cover.cubes) {
        double d = uniform_dist(q, cover.E);
        CHECK(q.diam() <= d);
        CHECK(d <= 4.0 * q.diam());
        CHECK(uniform_dist(dilate(q, 9.0), cover.E) == 0.0);  // (9Q) meets E
    }
}

bool open_overlap(const Cube& a, const Cube& b) {
    for (int i = 0; i < a.dim(); ++i) {
        double lo = std::max(a.center[i] - a.half_side, b.center[i] - b.half_side);
        double hi = std::min(a.center[i] + a.half_side, b.center[i] + b.half_side);
        if (!(lo < hi)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("decomposition of a singleton in 1d") {
    std::vector<Point> E{make_point({0.0})};
    WhitneyCover cover = whitney_decompose(E, 4.0, 12);

    CHECK(cover.window.center[0] == 0.0);
    CHECK(cover.window.half_side == 2.0);
    CHECK(!cover.cubes.empty());
    check_whitney_bounds(cover);

    // partition: cube measures plus the collar tile the window
    double total = cover.collar_measure;
    for (const Cube& q : cover.cubes) total += q.diam();
    CHECK(total == doctest::Approx(cover.window.diam()).epsilon(1e-12));

    // interval lengths track the distance to 0
    for (const Cube& q : cover.cubes) {
        CHECK(q.diam() <= std::abs(q.center[0]) + q.half_side);
    }
}

TEST_CASE("decomposition rejects bad input") {
    CHECK_THROWS_AS(whitney_decompose({}, 4.0, 5), config_error);
    CHECK_THROWS_AS(whitney_decompose({make_point({0.0})}, 2.0, 5), config_error);
    CHECK_THROWS_AS(whitney_decompose({make_point({0.0})}, 4.0, 0), config_error);
    CHECK_THROWS_AS(whitney_decompose({make_point({0.0, 0.0, 0.0})}, 4.0, 40), capacity_error);
}

TEST_CASE("adjacency equals brute-force touching and satisfies the lemmas") {
    std::mt19937_64 rng(71);
    for (int inst = 0; inst < 4; ++inst) {
        int dim = 1 + inst % 2;
        std::vector<Point> E = random_points(rng, dim, 3 + inst, 1.0);
        WhitneyCover cover = whitney_decompose(E, 4.0, 6);
        check_whitney_bounds(cover);

        size_t n = cover.cubes.size();
        for (size_t i = 0; i < n; ++i) {
            std::vector<int> brute;
            for (size_t j = 0; j < n; ++j) {
                if (cubes_intersect(cover.cubes[i], cover.cubes[j])) {
                    brute.push_back(static_cast<int>(j));
                }
            }
            CHECK(touching(cover, static_cast<int>(i)) == brute);
            for (int j : brute) {
                if (j == static_cast<int>(i)) continue;
                // no two cubes share interior points
                CHECK(!open_overlap(cover.cubes[i], cover.cubes[static_cast<size_t>(j)]));
                double ratio = cover.cubes[i].diam() / cover.cubes[static_cast<size_t>(j)].diam();
                CHECK(ratio >= 0.25);
                CHECK(ratio <= 4.0);
                // dilated supports meet exactly when the cubes touch
                CHECK(cubes_intersect(dilate(cover.cubes[i], 9.0 / 8.0),
                                      dilate(cover.cubes[static_cast<size_t>(j)], 9.0 / 8.0)));
                // symmetry
                const auto& back = touching(cover, j);
                CHECK(std::find(back.begin(), back.end(), static_cast<int>(i)) != back.end());
            }
            // dilates of non-touching cubes stay disjoint
            for (size_t j = 0; j < n; ++j) {
                if (std::find(brute.begin(), brute.end(), static_cast<int>(j)) != brute.end()) continue;
                CHECK(!cubes_intersect(dilate(cover.cubes[i], 9.0 / 8.0),
                                       dilate(cover.cubes[j], 9.0 / 8.0)));
            }
        }
    }
}

TEST_CASE("interior interval has exactly three touching cubes") {
    WhitneyCover cover = whitney_decompose({make_point({0.0})}, 4.0, 12);
    size_t interior = 0;
    for (size_t i = 0; i < cover.cubes.size(); ++i) {
        const Cube& q = cover.cubes[i];
        bool boundary = std::abs(std::abs(q.center[0]) + q.half_side - cover.window.half_side) == 0.0;
        bool near_collar = std::any_of(cover.collar.begin(), cover.collar.end(),
                                       [&](const Cube& c) { return cubes_intersect(q, c); });
        if (boundary || near_collar) continue;
        ++interior;
        CHECK(cover.adjacency[i].size() == 3);
    }
    CHECK(interior > 10);
}

TEST_CASE("touching-set size stays bounded over random 2d instances") {
    std::mt19937_64 rng(1234);
    size_t max_touch = 0;
    for (int inst = 0; inst < 100; ++inst) {
        std::vector<Point> E = random_points(rng, 2, 2 + inst % 5, 1.0);
        WhitneyCover cover = whitney_decompose(E, 4.0, 6);
        for (const auto& adj : cover.adjacency) max_touch = std::max(max_touch, adj.size());
    }
    CHECK(max_touch <= 12);
    MESSAGE("max |T(K)| over 100 2d instances: ", max_touch);
}

TEST_CASE("profile is a smooth cutoff") {
    CHECK(profile_value(0.0) == 1.0);
    CHECK(profile_value(1.0) == 1.0);
    CHECK(profile_value(-0.999) == 1.0);
    CHECK(profile_value(9.0 / 8.0) == 0.0);
    CHECK(profile_value(-2.0) == 0.0);
    double mid = profile_value(1.0625);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    CHECK(profile_value(1.0625) == profile_value(-1.0625));

    // jets match central differences inside the transition
    for (double t : {1.02, 1.05, 1.09, -1.03, -1.11}) {
        TaylorU j = profile_jet(t, 4);
        double h = 1e-5;
        double fd1 = (profile_value(t + h) - profile_value(t - h)) / (2.0 * h);
        double fd2 = (profile_value(t + h) - 2.0 * profile_value(t) + profile_value(t - h)) / (h * h);
        CHECK(taylor_deriv(j, 0) == profile_value(t));
        CHECK(taylor_deriv(j, 1) == doctest::Approx(fd1).epsilon(1e-5));
        CHECK(taylor_deriv(j, 2) == doctest::Approx(fd2).epsilon(1e-3));
    }

    // flat contact at both edges of the transition
    for (double t : {1.0, 9.0 / 8.0}) {
        TaylorU j = profile_jet(t, 6);
        for (int k = 1; k < 6; ++k) CHECK(taylor_deriv(j, k) == 0.0);
    }
}

TEST_CASE("support lookup agrees with scanning every cube") {
    std::mt19937_64 rng(99);
    std::vector<Point> E = random_points(rng, 2, 5, 1.0);
    WhitneyCover cover = whitney_decompose(E, 4.0, 7);
    for (int trial = 0; trial < 200; ++trial) {
        Point x = random_covered_point(rng, cover);
        std::vector<int> brute;
        for (size_t j = 0; j < cover.cubes.size(); ++j) {
            if (cube_contains(dilate(cover.cubes[j], 9.0 / 8.0), x)) {
                brute.push_back(static_cast<int>(j));
            }
        }
        std::vector<int> fast = support_cubes(cover, x);
        std::sort(fast.begin(), fast.end());
        CHECK(fast == brute);
    }
}

TEST_CASE("partition of unity sums to one with vanishing derivative sums") {
    std::mt19937_64 rng(5);
    std::vector<Point> E = random_points(rng, 2, 4, 1.0);
    WhitneyCover cover = whitney_decompose(E, 4.0, 7);
    const auto& alphas = multi_indices_up_to(2, 3);
    for (int trial = 0; trial < 1000; ++trial) {
        Point x = random_covered_point(rng, cover);
        std::vector<int> sup = support_cubes(cover, x);
        double diam0 = cover.cubes[static_cast<size_t>(locate_cube(cover, x))].diam();
        for (const MultiIndex& a : alphas) {
            double sum = 0.0;
            for (int q : sup) sum += pou_eval(cover, q, a, x);
            if (a.order() == 0) {
                CHECK(std::abs(sum - 1.0) <= 1e-9);
            } else {
                CHECK(std::abs(sum) <= 1e-6 * std::pow(diam0, -a.order()));
            }
        }
    }
}

TEST_CASE("bumps vanish off their support and stay within [0,1]") {
    std::mt19937_64 rng(17);
    std::vector<Point> E = random_points(rng, 2, 3, 1.0);
    WhitneyCover cover = whitney_decompose(E, 4.0, 6);
    MultiIndex zero = make_multi_index({0, 0});
    for (int trial = 0; trial < 300; ++trial) {
        Point x = random_covered_point(rng, cover);
        std::uniform_int_distribution<size_t> pick(0, cover.cubes.size() - 1);
        size_t q = pick(rng);
        double v = pou_eval(cover, static_cast<int>(q), zero, x);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        if (!cube_contains(dilate(cover.cubes[q], 9.0 / 8.0), x)) CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(pou_eval(cover, 0, zero, cover.E[0]), config_error);
}

TEST_CASE("derivative bound constant is invariant under rescaling") {
    std::mt19937_64 rng(31);
    std::vector<Point> E = random_points(rng, 2, 4, 1.0);
    std::vector<Point> E4 = E;
    for (Point& x : E4) {
        for (int i = 0; i < x.dim; ++i) x[i] *= 4.0;
    }
    WhitneyCover a = whitney_decompose(E, 4.0, 6);
    WhitneyCover b = whitney_decompose(E4, 4.0, 6);
    REQUIRE(a.cubes.size() == b.cubes.size());

    const auto& alphas = multi_indices_up_to(2, 3);
    std::vector<double> ca(alphas.size(), 0.0), cb(alphas.size(), 0.0);
    std::uniform_real_distribution<double> u(-9.0 / 8.0, 9.0 / 8.0);
    std::uniform_int_distribution<size_t> pick(0, a.cubes.size() - 1);
    for (int trial = 0; trial < 400; ++trial) {
        size_t q = pick(rng);
        double fx = u(rng), fy = u(rng);
        Point xa, xb;
        xa.dim = xb.dim = 2;
        for (int i = 0; i < 2; ++i) {
            double f = i == 0 ? fx : fy;
            xa[i] = a.cubes[q].center[i] + f * a.cubes[q].half_side;
            xb[i] = b.cubes[q].center[i] + f * b.cubes[q].half_side;
        }
        if (locate_cube(a, xa) < 0 || locate_cube(b, xb) < 0) continue;
        for (size_t k = 0; k < alphas.size(); ++k) {
            double scale_a = std::pow(a.cubes[q].diam(), alphas[k].order());
            double scale_b = std::pow(b.cubes[q].diam(), alphas[k].order());
            ca[k] = std::max(ca[k], std::abs(pou_eval(a, static_cast<int>(q), alphas[k], xa)) * scale_a);
            cb[k] = std::max(cb[k], std::abs(pou_eval(b, static_cast<int>(q), alphas[k], xb)) * scale_b);
        }
    }
    for (size_t k = 0; k < alphas.size(); ++k) {
        if (ca[k] == 0.0) {
            CHECK(cb[k] == 0.0);
        } else {
            CHECK(std::abs(ca[k] - cb[k]) <= 1e-6 * ca[k]);
        }
    }
    MESSAGE("measured |D^b phi| * diam^|b| constants up to order 3: max ",
            *std::max_element(ca.begin(), ca.end()));
}

TEST_CASE("cover export is valid json with one entry per cube") {
    WhitneyCover cover = whitney_decompose({make_point({0.0}), make_point({1.0})}, 4.0, 6);
    std::ostringstream os;
    write_cover(cover, os);
    std::string s = os.str();
    CHECK(s.find("\"cube_count\"") != std::string::npos);
    size_t entries = 0, pos = 0;
    while ((pos = s.find("\"half_side\"", pos)) != std::string::npos) {
        ++entries;
        pos += 1;
    }
    CHECK(entries == cover.cubes.size() + 1);  // one per cube plus the window
}
