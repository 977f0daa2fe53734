#pragma once

#include <array>
#include <limits>
#include <vector>

#include "jetext/errors.hpp"

namespace jetext {

inline constexpr int kMaxDim = 3;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Point of R^n, n in {1,2,3}. Unused coordinates stay zero.
struct Point {
    std::array<double, kMaxDim> c{0.0, 0.0, 0.0};
    int dim = 0;

    double operator[](int i) const { return c[static_cast<size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
    bool operator==(const Point& o) const { return dim == o.dim && c == o.c; }
};

Point make_point(std::initializer_list<double> coords);

// Strict lexicographic order on coordinates; the tie-break used everywhere.
bool lex_less(const Point& a, const Point& b);

// Axis-aligned cube Q(center, half_side) in the uniform norm; diam = 2*half_side.
struct Cube {
    Point center;
    double half_side = 0.0;

    double diam() const { return 2.0 * half_side; }
    int dim() const { return center.dim; }
};

// Same center, half_side scaled by lambda > 0.
Cube dilate(const Cube& q, double lambda);

// Closed-cube membership/intersection; boundaries count.
bool cube_contains(const Cube& q, const Point& x);
bool cubes_intersect(const Cube& a, const Cube& b);

double uniform_norm(const Point& a);
double uniform_dist(const Point& a, const Point& b);
double uniform_dist(const Point& x, const Cube& q);
double uniform_dist(const Cube& a, const Cube& b);
// Set overloads return +inf for an empty set.
double uniform_dist(const Point& x, const std::vector<Point>& set);
double uniform_dist(const Cube& q, const std::vector<Point>& set);

// Max pairwise uniform distance; 0 for a singleton or empty set.
double set_diameter(const std::vector<Point>& set);

// Smallest power of two >= v (v > 0).
double next_pow2_at_least(double v);

// Nested separated nets E_i over a finite point set E:
//   - E_{i+1} subset of E_i,
//   - points of E_i pairwise >= 2^i apart,
//   - every point of E within 2^{i+1} of E_i.
// Levels are stored for i in [i_min, i_max+1]; queries clamp: E_i = E for
// i <= i_min, and a fixed singleton for i > i_max.
struct DyadicNets {
    int i_min = 0;
    int i_max = 0;
    std::vector<std::vector<int>> levels;  // levels[k] holds E_{i_min+k}, lex order

    const std::vector<int>& level(int i) const;
    bool in_level(int point_index, int i) const;
    // Index of the closest level-i net point to target (lex tie-break).
    int nearest_in_level(const std::vector<Point>& pts, const Point& target, int i) const;
};

// Greedy coarse-from-fine thinning in lexicographic order; nesting holds by
// construction, separation by the keep test, and the net property by induction.
DyadicNets build_dyadic_nets(const std::vector<Point>& E);

}  // namespace jetext
