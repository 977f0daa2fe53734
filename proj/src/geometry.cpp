#include "jetext/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace jetext {

Point make_point(std::initializer_list<double> coords) {
    if (coords.size() < 1 || coords.size() > kMaxDim) {
        throw config_error("point dimension must be 1..3");
    }
    Point p;
    p.dim = static_cast<int>(coords.size());
    int i = 0;
    for (double v : coords) p.c[static_cast<size_t>(i++)] = v;
    return p;
}

bool lex_less(const Point& a, const Point& b) {
    for (int i = 0; i < a.dim; ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

static void require_same_dim(int a, int b) {
    if (a != b) throw config_error("dimension mismatch");
}

Cube dilate(const Cube& q, double lambda) {
    if (!(lambda > 0.0)) throw config_error("dilation factor must be positive");
    return Cube{q.center, q.half_side * lambda};
}

bool cube_contains(const Cube& q, const Point& x) {
    require_same_dim(q.dim(), x.dim);
    for (int i = 0; i < x.dim; ++i) {
        if (std::abs(x[i] - q.center[i]) > q.half_side) return false;
    }
    return true;
}

bool cubes_intersect(const Cube& a, const Cube& b) {
    require_same_dim(a.dim(), b.dim());
    for (int i = 0; i < a.dim(); ++i) {
        if (std::abs(a.center[i] - b.center[i]) > a.half_side + b.half_side) return false;
    }
    return true;
}

double uniform_norm(const Point& a) {
    double m = 0.0;
    for (int i = 0; i < a.dim; ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

double uniform_dist(const Point& a, const Point& b) {
    require_same_dim(a.dim, b.dim);
    double m = 0.0;
    for (int i = 0; i < a.dim; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double uniform_dist(const Point& x, const Cube& q) {
    require_same_dim(x.dim, q.dim());
    double m = 0.0;
    for (int i = 0; i < x.dim; ++i) {
        m = std::max(m, std::abs(x[i] - q.center[i]) - q.half_side);
    }
    return std::max(m, 0.0);
}

double uniform_dist(const Cube& a, const Cube& b) {
    require_same_dim(a.dim(), b.dim());
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        m = std::max(m, std::abs(a.center[i] - b.center[i]) - (a.half_side + b.half_side));
    }
    return std::max(m, 0.0);
}

double uniform_dist(const Point& x, const std::vector<Point>& set) {
    double m = kInf;
    for (const Point& p : set) m = std::min(m, uniform_dist(x, p));
    return m;
}

double uniform_dist(const Cube& q, const std::vector<Point>& set) {
    double m = kInf;
    for (const Point& p : set) m = std::min(m, uniform_dist(p, q));
    return m;
}

double set_diameter(const std::vector<Point>& set) {
    double d = 0.0;
    for (size_t i = 0; i < set.size(); ++i) {
        for (size_t j = i + 1; j < set.size(); ++j) {
            d = std::max(d, uniform_dist(set[i], set[j]));
        }
    }
    return d;
}

double next_pow2_at_least(double v) {
    if (!(v > 0.0)) throw config_error("next_pow2_at_least needs v > 0");
    double p = std::exp2(std::ceil(std::log2(v)));
    while (p < v) p *= 2.0;
    while (p / 2.0 >= v) p /= 2.0;
    return p;
}

const std::vector<int>& DyadicNets::level(int i) const {
    if (i <= i_min) return levels.front();
    if (i >= i_max + 1) return levels.back();
    return levels[static_cast<size_t>(i - i_min)];
}

bool DyadicNets::in_level(int point_index, int i) const {
    const std::vector<int>& lv = level(i);
    return std::find(lv.begin(), lv.end(), point_index) != lv.end();
}

int DyadicNets::nearest_in_level(const std::vector<Point>& pts, const Point& target, int i) const {
    const std::vector<int>& lv = level(i);
    if (lv.empty()) throw invariant_error("net level is empty");
    int best = -1;
    double best_d = kInf;
    for (int idx : lv) {
        double d = uniform_dist(pts[static_cast<size_t>(idx)], target);
        if (d < best_d || (d == best_d && best >= 0 &&
                           lex_less(pts[static_cast<size_t>(idx)], pts[static_cast<size_t>(best)]))) {
            best = idx;
            best_d = d;
        }
    }
    return best;
}

DyadicNets build_dyadic_nets(const std::vector<Point>& E) {
    if (E.empty()) throw config_error("net construction needs a nonempty point set");
    DyadicNets nets;

    std::vector<int> order(E.size());
    for (size_t i = 0; i < E.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return lex_less(E[static_cast<size_t>(a)], E[static_cast<size_t>(b)]);
    });

    if (E.size() == 1) {
        nets.i_min = 0;
        nets.i_max = 0;
        nets.levels = {order, order};
        return nets;
    }

    double min_dist = kInf;
    for (size_t i = 0; i < E.size(); ++i) {
        for (size_t j = i + 1; j < E.size(); ++j) {
            min_dist = std::min(min_dist, uniform_dist(E[i], E[j]));
        }
    }
    if (min_dist == 0.0) throw config_error("point set has duplicate points");
    double diam = set_diameter(E);

    // i_min = floor(log2(min pairwise dist)), adjusted to be exact in doubles.
    int i_min = static_cast<int>(std::floor(std::log2(min_dist)));
    while (std::exp2(i_min) > min_dist) --i_min;
    while (std::exp2(i_min + 1) <= min_dist) ++i_min;
    // i_max = ceil(log2(diam)) + 3, same adjustment.
    int c = static_cast<int>(std::ceil(std::log2(diam)));
    while (std::exp2(c) < diam) ++c;
    while (c > 0 && std::exp2(c - 1) >= diam) --c;
    int i_max = c + 3;

    nets.i_min = i_min;
    nets.i_max = i_max;
    nets.levels.push_back(order);  // E_{i_min} = E
    for (int i = i_min; i <= i_max; ++i) {
        const std::vector<int>& prev = nets.levels.back();
        double sep = std::exp2(i + 1);
        std::vector<int> kept;
        for (int idx : prev) {
            bool ok = true;
            for (int k : kept) {
                if (uniform_dist(E[static_cast<size_t>(idx)], E[static_cast<size_t>(k)]) < sep) {
                    ok = false;
                    break;
                }
            }
            if (ok) kept.push_back(idx);
        }
        nets.levels.push_back(std::move(kept));
    }
    if (nets.levels.back().size() != 1) {
        throw invariant_error("top net level is not a singleton");
    }
    return nets;
}

}  // namespace jetext
