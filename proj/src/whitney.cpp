#include "jetext/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "jetext/report.hpp"

namespace jetext {

namespace {

// Max subdivision depth per dimension so packed grid keys fit in int64.
int max_depth_for_dim(int dim) {
    switch (dim) {
        case 1: return 60;
        case 2: return 30;
        default: return 20;
    }
}

int64_t pack_key(const std::array<int64_t, 3>& c, int dim, int level) {
    int64_t key = c[0];
    for (int i = 1; i < dim; ++i) key = (key << level) | c[static_cast<size_t>(i)];
    return key;
}

Cube cube_at(const WhitneyCover& cover, int level, const std::array<int64_t, 3>& c) {
    double side = std::ldexp(cover.window.diam(), -level);
    Cube q;
    q.center.dim = cover.window.dim();
    q.half_side = 0.5 * side;
    for (int i = 0; i < q.center.dim; ++i) {
        double lo = cover.window.center[i] - cover.window.half_side;
        q.center[i] = lo + (static_cast<double>(c[static_cast<size_t>(i)]) + 0.5) * side;
    }
    return q;
}

}  // namespace

WhitneyCover whitney_decompose(const std::vector<Point>& E, double inflate, int depth_cap) {
    if (E.empty()) throw config_error("whitney_decompose: empty point set");
    if (inflate < 4.0) throw config_error("whitney_decompose: inflate must be >= 4");
    int dim = E[0].dim;
    if (depth_cap < 1) throw config_error("whitney_decompose: depth_cap must be >= 1");
    if (depth_cap > max_depth_for_dim(dim)) {
        throw capacity_error("whitney_decompose: depth_cap exceeds grid capacity");
    }
    for (const Point& x : E) {
        if (x.dim != dim) throw config_error("whitney_decompose: mixed dimensions");
    }

    WhitneyCover cover;
    cover.E = E;
    cover.depth_cap = depth_cap;

    // Window: bounding cube inflated about its center, half-side rounded up
    // to a power of two and center snapped to half*2^-20 so that all cube
    // boundaries are exact dyadics (degenerate singleton box gets half 1/2).
    Point lo = E[0], hi = E[0], mid;
    mid.dim = dim;
    for (const Point& x : E) {
        for (int i = 0; i < dim; ++i) {
            lo[i] = std::min(lo[i], x[i]);
            hi[i] = std::max(hi[i], x[i]);
        }
    }
    double raw_half = 0.0;
    for (int i = 0; i < dim; ++i) {
        mid[i] = 0.5 * (lo[i] + hi[i]);
        raw_half = std::max(raw_half, 0.5 * (hi[i] - lo[i]));
    }
    if (raw_half == 0.0) raw_half = 0.5;
    cover.window.half_side = next_pow2_at_least(raw_half * inflate);
    cover.window.center.dim = dim;
    double unit = std::ldexp(cover.window.half_side, -20);
    for (int i = 0; i < dim; ++i) {
        double cells = std::round(mid[i] / unit);
        cover.window.center[i] =
            std::abs(cells) < 9.0e15 ? cells * unit : mid[i];
    }
    for (const Point& x : E) {
        if (!cube_contains(cover.window, x)) {
            throw invariant_error("whitney_decompose: window does not contain E");
        }
    }

    // Recursive refinement: emit a cube when diam Q <= dist(Q,E); its parent
    // violated the test, which bounds dist(Q,E) < 4 diam Q from above.
    cover.grid.assign(static_cast<size_t>(depth_cap) + 1, {});
    struct Task {
        int level;
        std::array<int64_t, 3> c;
    };
    std::vector<Task> stack{{0, {0, 0, 0}}};
    while (!stack.empty()) {
        Task t = stack.back();
        stack.pop_back();
        Cube q = cube_at(cover, t.level, t.c);
        double d = uniform_dist(q, E);
        if (t.level > 0 && q.diam() <= d) {
            cover.grid[static_cast<size_t>(t.level)].emplace(
                pack_key(t.c, dim, t.level), static_cast<int>(cover.cubes.size()));
            cover.cubes.push_back(q);
            cover.levels.push_back(t.level);
            cover.coords.push_back(t.c);
            continue;
        }
        if (t.level == depth_cap) {
            cover.collar.push_back(q);
            continue;
        }
        int children = 1 << dim;
        for (int mask = 0; mask < children; ++mask) {
            Task child;
            child.level = t.level + 1;
            child.c = {0, 0, 0};
            for (int i = 0; i < dim; ++i) {
                child.c[static_cast<size_t>(i)] =
                    2 * t.c[static_cast<size_t>(i)] + ((mask >> i) & 1);
            }
            stack.push_back(child);
        }
    }
    for (const Cube& q : cover.collar) {
        double m = 1.0;
        for (int i = 0; i < dim; ++i) m *= q.diam();
        cover.collar_measure += m;
    }

    // Adjacency. Touching cubes differ by at most two levels (a neighbor of
    // Q has diam <= dist(Q,E) + diam Q <= 5 diam Q, hence <= 4 diam Q among
    // powers of two), so probing levels l..l+2 and symmetrizing is complete.
    cover.adjacency.assign(cover.cubes.size(), {});
    for (size_t i = 0; i < cover.cubes.size(); ++i) {
        int l = cover.levels[i];
        cover.adjacency[i].push_back(static_cast<int>(i));
        for (int lp = l; lp <= std::min(l + 2, depth_cap); ++lp) {
            int shift = lp - l;
            std::array<int64_t, 3> clo{0, 0, 0}, chi{0, 0, 0};
            int64_t cells = int64_t(1) << lp;
            for (int d2 = 0; d2 < dim; ++d2) {
                int64_t base = cover.coords[i][static_cast<size_t>(d2)] << shift;
                clo[static_cast<size_t>(d2)] = std::max<int64_t>(0, base - 1);
                chi[static_cast<size_t>(d2)] =
                    std::min<int64_t>(cells - 1, base + (int64_t(1) << shift));
            }
            std::array<int64_t, 3> c = clo;
            while (true) {
                auto it = cover.grid[static_cast<size_t>(lp)].find(pack_key(c, dim, lp));
                if (it != cover.grid[static_cast<size_t>(lp)].end()) {
                    int j = it->second;
                    if (j != static_cast<int>(i)) {
                        cover.adjacency[i].push_back(j);
                        cover.adjacency[static_cast<size_t>(j)].push_back(static_cast<int>(i));
                    }
                }
                int d2 = 0;
                for (; d2 < dim; ++d2) {
                    size_t s = static_cast<size_t>(d2);
                    if (c[s] < chi[s]) {
                        ++c[s];
                        break;
                    }
                    c[s] = clo[s];
                }
                if (d2 == dim) break;
            }
        }
    }
    for (auto& adj : cover.adjacency) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    return cover;
}

int resolving_depth(const std::vector<Point>& E, double inflate, double factor) {
    if (E.empty()) throw config_error("resolving_depth: empty point set");
    if (inflate < 4.0) throw config_error("resolving_depth: inflate must be >= 4");
    if (factor < 1.0) throw config_error("resolving_depth: factor must be >= 1");
    int dim = E[0].dim;
    for (const Point& x : E) {
        if (x.dim != dim) throw config_error("resolving_depth: mixed dimensions");
    }
    if (E.size() == 1) return 8;

    double raw_half = 0.0;
    for (int i = 0; i < dim; ++i) {
        double lo = E[0][i], hi = E[0][i];
        for (const Point& x : E) {
            lo = std::min(lo, x[i]);
            hi = std::max(hi, x[i]);
        }
        raw_half = std::max(raw_half, 0.5 * (hi - lo));
    }
    if (raw_half == 0.0) raw_half = 0.5;
    double window_diam = 2.0 * next_pow2_at_least(raw_half * inflate);

    double sep = kInf;
    for (size_t a = 0; a < E.size(); ++a) {
        for (size_t b = a + 1; b < E.size(); ++b) {
            sep = std::min(sep, uniform_dist(E[a], E[b]));
        }
    }
    if (sep == 0.0) throw config_error("resolving_depth: duplicate points");

    int depth = 1;
    while (std::ldexp(window_diam, -depth) > sep / factor) ++depth;
    if (depth > max_depth_for_dim(dim)) {
        throw capacity_error("resolving_depth: separation finer than grid capacity");
    }
    return depth;
}

const std::vector<int>& touching(const WhitneyCover& cover, int K) {
    if (K < 0 || K >= static_cast<int>(cover.cubes.size())) {
        throw config_error("touching: cube index out of range");
    }
    return cover.adjacency[static_cast<size_t>(K)];
}

int locate_cube(const WhitneyCover& cover, const Point& x) {
    if (x.dim != cover.window.dim()) throw config_error("locate_cube: dimension mismatch");
    if (!cube_contains(cover.window, x)) return -1;
    int dim = x.dim;
    for (int l = 1; l < static_cast<int>(cover.grid.size()); ++l) {
        if (cover.grid[static_cast<size_t>(l)].empty()) continue;
        double side = std::ldexp(cover.window.diam(), -l);
        int64_t cells = int64_t(1) << l;
        std::array<int64_t, 3> c{0, 0, 0};
        for (int i = 0; i < dim; ++i) {
            double lo = cover.window.center[i] - cover.window.half_side;
            auto idx = static_cast<int64_t>(std::floor((x[i] - lo) / side));
            c[static_cast<size_t>(i)] = std::clamp<int64_t>(idx, 0, cells - 1);
        }
        auto it = cover.grid[static_cast<size_t>(l)].find(pack_key(c, dim, l));
        if (it != cover.grid[static_cast<size_t>(l)].end()) return it->second;
    }
    return -1;
}

std::vector<int> support_cubes(const WhitneyCover& cover, const Point& x) {
    // Any cube K with x in (9/8)K touches the tile containing x: the gap
    // between non-touching cubes is at least the smaller side, which exceeds
    // the 1/16 diam K margin of the dilate by the Whitney bounds.
    int k0 = locate_cube(cover, x);
    if (k0 < 0) return {};
    std::vector<int> out;
    for (int j : cover.adjacency[static_cast<size_t>(k0)]) {
        if (cube_contains(dilate(cover.cubes[static_cast<size_t>(j)], 9.0 / 8.0), x)) {
            out.push_back(j);
        }
    }
    return out;
}

namespace {

// exp(-1/s) for s > 0, extended by 0; jets below the underflow knee are
// returned as exact zeros to avoid inf*0 in the recursions.
TaylorU smooth_step_jet(const TaylorU& s, int len) {
    if (s.c[0] <= 0.0 || 1.0 / s.c[0] >= 700.0) return taylor_const(0.0, len);
    return taylor_exp(taylor_scale(taylor_recip(s), -1.0));
}

}  // namespace

double profile_value(double t) {
    // via the length-1 jet so values and jets agree bit for bit
    return profile_jet(t, 1).c[0];
}

TaylorU profile_jet(double t, int len) {
    double a = std::abs(t);
    if (a <= 1.0) return taylor_const(1.0, len);  // flat contact at |t| = 1
    if (a >= 9.0 / 8.0) return taylor_const(0.0, len);
    double sign = t < 0.0 ? -1.0 : 1.0;
    TaylorU s = taylor_affine(9.0 - 8.0 * a, -8.0 * sign, len);
    TaylorU u = taylor_affine(8.0 * a - 8.0, 8.0 * sign, len);
    TaylorU fs = smooth_step_jet(s, len);
    TaylorU fu = smooth_step_jet(u, len);
    return taylor_mul(fs, taylor_recip(taylor_add(fs, fu)));
}

double bump_value(const Cube& q, const Point& x) {
    double r = 1.0;
    for (int i = 0; i < q.dim(); ++i) r *= profile_value((x[i] - q.center[i]) / q.half_side);
    return r;
}

MTaylor bump_jet(const Cube& q, const Point& x, int order) {
    std::vector<TaylorU> axes;
    axes.reserve(static_cast<size_t>(q.dim()));
    for (int i = 0; i < q.dim(); ++i) {
        TaylorU f = profile_jet((x[i] - q.center[i]) / q.half_side, order + 1);
        double scale = 1.0;
        for (int k = 1; k < f.len(); ++k) {
            scale /= q.half_side;  // chain rule for the t = (x-c)/h substitution
            f.c[static_cast<size_t>(k)] *= scale;
        }
        axes.push_back(std::move(f));
    }
    return mtaylor_tensor(axes, order);
}

double pou_eval(const WhitneyCover& cover, int q, const MultiIndex& alpha, const Point& x,
                const BumpSpec& spec) {
    if (q < 0 || q >= static_cast<int>(cover.cubes.size())) {
        throw config_error("pou_eval: cube index out of range");
    }
    if (alpha.order() > spec.order) throw config_error("pou_eval: derivative order above bump order");
    std::vector<int> sup = support_cubes(cover, x);
    if (sup.empty()) throw config_error("pou_eval: point lies in the collar");
    if (std::find(sup.begin(), sup.end(), q) == sup.end()) return 0.0;
    int order = alpha.order();
    MTaylor den = mtaylor_const(0.0, x.dim, order);
    MTaylor num;
    for (int k : sup) {
        MTaylor b = bump_jet(cover.cubes[static_cast<size_t>(k)], x, order);
        if (k == q) num = b;
        den = mtaylor_add(den, b);
    }
    return mtaylor_deriv(mtaylor_mul(num, mtaylor_recip(den)), alpha);
}

PouJets pou_jets(const WhitneyCover& cover, const Point& x, int order, const BumpSpec& spec) {
    if (order > spec.order) throw config_error("pou_jets: derivative order above bump order");
    PouJets out;
    out.cubes = support_cubes(cover, x);
    if (out.cubes.empty()) throw config_error("pou_jets: point lies in the collar");
    std::vector<MTaylor> bumps;
    bumps.reserve(out.cubes.size());
    MTaylor den = mtaylor_const(0.0, x.dim, order);
    for (int k : out.cubes) {
        bumps.push_back(bump_jet(cover.cubes[static_cast<size_t>(k)], x, order));
        den = mtaylor_add(den, bumps.back());
    }
    MTaylor recip = mtaylor_recip(den);
    out.jets.reserve(bumps.size());
    for (const MTaylor& b : bumps) out.jets.push_back(mtaylor_mul(b, recip));
    return out;
}

void write_cover(const WhitneyCover& cover, std::ostream& os) {
    JsonWriter w;
    w.begin_object();
    w.kv("dim", cover.window.dim());
    w.key("window");
    w.begin_object();
    w.key("center");
    w.begin_array();
    for (int i = 0; i < cover.window.dim(); ++i) w.value(cover.window.center[i]);
    w.end_array();
    w.kv("half_side", cover.window.half_side);
    w.end_object();
    w.kv("depth_cap", cover.depth_cap);
    w.kv("cube_count", cover.cubes.size());
    w.kv("collar_count", cover.collar.size());
    w.kv("collar_measure", cover.collar_measure);
    w.key("cubes");
    w.begin_array();
    for (size_t i = 0; i < cover.cubes.size(); ++i) {
        w.begin_object();
        w.key("center");
        w.begin_array();
        for (int d = 0; d < cover.window.dim(); ++d) w.value(cover.cubes[i].center[d]);
        w.end_array();
        w.kv("half_side", cover.cubes[i].half_side);
        w.key("neighbors");
        w.begin_array();
        for (int j : cover.adjacency[i]) {
            if (j != static_cast<int>(i)) w.value(j);
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    os << w.str() << "\n";
}

}  // namespace jetext
