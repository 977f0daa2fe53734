#include "jetext/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <queue>

#include "jetext/report.hpp"

namespace jetext {

namespace {

size_t cells_total(int dim, int res) {
    size_t n = 1;
    for (int i = 0; i < dim; ++i) n *= static_cast<size_t>(res);
    return n;
}

// grid coordinate of x along axis i, in [0, res]
double grid_coord(const SummedTable& s, const Point& x, int i) {
    return (x[i] - (s.box.center[i] - s.box.half_side)) / s.cell;
}

// multilinear read of the node table at fractional grid coords (exact for
// the cumulative integral of a piecewise-constant density)
double table_interp(const SummedTable& s, const double* u) {
    int dim = s.dim();
    int base[kMaxDim] = {0, 0, 0};
    double frac[kMaxDim] = {0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i) {
        int j = static_cast<int>(std::floor(u[i]));
        if (j >= s.res) j = s.res - 1;
        if (j < 0) j = 0;
        base[i] = j;
        frac[i] = u[i] - j;
    }
    size_t stride[kMaxDim] = {1, 0, 0};
    size_t width = static_cast<size_t>(s.res) + 1;
    for (int i = 1; i < dim; ++i) stride[i] = stride[i - 1] * width;
    double acc = 0.0;
    for (int b = 0; b < (1 << dim); ++b) {
        double w = 1.0;
        size_t idx = 0;
        for (int i = 0; i < dim; ++i) {
            if (b & (1 << i)) {
                w *= frac[i];
                idx += (static_cast<size_t>(base[i]) + 1) * stride[i];
            } else {
                w *= 1.0 - frac[i];
                idx += static_cast<size_t>(base[i]) * stride[i];
            }
        }
        if (w != 0.0) acc += w * s.nodes[idx];
    }
    return acc;
}

// integral of h^q over [lo,hi] clipped to the box, in units of cell volume
double clipped_mass_units(const SummedTable& s, const Point& lo, const Point& hi) {
    int dim = s.dim();
    double ulo[kMaxDim], uhi[kMaxDim];
    for (int i = 0; i < dim; ++i) {
        ulo[i] = std::clamp(grid_coord(s, lo, i), 0.0, static_cast<double>(s.res));
        uhi[i] = std::clamp(grid_coord(s, hi, i), 0.0, static_cast<double>(s.res));
        if (uhi[i] <= ulo[i]) return 0.0;
    }
    double acc = 0.0;
    double corner[kMaxDim];
    for (int b = 0; b < (1 << dim); ++b) {
        int ones = 0;
        for (int i = 0; i < dim; ++i) {
            bool hi_side = (b & (1 << i)) != 0;
            corner[i] = hi_side ? uhi[i] : ulo[i];
            ones += hi_side ? 1 : 0;
        }
        double sign = ((dim - ones) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * table_interp(s, corner);
    }
    return acc;
}

// largest avg over the anchored dyadic ladder, in q-th-power units
double ladder_sup(const SummedTable& s, const Point& anchor, double start) {
    int dim = s.dim();
    double best = 0.0;
    double limit = 2.0 * s.box.diam();
    for (double r = start;; r *= 2.0) {
        Point lo = anchor, hi = anchor;
        for (int i = 0; i < dim; ++i) {
            lo[i] -= r;
            hi[i] += r;
        }
        double vol_units = 1.0;
        for (int i = 0; i < dim; ++i) vol_units *= 2.0 * r / s.cell;
        best = std::max(best, clipped_mass_units(s, lo, hi) / vol_units);
        if (r >= limit) break;
    }
    return best;
}

// largest avg over grid-aligned cubes containing x and y, sizes <= cap cells
double aligned_sup(const SummedTable& s, const Point& x, const Point& y, int cap) {
    int dim = s.dim();
    int res = s.res;
    double blo[kMaxDim], span_lo[kMaxDim], span_hi[kMaxDim];
    for (int i = 0; i < dim; ++i) {
        blo[i] = s.box.center[i] - s.box.half_side;
        span_lo[i] = std::min(x[i], y[i]);
        span_hi[i] = std::max(x[i], y[i]);
    }
    int kmin = 1;
    for (int i = 0; i < dim; ++i) {
        int need = static_cast<int>(std::ceil((span_hi[i] - span_lo[i]) / s.cell - 1e-9));
        kmin = std::max(kmin, need);
    }
    int kcap = cap > 0 ? std::min(cap, res) : res;

    size_t width = static_cast<size_t>(res) + 1;
    size_t stride[kMaxDim] = {1, width, width * width};
    double best = 0.0;
    for (int k = kmin; k <= kcap; ++k) {
        int jlo[kMaxDim] = {0, 0, 0}, jhi[kMaxDim] = {0, 0, 0};
        bool feasible = true;
        for (int i = 0; i < dim; ++i) {
            double lo_u = (span_lo[i] - blo[i]) / s.cell;
            double hi_u = (span_hi[i] - blo[i]) / s.cell;
            jlo[i] = std::max(0, static_cast<int>(std::ceil(hi_u - 1e-9)) - k);
            jhi[i] = std::min(res - k, static_cast<int>(std::floor(lo_u + 1e-9)));
            if (jlo[i] > jhi[i]) feasible = false;
        }
        if (!feasible) continue;

        // inclusion-exclusion offsets for a size-k cube at the node grid
        double sign[8];
        size_t off[8];
        int corners = 1 << dim;
        for (int b = 0; b < corners; ++b) {
            int ones = 0;
            size_t o = 0;
            for (int i = 0; i < dim; ++i) {
                if (b & (1 << i)) {
                    o += static_cast<size_t>(k) * stride[i];
                    ++ones;
                }
            }
            sign[b] = ((dim - ones) % 2 == 0) ? 1.0 : -1.0;
            off[b] = o;
        }
        double vol = 1.0;
        for (int i = 0; i < dim; ++i) vol *= k;  // exact integer product

        int j2lo = dim > 2 ? jlo[2] : 0, j2hi = dim > 2 ? jhi[2] : 0;
        int j1lo = dim > 1 ? jlo[1] : 0, j1hi = dim > 1 ? jhi[1] : 0;
        for (int j2 = j2lo; j2 <= j2hi; ++j2) {
            for (int j1 = j1lo; j1 <= j1hi; ++j1) {
                size_t row = static_cast<size_t>(j2) * stride[2] +
                             static_cast<size_t>(j1) * stride[1] + static_cast<size_t>(jlo[0]);
                for (int j0 = jlo[0]; j0 <= jhi[0]; ++j0, ++row) {
                    double mass = 0.0;
                    for (int b = 0; b < corners; ++b) mass += sign[b] * s.nodes[row + off[b]];
                    best = std::max(best, mass / vol);
                }
            }
        }
    }
    return best;
}

void require_inside(const SummedTable& s, const Point& x, const char* who) {
    if (x.dim != s.dim()) throw config_error(std::string(who) + ": dimension mismatch");
    if (!cube_contains(s.box, x)) throw config_error(std::string(who) + ": point outside the density box");
}

struct Seed {
    int node;
    double dist;
};

// Dijkstra over the cached adjacency from virtual seeds; stops once the
// frontier exceeds `bound` (pass +inf to settle everything).
std::vector<double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj,
                             const std::vector<Seed>& seeds, double bound) {
    std::vector<double> dist(adj.size(), kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (const Seed& s : seeds) {
        if (s.dist < dist[static_cast<size_t>(s.node)]) {
            dist[static_cast<size_t>(s.node)] = s.dist;
            pq.push({s.dist, s.node});
        }
    }
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[static_cast<size_t>(u)]) continue;
        if (d > bound) break;
        for (const auto& [v, w] : adj[static_cast<size_t>(u)]) {
            double nd = d + w;
            if (nd < dist[static_cast<size_t>(v)]) {
                dist[static_cast<size_t>(v)] = nd;
                pq.push({nd, v});
            }
        }
    }
    return dist;
}

int lattice_nodes_per_axis(const MetricSample& s) { return s.table.res / s.stride + 1; }

// indices of permanent sites within the edge radius of x
std::vector<int> sites_near(const MetricSample& s, const Point& x) {
    int dim = s.table.dim();
    double cell = s.table.cell;
    double step = s.stride * cell;
    double radius = s.radius_cells * cell * (1.0 + 1e-12);
    int npa = lattice_nodes_per_axis(s);
    int klo[kMaxDim] = {0, 0, 0}, khi[kMaxDim] = {0, 0, 0};
    for (int i = 0; i < dim; ++i) {
        double blo = s.table.box.center[i] - s.table.box.half_side;
        klo[i] = std::max(0, static_cast<int>(std::ceil((x[i] - radius - blo) / step - 1e-12)));
        khi[i] = std::min(npa - 1, static_cast<int>(std::floor((x[i] + radius - blo) / step + 1e-12)));
    }
    std::vector<int> out;
    int k2hi = dim > 2 ? khi[2] : 0, k1hi = dim > 1 ? khi[1] : 0;
    for (int k2 = dim > 2 ? klo[2] : 0; k2 <= k2hi; ++k2) {
        for (int k1 = dim > 1 ? klo[1] : 0; k1 <= k1hi; ++k1) {
            for (int k0 = klo[0]; k0 <= khi[0]; ++k0) {
                out.push_back((k2 * npa + k1) * npa + k0);
            }
        }
    }
    for (size_t e = s.lattice_count; e < s.sites.size(); ++e) {
        if (uniform_dist(x, s.sites[e]) <= radius) out.push_back(static_cast<int>(e));
    }
    return out;
}

}  // namespace

DensityField make_density(const Cube& box, int res, double q, std::vector<double> values) {
    int dim = box.dim();
    if (dim < 1 || dim > kMaxDim) throw config_error("make_density: dim out of range 1..3");
    if (!(box.half_side > 0.0)) throw config_error("make_density: box half_side must be positive");
    if (res < 1) throw config_error("make_density: res must be >= 1");
    if (q < dim) throw config_error("make_density: averaging exponent must be >= dim");
    size_t total = cells_total(dim, res);
    if (total > (size_t(1) << 23)) throw capacity_error("make_density: grid too large");
    if (values.size() != total) throw config_error("make_density: values size must be res^dim");
    for (double v : values) {
        if (!(v >= 0.0)) throw config_error("make_density: values must be nonnegative");
    }
    DensityField h;
    h.box = box;
    h.res = res;
    h.q = q;
    h.values = std::move(values);
    return h;
}

double density_at(const DensityField& h, const Point& x) {
    if (x.dim != h.dim()) throw config_error("density_at: dimension mismatch");
    if (!cube_contains(h.box, x)) throw config_error("density_at: point outside the density box");
    double cell = h.cell_side();
    size_t idx = 0;
    for (int i = h.dim() - 1; i >= 0; --i) {
        double blo = h.box.center[i] - h.box.half_side;
        int k = static_cast<int>(std::floor((x[i] - blo) / cell));
        k = std::clamp(k, 0, h.res - 1);
        idx = idx * static_cast<size_t>(h.res) + static_cast<size_t>(k);
    }
    return h.values[idx];
}

DensityField refine_density(const DensityField& h, int factor) {
    if (factor < 1) throw config_error("refine_density: factor must be >= 1");
    if (factor == 1) return h;
    int dim = h.dim();
    int res = h.res * factor;
    size_t total = cells_total(dim, res);
    if (total > (size_t(1) << 23)) throw capacity_error("refine_density: refined grid too large");
    std::vector<double> vals(total);
    int idx[kMaxDim] = {0, 0, 0};
    for (size_t flat = 0; flat < total; ++flat) {
        size_t coarse = 0;
        for (int i = dim - 1; i >= 0; --i) {
            coarse = coarse * static_cast<size_t>(h.res) + static_cast<size_t>(idx[i] / factor);
        }
        vals[flat] = h.values[coarse];
        for (int i = 0; i < dim; ++i) {
            if (++idx[i] < res) break;
            idx[i] = 0;
        }
    }
    return make_density(h.box, res, h.q, std::move(vals));
}

SummedTable build_summed(const DensityField& h) {
    SummedTable s;
    s.box = h.box;
    s.res = h.res;
    s.q = h.q;
    s.cell = h.cell_side();
    int dim = h.dim();
    size_t width = static_cast<size_t>(h.res) + 1;
    size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= width;
    s.nodes.assign(total, 0.0);

    size_t stride[kMaxDim] = {1, width, width * width};
    // write h^q per cell at the node one past its low corner, then prefix-sum
    int idx[kMaxDim] = {0, 0, 0};
    size_t cells = cells_total(dim, h.res);
    for (size_t flat = 0; flat < cells; ++flat) {
        size_t node = 0;
        for (int i = 0; i < dim; ++i) node += static_cast<size_t>(idx[i] + 1) * stride[i];
        s.nodes[node] = std::pow(h.values[flat], h.q);
        for (int i = 0; i < dim; ++i) {
            if (++idx[i] < h.res) break;
            idx[i] = 0;
        }
    }
    for (int axis = 0; axis < dim; ++axis) {
        for (size_t n = 0; n < total; ++n) {
            size_t coord = (n / stride[axis]) % width;
            if (coord > 0) s.nodes[n] += s.nodes[n - stride[axis]];
        }
    }
    return s;
}

double box_mass(const SummedTable& s, const Point& lo, const Point& hi) {
    if (lo.dim != s.dim() || hi.dim != s.dim()) throw config_error("box_mass: dimension mismatch");
    double cell_vol = 1.0;
    for (int i = 0; i < s.dim(); ++i) cell_vol *= s.cell;
    return clipped_mass_units(s, lo, hi) * cell_vol;
}

double rho_q_tab(const Point& x, const Point& y, const SummedTable& s, int cap) {
    require_inside(s, x, "rho_q");
    require_inside(s, y, "rho_q");
    double r = uniform_dist(x, y);
    if (r == 0.0) return 0.0;
    double best = aligned_sup(s, x, y, cap);
    best = std::max(best, ladder_sup(s, x, r));
    best = std::max(best, ladder_sup(s, y, r));
    return r * std::pow(best, 1.0 / s.q);
}

double rho_q(const Point& x, const Point& y, const DensityField& h) {
    SummedTable s = build_summed(h);
    return rho_q_tab(x, y, s, 0);
}

double rho_q_capped(const Point& x, const Point& y, const DensityField& h, int cap) {
    SummedTable s = build_summed(h);
    return rho_q_tab(x, y, s, cap);
}

double profile_v(const Point& x, const DensityField& h, double t) {
    if (!(t > 0.0)) throw config_error("profile_v: t must be positive");
    SummedTable s = build_summed(h);
    require_inside(s, x, "profile_v");
    return t * std::pow(ladder_sup(s, x, t), 1.0 / s.q);
}

ProfileSample v_and_omega(const Point& x, const DensityField& h) {
    SummedTable s = build_summed(h);
    require_inside(s, x, "v_and_omega");
    int dim = s.dim();

    ProfileSample out;
    double limit = 2.0 * s.box.diam();
    for (double t = s.cell / 4.0;; t *= 2.0) {
        out.t.push_back(t);
        if (t >= limit) break;
    }
    // q-th power averages along the shared ladder, then suffix maxima
    std::vector<double> a(out.t.size());
    for (size_t k = 0; k < out.t.size(); ++k) {
        double r = out.t[k];
        Point lo = x, hi = x;
        for (int i = 0; i < dim; ++i) {
            lo[i] -= r;
            hi[i] += r;
        }
        double vol_units = 1.0;
        for (int i = 0; i < dim; ++i) vol_units *= 2.0 * r / s.cell;
        a[k] = clipped_mass_units(s, lo, hi) / vol_units;
    }
    out.v.resize(a.size());
    double run = 0.0;
    for (size_t k = a.size(); k-- > 0;) {
        run = std::max(run, a[k]);
        out.v[k] = out.t[k] * std::pow(run, 1.0 / s.q);
    }

    // least concave majorant: upper hull through the origin, then sample it
    std::vector<std::pair<double, double>> hull{{0.0, 0.0}};
    for (size_t k = 0; k < out.t.size(); ++k) {
        std::pair<double, double> p{out.t[k], out.v[k]};
        while (hull.size() >= 2) {
            const auto& a2 = hull[hull.size() - 2];
            const auto& b2 = hull[hull.size() - 1];
            double cross = (b2.first - a2.first) * (p.second - a2.second) -
                           (b2.second - a2.second) * (p.first - a2.first);
            if (cross >= 0.0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(p);
    }
    out.omega.resize(out.t.size());
    size_t seg = 0;
    for (size_t k = 0; k < out.t.size(); ++k) {
        double t = out.t[k];
        while (seg + 1 < hull.size() - 1 && hull[seg + 1].first < t) ++seg;
        const auto& a2 = hull[seg];
        const auto& b2 = hull[seg + 1];
        double lambda = (t - a2.first) / (b2.first - a2.first);
        out.omega[k] = std::max(out.v[k], a2.second + lambda * (b2.second - a2.second));
    }
    return out;
}

MetricSample build_metric_sample(const DensityField& h, const std::vector<Point>& extra_sites,
                                 int stride, double radius_cells, int edge_cap) {
    int dim = h.dim();
    if (stride < 1) throw config_error("build_metric_sample: stride must be >= 1");
    if (h.res % stride != 0) throw config_error("build_metric_sample: stride must divide res");
    if (radius_cells < stride) {
        throw config_error("build_metric_sample: sample radius below lattice stride");
    }

    MetricSample s;
    s.table = build_summed(h);
    s.stride = stride;
    s.radius_cells = radius_cells;
    s.edge_cap = edge_cap > 0 ? edge_cap : (dim == 3 ? 6 : 8);

    double cell = s.table.cell;
    double step = stride * cell;
    int npa = h.res / stride + 1;
    int lattice = 1;
    for (int i = 0; i < dim; ++i) lattice *= npa;
    s.lattice_count = static_cast<size_t>(lattice);
    for (int flat = 0; flat < lattice; ++flat) {
        Point p;
        p.dim = dim;
        int rest = flat;
        for (int i = 0; i < dim; ++i) {
            int k = rest % npa;
            rest /= npa;
            p[i] = (h.box.center[i] - h.box.half_side) + k * step;
        }
        s.sites.push_back(p);
    }
    for (const Point& e : extra_sites) {
        require_inside(s.table, e, "build_metric_sample");
        s.sites.push_back(e);
    }
    s.adj.assign(s.sites.size(), {});

    auto connect = [&](int a, int b) {
        double w = rho_q_tab(s.sites[static_cast<size_t>(a)], s.sites[static_cast<size_t>(b)],
                             s.table, s.edge_cap);
        s.adj[static_cast<size_t>(a)].push_back({b, w});
        s.adj[static_cast<size_t>(b)].push_back({a, w});
    };

    // lattice edges: each node to lexicographically-later nodes in range
    int reach = static_cast<int>(std::floor(radius_cells / stride + 1e-12));
    double radius = radius_cells * cell * (1.0 + 1e-12);
    for (int flat = 0; flat < lattice; ++flat) {
        int k[kMaxDim] = {0, 0, 0};
        int rest = flat;
        for (int i = 0; i < dim; ++i) {
            k[i] = rest % npa;
            rest /= npa;
        }
        int d2hi = dim > 2 ? reach : 0, d1hi = dim > 1 ? reach : 0;
        for (int d2 = 0; d2 <= d2hi; ++d2) {
            for (int d1 = (d2 == 0 ? 0 : -d1hi); d1 <= d1hi; ++d1) {
                for (int d0 = (d2 == 0 && d1 == 0 ? 1 : -reach); d0 <= reach; ++d0) {
                    int o0 = k[0] + d0, o1 = k[1] + d1, o2 = k[2] + d2;
                    if (o0 < 0 || o0 >= npa || (dim > 1 && (o1 < 0 || o1 >= npa)) ||
                        (dim > 2 && (o2 < 0 || o2 >= npa))) {
                        continue;
                    }
                    connect(flat, (o2 * npa + o1) * npa + o0);
                }
            }
        }
    }
    // extras attach to every permanent site in range
    for (size_t e = s.lattice_count; e < s.sites.size(); ++e) {
        for (size_t j = 0; j < e; ++j) {
            if (uniform_dist(s.sites[e], s.sites[j]) <= radius) {
                connect(static_cast<int>(e), static_cast<int>(j));
            }
        }
    }

    std::vector<double> dist = dijkstra(s.adj, {{0, 0.0}}, kInf);
    for (double d : dist) {
        if (d == kInf) {
            throw config_error("build_metric_sample: sample graph disconnected; increase sample_radius");
        }
    }
    return s;
}

double sample_dq(const MetricSample& s, const Point& x, const Point& y) {
    require_inside(s.table, x, "sample_dq");
    require_inside(s.table, y, "sample_dq");
    if (uniform_dist(x, y) == 0.0) return 0.0;
    double direct = rho_q_tab(x, y, s.table, 0);

    std::vector<Seed> seeds;
    for (int j : sites_near(s, x)) {
        seeds.push_back({j, rho_q_tab(x, s.sites[static_cast<size_t>(j)], s.table, s.edge_cap)});
    }
    std::vector<double> dist = dijkstra(s.adj, seeds, direct);
    double best = direct;
    for (int j : sites_near(s, y)) {
        double dj = dist[static_cast<size_t>(j)];
        if (dj >= best) continue;
        best = std::min(best, dj + rho_q_tab(s.sites[static_cast<size_t>(j)], y, s.table, s.edge_cap));
    }
    return best;
}

std::vector<double> sample_dq_to_extras(const MetricSample& s, const Point& x) {
    require_inside(s.table, x, "sample_dq");
    std::vector<Seed> seeds;
    for (int j : sites_near(s, x)) {
        seeds.push_back({j, rho_q_tab(x, s.sites[static_cast<size_t>(j)], s.table, s.edge_cap)});
    }
    // direct full-family edges into every extra keep d below rho there
    for (size_t e = s.lattice_count; e < s.sites.size(); ++e) {
        seeds.push_back({static_cast<int>(e), rho_q_tab(x, s.sites[e], s.table, 0)});
    }
    std::vector<double> dist = dijkstra(s.adj, seeds, kInf);
    std::vector<double> out;
    for (size_t e = s.lattice_count; e < s.sites.size(); ++e) {
        out.push_back(dist[e]);
    }
    return out;
}

double geodesic_dq(const Point& x, const Point& y, const DensityField& h, double sample_radius_cells) {
    int stride = (h.dim() == 3 && h.res % 2 == 0) ? 2 : 1;
    MetricSample s = build_metric_sample(h, {}, stride, sample_radius_cells);
    return sample_dq(s, x, y);
}

double mcshane_extend(const std::vector<Point>& E, const std::vector<double>& f,
                      const MetricOracle& d, const Point& x) {
    if (E.empty()) throw config_error("mcshane_extend: empty point set");
    if (E.size() != f.size()) throw config_error("mcshane_extend: values must match points");
    double best = kInf;
    for (size_t i = 0; i < E.size(); ++i) {
        best = std::min(best, f[i] + d(x, E[i]));
    }
    return best;
}

double scalar_sharp(const std::vector<Point>& E, const std::vector<double>& f, const Point& x) {
    if (E.size() != f.size()) throw config_error("scalar_sharp: values must match points");
    double best = 0.0;
    for (size_t i = 0; i < E.size(); ++i) {
        for (size_t j = i + 1; j < E.size(); ++j) {
            double denom = uniform_dist(x, E[i]) + uniform_dist(x, E[j]);
            best = std::max(best, std::abs(f[i] - f[j]) / denom);
        }
    }
    return best;
}

DensityField sharp_density(const std::vector<Point>& E, const std::vector<double>& f,
                           const Cube& box, int res, double q) {
    int dim = box.dim();
    size_t total = cells_total(dim, res);
    std::vector<double> vals(total);
    double cell = box.diam() / res;
    int idx[kMaxDim] = {0, 0, 0};
    for (size_t flat = 0; flat < total; ++flat) {
        Point c;
        c.dim = dim;
        for (int i = 0; i < dim; ++i) {
            c[i] = (box.center[i] - box.half_side) + (idx[i] + 0.5) * cell;
        }
        vals[flat] = scalar_sharp(E, f, c);
        for (int i = 0; i < dim; ++i) {
            if (++idx[i] < res) break;
            idx[i] = 0;
        }
    }
    return make_density(box, res, q, std::move(vals));
}

double L1pExtension::eval(const Point& x) const {
    std::vector<double> d = sample_dq_to_extras(sample, x);
    double best = kInf;
    for (size_t i = 0; i < E.size(); ++i) {
        best = std::min(best, f[i] + 48.0 * d[i]);
    }
    return best;
}

L1pExtension l1p_extend(const std::vector<Point>& E, const std::vector<double>& f, double p,
                        const Cube& box, int res) {
    int dim = box.dim();
    if (E.empty()) throw config_error("l1p_extend: empty point set");
    if (E.size() != f.size()) throw config_error("l1p_extend: values must match points");
    if (!(p > dim)) throw config_error("l1p_extend: p must exceed the dimension");
    double q = 0.5 * (dim + p);
    DensityField sharp = sharp_density(E, f, box, res, q);
    int stride = (dim == 3 && res % 2 == 0) ? 2 : 1;
    L1pExtension ext;
    ext.E = E;
    ext.f = f;
    ext.sample = build_metric_sample(sharp, E, stride, 4.0);
    return ext;
}

void write_density(const DensityField& h, std::ostream& os) {
    JsonWriter w;
    w.begin_object();
    w.kv("dim", h.dim());
    w.key("box");
    w.begin_object();
    w.key("center");
    w.begin_array();
    for (int i = 0; i < h.dim(); ++i) w.value(h.box.center[i]);
    w.end_array();
    w.kv("half_side", h.box.half_side);
    w.end_object();
    w.kv("res", h.res);
    w.kv("q", h.q);
    w.key("values");
    w.begin_array();
    for (double v : h.values) w.value(v);
    w.end_array();
    w.end_object();
    os << w.str() << "\n";
}

DensityField parse_density(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("density JSON parse failure: ") + e.what());
    }
    try {
        int dim = j.at("dim").get<int>();
        if (dim < 1 || dim > kMaxDim) throw config_error("density dim out of range 1..3");
        Cube box;
        box.center.dim = dim;
        const auto& c = j.at("box").at("center");
        if (static_cast<int>(c.size()) != dim) throw config_error("density box center arity mismatch");
        for (int i = 0; i < dim; ++i) box.center[i] = c.at(static_cast<size_t>(i)).get<double>();
        box.half_side = j.at("box").at("half_side").get<double>();
        int res = j.at("res").get<int>();
        double q = j.at("q").get<double>();
        std::vector<double> vals;
        for (const auto& v : j.at("values")) vals.push_back(v.get<double>());
        return make_density(box, res, q, std::move(vals));
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("density JSON schema violation: ") + e.what());
    }
}

void write_metric_csv(const MetricSample& s, std::ostream& os) {
    os << "i,j,rho,d\n";
    for (size_t i = 0; i < s.adj.size(); ++i) {
        bool has_later = false;
        for (const auto& [j, w] : s.adj[i]) {
            if (j > static_cast<int>(i)) has_later = true;
        }
        if (!has_later) continue;
        std::vector<double> dist = dijkstra(s.adj, {{static_cast<int>(i), 0.0}}, kInf);
        for (const auto& [j, w] : s.adj[i]) {
            if (j <= static_cast<int>(i)) continue;
            os << i << "," << j << "," << format_double(w) << ","
               << format_double(dist[static_cast<size_t>(j)]) << "\n";
        }
    }
    os.flush();
}

}  // namespace jetext
