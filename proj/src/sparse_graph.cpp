#include "jetext/sparse_graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>

#include "jetext/report.hpp"

namespace jetext {

SparseGraph build_graph(const WhitneyCover& cover, const LacunaSet& lacunae,
                        const LacunaConstants& consts) {
    for (const Lacuna& l : lacunae.lacunae) {
        if (l.center < 0) throw config_error("build_graph: lacunae not projected");
    }
    SparseGraph g;
    g.points = cover.E;
    g.gamma = consts.gamma();

    // one edge per vertex pair, witnessed by the first contacting cube pair
    struct Draft {
        int u, v, witness;
    };
    std::map<std::pair<int, int>, Draft> drafts;
    for (const ContactingPair& p : contacting_pairs(lacunae, cover)) {
        int a = lacunae.lacunae[static_cast<size_t>(p.l1)].center;
        int b = lacunae.lacunae[static_cast<size_t>(p.l2)].center;
        if (a == b) continue;
        Draft d{std::min(a, b), std::max(a, b), p.q1};
        drafts.emplace(std::make_pair(d.u, d.v), d);
    }

    // group edges by witness cube and split each witness M ways per axis
    std::map<int, std::vector<const Draft*>> by_witness;
    for (const auto& kv : drafts) by_witness[kv.second.witness].push_back(&kv.second);
    size_t m_split = 1;
    for (const auto& kv : by_witness) m_split = std::max(m_split, kv.second.size());

    std::map<std::pair<int, int>, Cube> certs;
    for (const auto& kv : by_witness) {
        const Cube& q = cover.cubes[static_cast<size_t>(kv.first)];
        double sub_half = q.half_side / static_cast<double>(m_split);
        for (size_t i = 0; i < kv.second.size(); ++i) {
            Cube k;
            k.center.dim = q.dim();
            k.half_side = 0.5 * sub_half;
            size_t rest = i;
            for (int d = 0; d < q.dim(); ++d) {
                size_t c = rest % m_split;
                rest /= m_split;
                k.center[d] = q.center[d] - q.half_side +
                              (2.0 * static_cast<double>(c) + 1.0) * sub_half;
            }
            certs.emplace(std::make_pair(kv.second[i]->u, kv.second[i]->v), k);
        }
    }

    for (const auto& kv : drafts) {
        GraphEdge e;
        e.u = kv.second.u;
        e.v = kv.second.v;
        e.certificate = certs.at(kv.first);
        g.edges.push_back(e);
    }
    return g;
}

SparsityReport verify_sparse(const SparseGraph& g) {
    SparsityReport r;
    auto note = [&](size_t e, const std::string& what) {
        r.violations.push_back("edge " + std::to_string(e) + ": " + what);
    };
    std::map<std::pair<int, int>, size_t> seen;
    for (size_t e = 0; e < g.edges.size(); ++e) {
        const GraphEdge& ed = g.edges[e];
        if (ed.u == ed.v) note(e, "loop");
        if (ed.u < 0 || ed.v < 0 || ed.u >= static_cast<int>(g.points.size()) ||
            ed.v >= static_cast<int>(g.points.size())) {
            note(e, "vertex out of range");
            continue;
        }
        auto key = std::make_pair(std::min(ed.u, ed.v), std::max(ed.u, ed.v));
        auto ins = seen.emplace(key, e);
        if (!ins.second) note(e, "duplicate of edge " + std::to_string(ins.first->second));

        Cube big = dilate(ed.certificate, g.gamma);
        if (!cube_contains(big, g.points[static_cast<size_t>(ed.u)]) ||
            !cube_contains(big, g.points[static_cast<size_t>(ed.v)])) {
            note(e, "endpoint outside gamma-dilated certificate");
        }
        double d = uniform_dist(g.points[static_cast<size_t>(ed.u)],
                                g.points[static_cast<size_t>(ed.v)]);
        if (ed.certificate.diam() > g.gamma * d) note(e, "certificate diameter above gamma * edge length");
    }
    for (size_t a = 0; a < g.edges.size(); ++a) {
        for (size_t b = a + 1; b < g.edges.size(); ++b) {
            if (cubes_intersect(g.edges[a].certificate, g.edges[b].certificate)) {
                note(a, "certificate intersects edge " + std::to_string(b));
            }
        }
    }
    return r;
}

double graph_seminorm(const JetField& field, const SparseGraph& g, double p) {
    validate_field(field);
    if (field.points.size() != g.points.size()) {
        throw config_error("graph_seminorm: field and graph size mismatch");
    }
    bool inf = std::isinf(p);
    if (!inf && p <= field.dim) throw config_error("graph_seminorm: p must exceed n");
    const auto& alphas = multi_indices_up_to(field.dim, field.m - 1);
    double acc = 0.0;
    for (const GraphEdge& e : g.edges) {
        const Point& x = field.points[static_cast<size_t>(e.u)];
        const Point& y = field.points[static_cast<size_t>(e.v)];
        double d = uniform_dist(x, y);
        double edge_sum = 0.0;
        for (const MultiIndex& a : alphas) {
            double diff = std::abs(jet_difference(field.polys[static_cast<size_t>(e.u)],
                                                  field.polys[static_cast<size_t>(e.v)], a, x));
            if (inf) {
                edge_sum += diff / std::pow(d, field.m - a.order());
            } else {
                edge_sum += std::pow(diff, p) /
                            std::pow(d, (field.m - a.order()) * p - field.dim);
            }
        }
        acc = inf ? std::max(acc, edge_sum) : acc + edge_sum;
    }
    return inf ? acc : std::pow(acc, 1.0 / p);
}

namespace {

std::vector<std::vector<std::pair<int, double>>> adjacency_lists(const SparseGraph& g) {
    std::vector<std::vector<std::pair<int, double>>> adj(g.points.size());
    for (const GraphEdge& e : g.edges) {
        double w = uniform_dist(g.points[static_cast<size_t>(e.u)],
                                g.points[static_cast<size_t>(e.v)]);
        adj[static_cast<size_t>(e.u)].emplace_back(e.v, w);
        adj[static_cast<size_t>(e.v)].emplace_back(e.u, w);
    }
    return adj;
}

}  // namespace

bool graph_connected(const SparseGraph& g) {
    if (g.points.empty()) return true;
    std::vector<int> parent(g.points.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    };
    for (const GraphEdge& e : g.edges) parent[static_cast<size_t>(find(e.u))] = find(e.v);
    int root = find(0);
    for (size_t i = 1; i < g.points.size(); ++i) {
        if (find(static_cast<int>(i)) != root) return false;
    }
    return true;
}

GeodesicResult graph_geodesic(const SparseGraph& g, int x, int y) {
    if (x < 0 || y < 0 || x >= static_cast<int>(g.points.size()) ||
        y >= static_cast<int>(g.points.size())) {
        throw config_error("graph_geodesic: vertex out of range");
    }
    GeodesicResult res;
    if (x == y) {
        res.path = {x};
        return res;
    }
    auto adj = adjacency_lists(g);
    std::vector<double> dist(g.points.size(), kInf);
    std::vector<int> prev(g.points.size(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[static_cast<size_t>(x)] = 0.0;
    heap.emplace(0.0, x);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[static_cast<size_t>(u)]) continue;
        if (u == y) break;
        for (auto [v, w] : adj[static_cast<size_t>(u)]) {
            if (d + w < dist[static_cast<size_t>(v)]) {
                dist[static_cast<size_t>(v)] = d + w;
                prev[static_cast<size_t>(v)] = u;
                heap.emplace(d + w, v);
            }
        }
    }
    if (std::isinf(dist[static_cast<size_t>(y)])) {
        throw invariant_error("graph_geodesic: vertices not connected");
    }
    res.length = dist[static_cast<size_t>(y)];
    for (int v = y; v >= 0; v = prev[static_cast<size_t>(v)]) res.path.push_back(v);
    std::reverse(res.path.begin(), res.path.end());
    return res;
}

void write_graph_json(const SparseGraph& g, std::ostream& os) {
    JsonWriter w;
    w.begin_object();
    w.kv("vertex_count", g.points.size());
    w.kv("edge_count", g.edges.size());
    w.kv("gamma", g.gamma);
    w.key("vertices");
    w.begin_array();
    for (const Point& x : g.points) {
        w.begin_array();
        for (int i = 0; i < x.dim; ++i) w.value(x[i]);
        w.end_array();
    }
    w.end_array();
    w.key("edges");
    w.begin_array();
    for (const GraphEdge& e : g.edges) {
        w.begin_object();
        w.kv("u", e.u);
        w.kv("v", e.v);
        w.key("certificate");
        w.begin_object();
        w.key("center");
        w.begin_array();
        for (int i = 0; i < e.certificate.dim(); ++i) w.value(e.certificate.center[i]);
        w.end_array();
        w.kv("half_side", e.certificate.half_side);
        w.end_object();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    os << w.str() << "\n";
}

void write_graph_dot(const SparseGraph& g, std::ostream& os) {
    os << "graph sparse {\n";
    for (size_t i = 0; i < g.points.size(); ++i) {
        os << "  v" << i << " [label=\"" << i << "\"];\n";
    }
    for (const GraphEdge& e : g.edges) {
        double w = uniform_dist(g.points[static_cast<size_t>(e.u)],
                                g.points[static_cast<size_t>(e.v)]);
        os << "  v" << e.u << " -- v" << e.v << " [label=\"" << format_double(w) << "\"];\n";
    }
    os << "}\n";
}

}  // namespace jetext
