#include "jetext/lacunae.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "jetext/report.hpp"

namespace jetext {

namespace {

std::vector<int> points_in_cube(const std::vector<Point>& E, const Cube& q) {
    std::vector<int> out;
    for (size_t i = 0; i < E.size(); ++i) {
        if (cube_contains(q, E[i])) out.push_back(static_cast<int>(i));
    }
    return out;
}

bool on_window_boundary(const Cube& q, const Cube& window) {
    for (int i = 0; i < q.dim(); ++i) {
        if (q.center[i] + q.half_side == window.center[i] + window.half_side) return true;
        if (q.center[i] - q.half_side == window.center[i] - window.half_side) return true;
    }
    return false;
}

}  // namespace

LacunaSet classify_lacunae(const WhitneyCover& cover) {
    LacunaSet set;
    set.cube_to_lacuna.assign(cover.cubes.size(), -1);

    std::map<std::vector<int>, int> true_classes;
    for (size_t q = 0; q < cover.cubes.size(); ++q) {
        std::vector<int> s10 = points_in_cube(cover.E, dilate(cover.cubes[q], 10.0));
        std::vector<int> s90 = points_in_cube(cover.E, dilate(cover.cubes[q], 90.0));
        if (s10 == s90) {
            auto it = true_classes.find(s10);
            int id;
            if (it == true_classes.end()) {
                id = static_cast<int>(set.lacunae.size());
                true_classes.emplace(s10, id);
                Lacuna l;
                l.is_true = true;
                l.V = s10;
                set.lacunae.push_back(std::move(l));
            } else {
                id = it->second;
            }
            set.lacunae[static_cast<size_t>(id)].cube_ids.push_back(static_cast<int>(q));
            set.cube_to_lacuna[q] = id;
        } else {
            Lacuna l;
            l.is_true = false;
            l.V = s90;
            l.cube_ids.push_back(static_cast<int>(q));
            set.cube_to_lacuna[q] = static_cast<int>(set.lacunae.size());
            set.lacunae.push_back(std::move(l));
        }
    }

    std::vector<int> everything(cover.E.size());
    for (size_t i = 0; i < everything.size(); ++i) everything[i] = static_cast<int>(i);

    for (size_t li = 0; li < set.lacunae.size(); ++li) {
        Lacuna& l = set.lacunae[li];
        for (int q : l.cube_ids) {
            double d = cover.cubes[static_cast<size_t>(q)].diam();
            if (l.q_min < 0 || d < cover.cubes[static_cast<size_t>(l.q_min)].diam()) l.q_min = q;
            if (l.q_max < 0 || d > cover.cubes[static_cast<size_t>(l.q_max)].diam()) l.q_max = q;
        }
        bool boundary = std::any_of(l.cube_ids.begin(), l.cube_ids.end(), [&](int q) {
            return on_window_boundary(cover.cubes[static_cast<size_t>(q)], cover.window);
        });
        if (boundary && l.is_true && l.V == everything) {
            l.unbounded = true;
            if (set.l_max >= 0) {
                set.warnings.push_back("multiple boundary classes with V = E");
            } else {
                set.l_max = static_cast<int>(li);
            }
        } else if (boundary) {
            set.warnings.push_back("window-boundary lacuna treated as bounded");
        }
    }
    if (set.l_max < 0) {
        set.warnings.push_back("no boundary class with V = E; far-field centers fall back "
                               "to the largest lacuna");
    }
    return set;
}

double lacuna_diam(const Lacuna& l, const WhitneyCover& cover) {
    return cover.cubes[static_cast<size_t>(l.q_max)].diam();
}

double v_diam(const Lacuna& l, const WhitneyCover& cover) {
    double d = 0.0;
    for (size_t a = 0; a < l.V.size(); ++a) {
        for (size_t b = a + 1; b < l.V.size(); ++b) {
            d = std::max(d, uniform_dist(cover.E[static_cast<size_t>(l.V[a])],
                                         cover.E[static_cast<size_t>(l.V[b])]));
        }
    }
    return d;
}

int lacuna_projector(const Lacuna& l, const WhitneyCover& cover, const DyadicNets& nets,
                     const LacunaConstants& consts) {
    const std::vector<Point>& E = cover.E;
    if (l.V.size() == 1) return l.V[0];

    // first lexicographic pair realizing diam V
    std::vector<int> by_lex = l.V;
    std::sort(by_lex.begin(), by_lex.end(), [&](int a, int b) {
        return lex_less(E[static_cast<size_t>(a)], E[static_cast<size_t>(b)]);
    });
    int A = -1, B = -1;
    double dv = -1.0;
    for (size_t a = 0; a < by_lex.size(); ++a) {
        for (size_t b = a + 1; b < by_lex.size(); ++b) {
            double d = uniform_dist(E[static_cast<size_t>(by_lex[a])],
                                    E[static_cast<size_t>(by_lex[b])]);
            if (d > dv) {
                dv = d;
                A = by_lex[a];
                B = by_lex[b];
            }
        }
    }

    // 2^i < diam V <= 2^{i+1}
    int i_l = static_cast<int>(std::floor(std::log2(dv)));
    while (std::ldexp(1.0, i_l) >= dv) --i_l;
    while (std::ldexp(1.0, i_l + 1) < dv) ++i_l;

    int a_net = nets.nearest_in_level(E, E[static_cast<size_t>(A)], i_l - 2);
    int b_net = nets.nearest_in_level(E, E[static_cast<size_t>(B)], i_l - 2);
    double r = std::ldexp(1.0, i_l - 1);
    if (uniform_dist(E[static_cast<size_t>(A)], E[static_cast<size_t>(a_net)]) > r ||
        uniform_dist(E[static_cast<size_t>(B)], E[static_cast<size_t>(b_net)]) > r) {
        throw invariant_error("lacuna_projector: net point misses the 2^{i-1} radius");
    }
    int c;
    if (!nets.in_level(a_net, i_l + 2)) {
        c = a_net;
    } else if (!nets.in_level(b_net, i_l + 2)) {
        c = b_net;
    } else {
        throw invariant_error("lacuna_projector: both net candidates survive four levels up");
    }

    if (l.is_true && !l.unbounded && lacuna_diam(l, cover) > consts.sigma() * dv) {
        // deep-cube override: 2^{j-1} < diam(max cube)/sigma <= 2^j
        double target = lacuna_diam(l, cover) / consts.sigma();
        int j = static_cast<int>(std::ceil(std::log2(target)));
        while (std::ldexp(1.0, j) < target) ++j;
        while (std::ldexp(1.0, j - 1) >= target) --j;
        int d_l = -1;
        for (int v : l.V) {
            if (nets.in_level(v, j)) {
                if (d_l >= 0) throw invariant_error("lacuna_projector: deep-cube net point not unique");
                d_l = v;
            }
        }
        if (d_l < 0) throw invariant_error("lacuna_projector: deep-cube net point missing");
        if (!nets.in_level(d_l, j + consts.k())) return d_l;
    }
    return c;
}

void project_lacunae(LacunaSet& set, const WhitneyCover& cover, const DyadicNets& nets,
                     const LacunaConstants& consts) {
    for (Lacuna& l : set.lacunae) l.center = lacuna_projector(l, cover, nets, consts);
}

std::vector<ContactingPair> contacting_pairs(const LacunaSet& set, const WhitneyCover& cover) {
    std::map<std::pair<int, int>, ContactingPair> seen;
    for (size_t q = 0; q < cover.cubes.size(); ++q) {
        for (int j : cover.adjacency[q]) {
            if (j <= static_cast<int>(q)) continue;
            int la = set.cube_to_lacuna[q];
            int lb = set.cube_to_lacuna[static_cast<size_t>(j)];
            if (la == lb) continue;
            ContactingPair p;
            p.l1 = std::min(la, lb);
            p.l2 = std::max(la, lb);
            p.q1 = la == p.l1 ? static_cast<int>(q) : j;
            p.q2 = la == p.l1 ? j : static_cast<int>(q);
            seen.emplace(std::make_pair(p.l1, p.l2), p);
        }
    }
    std::vector<ContactingPair> out;
    out.reserve(seen.size());
    for (const auto& kv : seen) out.push_back(kv.second);
    return out;
}

void write_lacunae(const LacunaSet& set, const WhitneyCover& cover, std::ostream& os) {
    JsonWriter w;
    w.begin_object();
    w.kv("lacuna_count", set.lacunae.size());
    w.kv("cube_count", cover.cubes.size());
    w.kv("unbounded_index", set.l_max);
    w.key("warnings");
    w.begin_array();
    for (const std::string& s : set.warnings) w.value(s);
    w.end_array();
    w.key("lacunae");
    w.begin_array();
    for (const Lacuna& l : set.lacunae) {
        w.begin_object();
        w.kv("kind", l.is_true ? (l.unbounded ? "unbounded" : "true") : "elementary");
        w.kv("cube_count", l.cube_ids.size());
        w.key("V");
        w.begin_array();
        for (int v : l.V) w.value(v);
        w.end_array();
        w.kv("diam_min", cover.cubes[static_cast<size_t>(l.q_min)].diam());
        w.kv("diam_max", cover.cubes[static_cast<size_t>(l.q_max)].diam());
        w.kv("center", l.center);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    os << w.str() << "\n";
}

}  // namespace jetext
