#include "jetext/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>

#include "jetext/sparse_graph.hpp"
#include "jetext/taylor.hpp"

namespace jetext {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxGaussOrder = 32;

GaussRule build_rule(int g) {
    GaussRule rule;
    rule.nodes.assign(static_cast<size_t>(g), 0.0);
    rule.weights.assign(static_cast<size_t>(g), 0.0);
    for (int i = 0; i < (g + 1) / 2; ++i) {
        // i-th root from the right; Newton on the recurrence-evaluated P_g
        double x = std::cos(kPi * (i + 0.75) / (g + 0.5));
        if (g % 2 == 1 && i == (g - 1) / 2) x = 0.0;
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= g; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = g == 1 ? 1.0 : static_cast<double>(g) * (x * p1 - p0) / (x * x - 1.0);
            double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<size_t>(g - 1 - i)] = x;
        rule.weights[static_cast<size_t>(g - 1 - i)] = w;
        rule.nodes[static_cast<size_t>(i)] = -x;
        rule.weights[static_cast<size_t>(i)] = w;
    }
    return rule;
}

// Runs fn(x, w) over the tensor Gauss points of the cell; w carries the full
// dim-dimensional jacobian.
template <typename F>
void gauss_cell(const Cube& cell, const GaussRule& rule, F&& fn) {
    int d = cell.dim();
    int g = static_cast<int>(rule.nodes.size());
    int total = 1;
    for (int i = 0; i < d; ++i) total *= g;
    for (int t = 0; t < total; ++t) {
        int rem = t;
        Point x;
        x.dim = d;
        double w = 1.0;
        for (int k = 0; k < d; ++k) {
            int i = rem % g;
            rem /= g;
            x[k] = cell.center[k] + cell.half_side * rule.nodes[static_cast<size_t>(i)];
            w *= rule.weights[static_cast<size_t>(i)] * cell.half_side;
        }
        fn(x, w);
    }
}

template <typename F>
double window_integral(const Cube& window, int cells, int order, F&& f) {
    const GaussRule& rule = gauss_legendre(order);
    int d = window.dim();
    double h = window.half_side / cells;
    int total = 1;
    for (int i = 0; i < d; ++i) total *= cells;
    double acc = 0.0;
    for (int t = 0; t < total; ++t) {
        int rem = t;
        Cube cell;
        cell.center.dim = d;
        cell.half_side = h;
        for (int k = 0; k < d; ++k) {
            int i = rem % cells;
            rem /= cells;
            cell.center[k] = window.center[k] - window.half_side + (2.0 * i + 1.0) * h;
        }
        gauss_cell(cell, rule, [&](const Point& x, double w) { acc += w * f(x); });
    }
    return acc;
}

// p-th power sum of one pair ordering, evaluated at point a.
double ordered_pair_power(const JetField& f, int a, int b, double p) {
    const Point& x = f.points[static_cast<size_t>(a)];
    double d = uniform_dist(x, f.points[static_cast<size_t>(b)]);
    double s = 0.0;
    for (const MultiIndex& al : multi_indices_up_to(f.dim, f.m - 1)) {
        double diff = std::abs(
            jet_difference(f.polys[static_cast<size_t>(a)], f.polys[static_cast<size_t>(b)], al, x));
        if (diff == 0.0) continue;
        double expo = static_cast<double>(f.m - al.order()) * p - f.dim;
        s += std::pow(diff, p) / std::pow(d, expo);
    }
    return s;
}

double pair_power(const JetField& f, int a, int b, double p) {
    return std::max(ordered_pair_power(f, a, b, p), ordered_pair_power(f, b, a, p));
}

struct PairEntry {
    Point mid;
    double floor_half = 0.0;  // smallest half-side whose gamma-dilate holds both endpoints
    double term = 0.0;
    uint32_t vmask = 0;
};

// Depth-first walk over certified families: every node of the tree is a
// family whose floor certificates are pairwise disjoint (and, when asked,
// whose pairs share no vertex). Terms are nonnegative, so the maximum over
// all families is picked up along the way.
struct FamilySearch {
    const std::vector<PairEntry>& pairs;
    const std::vector<std::vector<bool>>& compat;
    bool vertex_disjoint = false;
    double best = 0.0;
    std::vector<size_t> chosen;

    void run(size_t next, uint32_t vmask, double sum) {
        best = std::max(best, sum);
        for (size_t q = next; q < pairs.size(); ++q) {
            if (vertex_disjoint && (vmask & pairs[q].vmask) != 0) continue;
            bool ok = true;
            for (size_t c : chosen) {
                if (!compat[c][q]) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            chosen.push_back(q);
            run(q + 1, vmask | pairs[q].vmask, sum + pairs[q].term);
            chosen.pop_back();
        }
    }
};

double trace_bruteforce_impl(const JetField& field, double p, double gamma, double max_dist) {
    validate_field(field);
    int n = field.dim;
    size_t count = field.points.size();
    if (count > 8) throw config_error("trace norm brute force handles at most 8 points");
    if (p <= static_cast<double>(n)) throw config_error("trace norm requires p > n");
    if (gamma < 1.0) throw config_error("sparsity constant must be at least 1");

    std::vector<PairEntry> pairs;
    for (size_t a = 0; a < count; ++a) {
        for (size_t b = a + 1; b < count; ++b) {
            double d = uniform_dist(field.points[a], field.points[b]);
            if (d > max_dist) continue;
            PairEntry e;
            e.mid.dim = n;
            for (int k = 0; k < n; ++k) e.mid[k] = 0.5 * (field.points[a][k] + field.points[b][k]);
            e.floor_half = d / (2.0 * gamma);
            e.term = pair_power(field, static_cast<int>(a), static_cast<int>(b), p);
            e.vmask = (1u << a) | (1u << b);
            pairs.push_back(e);
        }
    }
    if (pairs.empty()) return 0.0;

    // Floor-size disjointness decides certification: the greedy shrink sweep
    // from full-size midpoint cubes only ever shrinks overlapping cubes, so
    // it succeeds exactly when the floors are already pairwise disjoint.
    // The margin keeps the certificate valid in exact arithmetic.
    size_t np = pairs.size();
    std::vector<std::vector<bool>> compat(np, std::vector<bool>(np, false));
    for (size_t i = 0; i < np; ++i) {
        for (size_t j = i + 1; j < np; ++j) {
            double need = (pairs[i].floor_half + pairs[j].floor_half) * (1.0 + 1e-12);
            bool apart = false;
            for (int k = 0; k < n; ++k) {
                if (std::abs(pairs[i].mid[k] - pairs[j].mid[k]) > need) {
                    apart = true;
                    break;
                }
            }
            compat[i][j] = compat[j][i] = apart;
        }
    }

    FamilySearch search{pairs, compat, count > 6, 0.0, {}};
    search.run(0, 0u, 0.0);
    return std::pow(search.best, 1.0 / p);
}

// Unvalidated pointwise sharp maximum; callers validated the field.
double sharp_value(const JetField& field, const Point& x) {
    size_t k = field.points.size();
    MultiIndex zero;
    zero.dim = field.dim;
    std::vector<double> val(k), dist(k);
    for (size_t a = 0; a < k; ++a) {
        val[a] = poly_eval_deriv(field.polys[a], zero, x);
        dist[a] = std::pow(uniform_dist(x, field.points[a]), field.m);
    }
    double best = 0.0;
    for (size_t a = 0; a < k; ++a) {
        for (size_t b = a + 1; b < k; ++b) {
            double den = dist[a] + dist[b];
            if (den == 0.0) continue;
            best = std::max(best, std::abs(val[a] - val[b]) / den);
        }
    }
    return best;
}

void require_window(const std::vector<Point>& pts, const Cube& window, int m, int order,
                    int cells) {
    if (order < m + 1) throw config_error("quadrature order must be at least m + 1");
    if (order > kMaxGaussOrder) throw config_error("quadrature order above 32");
    if (cells < 1) throw config_error("cells_per_axis must be positive");
    if (window.dim() != pts[0].dim || !(window.half_side > 0.0)) {
        throw config_error("quadrature window unset or of the wrong dimension");
    }
    double spread = 0.0;
    for (const Point& q : pts) {
        if (!cube_contains(window, q)) throw config_error("window must contain the data set");
        spread = std::max(spread, uniform_dist(q, window.center));
    }
    if (window.half_side < 2.0 * spread) {
        throw config_error("window too small for the tail bound; its half-side must be at least "
                           "twice the data spread around its center");
    }
}

// A with |(P_a - P_b)(x)| <= A * t^(m-1) for t = ||x - c|| >= rw.
double growth_coeff(const Poly& pa, const Poly& pb, int m, const Point& c, double rw) {
    Poly d = poly_axpby(1.0, poly_rebase(pa, c), -1.0, poly_rebase(pb, c));
    const auto& idx = multi_indices_up_to(d.dim(), d.degree);
    double acc = 0.0;
    for (size_t i = 0; i < idx.size(); ++i) {
        double cc = std::abs(d.coeffs[i]) / multi_factorial(idx[i]);
        if (cc == 0.0) continue;
        acc += cc * std::pow(rw, idx[i].order() - (m - 1));
    }
    return acc;
}

// Integral over ||x - c|| > rw of (a_max * 2^log2f / t)^p in the uniform
// norm, where the integrand envelope decays like t^-p.
double tail_power(double a_max, double log2f, int n, double p, double rw) {
    if (a_max == 0.0) return 0.0;
    return std::pow(a_max, p) * std::pow(2.0, log2f * p) * n * std::pow(2.0, n) *
           std::pow(rw, n - p) / (p - static_cast<double>(n));
}

// sum over |a| = m of |D^a F(x)|^p with one shared partition-of-unity pass.
double mth_power_sum(const ExtensionPlan& plan, const std::vector<MultiIndex>& alphas,
                     const Point& x, double p) {
    int m = plan.field.m;
    PouJets pj = pou_jets(plan.cover, x, m, plan.spec);
    const auto& betas = multi_indices_up_to(x.dim, m);
    // For |alpha| = m, subtracting any degree m-1 reference polynomial from
    // every P_Q leaves D^alpha F unchanged (the bump derivatives sum to
    // zero), but it replaces the cancellation of terms the size of
    // D^beta phi ~ h^-m with difference polynomials that are already small.
    // Without it, fields drawn from one global polynomial read back as
    // roundoff amplified by h^-m instead of as zero.
    const Poly& ref = plan.p_q[static_cast<size_t>(pj.cubes[0])];
    std::vector<Poly> diffs;
    diffs.reserve(pj.cubes.size());
    for (int q : pj.cubes) {
        diffs.push_back(
            poly_axpby(1.0, poly_rebase(plan.p_q[static_cast<size_t>(q)], ref.base), -1.0, ref));
    }
    double acc = 0.0;
    for (const MultiIndex& alpha : alphas) {
        double v = 0.0;
        for (size_t s = 0; s < pj.cubes.size(); ++s) {
            for (const MultiIndex& beta : betas) {
                if (!multi_index_leq(beta, alpha)) continue;
                double phi = mtaylor_deriv(pj.jets[s], beta);
                if (phi == 0.0) continue;
                v += multi_binomial(alpha, beta) * phi *
                     poly_eval_deriv(diffs[s], multi_index_sub(alpha, beta), x);
            }
        }
        acc += std::pow(std::abs(v), p);
    }
    return acc;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 1 || order > kMaxGaussOrder) throw config_error("gauss_legendre: order out of [1, 32]");
    static const std::vector<GaussRule> rules = [] {
        std::vector<GaussRule> r(kMaxGaussOrder + 1);
        for (int g = 1; g <= kMaxGaussOrder; ++g) r[static_cast<size_t>(g)] = build_rule(g);
        return r;
    }();
    return rules[static_cast<size_t>(order)];
}

double trace_norm_bruteforce(const JetField& field, double p, double gamma) {
    return trace_bruteforce_impl(field, p, gamma, kInf);
}

double sharp_max_eval(const JetField& field, const Point& x) {
    validate_field(field);
    if (x.dim != field.dim) throw config_error("sharp_max_eval: dimension mismatch");
    return sharp_value(field, x);
}

WindowedLp sharp_max_lp(const JetField& field, const QuadratureSpec& quad) {
    validate_field(field);
    WindowedLp out;
    if (field.points.size() < 2) return out;
    require_window(field.points, quad.window, field.m, quad.order, quad.cells_per_axis);
    double p = field.p;
    double integral = window_integral(quad.window, quad.cells_per_axis, quad.order,
                                      [&](const Point& x) { return std::pow(sharp_value(field, x), p); });
    out.value = std::pow(integral, 1.0 / p);
    double a_max = 0.0;
    for (size_t a = 0; a < field.points.size(); ++a) {
        for (size_t b = a + 1; b < field.points.size(); ++b) {
            a_max = std::max(a_max, growth_coeff(field.polys[a], field.polys[b], field.m,
                                                 quad.window.center, quad.window.half_side));
        }
    }
    out.tail_bound = std::pow(
        tail_power(a_max, static_cast<double>(field.m - 1), field.dim, p, quad.window.half_side),
        1.0 / p);
    return out;
}

PhiPsi phi_psi_m1(const std::vector<Point>& E, const std::vector<double>& f, double p,
                  const QuadratureSpec& quad) {
    if (E.empty()) throw config_error("phi_psi_m1: empty point set");
    if (f.size() != E.size()) throw config_error("phi_psi_m1: one value per point required");
    int n = E[0].dim;
    if (p <= static_cast<double>(n)) throw config_error("phi_psi_m1: requires p > n");

    JetField field;
    field.points = E;
    field.m = 1;
    field.p = p;
    field.dim = n;
    field.polys.reserve(E.size());
    for (size_t i = 0; i < E.size(); ++i) {
        Poly c = make_poly(E[i], 0);
        c.coeffs[0] = f[i];
        field.polys.push_back(c);
    }
    validate_field(field);

    PhiPsi out;
    if (E.size() <= 8) {
        out.phi = trace_norm_bruteforce(field, p, kDefaultPairGamma);
        out.phi_exhaustive = true;
    } else {
        int depth = resolving_depth(E, 4.0);
        WhitneyCover cover = whitney_decompose(E, 4.0, depth);
        LacunaSet lac = classify_lacunae(cover);
        DyadicNets nets = build_dyadic_nets(E);
        LacunaConstants consts;
        project_lacunae(lac, cover, nets, consts);
        SparseGraph g = build_graph(cover, lac, consts);
        out.phi = graph_seminorm(field, g, p);
        out.phi_exhaustive = false;
    }

    if (E.size() >= 2) {
        require_window(E, quad.window, 1, quad.order, quad.cells_per_axis);
        double integral =
            window_integral(quad.window, quad.cells_per_axis, quad.order, [&](const Point& x) {
                std::vector<double> dp(E.size());
                for (size_t a = 0; a < E.size(); ++a) dp[a] = std::pow(uniform_dist(x, E[a]), p);
                double best = 0.0;
                for (size_t a = 0; a < E.size(); ++a) {
                    for (size_t b = a + 1; b < E.size(); ++b) {
                        double den = dp[a] + dp[b];
                        if (den == 0.0) continue;
                        best = std::max(best, std::pow(std::abs(f[a] - f[b]), p) / den);
                    }
                }
                return best;
            });
        out.psi = std::pow(integral, 1.0 / p);
        double a_max = 0.0;
        for (size_t a = 0; a < E.size(); ++a) {
            for (size_t b = a + 1; b < E.size(); ++b) a_max = std::max(a_max, std::abs(f[a] - f[b]));
        }
        // envelope |df|^p / (2 (t/2)^p) = (a_max 2^((p-1)/p) / t)^p
        out.psi_tail =
            std::pow(tail_power(a_max, (p - 1.0) / p, n, p, quad.window.half_side), 1.0 / p);
    }
    return out;
}

SobolevResult sobolev_seminorm(const ExtensionPlan& plan, double p, const QuadratureSpec& quad) {
    int n = plan.field.dim;
    int m = plan.field.m;
    if (p <= static_cast<double>(n)) throw config_error("sobolev_seminorm: requires p > n");
    if (quad.order < m + 1) throw config_error("quadrature order must be at least m + 1");
    if (quad.order + 1 > kMaxGaussOrder) throw config_error("quadrature order above 31");
    const Cube& cw = plan.cover.window;
    if (quad.window.dim() != n) throw config_error("sobolev_seminorm: window dimension mismatch");
    for (int k = 0; k < n; ++k) {
        if (std::abs(quad.window.center[k] - cw.center[k]) >
            quad.window.half_side - cw.half_side + 1e-12 * cw.half_side) {
            throw config_error("quadrature window must contain the cover window");
        }
    }

    std::vector<MultiIndex> alphas;
    for (const MultiIndex& a : multi_indices_up_to(n, m)) {
        if (a.order() == m) alphas.push_back(a);
    }

    // The integrand spikes hard wherever touching cubes carry different
    // centers: |D^m F| grows like the jet jump over the local cube size, and
    // the jump can sit at the gamma_tilde-dilate scale. A fixed rule per cube
    // cannot resolve those bands, so each cover cube is refined adaptively,
    // worst absolute error first, until the error sum is negligible or the
    // cell budget runs out. Every cell is integrated at orders g and g+1;
    // their totals feed the coarseness guard below. Outside the cover window
    // F is its far polynomial of degree m-1, so the rest of the quad window
    // integrates to zero.
    const GaussRule& rule_lo = gauss_legendre(quad.order);
    const GaussRule& rule_hi = gauss_legendre(quad.order + 1);
    struct QuadCell {
        Cube box;
        double lo = 0.0;
        double hi = 0.0;
        double err() const { return std::abs(hi - lo); }
        bool operator<(const QuadCell& other) const { return err() < other.err(); }
    };
    auto measure = [&](const Cube& box) {
        QuadCell c;
        c.box = box;
        gauss_cell(box, rule_lo,
                   [&](const Point& x, double w) { c.lo += w * mth_power_sum(plan, alphas, x, p); });
        gauss_cell(box, rule_hi,
                   [&](const Point& x, double w) { c.hi += w * mth_power_sum(plan, alphas, x, p); });
        return c;
    };
    std::priority_queue<QuadCell> cells;
    double totals[2] = {0.0, 0.0};
    double err_sum = 0.0;
    auto push_cell = [&](QuadCell c) {
        totals[0] += c.lo;
        totals[1] += c.hi;
        err_sum += c.err();
        cells.push(std::move(c));
    };
    for (const Cube& cube : plan.cover.cubes) push_cell(measure(cube));
    int budget = quad.max_cells - static_cast<int>(plan.cover.cubes.size());
    int children = 1 << n;
    double plateau = kInf;
    int until_checkpoint = 512;
    while (budget >= children && !cells.empty() && err_sum > 0.002 * totals[1]) {
        QuadCell worst = cells.top();
        cells.pop();
        totals[0] -= worst.lo;
        totals[1] -= worst.hi;
        err_sum -= worst.err();
        for (int mask = 0; mask < children; ++mask) {
            Cube child;
            child.half_side = 0.5 * worst.box.half_side;
            child.center.dim = n;
            for (int k = 0; k < n; ++k) {
                double off = (mask >> k) & 1 ? child.half_side : -child.half_side;
                child.center[k] = worst.box.center[k] + off;
            }
            push_cell(measure(child));
        }
        budget -= children;
        // refinement that stops moving the total is resolving roundoff, not
        // structure; bail out instead of burning the budget on noise
        if (--until_checkpoint == 0) {
            until_checkpoint = 512;
            if (std::abs(totals[1] - plateau) <= 1e-9 * totals[1]) break;
            plateau = totals[1];
        }
    }
    // 1e-24 floor: pth-power sums of pure cancellation noise never converge
    // in relative terms, and the guard would reject honest zero seminorms
    if (totals[1] > 1e-24 && std::abs(totals[0] - totals[1]) > 0.05 * totals[1]) {
        throw config_error("quadrature order too low: successive orders disagree by more than 5%");
    }

    SobolevResult out;
    out.value = std::pow(totals[1], 1.0 / p);
    out.collar.measure = plan.cover.collar_measure;
    double est = 0.0;
    for (size_t q = 0; q < plan.cover.cubes.size(); ++q) {
        if (plan.cover.levels[q] != plan.cover.depth_cap) continue;
        est = std::max(est, mth_power_sum(plan, alphas, plan.cover.cubes[q].center, p));
    }
    out.collar.bound = out.collar.measure * est;
    return out;
}

double oscillation_sum(const std::function<double(const Point&)>& G,
                       const std::vector<Cube>& cubes, const std::vector<Point>& points,
                       double p) {
    if (cubes.empty()) throw config_error("oscillation_sum: no cubes");
    if (points.size() != cubes.size()) throw config_error("oscillation_sum: one point per cube");
    if (!(p > 0.0)) throw config_error("oscillation_sum: p must be positive");
    int n = cubes[0].dim();
    double h = cubes[0].half_side;
    if (!(h > 0.0)) throw config_error("oscillation_sum: degenerate cube");
    for (const Cube& q : cubes) {
        if (q.dim() != n) throw config_error("oscillation_sum: mixed dimensions");
        if (std::abs(q.half_side - h) > 1e-12 * h) throw config_error("oscillation_sum: cubes must be equal");
    }
    for (size_t i = 0; i < cubes.size(); ++i) {
        for (size_t j = i + 1; j < cubes.size(); ++j) {
            bool apart = false;
            for (int k = 0; k < n; ++k) {
                if (std::abs(cubes[i].center[k] - cubes[j].center[k]) >=
                    (cubes[i].half_side + cubes[j].half_side) * (1.0 - 1e-12)) {
                    apart = true;
                    break;
                }
            }
            if (!apart) throw config_error("oscillation_sum: cube interiors overlap");
        }
    }
    double acc = 0.0;
    for (size_t i = 0; i < cubes.size(); ++i) {
        if (!cube_contains(cubes[i], points[i])) {
            throw config_error("oscillation_sum: marked point outside its cube");
        }
        double osc = std::abs(G(points[i]) - G(cubes[i].center));
        if (osc == 0.0) continue;
        acc += std::pow(osc, p) / std::pow(cubes[i].diam(), p - static_cast<double>(n));
    }
    return acc;
}

WmpParts wmp_norm_parts(const ExtensionPlan& plan, double eps, double p, double gamma) {
    const JetField& field = plan.field;
    int n = field.dim;
    if (!(eps > 0.0)) throw config_error("wmp_norm_parts: eps must be positive");
    if (p <= static_cast<double>(n)) throw config_error("wmp_norm_parts: requires p > n");
    if (gamma < 1.0) throw config_error("wmp_norm_parts: sparsity constant must be at least 1");

    WmpParts out;
    size_t count = field.points.size();

    MultiIndex zero;
    zero.dim = n;
    double data_acc = 0.0;
    for (size_t i = 0; i < count; ++i) {
        double sep = kInf;
        for (size_t j = 0; j < count; ++j) {
            if (j != i) sep = std::min(sep, uniform_dist(field.points[i], field.points[j]));
        }
        double w = std::min(eps, 0.5 * sep);
        double v = std::abs(poly_eval_deriv(field.polys[i], zero, field.points[i]));
        if (v == 0.0) continue;
        data_acc += std::pow(w, n) * std::pow(v, p);
    }
    out.data_norm = std::pow(data_acc, 1.0 / p);

    if (count <= 8) {
        out.pair_part = trace_bruteforce_impl(field, p, gamma, eps);
        out.pair_part_exhaustive = true;
    } else {
        SparseGraph g = build_graph(plan.cover, plan.lacunae, plan.consts);
        double s = 0.0;
        for (const GraphEdge& e : g.edges) {
            if (uniform_dist(field.points[static_cast<size_t>(e.u)],
                             field.points[static_cast<size_t>(e.v)]) > eps) {
                continue;
            }
            s += pair_power(field, e.u, e.v, p);
        }
        out.pair_part = std::pow(s, 1.0 / p);
        out.pair_part_exhaustive = false;
    }

    double lac_acc = 0.0;
    for (const Lacuna& l : plan.lacunae.lacunae) {
        if (l.center < 0) throw invariant_error("wmp_norm_parts: lacuna without a center");
        const Point& s_pt = plan.cover.E[static_cast<size_t>(l.center)];
        const Poly& poly = field.polys[static_cast<size_t>(l.center)];
        double dl = std::min(eps, lacuna_diam(l, plan.cover));
        for (const MultiIndex& al : multi_indices_up_to(n, field.m - 1)) {
            double v = std::abs(poly_eval_deriv(poly, al, s_pt));
            if (v == 0.0) continue;
            lac_acc += std::pow(dl, al.order() * p + n) * std::pow(v, p);
        }
    }
    out.lacuna_part = std::pow(lac_acc, 1.0 / p);

    out.total = out.data_norm + out.pair_part + out.lacuna_part;
    return out;
}

}  // namespace jetext
