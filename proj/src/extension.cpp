#include "jetext/extension.hpp"

#include <algorithm>

#include <cmath>
#include <ostream>

#include "jetext/report.hpp"

namespace jetext {

namespace {

int find_data_point(const ExtensionPlan& plan, const Point& x) {
    for (size_t i = 0; i < plan.cover.E.size(); ++i) {
        if (uniform_dist(plan.cover.E[i], x) == 0.0) return static_cast<int>(i);
    }
    return -1;
}

// product-rule sum over the supporting bumps with per-cube polynomials;
// include(q) decides whether a cube contributes its polynomial
template <typename Include>
double bump_sum(const ExtensionPlan& plan, const Point& x, const MultiIndex& alpha,
                Include include) {
    double acc = 0.0;
    const auto& betas = multi_indices_up_to(x.dim, alpha.order());
    PouJets pj = pou_jets(plan.cover, x, alpha.order(), plan.spec);
    for (size_t s = 0; s < pj.cubes.size(); ++s) {
        int q = pj.cubes[s];
        if (!include(q)) continue;
        const Poly& pq = plan.p_q[static_cast<size_t>(q)];
        double cube_acc = 0.0;
        for (const MultiIndex& beta : betas) {
            if (!multi_index_leq(beta, alpha)) continue;
            double phi = mtaylor_deriv(pj.jets[s], beta);
            if (phi == 0.0) continue;
            cube_acc += multi_binomial(alpha, beta) * phi *
                        poly_eval_deriv(pq, multi_index_sub(alpha, beta), x);
        }
        acc += cube_acc;
    }
    return acc;
}

// Differenced form of the same sum: since the bumps sum to one, subtracting
// a reference jet from every cube polynomial shifts the total by exactly
// D^alpha P_ref(x). Assembling F as P_ref plus small corrections avoids the
// cancellation between h^{-|beta|}-sized terms that otherwise turns fields
// drawn from one global polynomial into amplified roundoff.
double bump_sum_stable(const ExtensionPlan& plan, const Point& x, const MultiIndex& alpha) {
    const auto& betas = multi_indices_up_to(x.dim, alpha.order());
    PouJets pj = pou_jets(plan.cover, x, alpha.order(), plan.spec);
    const Poly& ref = plan.p_q[static_cast<size_t>(pj.cubes[0])];
    double acc = poly_eval_deriv(ref, alpha, x);
    for (size_t s = 1; s < pj.cubes.size(); ++s) {
        const Poly& pq = plan.p_q[static_cast<size_t>(pj.cubes[s])];
        Poly diff = poly_axpby(1.0, poly_rebase(pq, ref.base), -1.0, ref);
        double cube_acc = 0.0;
        for (const MultiIndex& beta : betas) {
            if (!multi_index_leq(beta, alpha)) continue;
            double phi = mtaylor_deriv(pj.jets[s], beta);
            if (phi == 0.0) continue;
            cube_acc += multi_binomial(alpha, beta) * phi *
                        poly_eval_deriv(diff, multi_index_sub(alpha, beta), x);
        }
        acc += cube_acc;
    }
    return acc;
}

void check_orders(const ExtensionPlan& plan, const MultiIndex& alpha, bool on_data) {
    if (alpha.dim != plan.field.dim) throw config_error("extend_eval: alpha dimension mismatch");
    int limit = on_data ? plan.field.m - 1 : plan.field.m + 1;
    if (alpha.order() > limit) {
        throw config_error(on_data ? "extend_eval: jets only carry orders below m at data points"
                                   : "extend_eval: derivative order exceeds m+1");
    }
}

[[noreturn]] void collar_failure(const ExtensionPlan& plan, const Point& x) {
    double d = uniform_dist(x, plan.cover.E);
    throw config_error("extend_eval: point lies in the collar, distance " + format_double(d) +
                       " from the data set");
}

}  // namespace

ExtensionPlan plan_extension(const JetField& field, const WhitneyCover& cover,
                             const LacunaSet& lacunae, const LacunaConstants& consts,
                             const BumpSpec& spec) {
    validate_field(field);
    if (field.points.size() != cover.E.size()) {
        throw config_error("plan_extension: field and cover disagree on the point set");
    }
    for (size_t i = 0; i < cover.E.size(); ++i) {
        if (uniform_dist(field.points[i], cover.E[i]) != 0.0) {
            throw config_error("plan_extension: field and cover disagree on the point set");
        }
    }
    if (lacunae.cube_to_lacuna.size() != cover.cubes.size()) {
        throw config_error("plan_extension: lacuna classification does not match the cover");
    }

    ExtensionPlan plan;
    plan.cover = cover;
    plan.lacunae = lacunae;
    plan.field = field;
    plan.spec = spec;
    plan.consts = consts;
    plan.warnings = lacunae.warnings;

    double sigma_near = 0.5 * (consts.gamma_tilde + 1.0);
    plan.a_q.resize(cover.cubes.size());
    plan.p_q.resize(cover.cubes.size());
    for (size_t q = 0; q < cover.cubes.size(); ++q) {
        const Lacuna& lac = lacunae.lacunae[static_cast<size_t>(lacunae.cube_to_lacuna[q])];
        if (lac.center < 0) {
            throw invariant_error("plan_extension: lacuna center missing; run the projector");
        }
        const Point& a = cover.E[static_cast<size_t>(lac.center)];
        const Cube& cube = cover.cubes[q];
        if (!cube_contains(dilate(cube, consts.gamma_tilde), a)) {
            throw invariant_error("plan_extension: assigned center escapes gamma_tilde Q");
        }
        double to_e = uniform_dist(cube, cover.E);
        if (uniform_dist(a, cube) > sigma_near * to_e * (1.0 + 1e-12)) {
            throw invariant_error("plan_extension: assigned center is not sigma-nearest");
        }
        plan.a_q[q] = lac.center;
        plan.p_q[q] = field.polys[static_cast<size_t>(lac.center)];
    }

    int far_center = -1;
    if (lacunae.l_max >= 0) {
        far_center = lacunae.lacunae[static_cast<size_t>(lacunae.l_max)].center;
    } else {
        double best = -1.0;
        for (const Lacuna& lac : lacunae.lacunae) {
            double d = lacuna_diam(lac, cover);
            if (d > best) {
                best = d;
                far_center = lac.center;
            }
        }
        plan.warnings.push_back("no boundary lacuna; far polynomial drawn from the largest one");
    }
    if (far_center < 0) throw invariant_error("plan_extension: no usable far polynomial");
    plan.far_poly = field.polys[static_cast<size_t>(far_center)];
    return plan;
}

double extend_eval(const ExtensionPlan& plan, const Point& x, const MultiIndex& alpha) {
    int data = find_data_point(plan, x);
    check_orders(plan, alpha, data >= 0);
    if (data >= 0) {
        return poly_eval_deriv(plan.field.polys[static_cast<size_t>(data)], alpha, x);
    }
    std::vector<int> support = support_cubes(plan.cover, x);
    if (support.empty()) {
        if (!cube_contains(plan.cover.window, x)) {
            return poly_eval_deriv(plan.far_poly, alpha, x);
        }
        collar_failure(plan, x);
    }
    return bump_sum_stable(plan, x, alpha);
}

double extend_eval_wmp(const ExtensionPlan& plan, const Point& x, const MultiIndex& alpha,
                       double eps) {
    if (!(eps > 0.0)) throw config_error("extend_eval_wmp: eps must be positive");
    double delta = 1e-5 * eps;
    int data = find_data_point(plan, x);
    check_orders(plan, alpha, data >= 0);
    if (data >= 0) {
        return poly_eval_deriv(plan.field.polys[static_cast<size_t>(data)], alpha, x);
    }
    std::vector<int> support = support_cubes(plan.cover, x);
    if (support.empty()) {
        if (!cube_contains(plan.cover.window, x)) {
            // beyond the window every cube scale exceeds delta unless delta
            // swallows the window itself
            return delta > plan.cover.window.diam() ? poly_eval_deriv(plan.far_poly, alpha, x)
                                                    : 0.0;
        }
        collar_failure(plan, x);
    }
    auto include = [&](int q) { return plan.cover.cubes[static_cast<size_t>(q)].diam() < delta; };
    // with nothing truncated this is extend_eval, bit for bit
    if (std::all_of(support.begin(), support.end(), include)) {
        return bump_sum_stable(plan, x, alpha);
    }
    return bump_sum(plan, x, alpha, include);
}

void write_extension_grid(const ExtensionPlan& plan, const MultiIndex& alpha, int per_axis,
                          std::ostream& os) {
    if (per_axis < 1) throw config_error("write_extension_grid: per_axis must be >= 1");
    int dim = plan.cover.window.dim();
    std::string alpha_digits;
    for (int i = 0; i < dim; ++i) alpha_digits += static_cast<char>('0' + alpha[i]);

    for (int i = 0; i < dim; ++i) os << "x" << i << ",";
    os << "alpha,value\n";

    double step = plan.cover.window.diam() / per_axis;
    int idx[kMaxDim] = {0, 0, 0};
    size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<size_t>(per_axis);
    for (size_t flat = 0; flat < total; ++flat) {
        Point x;
        x.dim = dim;
        for (int i = 0; i < dim; ++i) {
            x[i] = plan.cover.window.center[i] - plan.cover.window.half_side + (idx[i] + 0.5) * step;
        }
        if (find_data_point(plan, x) >= 0 || !support_cubes(plan.cover, x).empty()) {
            double v = extend_eval(plan, x, alpha);
            for (int i = 0; i < dim; ++i) os << format_double(x[i]) << ",";
            os << alpha_digits << "," << format_double(v) << "\n";
        }
        for (int i = 0; i < dim; ++i) {
            if (++idx[i] < per_axis) break;
            idx[i] = 0;
        }
    }
    os.flush();
}

}  // namespace jetext
