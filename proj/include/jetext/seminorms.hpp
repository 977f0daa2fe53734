#pragma once

#include <functional>
#include <vector>

#include "jetext/extension.hpp"

namespace jetext {

// Default sparsity constant for pair families: 1e4 * gamma_tilde, the same
// constant the sparse graph certifies its edges at, so a built graph's full
// edge family is always an admissible competitor for the brute force.
inline constexpr double kDefaultPairGamma = 1.0e4 * 180.0;

// Gauss-Legendre nodes and weights on [-1,1], exact through degree 2*order-1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached rule; order in [1, 32].
const GaussRule& gauss_legendre(int order);

// Tensor quadrature plan: `order` nodes per axis on each cell. Window
// integrals split the window into cells_per_axis equal cells per axis;
// the extension seminorm integrates per Whitney cube instead, bisecting
// cells adaptively (worst error first) up to max_cells total cells, and
// ignores cells_per_axis. Consumers require order >= m+1.
struct QuadratureSpec {
    int order = 4;
    int cells_per_axis = 8;
    int max_cells = 20000;
    Cube window;
};

// Region a windowed integral had to skip, with a sampled cap on what the
// skipped region could contribute (same p-th power scale as the integral).
// The cap is a diagnostic estimate, not a certified bound.
struct CollarReport {
    double measure = 0.0;
    double bound = 0.0;
};

// Largest weighted jet-difference sum over certified sparse pair families:
//   max over families of ( sum_i sum_{|a|<=m-1} |D^a(P_x - P_y)(x)|^p
//                                 / ||x-y||^{(m-|a|)p-n} )^{1/p},
// each pair counted with the better of its two orderings. Families run over
// all collections of distinct point pairs for |E| <= 6 and over pairwise
// vertex-disjoint collections for |E| in {7, 8}. A family counts only when
// midpoint certificate cubes at the smallest admissible size (half-side
// ||x-y|| / (2 gamma), where the gamma-dilate still holds both endpoints)
// are pairwise disjoint; the greedy shrink sweep from full size always lands
// there, so the floor test is equivalent. Unproven families are excluded,
// which makes the result a certified lower bound of the true supremum and
// monotone in gamma. Throws config_error for |E| > 8, p <= n, or gamma < 1.
double trace_norm_bruteforce(const JetField& field, double p, double gamma);

// sup over y != z in E of |P_y(x) - P_z(x)| / (||x-y||^m + ||x-z||^m).
// Zero for a singleton E.
double sharp_max_eval(const JetField& field, const Point& x);

// Windowed L_p integral split into the quadrature value over the window and
// a closed-form bound on the integral outside it, both reported as p-th
// roots. The whole-space norm lies in [value, (value^p + tail^p)^{1/p}].
struct WindowedLp {
    double value = 0.0;
    double tail_bound = 0.0;
};

// L_p norm of the sharp maximal function by per-cell tensor quadrature over
// quad.window. The tail bound integrates the envelope A 2^{m-1} t^{-1} of the
// integrand outside the window, so it requires the window to contain E with
// half-side at least twice the data spread around the window center.
WindowedLp sharp_max_lp(const JetField& field, const QuadratureSpec& quad);

struct PhiPsi {
    double phi = 0.0;
    // phi came from the exhaustive pair search; false means a graph-edge
    // lower bound was used because |E| > 8.
    bool phi_exhaustive = true;
    double psi = 0.0;       // window quadrature part
    double psi_tail = 0.0;  // envelope bound outside the window
};

// First-order trace functionals of a scalar sample f on E:
//   phi = trace_norm_bruteforce of the constant field (kDefaultPairGamma),
//   psi^p = integral of sup_{y != z} |f(y)-f(z)|^p / (||x-y||^p + ||x-z||^p).
// Window preconditions match sharp_max_lp. Throws config_error for p <= n
// or mismatched sizes.
PhiPsi phi_psi_m1(const std::vector<Point>& E, const std::vector<double>& f, double p,
                  const QuadratureSpec& quad);

struct SobolevResult {
    double value = 0.0;
    CollarReport collar;
};

// ( sum_{|a|=m} integral over the window of |D^a F|^p )^{1/p} for the planned
// extension, integrated cube by cube over the Whitney cover with exact
// derivatives. Outside the cover window F is a polynomial of degree m-1, so
// the quad window (which must contain the cover window) adds exactly zero.
// The collar is skipped and reported: measure from the cover, bound =
// measure times the largest sampled sum_{|a|=m} |D^a F|^p over centers of
// finest-level cover cubes. Runs orders quad.order and quad.order + 1 and
// throws config_error when the two disagree by more than 5%.
SobolevResult sobolev_seminorm(const ExtensionPlan& plan, double p, const QuadratureSpec& quad);

// sum_i |G(x_i) - G(c_i)|^p / (diam Q_i)^{p-n} over equal cubes Q_i with
// centers c_i and marked points x_i in Q_i. Cubes must have equal half-sides
// and pairwise disjoint interiors (shared faces allowed); violations throw
// config_error.
double oscillation_sum(const std::function<double(const Point&)>& G,
                       const std::vector<Cube>& cubes, const std::vector<Point>& points,
                       double p);

struct WmpParts {
    // ( sum_{x in E} min(eps, separation(x)/2)^n |P_x(x)|^p )^{1/p}; the
    // paper-side integral over an eps-neighborhood collapses to this cell
    // sum for finite E.
    double data_norm = 0.0;
    // Pair functional restricted to ||x-y|| <= eps.
    double pair_part = 0.0;
    bool pair_part_exhaustive = true;  // false: graph-edge lower bound
    // ( sum_L sum_{|a|<=m-1} min(eps, diam L)^{|a|p+n} |D^a P_s(s)|^p )^{1/p}
    // over lacunae with centers s.
    double lacuna_part = 0.0;
    double total = 0.0;  // data_norm + pair_part + lacuna_part
};

// Near-scale W^m_p surrogate of the planned field. pair_part reuses the
// trace_norm_bruteforce search with pairs capped at eps when |E| <= 8 and
// otherwise sums over graph edges of length <= eps (graph rebuilt with the
// plan's constants). Throws config_error for eps <= 0 or p <= n.
WmpParts wmp_norm_parts(const ExtensionPlan& plan, double eps, double p,
                        double gamma = kDefaultPairGamma);

}  // namespace jetext
