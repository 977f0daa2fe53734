#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "jetext/geometry.hpp"

namespace jetext {

// Nonnegative density h, piecewise constant on a res^dim grid over a cubic
// box; q is the averaging exponent and must stay >= dim.
struct DensityField {
    Cube box;
    int res = 0;
    double q = 0.0;
    std::vector<double> values;  // res^dim cells, axis 0 fastest

    int dim() const { return box.dim(); }
    double cell_side() const { return box.diam() / res; }
};

DensityField make_density(const Cube& box, int res, double q, std::vector<double> values);

// h at x; x must lie in the box (cells are half-open, the far face closed).
double density_at(const DensityField& h, const Point& x);

// Split every cell `factor` ways per axis keeping values: the same function
// on a finer grid. Factor-2 refinement only enriches the cube family probed
// by rho_q, so rho_q never decreases across it.
DensityField refine_density(const DensityField& h, int factor);

// Cumulative integrals of h^q at grid nodes, multilinear in between, which
// is exact for a piecewise-constant integrand.
struct SummedTable {
    Cube box;
    int res = 0;
    double q = 0.0;
    double cell = 0.0;
    std::vector<double> nodes;  // (res+1)^dim partial sums, axis 0 fastest

    int dim() const { return box.dim(); }
};

SummedTable build_summed(const DensityField& h);

// Integral of h^q over [lo,hi] clipped to the box (exact).
double box_mass(const SummedTable& s, const Point& lo, const Point& hi);

// ||x-y|| times the largest (avg_Q h^q)^{1/q} over an enumerated family of
// cubes containing x and y: every grid-aligned cube inside the box, plus the
// dyadic dilates of Q(x,||x-y||) and of Q(y,||x-y||) until they swallow the
// box. Masses are clipped to the box, volumes are not, so every candidate is
// a genuine cube average: the result is a certified lower bound of the true
// supremum, symmetric in x,y, and nondecreasing under family enrichment.
double rho_q(const Point& x, const Point& y, const DensityField& h);

// Same with grid-aligned sizes capped at `cap` cells (the dilate ladders
// still run to the box); cap <= 0 means uncapped. Used for sample-graph
// edges where the full family is too slow.
double rho_q_capped(const Point& x, const Point& y, const DensityField& h, int cap);

// Low-level form over a prebuilt table for hot loops.
double rho_q_tab(const Point& x, const Point& y, const SummedTable& s, int cap);

// v_x(t) = t * max over the ladder s = t*2^j of the Q(x,s) averages.
double profile_v(const Point& x, const DensityField& h, double t);

// v_x on a dyadic t-grid plus its least concave majorant omega_x. On the
// sampled grid v is nondecreasing, v(t)/t is nonincreasing, and
// v <= omega <= 2v, all exactly (q >= dim makes the doubling step lossless).
struct ProfileSample {
    std::vector<double> t;  // ascending, dyadic
    std::vector<double> v;
    std::vector<double> omega;
};

ProfileSample v_and_omega(const Point& x, const DensityField& h);

// Sampled-metric graph: lattice nodes every `stride` grid steps plus extra
// sites, edges within radius_cells cells weighted by rho_q_capped, cached.
// Queries insert their endpoints virtually and always carry a direct edge
// with the full-family weight, so sample_dq(x,y) <= rho_q(x,y).
struct MetricSample {
    SummedTable table;
    int stride = 1;
    double radius_cells = 4.0;
    int edge_cap = 8;
    std::vector<Point> sites;  // lattice first, then extras
    size_t lattice_count = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;
};

// extra_sites become permanent graph nodes (pass E here). edge_cap <= 0
// picks a per-dimension default. Throws config_error when the lattice graph
// comes out disconnected (radius below stride).
MetricSample build_metric_sample(const DensityField& h, const std::vector<Point>& extra_sites,
                                 int stride, double radius_cells, int edge_cap = 0);

// Geodesic estimate between arbitrary in-box points over the cached graph.
double sample_dq(const MetricSample& s, const Point& x, const Point& y);

// Distances from x to every extra site in one sweep; order follows the
// extra_sites passed at build time. Direct x-extra edges use the full family.
std::vector<double> sample_dq_to_extras(const MetricSample& s, const Point& x);

// One-call convenience: builds a throwaway sample (stride 2 in dimension 3,
// else 1) and queries it; use MetricSample to amortize over many pairs.
double geodesic_dq(const Point& x, const Point& y, const DensityField& h, double sample_radius_cells);

using MetricOracle = std::function<double(const Point&, const Point&)>;

// F(x) = min_{y in E} { f(y) + d(x,y) }; equals f on E when f is 1-Lipschitz
// for d there.
double mcshane_extend(const std::vector<Point>& E, const std::vector<double>& f,
                      const MetricOracle& d, const Point& x);

// sup over y != z in E of |f(y)-f(z)| / (||x-y|| + ||x-z||); 0 when |E| < 2.
double scalar_sharp(const std::vector<Point>& E, const std::vector<double>& f, const Point& x);

// scalar_sharp sampled at cell centers as a density with exponent q.
DensityField sharp_density(const std::vector<Point>& E, const std::vector<double>& f,
                           const Cube& box, int res, double q);

// Nonlinear first-order extension: sharpen f, build the induced sampled
// metric with q = (dim+p)/2, then take the McShane envelope with factor 48.
struct L1pExtension {
    std::vector<Point> E;
    std::vector<double> f;
    MetricSample sample;

    double eval(const Point& x) const;
};

L1pExtension l1p_extend(const std::vector<Point>& E, const std::vector<double>& f, double p,
                        const Cube& box, int res);

// JSON round-trip for densities and a CSV dump (i,j,rho,d per cached edge).
void write_density(const DensityField& h, std::ostream& os);
DensityField parse_density(const std::string& json_text);
void write_metric_csv(const MetricSample& s, std::ostream& os);

}  // namespace jetext
