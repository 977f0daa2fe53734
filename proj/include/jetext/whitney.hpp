#pragma once

#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "jetext/geometry.hpp"
#include "jetext/taylor.hpp"

namespace jetext {

// Smoothness order for the partition of unity; must be >= m+1 for the
// seminorm quadrature of order-m derivatives.
struct BumpSpec {
    int order = 5;
};

// Whitney decomposition of window \ E into dyadic cubes satisfying
//   diam Q <= dist(Q, E) <= 4 diam Q.
// Cubes still violating the lower bound at depth_cap form the collar, which
// is excluded from quadrature and reported by measure.
struct WhitneyCover {
    std::vector<Point> E;
    Cube window;
    int depth_cap = 0;
    std::vector<Cube> cubes;
    std::vector<int> levels;                    // subdivision depth per cube
    std::vector<std::vector<int>> adjacency;    // T(K), sorted, includes K
    std::vector<Cube> collar;
    double collar_measure = 0.0;

    // Integer grid coordinates per cube at its level; the window half-side is
    // a power of two and its center is snapped, so every cube boundary is an
    // exact dyadic and grid arithmetic is exact.
    std::vector<std::array<int64_t, 3>> coords;
    // per-level map from packed grid coordinates to cube index
    std::vector<std::unordered_map<int64_t, int>> grid;
};

WhitneyCover whitney_decompose(const std::vector<Point>& E, double inflate, int depth_cap);

// Smallest depth_cap at which the finest cubes are at most min-separation(E)
// divided by `factor`. Every point of E then carries cubes whose 90-dilate
// meets no other point, which the lacuna machinery needs; shallower covers
// can leave a point without a lacuna of its own. Throws capacity_error when
// the required depth exceeds the per-dimension cap.
int resolving_depth(const std::vector<Point>& E, double inflate, double factor = 256.0);

// T(K): every cover cube meeting K (closed cubes, K itself included).
const std::vector<int>& touching(const WhitneyCover& cover, int K);

// Index of the cover cube whose half-open tile contains x; -1 when x lies in
// the collar or outside the window.
int locate_cube(const WhitneyCover& cover, const Point& x);

// All cubes K with x in (9/8)K, i.e. the bumps possibly nonzero at x.
// Empty exactly when locate_cube fails.
std::vector<int> support_cubes(const WhitneyCover& cover, const Point& x);

// One-dimensional cutoff: 1 on [-1,1], 0 outside [-9/8,9/8], smooth.
double profile_value(double t);
TaylorU profile_jet(double t, int len);

// Tensor bump psi_Q: 1 on Q, supported on (9/8)Q.
double bump_value(const Cube& q, const Point& x);
MTaylor bump_jet(const Cube& q, const Point& x, int order);

// D^alpha phi_Q(x) with phi_Q = psi_Q / sum_K psi_K.
double pou_eval(const WhitneyCover& cover, int q, const MultiIndex& alpha, const Point& x,
                const BumpSpec& spec = {});

// Jets of every phi_Q alive at x, one shared denominator pass. cubes is
// support_cubes(cover, x); jets[i] carries all D^beta phi_{cubes[i]}(x) with
// |beta| <= order. Agrees with pou_eval term by term but amortizes the
// denominator, which matters inside quadrature loops.
struct PouJets {
    std::vector<int> cubes;
    std::vector<MTaylor> jets;
};
PouJets pou_jets(const WhitneyCover& cover, const Point& x, int order, const BumpSpec& spec = {});

// Debug/plot export: window, collar measure, cubes with neighbor lists.
void write_cover(const WhitneyCover& cover, std::ostream& os);

}  // namespace jetext
