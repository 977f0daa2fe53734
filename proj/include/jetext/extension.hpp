#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jetext/jets.hpp"
#include "jetext/lacunae.hpp"
#include "jetext/whitney.hpp"

namespace jetext {

// Everything needed to evaluate the extension: each Whitney cube carries the
// polynomial of its lacuna's assigned center, so cubes of one lacuna agree.
// far_poly is the single polynomial the extension equals outside the window
// (the center of the boundary lacuna, which sees all of E).
struct ExtensionPlan {
    WhitneyCover cover;
    LacunaSet lacunae;
    JetField field;
    BumpSpec spec;
    LacunaConstants consts;
    std::vector<int> a_q;   // per cube: index into cover.E of its center
    std::vector<Poly> p_q;  // per cube: the jet polynomial at that center
    Poly far_poly;
    std::vector<std::string> warnings;
};

// Assigns centers and polynomials to every cube and revalidates the center
// geometry: a_q lies in gamma_tilde * Q and is sigma-nearest to Q with
// sigma = (gamma_tilde + 1) / 2. Throws invariant_error when a lacuna has no
// projected center or a containment check fails, config_error when the field
// does not sit on the cover's point set.
ExtensionPlan plan_extension(const JetField& field, const WhitneyCover& cover,
                             const LacunaSet& lacunae, const LacunaConstants& consts = {},
                             const BumpSpec& spec = {});

// D^alpha F(x). On E returns the jet value D^alpha P_x(x) (|alpha| <= m-1);
// off E sums the product rule over supporting bumps (|alpha| <= m+1);
// outside the window differentiates far_poly. Points in the collar are not
// evaluable and raise config_error carrying their distance to E.
double extend_eval(const ExtensionPlan& plan, const Point& x, const MultiIndex& alpha);

// The truncated variant: cubes with diam >= 1e-5 * eps drop their
// polynomial. Equals extend_eval within distance (1e-5 eps)/4 of E and
// vanishes beyond 20 * 1e-5 * eps, both consequences of the cube geometry
// rather than special cases in the code.
double extend_eval_wmp(const ExtensionPlan& plan, const Point& x, const MultiIndex& alpha,
                       double eps);

// CSV dump of D^alpha F over a per_axis^dim cell-center grid on the window;
// collar points are skipped. Columns: coordinates, alpha digits, value.
void write_extension_grid(const ExtensionPlan& plan, const MultiIndex& alpha, int per_axis,
                          std::ostream& os);

}  // namespace jetext
