#pragma once

#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

#include "jetext/whitney.hpp"

namespace jetext {

// An equivalence class of Whitney cubes sharing the same nearby portion of E.
// True lacunae have (10Q) cap E = (90Q) cap E for every member; every other
// cube forms its own elementary lacuna with V = (90Q) cap E.
struct Lacuna {
    std::vector<int> cube_ids;   // indices into cover.cubes
    bool is_true = false;
    bool unbounded = false;      // the class reaching the window boundary with V = E
    std::vector<int> V;          // sorted indices into cover.E, nonempty
    int q_min = -1;              // member realizing the min diameter
    int q_max = -1;              // member realizing the max diameter
    int center = -1;             // index into cover.E, filled by the projector
};

struct LacunaSet {
    std::vector<Lacuna> lacunae;
    std::vector<int> cube_to_lacuna;  // one entry per cover cube
    int l_max = -1;                   // index of the unbounded lacuna, -1 if none
    std::vector<std::string> warnings;
};

// Constants steering the projector; derived quantities recompute from tau.
struct LacunaConstants {
    double tau = 4.0;
    double gamma_tilde = 180.0;

    double sigma() const { return 33.0 * tau; }
    int k() const { return static_cast<int>(std::floor(std::log2(360.0 * sigma()))) + 2; }
    double gamma() const { return 1.0e4 * gamma_tilde; }
};

LacunaSet classify_lacunae(const WhitneyCover& cover);

double lacuna_diam(const Lacuna& l, const WhitneyCover& cover);
double v_diam(const Lacuna& l, const WhitneyCover& cover);

// Index into cover.E of the lacuna's Taylor center. Singleton V short-circuits
// to its point; otherwise a net point near a diameter pair of V, with the
// deep-cube override for bounded true lacunae whose largest cube dwarfs V.
int lacuna_projector(const Lacuna& l, const WhitneyCover& cover, const DyadicNets& nets,
                     const LacunaConstants& consts);

// Fills center for every lacuna in place.
void project_lacunae(LacunaSet& set, const WhitneyCover& cover, const DyadicNets& nets,
                     const LacunaConstants& consts);

struct ContactingPair {
    int l1 = -1;
    int l2 = -1;
    int q1 = -1;  // witness cube in l1
    int q2 = -1;  // witness cube in l2, touching q1
};

// Distinct lacunae possessing touching member cubes, one witness pair each.
std::vector<ContactingPair> contacting_pairs(const LacunaSet& set, const WhitneyCover& cover);

// Per-lacuna report: kind, sizes, diameters, center.
void write_lacunae(const LacunaSet& set, const WhitneyCover& cover, std::ostream& os);

}  // namespace jetext
