#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jetext/jets.hpp"
#include "jetext/lacunae.hpp"

namespace jetext {

struct GraphEdge {
    int u = -1;  // vertex indices into points, u < v
    int v = -1;
    Cube certificate;
};

// Simple graph over E whose edges join centers of contacting lacunae, with
// pairwise disjoint certificate cubes witnessing gamma-sparsity.
struct SparseGraph {
    std::vector<Point> points;
    std::vector<GraphEdge> edges;
    double gamma = 0.0;
};

// Edges from contacting lacuna pairs with distinct centers; duplicates
// collapse to the first witness in (lacuna, lacuna) order. Certificates are
// halved subcells of an M-fold split of each witness cube, M being the
// largest number of edges sharing one witness.
SparseGraph build_graph(const WhitneyCover& cover, const LacunaSet& lacunae,
                        const LacunaConstants& consts);

struct SparsityReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

// Exact check of the three certificate conditions plus edge sanity.
SparsityReport verify_sparse(const SparseGraph& g);

// Weighted jet-difference sum over edges, one term per edge with both jets
// evaluated at the lower-index endpoint:
//   finite p: ( sum_e sum_{|a|<=m-1} |D^a(P_u - P_v)(u)|^p
//                                    / ||u-v||^{(m-|a|)p-n} )^{1/p}
//   p = inf:  max_e sum_{|a|<=m-1} |D^a(P_u - P_v)(u)| / ||u-v||^{m-|a|}
double graph_seminorm(const JetField& field, const SparseGraph& g, double p);

bool graph_connected(const SparseGraph& g);

struct GeodesicResult {
    std::vector<int> path;  // vertex indices from x to y
    double length = 0.0;    // sum of Euclidean-in-uniform-norm edge lengths
};

// Shortest path in the edge-length metric; throws when x, y are separated.
GeodesicResult graph_geodesic(const SparseGraph& g, int x, int y);

void write_graph_json(const SparseGraph& g, std::ostream& os);
void write_graph_dot(const SparseGraph& g, std::ostream& os);

}  // namespace jetext
