#pragma once

#include <cstdint>
#include <vector>

#include "jetext/geometry.hpp"

namespace jetext {

inline constexpr int kMaxJetOrder = 4;  // cap on m

// Multi-index alpha with |alpha| = order(); dim matches the ambient space.
struct MultiIndex {
    std::array<uint8_t, kMaxDim> e{0, 0, 0};
    int dim = 0;

    int order() const { return int(e[0]) + int(e[1]) + int(e[2]); }
    uint8_t operator[](int i) const { return e[static_cast<size_t>(i)]; }
    bool operator==(const MultiIndex& o) const { return dim == o.dim && e == o.e; }
};

MultiIndex make_multi_index(std::initializer_list<int> exps);
// Componentwise beta <= alpha.
bool multi_index_leq(const MultiIndex& beta, const MultiIndex& alpha);
MultiIndex multi_index_sub(const MultiIndex& alpha, const MultiIndex& beta);

// All multi-indices of the given dimension with order <= max_order, graded
// lexicographic order. The same enumeration indexes Poly coefficients.
const std::vector<MultiIndex>& multi_indices_up_to(int dim, int max_order);
// Position of alpha within multi_indices_up_to(alpha.dim, max_order).
int multi_index_position(const MultiIndex& alpha, int max_order);

double factorial(int k);
double multi_factorial(const MultiIndex& alpha);
double multi_binomial(const MultiIndex& alpha, const MultiIndex& beta);
// (x - b)^alpha as a product over coordinates.
double shifted_power(const Point& x, const Point& b, const MultiIndex& alpha);

// Polynomial of degree <= degree in the scaled Taylor basis around base:
//   P(x) = sum_alpha coeffs[alpha] * (x-base)^alpha / alpha!,
// so coeffs[alpha] = D^alpha P(base) directly.
struct Poly {
    Point base;
    int degree = 0;
    std::vector<double> coeffs;  // parallel to multi_indices_up_to(base.dim, degree)

    int dim() const { return base.dim; }
};

Poly make_poly(const Point& base, int degree);
double& poly_coeff(Poly& p, const MultiIndex& alpha);
double poly_coeff(const Poly& p, const MultiIndex& alpha);

// D^alpha P(x); zero whenever |alpha| exceeds the degree.
double poly_eval_deriv(const Poly& p, const MultiIndex& alpha, const Point& x);
// Same polynomial re-expanded around new_base (exact as a function).
Poly poly_rebase(const Poly& p, const Point& new_base);
// a*P + b*Q for polynomials over a shared basepoint.
Poly poly_axpby(double a, const Poly& p, double b, const Poly& q);

// D^alpha (P - Q)(x).
double jet_difference(const Poly& p, const Poly& q, const MultiIndex& alpha, const Point& x);

// A Whitney field: one polynomial of degree <= m-1 per point of E, p > n.
struct JetField {
    std::vector<Point> points;
    std::vector<Poly> polys;
    int m = 1;
    double p = 0.0;
    int dim = 0;
};

void validate_field(const JetField& f);
// Field whose jets are the Taylor polynomials of G at each point of E.
JetField field_from_polynomial(const Poly& g, const std::vector<Point>& E, int m, double p);
// c * field (every coefficient scaled).
JetField field_scaled(const JetField& f, double c);
// pointwise a*F + b*G over the same E.
JetField field_axpby(double a, const JetField& f, double b, const JetField& g);

}  // namespace jetext
