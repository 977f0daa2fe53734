#pragma once

#include <cmath>
#include <vector>

#include "jetext/errors.hpp"
#include "jetext/jets.hpp"

namespace jetext {

// Truncated univariate Taylor expansion: c[k] is the k-th Taylor coefficient,
// i.e. f^(k)(t0)/k!. All operations truncate at the shared length.
struct TaylorU {
    std::vector<double> c;

    int len() const { return static_cast<int>(c.size()); }
};

inline TaylorU taylor_const(double v, int len) {
    TaylorU r;
    r.c.assign(static_cast<size_t>(len), 0.0);
    r.c[0] = v;
    return r;
}

// The jet of t -> a + b*t at t = 0 (or any affine argument with value a,
// slope b).
inline TaylorU taylor_affine(double a, double b, int len) {
    TaylorU r = taylor_const(a, len);
    if (len > 1) r.c[1] = b;
    return r;
}

inline TaylorU taylor_add(const TaylorU& f, const TaylorU& g) {
    TaylorU r = f;
    for (int k = 0; k < r.len(); ++k) r.c[static_cast<size_t>(k)] += g.c[static_cast<size_t>(k)];
    return r;
}

inline TaylorU taylor_scale(const TaylorU& f, double s) {
    TaylorU r = f;
    for (double& v : r.c) v *= s;
    return r;
}

inline TaylorU taylor_mul(const TaylorU& f, const TaylorU& g) {
    TaylorU r = taylor_const(0.0, f.len());
    for (int i = 0; i < f.len(); ++i)
        for (int j = 0; i + j < f.len(); ++j)
            r.c[static_cast<size_t>(i + j)] += f.c[static_cast<size_t>(i)] * g.c[static_cast<size_t>(j)];
    return r;
}

// 1/f; requires f(t0) != 0. Standard power-series recursion.
inline TaylorU taylor_recip(const TaylorU& f) {
    if (f.c[0] == 0.0) throw invariant_error("taylor_recip: zero constant term");
    TaylorU r = taylor_const(1.0 / f.c[0], f.len());
    for (int k = 1; k < f.len(); ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j)
            s += f.c[static_cast<size_t>(j)] * r.c[static_cast<size_t>(k - j)];
        r.c[static_cast<size_t>(k)] = -s / f.c[0];
    }
    return r;
}

// exp(f) via g' = f'·g, i.e. k·g_k = sum_{j=1..k} j·f_j·g_{k-j}.
inline TaylorU taylor_exp(const TaylorU& f) {
    TaylorU r = taylor_const(std::exp(f.c[0]), f.len());
    for (int k = 1; k < f.len(); ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j)
            s += static_cast<double>(j) * f.c[static_cast<size_t>(j)] * r.c[static_cast<size_t>(k - j)];
        r.c[static_cast<size_t>(k)] = s / static_cast<double>(k);
    }
    return r;
}

// k-th derivative value from the Taylor coefficient.
inline double taylor_deriv(const TaylorU& f, int k) {
    if (k >= f.len()) return 0.0;
    return f.c[static_cast<size_t>(k)] * factorial(k);
}

// Truncated multivariate Taylor expansion at a point of R^dim: coeffs are
// parallel to multi_indices_up_to(dim, order) and hold D^beta f / beta!.
struct MTaylor {
    int dim = 0;
    int order = 0;
    std::vector<double> coeffs;
};

inline MTaylor mtaylor_const(double v, int dim, int order) {
    MTaylor r;
    r.dim = dim;
    r.order = order;
    r.coeffs.assign(multi_indices_up_to(dim, order).size(), 0.0);
    r.coeffs[0] = v;
    return r;
}

inline MTaylor mtaylor_add(const MTaylor& f, const MTaylor& g) {
    MTaylor r = f;
    for (size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] += g.coeffs[i];
    return r;
}

inline MTaylor mtaylor_scale(const MTaylor& f, double s) {
    MTaylor r = f;
    for (double& v : r.coeffs) v *= s;
    return r;
}

inline MTaylor mtaylor_mul(const MTaylor& f, const MTaylor& g) {
    const auto& idx = multi_indices_up_to(f.dim, f.order);
    MTaylor r = mtaylor_const(0.0, f.dim, f.order);
    for (size_t a = 0; a < idx.size(); ++a) {
        if (f.coeffs[a] == 0.0) continue;
        for (size_t b = 0; b < idx.size(); ++b) {
            if (idx[a].order() + idx[b].order() > f.order) continue;
            MultiIndex sum = idx[a];
            for (int i = 0; i < f.dim; ++i)
                sum.e[static_cast<size_t>(i)] =
                    static_cast<uint8_t>(sum.e[static_cast<size_t>(i)] + idx[b].e[static_cast<size_t>(i)]);
            r.coeffs[static_cast<size_t>(multi_index_position(sum, f.order))] +=
                f.coeffs[a] * g.coeffs[b];
        }
    }
    return r;
}

// 1/f; requires nonzero constant term. Recursion over the graded enumeration:
// each coefficient depends only on strictly smaller multi-indices.
inline MTaylor mtaylor_recip(const MTaylor& f) {
    if (f.coeffs[0] == 0.0) throw invariant_error("mtaylor_recip: zero constant term");
    const auto& idx = multi_indices_up_to(f.dim, f.order);
    MTaylor r = mtaylor_const(1.0 / f.coeffs[0], f.dim, f.order);
    for (size_t g = 1; g < idx.size(); ++g) {
        double s = 0.0;
        for (size_t b = 1; b < idx.size(); ++b) {
            if (!multi_index_leq(idx[b], idx[g])) continue;
            MultiIndex rem = multi_index_sub(idx[g], idx[b]);
            s += f.coeffs[b] * r.coeffs[static_cast<size_t>(multi_index_position(rem, f.order))];
        }
        r.coeffs[g] = -s / f.coeffs[0];
    }
    return r;
}

inline double mtaylor_deriv(const MTaylor& f, const MultiIndex& beta) {
    if (beta.order() > f.order) return 0.0;
    return f.coeffs[static_cast<size_t>(multi_index_position(beta, f.order))] * multi_factorial(beta);
}

// Tensor product of per-axis univariate jets: coeff[beta] = prod_i axes[i].c[beta_i].
// Each axis jet must have length order+1.
inline MTaylor mtaylor_tensor(const std::vector<TaylorU>& axes, int order) {
    int dim = static_cast<int>(axes.size());
    const auto& idx = multi_indices_up_to(dim, order);
    MTaylor r = mtaylor_const(0.0, dim, order);
    for (size_t a = 0; a < idx.size(); ++a) {
        double v = 1.0;
        for (int i = 0; i < dim; ++i) v *= axes[static_cast<size_t>(i)].c[idx[a].e[static_cast<size_t>(i)]];
        r.coeffs[a] = v;
    }
    return r;
}

// Taylor coefficients of a Poly at x (exact; zero beyond its degree).
inline MTaylor mtaylor_of_poly(const Poly& p, const Point& x, int order) {
    const auto& idx = multi_indices_up_to(p.dim(), order);
    MTaylor r = mtaylor_const(0.0, p.dim(), order);
    for (size_t a = 0; a < idx.size(); ++a)
        r.coeffs[a] = poly_eval_deriv(p, idx[a], x) / multi_factorial(idx[a]);
    return r;
}

}  // namespace jetext
