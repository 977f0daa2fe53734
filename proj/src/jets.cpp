#include "jetext/jets.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace jetext {

MultiIndex make_multi_index(std::initializer_list<int> exps) {
    if (exps.size() < 1 || exps.size() > kMaxDim) {
        throw config_error("multi-index dimension must be 1..3");
    }
    MultiIndex a;
    a.dim = static_cast<int>(exps.size());
    int i = 0;
    for (int v : exps) {
        if (v < 0 || v > 255) throw config_error("multi-index exponent out of range");
        a.e[static_cast<size_t>(i++)] = static_cast<uint8_t>(v);
    }
    return a;
}

bool multi_index_leq(const MultiIndex& beta, const MultiIndex& alpha) {
    for (int i = 0; i < alpha.dim; ++i) {
        if (beta[i] > alpha[i]) return false;
    }
    return true;
}

MultiIndex multi_index_sub(const MultiIndex& alpha, const MultiIndex& beta) {
    MultiIndex r;
    r.dim = alpha.dim;
    for (int i = 0; i < alpha.dim; ++i) {
        r.e[static_cast<size_t>(i)] = static_cast<uint8_t>(alpha[i] - beta[i]);
    }
    return r;
}

const std::vector<MultiIndex>& multi_indices_up_to(int dim, int max_order) {
    static std::map<std::pair<int, int>, std::vector<MultiIndex>> cache;
    auto key = std::make_pair(dim, max_order);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    // graded order, first exponent descending within each total order
    std::vector<MultiIndex> out;
    for (int ord = 0; ord <= max_order; ++ord) {
        for (int a0 = ord; a0 >= 0; --a0) {
            if (dim == 1) {
                if (a0 != ord) continue;
                MultiIndex m;
                m.dim = 1;
                m.e[0] = static_cast<uint8_t>(a0);
                out.push_back(m);
            } else if (dim == 2) {
                MultiIndex m;
                m.dim = 2;
                m.e[0] = static_cast<uint8_t>(a0);
                m.e[1] = static_cast<uint8_t>(ord - a0);
                out.push_back(m);
            } else {
                for (int a1 = ord - a0; a1 >= 0; --a1) {
                    MultiIndex m;
                    m.dim = 3;
                    m.e[0] = static_cast<uint8_t>(a0);
                    m.e[1] = static_cast<uint8_t>(a1);
                    m.e[2] = static_cast<uint8_t>(ord - a0 - a1);
                    out.push_back(m);
                }
            }
        }
    }
    return cache.emplace(key, std::move(out)).first->second;
}

int multi_index_position(const MultiIndex& alpha, int max_order) {
    // dense (e0,e1,e2) -> position table per (dim, max_order), built once
    static std::map<std::pair<int, int>, std::vector<int>> cache;
    auto key = std::make_pair(alpha.dim, max_order);
    auto it = cache.find(key);
    if (it == cache.end()) {
        const std::vector<MultiIndex>& all = multi_indices_up_to(alpha.dim, max_order);
        int w = max_order + 1;
        std::vector<int> table(static_cast<size_t>(w * w * w), -1);
        for (size_t i = 0; i < all.size(); ++i) {
            const MultiIndex& a = all[i];
            table[static_cast<size_t>((a.e[0] * w + a.e[1]) * w + a.e[2])] = static_cast<int>(i);
        }
        it = cache.emplace(key, std::move(table)).first;
    }
    int w = max_order + 1;
    if (alpha[0] > max_order || alpha[1] > max_order || alpha[2] > max_order) {
        throw config_error("multi-index order exceeds table");
    }
    int pos = it->second[static_cast<size_t>((alpha.e[0] * w + alpha.e[1]) * w + alpha.e[2])];
    if (pos < 0) throw config_error("multi-index order exceeds table");
    return pos;
}

double factorial(int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

double multi_factorial(const MultiIndex& alpha) {
    double r = 1.0;
    for (int i = 0; i < alpha.dim; ++i) r *= factorial(alpha[i]);
    return r;
}

double multi_binomial(const MultiIndex& alpha, const MultiIndex& beta) {
    double r = 1.0;
    for (int i = 0; i < alpha.dim; ++i) {
        double c = 1.0;
        for (int j = 0; j < beta[i]; ++j) c = c * (alpha[i] - j) / (j + 1);
        r *= c;
    }
    return std::round(r);
}

double shifted_power(const Point& x, const Point& b, const MultiIndex& alpha) {
    double r = 1.0;
    for (int i = 0; i < alpha.dim; ++i) {
        for (int k = 0; k < alpha[i]; ++k) r *= x[i] - b[i];
    }
    return r;
}

Poly make_poly(const Point& base, int degree) {
    if (degree < 0 || degree > kMaxJetOrder - 1) throw config_error("polynomial degree out of range");
    Poly p;
    p.base = base;
    p.degree = degree;
    p.coeffs.assign(multi_indices_up_to(base.dim, degree).size(), 0.0);
    return p;
}

double& poly_coeff(Poly& p, const MultiIndex& alpha) {
    return p.coeffs[static_cast<size_t>(multi_index_position(alpha, p.degree))];
}

double poly_coeff(const Poly& p, const MultiIndex& alpha) {
    if (alpha.order() > p.degree) return 0.0;
    return p.coeffs[static_cast<size_t>(multi_index_position(alpha, p.degree))];
}

double poly_eval_deriv(const Poly& p, const MultiIndex& alpha, const Point& x) {
    if (alpha.dim != p.dim() || x.dim != p.dim()) throw config_error("dimension mismatch");
    if (alpha.order() > p.degree) return 0.0;
    const std::vector<MultiIndex>& all = multi_indices_up_to(p.dim(), p.degree);
    double sum = 0.0;
    for (size_t i = 0; i < all.size(); ++i) {
        const MultiIndex& beta = all[i];
        if (!multi_index_leq(alpha, beta)) continue;
        MultiIndex rem = multi_index_sub(beta, alpha);
        sum += p.coeffs[i] * shifted_power(x, p.base, rem) / multi_factorial(rem);
    }
    return sum;
}

Poly poly_rebase(const Poly& p, const Point& new_base) {
    Poly q = make_poly(new_base, p.degree);
    const std::vector<MultiIndex>& all = multi_indices_up_to(p.dim(), p.degree);
    for (size_t i = 0; i < all.size(); ++i) {
        q.coeffs[i] = poly_eval_deriv(p, all[i], new_base);
    }
    return q;
}

Poly poly_axpby(double a, const Poly& p, double b, const Poly& q) {
    if (!(p.base == q.base) || p.degree != q.degree) {
        throw config_error("poly_axpby needs a shared basepoint and degree");
    }
    Poly r = make_poly(p.base, p.degree);
    for (size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = a * p.coeffs[i] + b * q.coeffs[i];
    return r;
}

double jet_difference(const Poly& p, const Poly& q, const MultiIndex& alpha, const Point& x) {
    return poly_eval_deriv(p, alpha, x) - poly_eval_deriv(q, alpha, x);
}

void validate_field(const JetField& f) {
    if (f.points.empty()) throw config_error("field needs at least one point");
    if (f.m < 1 || f.m > kMaxJetOrder) throw config_error("m out of range 1..4");
    if (f.dim < 1 || f.dim > kMaxDim) throw config_error("dimension out of range 1..3");
    if (!(f.p > f.dim)) throw config_error("integrability exponent must satisfy p > n");
    if (f.polys.size() != f.points.size()) throw config_error("one polynomial per point required");
    for (size_t i = 0; i < f.points.size(); ++i) {
        if (f.points[i].dim != f.dim) throw config_error("point dimension mismatch");
        if (!(f.polys[i].base == f.points[i])) throw config_error("jet basepoint must be its point");
        if (f.polys[i].degree != f.m - 1) throw config_error("jet degree must be m-1");
        for (size_t j = i + 1; j < f.points.size(); ++j) {
            if (f.points[i] == f.points[j]) throw config_error("points must be distinct");
        }
    }
}

JetField field_from_polynomial(const Poly& g, const std::vector<Point>& E, int m, double p) {
    if (g.degree > m - 1) throw config_error("generator degree exceeds m-1");
    JetField f;
    f.dim = g.dim();
    f.m = m;
    f.p = p;
    f.points = E;
    for (const Point& x : E) {
        Poly px = poly_rebase(g, x);
        if (g.degree < m - 1) {
            Poly lifted = make_poly(x, m - 1);
            const std::vector<MultiIndex>& all = multi_indices_up_to(f.dim, g.degree);
            for (size_t i = 0; i < all.size(); ++i) {
                poly_coeff(lifted, all[i]) = px.coeffs[i];
            }
            px = lifted;
        }
        f.polys.push_back(std::move(px));
    }
    validate_field(f);
    return f;
}

JetField field_scaled(const JetField& f, double c) {
    JetField g = f;
    for (Poly& p : g.polys) {
        for (double& v : p.coeffs) v *= c;
    }
    return g;
}

JetField field_axpby(double a, const JetField& f, double b, const JetField& g) {
    if (f.points.size() != g.points.size() || f.m != g.m || f.dim != g.dim) {
        throw config_error("field_axpby needs matching fields");
    }
    JetField r = f;
    for (size_t i = 0; i < r.polys.size(); ++i) {
        r.polys[i] = poly_axpby(a, f.polys[i], b, g.polys[i]);
    }
    return r;
}

}  // namespace jetext
