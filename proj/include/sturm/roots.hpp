#pragma once

#include <functional>

#include "sturm/common.hpp"

namespace sturm {

struct Box {
    double x0, x1, y0, y1;
    cplx center() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
    double diag() const;
    bool contains(cplx z, double margin = 0) const;
};

struct Root {
    cplx z;
    int multiplicity = 1;
    double spread = 0;  // separation of the raw estimates inside a merged cluster
};

struct RootOptions {
    double tol = 1e-12;        // Newton stopping size relative to 1 + |z|
    double merge_rel = 1e-6;   // clusters within merge_rel * (1 + |z|) are merged
    double leaf_size = 2.5;    // boxes with smaller diagonal are solved locally
    int max_depth = 30;
};

using Analytic = std::function<cplx(cplx)>;

// Winding number of f around the positively oriented boundary of `box`.
// Throws root_isolation_failure when the boundary passes (numerically)
// through a zero.
int winding_number(const Analytic& f, const Box& box);
int winding_number_circle(const Analytic& f, cplx c, double r);

// All zeros of f inside `box`, polished, with multiplicities.
std::vector<Root> find_roots(const Analytic& f, const Box& box, const RootOptions& opt = {});

// Roots of sum_k a[k] w^k via the companion matrix.
cvec poly_roots(cvec a);

// Taylor coefficients a_k of f about c from M samples on |z - c| = r,
// returned already scaled: b_k = a_k r^k.
cvec taylor_scaled(const Analytic& f, cplx c, double r, int M);

// Derivative of f at z by a Cauchy integral on a circle of radius r.
cplx cauchy_derivative(const Analytic& f, cplx z, double r, int M = 16);

}  // namespace sturm
