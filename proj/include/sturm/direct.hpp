#pragma once

#include <functional>

#include "sturm/potential.hpp"

namespace sturm {

// Values at x = pi of the fundamental system c, s of u'' = (q - mu^2) u,
// c(0) = s'(0) = 1, c'(0) = s(0) = 0.
struct EndpointSolution {
    cplx c, cp, s, sp;
    cplx mu;
    double wronskian_residual = 0;  // |c s' - c' s - 1|
};

// Step count used when none is given: max(4096, 32 |mu| pi), rounded up to a
// multiple of 64.
int default_steps(double mu_abs);

// Fixed-step fourth-order Magnus propagator for a fixed potential. Potential
// values at the Gauss nodes of every step are cached, so repeated solves at
// different mu are cheap.
class Propagator {
public:
    Propagator(const Potential& q, int steps);

    int steps() const { return steps_; }
    EndpointSolution endpoint(cplx mu) const;
    // Same scheme carried in long double; the Gauss-node samples of q stay double.
    EndpointSolution endpoint_extended(cplx mu) const;

    // c, s (and derivatives) at nodes x_k = k * stride * pi / steps,
    // k = 0..steps/stride. steps must be divisible by stride.
    struct Trajectory {
        cvec c, cp, s, sp;
    };
    Trajectory trajectory(cplx mu, int stride) const;

private:
    int steps_;
    double h_;
    cvec q1_, q2_;
};

EndpointSolution fundamental_system(const Potential& q, cplx mu, int steps);

struct ProblemCollection {
    cplx alpha{0.5};
    cplx gamma{0.0};
    int theta = 0;
    Potential q;
};

// Delta(mu) = (-1)^(theta+1) + alpha c(pi) + (1 - alpha) s'(pi) + gamma s(pi).
cplx char_determinant(const ProblemCollection& p, cplx mu, int steps = 0);
cplx determinant_from_endpoint(const ProblemCollection& p, const EndpointSolution& e);

// Characteristic determinant on a fixed step budget (for batch evaluation).
class Determinant {
public:
    Determinant(const ProblemCollection& p, int steps);
    cplx operator()(cplx mu) const;
    cplx extended(cplx mu) const;
    const Propagator& propagator() const { return prop_; }

private:
    cplx alpha_, gamma_;
    int theta_;
    Propagator prop_;
};

// Delta written as (-1)^(theta+1) + cos(pi mu) + beta sin(pi mu)/mu + f(mu)/mu.
// f is held as samples on a real grid and, when available, as an evaluator.
struct DeterminantModel {
    int theta = 0;
    cplx beta{0.0};
    rvec mu_grid;
    cvec remainder;
    std::function<cplx(cplx)> f;  // optional exact evaluator of f
    std::function<cplx(cplx)> u;  // optional exact evaluator of the whole model

    cplx f_at(cplx mu) const;
    cplx operator()(cplx mu) const;  // the full model value
};

DeterminantModel pw_remainder(const ProblemCollection& p, const rvec& mu_grid, int steps = 0);

// A model given directly by a function u(mu) of the canonical form.
DeterminantModel model_from_function(int theta, cplx beta, std::function<cplx(cplx)> u);

}  // namespace sturm
