#pragma once

#include <map>
#include <optional>

#include "sturm/bc.hpp"
#include "sturm/potential.hpp"
#include "sturm/spectrum.hpp"

namespace sturm {

// Polynomial in q, q', q'', ...: each monomial is the sorted list of
// derivative orders of its factors, e.g. {0, 0, 1} = q^2 q'.
using Monomial = std::vector<int>;
using DiffPoly = std::map<Monomial, double>;

DiffPoly diff_poly_derivative(const DiffPoly& p);
DiffPoly diff_poly_product(const DiffPoly& a, const DiffPoly& b);
int diff_poly_max_order(const DiffPoly& p);  // -1 for constants
std::string to_string(const DiffPoly& p);

// sigma_1 .. sigma_k as polynomials in the derivatives of q.
std::vector<DiffPoly> sigma_symbolic(int k);

// derivs[i] holds q^{(i)} on a common grid. Returns sigma_1 .. sigma_{p+1};
// sigma_{p+1} involves q^{(p)}, so derivs needs at least p + 1 entries.
std::vector<cvec> sigma_recursion(const std::vector<cvec>& derivs, int p);

// Required q(pi) - q(0) for the l = 0 regime (types III/IV).
cplx boundary_jump_target(const BoundaryClassification& cls);

struct AsymptoticFit {
    int l = 0;
    cvec V;              // V_1 .. V_{l+1}
    std::vector<int> n;  // fitted indices
    rvec residuals;      // |deviation| * m^{l+1}, m = 2n - theta
    rvec residual_trend; // max scaled residual over successive quarters of the range
};

// Least squares of (mu1 + mu2)/2 - m against m^{-1} .. m^{-(l+1)} over
// n_lo <= n <= n_hi (pairs missing from sp are skipped). A given V1 is held
// fixed and only V_2 .. V_{l+1} are fitted.
AsymptoticFit fit_asymptotics(const Spectrum& sp, int l, int n_lo, int n_hi, std::optional<cplx> V1 = std::nullopt);

// Derivative values at 0 (h) and pi (g); unset entries keep the value of the
// trigonometric approximation.
struct JetSpec {
    std::vector<std::optional<cplx>> h, g;
};

struct SmoothApproximant {
    // T(x) = a0 + sum_k (a_k cos kx + b_k sin kx)
    cplx a0{0.0};
    cvec a, b;
    cvec p_left, p_right;  // Taylor coefficients about 0 and pi
    double collar = 0;     // cutoff width at each end
    int smooth_order = 8;
    double trig_error = 0; // ||f - T||
    double error = 0;      // ||f - result||

    cplx trig(double x, int k = 0) const;
    cplx operator()(double x, int k = 0) const;  // k-th derivative
    Potential sample(int grid_size) const;
};

// C^K smoothstep on [0, 1] and its derivatives.
double smoothstep(double t, int K, int k = 0);

SmoothApproximant smooth_approximant_with_jets(const Potential& f, double eps, const JetSpec& jets);

}  // namespace sturm
