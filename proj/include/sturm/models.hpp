#pragma once

#include <optional>

#include "sturm/spectrum.hpp"

namespace sturm {

// s(mu) = sin(pi mu)/mu * prod_{n<=N} (mu_n^2 - mu^2)/(n^2 - mu^2), mu_n = n for n > N.
struct SineTypeProduct {
    cvec mus;  // mu_1..mu_N

    int N() const { return static_cast<int>(mus.size()); }
    cplx root(int n) const { return n <= N() ? mus[n - 1] : cplx(n); }
};

cplx sine_product_eval(const SineTypeProduct& sp, cplx mu);
cplx product_derivative_at_root(const SineTypeProduct& sp, int n);

struct HadamardModel {
    int theta = 0;
    std::optional<cplx> mu0;
    std::vector<std::pair<cplx, cplx>> pairs;  // n = 1..N
    cplx V1{0.0}, V2{0.0};

    int N() const { return static_cast<int>(pairs.size()); }
    double m(int n) const { return 2.0 * n - theta; }
    cplx tilde(int n) const { return m(n) + V1 / m(n) + V2 / (m(n) * m(n)); }
};

// Product over all pairs, tail n > N filled with doubled tilde roots, written
// as a correction of the closed form 2 sin^2(pi mu/2) (theta = 0, with the mu0
// factor) or 2 cos^2(pi mu/2) (theta = 1).
cplx hadamard_eval(const HadamardModel& hm, cplx mu);

HadamardModel truncated_model(const HadamardModel& hm, int N);
HadamardModel hadamard_from_spectrum(const Spectrum& sp, cplx V1 = 0.0, cplx V2 = 0.0);

// Windowed norm of mu (a(mu) - b(mu)) over [-W, W].
double windowed_difference_norm(const std::function<cplx(cplx)>& a, const std::function<cplx(cplx)>& b,
                                double W, double step = 0.01);

struct Lemma5Report {
    std::vector<int> N;
    rvec norms;
    bool monotone = true;
};

Lemma5Report lemma5_diagnostic(const HadamardModel& hm, const std::vector<int>& N_list, double W = 50,
                               double step = 0.01);

struct PWDiagnostics {
    double odd_defect = 0;
    rvec integer_partial_sums;  // sum_{k<=n} |f(k)|^2
    double window_l2 = 0;
};

// grid symmetric about 0 and uniform; f_int[n-1] = f(n).
PWDiagnostics pw_membership_check(const rvec& grid, const cvec& f, const cvec& f_int);

}  // namespace sturm
