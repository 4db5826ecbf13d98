#pragma once

#include <optional>

#include "sturm/direct.hpp"
#include "sturm/roots.hpp"

namespace sturm {

struct EigenPair {
    int n = 0;
    cplx mu1, mu2;
    int mult1 = 1, mult2 = 1;  // 2 on both when a merged double root fills the pair
    double raw_gap = 0;        // separation of the raw root estimates, also for merged doubles

    double gap() const { return std::abs(mu1 - mu2); }
};

struct Spectrum {
    int theta = 0;
    std::optional<cplx> mu0;
    int mu0_multiplicity = 1;
    std::vector<EigenPair> pairs;

    const EigenPair* pair(int n) const;
};

// Bins roots (Re mu >= 0 representatives) into the two series.
Spectrum eigenvalue_series(const std::vector<Root>& roots, int theta);

enum class Asymptotic { multiple, simple, undetermined };
const char* to_string(Asymptotic a);

// Trailing-window verdict on the pair gaps.
Asymptotic classify_asymptotic(const Spectrum& sp, double gap_tol, int window);

struct SpectrumOptions {
    int steps = 0;        // integrator steps; 0 picks default_steps for the search radius
    double height = 2.0;  // half-height of the search strip
    RootOptions roots;
};

// Zeros of an even entire function f with two zeros near each 2n - theta,
// n = 1..n_pairs (plus mu0 for theta = 0).
Spectrum spectrum_of(const Analytic& f, int theta, int n_pairs, const SpectrumOptions& opt = {});

Spectrum compute_spectrum(const ProblemCollection& p, int n_pairs, const SpectrumOptions& opt = {});

struct DirichletData {
    cvec roots;
    cvec c;     // c(pi, mu_n)
    cvec sdot;  // d/dmu s(pi, mu) at mu_n
    bool simple = true;
    bool zero_excluded = true;
    double min_mu_sdot = 0;  // min |mu_n sdot_n|
};

DirichletData dirichlet_spectrum(const Potential& q, int n_max, int steps = 0);

// Separation of the two roots of a pair from a local Taylor model of f on a
// small circle about the pair centre. Meant for an extended-precision f, where
// it resolves splittings far below the double-precision noise floor.
struct RefinedGap {
    int n = 0;
    cplx z1, z2;
    double gap = 0;
    double radius = 0;
    bool refined = false;  // false: the model did not show exactly two roots, gap is the raw one
};

RefinedGap refine_pair_gap(const Analytic& f, const EigenPair& p);
std::vector<RefinedGap> refine_gaps_extended(const ProblemCollection& p, const Spectrum& sp, int lo, int hi,
                                             int steps = 0);

// Spectrum rows n, j, re, im, multiplicity.
void write_spectrum_csv(const std::string& path, const Spectrum& sp);

}  // namespace sturm
