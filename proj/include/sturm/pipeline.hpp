#pragma once

#include <cstdint>
#include <string>

#include "sturm/asymptotics.hpp"
#include "sturm/gl.hpp"
#include "sturm/models.hpp"

namespace sturm {

struct Theorem3Options {
    int grid_size = 513;
    int recon_grid = 2049;  // grid of q_N; the moved norming constants reach frequencies near 4N
    int n_pairs = 0;        // pairs computed for the fit; 0 picks max(2N, N + 20)
    int fit_l = 3;          // V_3.. only absorb the fit tail, the model uses V1, V2
    int verify_pairs = 10;  // gaps checked for N < n <= N + verify_pairs
    double gap_tol = 1e-6;
    double mean_tol = 1e-8;
    std::uint64_t seed = 1;
    int max_retries = 8;
    int steps_per_cell = 16;
    bool strict = false;    // throw pipeline_verification_failure instead of flagging
};

struct GapRow {
    int n = 0;
    cplx mu1, mu2;
    double gap = 0, raw_gap = 0;
    int mult = 1;
    double refined_gap = -1;  // extended-precision local model; < 0 when not refined
};

struct Theorem3Report {
    int N = 0;
    double eps = 0;
    std::uint64_t seed = 0;
    int retries = 0;
    bool dirichlet_simple = false, zero_excluded = false;
    cplx jump_target{0.0};
    double smooth_collar = 0;
    double dist_perturbation = 0;  // ||q - q1||
    double dist_smoothing = 0;     // ||q1 - q2||
    double dist_reconstruction = 0;// ||q2 - q_N||
    double dist_total = 0;         // ||q - q_N||
    cplx V1, V2, V1_identity;      // V1 is the free fit; the model uses V1_identity
    cplx V2_free;
    rvec fit_residual_trend;
    int n_pairs = 0, n_dirichlet = 0;
    double max_change = 0;
    double gl_residual = 0, gl_condition = 0;
    double det_residual = 0;       // |Delta(q_N) - Delta_N| on the test grid
    cplx mean_q, mean_q2, mean_qN;
    bool mean_ok = false;          // <q_N> = <q2>: the Dirichlet spectrum was kept
    std::vector<GapRow> base_gaps, gaps;
    bool gaps_ok = false;
    bool verified = false;
    std::string failure;
};

struct Theorem3Result {
    Potential q1, q2, qN;
    Theorem3Report report;
};

Theorem3Result theorem3_pipeline(const Potential& q, double eps, const BoundaryClassification& cls, int N,
                                 const Theorem3Options& opt = {});

std::string report_json(const Theorem3Report& r);

}  // namespace sturm
