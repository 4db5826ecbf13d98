#pragma once

#include <Eigen/Dense>
#include <optional>

#include "sturm/direct.hpp"
#include "sturm/models.hpp"
#include "sturm/spectrum.hpp"

namespace sturm {

struct SpectralData {
    cvec mus;      // mu_n, n = 1..size
    cvec norming;  // c_n
    cvec sdot;     // derivative of the Dirichlet characteristic function at mu_n

    int size() const { return static_cast<int>(mus.size()); }
    cvec weights() const;    // u_n = 2 c_n / (mu_n sdot_n)
    cvec halfplane() const;  // z_n = c_n / (mu_n sdot_n)
};

SpectralData from_dirichlet(const DirichletData& d);

struct HalfPlaneCheck {
    bool ok = false;
    double phi = 0;     // all Re(exp(-i phi) z_n) > 0 when ok
    double margin = 0;  // min of cos(arg z_n - phi)
    std::vector<int> offending;  // 1-based indices on the wrong side (when !ok)
};

HalfPlaneCheck check_half_plane(const cvec& z);

// sqrt(D) on the branch with sqrt((1 - 2 alpha)^2) = 1 - 2 alpha.
cplx branch_sqrt(cplx D, cplx alpha);

// Geometry of the root selection for a given alpha.
struct BranchInfo {
    int case_id = 1;          // 1: ct+- off the imaginary axis, 2: on it
    cplx ct_plus, ct_minus;   // roots at u+ = 0
    double eps = 0;           // disk radius around 1, -1, ct+-
    double delta = 0;         // |z| < delta keeps g_n^+- within eps of -+1
    double sigma = 0;         // |z| < sigma keeps the u+ = z roots within eps of ct+-
    cplx line_dir{1.0};       // direction of the separating line (case 2)
};

BranchInfo branch_info(cplx alpha);

struct Selection {
    SpectralData data;
    HalfPlaneCheck halfplane;
    BranchInfo branch;
    double max_quadratic_residual = 0;
};

// Roots of alpha z^2 - u+(mu_n) z + (1 - alpha) = 0 picked by the parity and
// half-plane rules; indices n <= N use the small-u+ rule.
Selection choose_norming_roots(const cvec& u_plus, cplx alpha, const cvec& sdot, const cvec& mus, int N);

// Norming constants of a perturbed determinant at the base Dirichlet roots.
// delta_plus_tilde[n-1] = target Delta_+(mu_n).
cvec target_norming_constants(const cvec& delta_plus_tilde, cplx alpha, const cvec& base_c, int N0);
// Same, from the change target minus base Delta_+ (keeps the small shifts exact).
cvec target_norming_from_change(const cvec& change, cplx alpha, const cvec& base_c, int N0);

// Closed-form continuation of the F series beyond the data: weights
// (2/pi)(1 + a/n^2 + a2/n^4) at frequencies n + b/n^3 for n > M.
struct FTail {
    cplx a{0.0}, a2{0.0}, b{0.0};
    int M = 0;
};

struct GLKernel {
    int grid_size = 0;
    double h = 0;
    Eigen::MatrixXcd F;
    bool is_real = false;
    double last_term = 0;   // magnitude of the last summed term
    double asymmetry = 0;   // max |F(x,t) - F(t,x)|
};

// F(x,t) = sum_n w_n phi_n(x) phi_n(t) from grid samples of phi_n.
GLKernel kernel_from_basis(const Eigen::MatrixXcd& Phi, const Eigen::VectorXcd& w, double h);

GLKernel build_F_kernel(const SpectralData& data, int grid_size, const std::optional<FTail>& tail = {});

struct GLSolution {
    cvec Kdiag;                 // K(x_i, x_i)
    double max_residual = 0;    // discrete equation residual, relative
    double max_condition = 0;   // largest 1/rcond over x
};

// K(x_i, t_j) for j <= i.
cvec solve_gelfand_levitan(const GLKernel& k, int i);
GLSolution solve_gelfand_levitan_all(const GLKernel& k);

// Fourth-order finite-difference derivative on a uniform grid.
cvec fd4_derivative(const cvec& f, double h);

// q = 2 d/dx K(x,x).
Potential potential_from_kernel(const cvec& Kdiag, double h);

struct ReconstructionReport {
    cplx q0{0.0};
    std::optional<FTail> tail;
    double last_term = 0;
    double asymmetry = 0;
    double max_residual = 0;
    double max_condition = 0;
    int N = 0;
    double eps1 = 0;
    double det_residual = 0;  // max |Delta_q - u| on the test grid (determinant route)
    HalfPlaneCheck halfplane;
};

struct Reconstruction {
    Potential q;
    ReconstructionReport report;
};

struct DirichletReconstructOptions {
    int grid_size = 257;
    std::optional<cplx> q0;   // estimated from mu_n^2 - n^2 when absent
    bool extrapolate_tail = true;
    int fit_points = 12;
};

// Potential from Dirichlet data (mu_n, c_n, sdot_n): shift by the mean,
// solve the Gelfand-Levitan equation, shift back.
Reconstruction reconstruct_from_dirichlet_data(const SpectralData& data, const DirichletReconstructOptions& opt = {});

struct DeterminantReconstructOptions {
    int N = -1;          // < 0: smallest admissible
    double eps1 = 1e-3;
    int n_data = 200;
    int grid_size = 257;
    double test_window = 20;
    bool extrapolate_tail = true;
};

Reconstruction reconstruct_from_determinant(const DeterminantModel& u, cplx alpha, cplx gamma, int theta, cplx q0,
                                            const DeterminantReconstructOptions& opt = {});

// Potential with the base Dirichlet spectrum and norming constants moved to
// `c_target`, built from the Gelfand-Levitan equation relative to q_base.
struct PerturbedOptions {
    int grid_size = 513;
    int steps_per_cell = 16;
};

Reconstruction reconstruct_perturbed(const Potential& q_base, const SpectralData& base, const cvec& c_target,
                                     const PerturbedOptions& opt = {});

struct VerificationReport {
    double max_s = 0;        // max |s(pi, mu_n)|
    double max_c = 0;        // max |c(pi, mu_n) - c_n|
    double max_sprime = 0;   // max |s'(pi, mu_n) - 1/c_n|
    int n_check = 0;
};

VerificationReport verify_reconstruction(const Potential& qhat, const SpectralData& data, int n_check = -1,
                                         int steps = 0);

void write_spectral_data_csv(const std::string& path, const SpectralData& d);
void write_kernel_csv(const std::string& path, const GLKernel& k, int stride = 1);

}  // namespace sturm
