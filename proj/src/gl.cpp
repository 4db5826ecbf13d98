#include "sturm/gl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>

namespace sturm {

cvec SpectralData::weights() const {
    cvec u(mus.size());
    for (size_t i = 0; i < mus.size(); ++i) u[i] = 2.0 * norming[i] / (mus[i] * sdot[i]);
    return u;
}

cvec SpectralData::halfplane() const {
    cvec z(mus.size());
    for (size_t i = 0; i < mus.size(); ++i) z[i] = norming[i] / (mus[i] * sdot[i]);
    return z;
}

SpectralData from_dirichlet(const DirichletData& d) { return {d.roots, d.c, d.sdot}; }

HalfPlaneCheck check_half_plane(const cvec& z) {
    HalfPlaneCheck r;
    if (z.empty()) {
        r.ok = true;
        r.margin = 1;
        return r;
    }
    for (size_t i = 0; i < z.size(); ++i)
        if (!(std::abs(z[i]) > 0) || !std::isfinite(std::abs(z[i]))) r.offending.push_back(static_cast<int>(i) + 1);
    if (!r.offending.empty()) return r;

    std::vector<double> ang(z.size());
    for (size_t i = 0; i < z.size(); ++i) ang[i] = std::arg(z[i]);
    std::vector<double> s = ang;
    std::sort(s.begin(), s.end());
    double gap = s.front() + 2 * kPi - s.back();
    size_t after = 0;  // index in s that starts the occupied arc
    for (size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i + 1] - s[i] > gap) gap = s[i + 1] - s[i], after = i + 1;
    const double arc = 2 * kPi - gap;
    r.phi = s[after] + arc / 2;
    r.margin = std::cos(arc / 2);
    if (gap > kPi && r.margin > 0) {
        r.ok = true;
        return r;
    }
    cplx dir = 0;
    for (auto v : z) dir += v / std::abs(v);
    r.phi = std::arg(dir);
    r.margin = 1;
    for (size_t i = 0; i < z.size(); ++i) {
        const double c = std::cos(ang[i] - r.phi);
        r.margin = std::min(r.margin, c);
        if (c <= 0) r.offending.push_back(static_cast<int>(i) + 1);
    }
    return r;
}

cplx branch_sqrt(cplx D, cplx alpha) {
    const cplx w = 1.0 - 2.0 * alpha;
    return w * std::sqrt(D / (w * w));
}

namespace {

bool near(cplx a, double v) { return std::abs(a - v) <= 1e-12 * (1 + std::abs(a)); }

void check_alpha(cplx alpha) {
    if (near(alpha, 0) || near(alpha, 0.5) || near(alpha, 1))
        throw Error(ErrorKind::out_of_theorem_scope, "alpha must avoid 0, 1/2 and 1");
}

// largest r such that pred holds on every sampled circle of radius <= r
double admissible_radius(const std::function<bool(cplx)>& pred) {
    auto ok = [&](double r) {
        for (double f : {0.25, 0.5, 0.75, 1.0})
            for (int j = 0; j < 64; ++j)
                if (!pred(f * r * std::polar(1.0, 2 * kPi * (j + 0.5) / 64))) return false;
        return true;
    };
    double lo = 0, hi = 1e-8;
    if (!ok(hi)) return 0;
    while (ok(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > 16) return lo;
    }
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

BranchInfo branch_info(cplx alpha) {
    check_alpha(alpha);
    BranchInfo b;
    const cplx p = 4.0 * alpha * (1.0 - alpha);
    const cplx s0 = std::sqrt(-p);
    b.ct_plus = s0 / (2.0 * alpha);
    b.ct_minus = -b.ct_plus;
    if (std::abs(b.ct_plus.real()) > 1e-12 * std::abs(b.ct_plus)) {
        b.case_id = 1;
        b.eps = 0.9 * std::min(0.5, std::abs(b.ct_plus.real()));
    } else {
        b.case_id = 2;
        const cplx d = b.ct_plus - 1.0;
        b.line_dir = d / std::abs(d);
        b.eps = 0.9 * std::min(0.5, std::abs(d.imag()) / std::abs(d));
    }
    // roots continued from ct+- (sqrt branch continuous at z = 0)
    const auto root_near = [&](cplx z, double sign) {
        const cplx S = s0 * std::sqrt((z * z - p) / (s0 * s0));
        return (z + sign * S) / (2.0 * alpha);
    };
    b.sigma = admissible_radius([&](cplx z) {
        return std::abs(root_near(z, 1) - b.ct_plus) < b.eps && std::abs(root_near(z, -1) - b.ct_minus) < b.eps;
    });
    b.delta = admissible_radius([&](cplx z) {
        const cplx ue = 1.0 + z, uo = -1.0 + z;
        const cplx ge = (ue - branch_sqrt(ue * ue - p, alpha)) / (2.0 * alpha);
        const cplx go = (uo + branch_sqrt(uo * uo - p, alpha)) / (2.0 * alpha);
        return std::abs(ge - 1.0) < b.eps && std::abs(go + 1.0) < b.eps;
    });
    return b;
}

Selection choose_norming_roots(const cvec& u_plus, cplx alpha, const cvec& sdot, const cvec& mus, int N) {
    if (u_plus.size() != mus.size() || sdot.size() != mus.size())
        throw std::invalid_argument("choose_norming_roots: size mismatch");
    Selection sel;
    sel.branch = branch_info(alpha);
    const BranchInfo& bi = sel.branch;
    const cplx p = 4.0 * alpha * (1.0 - alpha);
    // even indices take the small-u+ root on the side of 1
    cplx even_target = bi.ct_plus, odd_target = bi.ct_minus;
    if (bi.case_id == 1 && bi.ct_plus.real() < 0) std::swap(even_target, odd_target);

    sel.data.mus = mus;
    sel.data.sdot = sdot;
    for (size_t i = 0; i < mus.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        const bool even = n % 2 == 0;
        const cplx up = u_plus[i];
        const cplx r = branch_sqrt(up * up - p, alpha);
        const cplx cp = (up + r) / (2.0 * alpha), cm = (up - r) / (2.0 * alpha);
        cplx c;
        if (n > N) {
            c = even ? cm : cp;
        } else {
            const cplx t = even ? even_target : odd_target;
            c = std::abs(cp - t) <= std::abs(cm - t) ? cp : cm;
        }
        sel.data.norming.push_back(c);
        const double scale = std::abs(alpha) * std::norm(c) + std::abs(up) * std::abs(c) + std::abs(1.0 - alpha);
        sel.max_quadratic_residual =
            std::max(sel.max_quadratic_residual, std::abs(alpha * c * c - up * c + (1.0 - alpha)) / scale);
    }
    sel.halfplane = check_half_plane(sel.data.halfplane());
    if (!sel.halfplane.ok) {
        std::string idx;
        for (size_t k = 0; k < sel.halfplane.offending.size() && k < 20; ++k)
            idx += (k ? "," : "") + std::to_string(sel.halfplane.offending[k]);
        throw Error(ErrorKind::selection_failure, "z_n not in one open half-plane; offending n = " + idx);
    }
    return sel;
}

cvec target_norming_from_change(const cvec& change, cplx alpha, const cvec& base_c, int N0) {
    if (change.size() != base_c.size()) throw std::invalid_argument("target_norming_from_change: size mismatch");
    cvec out(base_c.size());
    const bool a1 = std::abs(alpha - 1.0) <= 1e-14, a0 = std::abs(alpha) <= 1e-14;
    const cplx p = 4.0 * alpha * (1.0 - alpha);
    for (size_t i = 0; i < base_c.size(); ++i) {
        const cplx c = base_c[i], ch = change[i];
        if (a1) {
            out[i] = c + ch;
            continue;
        }
        if (a0) {
            const cplx dt = 1.0 / c + ch;
            if (dt == 0.0) throw Error(ErrorKind::division_by_zero, "target Delta_+ vanishes at n = " + std::to_string(i + 1));
            out[i] = 1.0 / dt;
            continue;
        }
        const cplx dp = alpha * c + (1.0 - alpha) / c;
        const cplx D = dp * dp - p;
        const cplx r = branch_sqrt(D, alpha);
        const double s = std::abs(c - (dp + r) / (2.0 * alpha)) <= std::abs(c - (dp - r) / (2.0 * alpha)) ? 1.0 : -1.0;
        const cplx dpt = dp + ch;
        const cplx Dt = D + ch * (dpt + dp);
        const cplx rt = branch_sqrt(Dt, alpha);
        double st = s;
        if (static_cast<int>(i) + 1 <= N0) st = std::abs(s * r - rt) <= std::abs(s * r + rt) ? 1.0 : -1.0;
        const cplx P = s * r, Pt = st * rt;
        const cplx dP = std::abs(Pt + P) > std::abs(Pt - P) ? (Dt - D) / (Pt + P) : Pt - P;
        out[i] = c + (ch + dP) / (2.0 * alpha);
    }
    return out;
}

cvec target_norming_constants(const cvec& delta_plus_tilde, cplx alpha, const cvec& base_c, int N0) {
    if (delta_plus_tilde.size() != base_c.size()) throw std::invalid_argument("target_norming_constants: size mismatch");
    cvec ch(base_c.size());
    for (size_t i = 0; i < base_c.size(); ++i) {
        const cplx c = base_c[i];
        ch[i] = delta_plus_tilde[i] - (alpha * c + (1.0 - alpha) / c);
    }
    return target_norming_from_change(ch, alpha, base_c, N0);
}

GLKernel kernel_from_basis(const Eigen::MatrixXcd& Phi, const Eigen::VectorXcd& w, double h) {
    GLKernel k;
    k.grid_size = static_cast<int>(Phi.rows());
    k.h = h;
    k.F = Phi * w.asDiagonal() * Phi.transpose();
    k.is_real = Phi.imag().cwiseAbs().maxCoeff() == 0 && w.imag().cwiseAbs().maxCoeff() == 0;
    k.asymmetry = (k.F - k.F.transpose()).cwiseAbs().maxCoeff();
    return k;
}

namespace {

// sums over n > M of cos(n y)/n^2, cos(n y)/n^4, sin(n y)/n^3 for |y| <= 2 pi
struct TailSums {
    double c2, c4, s3;
};

TailSums tail_sums(double y, int M) {
    const double a = std::abs(y), sg = y < 0 ? -1.0 : 1.0;
    const double pi2 = kPi * kPi;
    TailSums t{pi2 / 6 - kPi * a / 2 + a * a / 4,
               pi2 * pi2 / 90 - pi2 * a * a / 12 + kPi * a * a * a / 12 - a * a * a * a / 48,
               sg * (pi2 * a / 6 - kPi * a * a / 4 + a * a * a / 12)};
    for (int n = 1; n <= M; ++n) {
        const double nn = n, c = std::cos(n * y), s = std::sin(n * y);
        t.c2 -= c / (nn * nn);
        t.c4 -= c / (nn * nn * nn * nn);
        t.s3 -= s / (nn * nn * nn);
    }
    return t;
}

}  // namespace

GLKernel build_F_kernel(const SpectralData& data, int grid_size, const std::optional<FTail>& tail) {
    const int G = grid_size, M = data.size();
    if (G < 5) throw std::invalid_argument("build_F_kernel: grid too small");
    const double h = kPi / (G - 1);
    const cvec u = data.weights();
    for (const auto& v : u)
        if (!std::isfinite(std::abs(v))) throw Error(ErrorKind::kernel_divergence, "non-finite weight");
    Eigen::MatrixXcd Phi(G, 2 * M);
    Eigen::VectorXcd w(2 * M);
    for (int n = 1; n <= M; ++n) {
        w(n - 1) = u[n - 1];
        w(M + n - 1) = -2.0 / kPi;
        for (int i = 0; i < G; ++i) {
            Phi(i, n - 1) = std::sin(data.mus[n - 1] * (i * h));
            Phi(i, M + n - 1) = std::sin(n * (i * h));
        }
    }
    GLKernel k = kernel_from_basis(Phi, w, h);
    if (M > 0) {
        double lt = 0;
        for (int i = 0; i < G; ++i)
            lt = std::max(lt, std::abs(u[M - 1] * std::pow(std::sin(data.mus[M - 1] * (i * h)), 2) -
                                       (2 / kPi) * std::pow(std::sin(M * (i * h)), 2)));
        k.last_term = lt;
        // summable weights approach 2/pi
        if (std::abs(u[M - 1] - 2 / kPi) > 1e3) throw Error(ErrorKind::kernel_divergence, "weights do not approach 2/pi");
    }
    if (tail) {
        std::vector<TailSums> T(3 * G);  // y = (k - G) h, k = 0..3G-1
        for (int j = 0; j < 3 * G; ++j) T[j] = tail_sums((j - G) * h, tail->M);
        for (int i = 0; i < G; ++i)
            for (int j = 0; j < G; ++j) {
                const TailSums& dm = T[i - j + G];
                const TailSums& dp = T[i + j + G];
                const double x = i * h, t = j * h;
                k.F(i, j) += (tail->a * (dm.c2 - dp.c2) + tail->a2 * (dm.c4 - dp.c4) +
                              tail->b * ((x + t) * dp.s3 + (t - x) * dm.s3)) / kPi;
            }
        k.is_real = k.is_real && tail->a.imag() == 0 && tail->a2.imag() == 0 && tail->b.imag() == 0;
    }
    return k;
}

namespace {

template <class Mat, class Vec>
Vec gl_row(const Mat& F, double h, int i, double& residual, double& condition) {
    const int n = i + 1;
    const rvec w = simpson_weights(i, h);
    Mat A = Mat::Identity(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) A(j, l) += w[l] * F(l, j);
    const Vec rhs = -F.row(i).head(n).transpose();
    Eigen::PartialPivLU<Mat> lu(A);
    const double rc = lu.rcond();
    condition = rc > 0 ? 1 / rc : INFINITY;
    const Vec k = lu.solve(rhs);
    residual = (A * k - rhs).cwiseAbs().maxCoeff() / (1 + rhs.cwiseAbs().maxCoeff());
    return k;
}

}  // namespace

cvec solve_gelfand_levitan(const GLKernel& k, int i) {
    double res, cond;
    cvec out(i + 1);
    if (k.is_real) {
        const Eigen::MatrixXd Fr = k.F.real();
        const Eigen::VectorXd v = gl_row<Eigen::MatrixXd, Eigen::VectorXd>(Fr, k.h, i, res, cond);
        for (int j = 0; j <= i; ++j) out[j] = v(j);
    } else {
        const Eigen::VectorXcd v = gl_row<Eigen::MatrixXcd, Eigen::VectorXcd>(k.F, k.h, i, res, cond);
        for (int j = 0; j <= i; ++j) out[j] = v(j);
    }
    if (cond > 1e12) throw Error(ErrorKind::unique_solvability_failure, "Gelfand-Levitan system is numerically singular");
    return out;
}

GLSolution solve_gelfand_levitan_all(const GLKernel& k) {
    GLSolution s;
    s.Kdiag.resize(k.grid_size);
    const Eigen::MatrixXd Fr = k.is_real ? Eigen::MatrixXd(k.F.real()) : Eigen::MatrixXd();
    for (int i = 0; i < k.grid_size; ++i) {
        double res, cond;
        if (k.is_real) {
            const Eigen::VectorXd v = gl_row<Eigen::MatrixXd, Eigen::VectorXd>(Fr, k.h, i, res, cond);
            s.Kdiag[i] = v(i);
        } else {
            const Eigen::VectorXcd v = gl_row<Eigen::MatrixXcd, Eigen::VectorXcd>(k.F, k.h, i, res, cond);
            s.Kdiag[i] = v(i);
        }
        if (cond > 1e12)
            throw Error(ErrorKind::unique_solvability_failure,
                        "Gelfand-Levitan system is numerically singular at x = " + std::to_string(i * k.h));
        s.max_residual = std::max(s.max_residual, res);
        s.max_condition = std::max(s.max_condition, cond);
    }
    return s;
}

cvec fd4_derivative(const cvec& f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 5) throw std::invalid_argument("fd4_derivative: need at least 5 points");
    cvec d(n);
    for (int i = 2; i < n - 2; ++i) d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12 * h);
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12 * h);
    d[n - 1] = -(-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] - 3.0 * f[n - 5]) / (12 * h);
    d[n - 2] = -(-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]) / (12 * h);
    return d;
}

Potential potential_from_kernel(const cvec& Kdiag, double h) {
    cvec q = fd4_derivative(Kdiag, h);
    for (auto& v : q) v *= 2.0;
    return Potential(std::move(q));
}

namespace {

// least squares y_k ~ c0 + c1 / n_k^2
std::pair<cplx, cplx> fit_const_inv2(const std::vector<double>& n, const cvec& y) {
    const int K = static_cast<int>(n.size());
    Eigen::MatrixXcd A(K, 2);
    Eigen::VectorXcd b(K);
    for (int i = 0; i < K; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = 1.0 / (n[i] * n[i]);
        b(i) = y[i];
    }
    const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(b);
    return {c(0), c(1)};
}

FTail fit_tail(const SpectralData& d, int K) {
    const int M = d.size();
    const cvec u = d.weights();
    std::vector<double> nn;
    cvec r, b;
    for (int n = M - K + 1; n <= M; ++n) {
        nn.push_back(n);
        r.push_back((u[n - 1] * kPi / 2.0 - 1.0) * double(n) * double(n));
        b.push_back((d.mus[n - 1] - double(n)) * std::pow(double(n), 3));
    }
    FTail t;
    std::tie(t.a, t.a2) = fit_const_inv2(nn, r);
    t.b = fit_const_inv2(nn, b).first;
    t.M = M;
    return t;
}

}  // namespace

Reconstruction reconstruct_from_dirichlet_data(const SpectralData& data, const DirichletReconstructOptions& opt) {
    const int M = data.size();
    if (M < 1) throw std::invalid_argument("reconstruct_from_dirichlet_data: empty data");
    Reconstruction rec;
    const int K = std::min(opt.fit_points, M);
    std::vector<double> nn;
    for (int n = M - K + 1; n <= M; ++n) nn.push_back(n);
    cplx q0;
    if (opt.q0) {
        q0 = *opt.q0;
    } else if (K >= 3) {
        cvec y;
        for (double n : nn) y.push_back(data.mus[n - 1] * data.mus[n - 1] - n * n);
        q0 = fit_const_inv2(nn, y).first;
    } else {
        q0 = data.mus[M - 1] * data.mus[M - 1] - static_cast<double>(M) * M;
    }
    rec.report.q0 = q0;

    const cvec u = data.weights();
    SpectralData shifted;
    for (int n = 1; n <= M; ++n) {
        const cplx mu = data.mus[n - 1];
        const cplx mt = sqrt_re_pos(mu * mu - q0);
        const cplx ut = u[n - 1] * mu * mu / (mt * mt);
        shifted.mus.push_back(mt);
        // keep u_n = 2 c / (mu sdot) by storing c = ut/2 and sdot = 1/mu
        shifted.norming.push_back(ut / 2.0);
        shifted.sdot.push_back(1.0 / mt);
    }
    std::optional<FTail> tail;
    if (opt.extrapolate_tail && K >= 4) tail = fit_tail(shifted, K);
    rec.report.tail = tail;
    const GLKernel k = build_F_kernel(shifted, opt.grid_size, tail);
    rec.report.last_term = k.last_term;
    rec.report.asymmetry = k.asymmetry;
    const GLSolution sol = solve_gelfand_levitan_all(k);
    rec.report.max_residual = sol.max_residual;
    rec.report.max_condition = sol.max_condition;
    rec.q = potential_from_kernel(sol.Kdiag, k.h).shifted(q0);
    return rec;
}

Reconstruction reconstruct_from_determinant(const DeterminantModel& u, cplx alpha, cplx gamma, int theta, cplx q0,
                                            const DeterminantReconstructOptions& opt) {
    check_alpha(alpha);
    const double sign = theta == 0 ? -1.0 : 1.0;
    const auto ut = [&](cplx mu) { return q0 == 0.0 ? u(mu) : u(sqrt_re_pos(mu * mu + q0)); };
    const auto up = [&](cplx mu) { return ut(mu) - sign; };
    const BranchInfo bi = branch_info(alpha);
    const double eps1 = std::min({opt.eps1, 0.9 * bi.delta, 0.9 * bi.sigma / (1 + kPi)});
    if (!(eps1 > 0)) throw Error(ErrorKind::selection_failure, "no admissible eps1 for this alpha");
    const int nd = opt.n_data;

    rvec devabs(nd + 2, 0.0);
    for (int n = 1; n <= nd; ++n) devabs[n] = std::abs(up(static_cast<double>(n)) - (n % 2 ? -1.0 : 1.0));
    // suffix maxima
    rvec tailmax(nd + 2, 0.0);
    for (int n = nd; n >= 1; --n) tailmax[n] = std::max(devabs[n], tailmax[n + 1]);
    auto admissible = [&](int N) {
        if (N + 1 <= nd && !(tailmax[N + 1] < eps1)) return false;
        // the clustered roots near N + 1/2 need u+ within sigma of 0
        for (double d : {-eps1, 0.0, eps1})
            if (N >= 1 && !(std::abs(up(N + 0.5 + d)) < bi.sigma)) return false;
        return true;
    };
    int N = opt.N;
    if (N < 0) {
        N = 0;
        while (N < nd && !admissible(N)) ++N;
        if (!admissible(N)) throw Error(ErrorKind::increase_n, "no admissible N below the data length");
    } else if (!admissible(N)) {
        throw Error(ErrorKind::increase_n, "|u+(n) - (-1)^n| >= eps1 beyond N = " + std::to_string(N));
    }

    SineTypeProduct sp;
    for (int n = 1; n <= N; ++n) sp.mus.push_back(N + 0.5 + eps1 * (2.0 * n - N - 1) / (N + 1));
    cvec mus, sd, upv;
    for (int n = 1; n <= nd; ++n) {
        mus.push_back(sp.root(n));
        sd.push_back(product_derivative_at_root(sp, n));
        upv.push_back(up(mus.back()));
    }
    Selection sel = choose_norming_roots(upv, alpha, sd, mus, N);

    Reconstruction rec;
    rec.report.N = N;
    rec.report.eps1 = eps1;
    rec.report.halfplane = sel.halfplane;
    if (opt.extrapolate_tail && nd - N >= 16) rec.report.tail = fit_tail(sel.data, 12);
    const GLKernel k = build_F_kernel(sel.data, opt.grid_size, rec.report.tail);
    rec.report.last_term = k.last_term;
    rec.report.asymmetry = k.asymmetry;
    const GLSolution sol = solve_gelfand_levitan_all(k);
    rec.report.max_residual = sol.max_residual;
    rec.report.max_condition = sol.max_condition;
    rec.q = potential_from_kernel(sol.Kdiag, k.h).shifted(q0);
    rec.report.q0 = q0;

    ProblemCollection pc{alpha, gamma, theta, rec.q};
    Determinant det(pc, default_steps(opt.test_window + 1));
    double res = 0;
    for (double mu = 0; mu <= opt.test_window + 1e-9; mu += 0.1) res = std::max(res, std::abs(det(mu) - u(mu)));
    rec.report.det_residual = res;
    return rec;
}

Reconstruction reconstruct_perturbed(const Potential& q_base, const SpectralData& base, const cvec& c_target,
                                     const PerturbedOptions& opt) {
    if (c_target.size() != base.mus.size()) throw std::invalid_argument("reconstruct_perturbed: size mismatch");
    const int G = opt.grid_size, spc = opt.steps_per_cell;
    if (spc < 2 || spc % 2) throw std::invalid_argument("reconstruct_perturbed: steps_per_cell must be even");
    const Potential qb = q_base.resampled(G);
    const int S = (G - 1) * spc;
    const double hf = kPi / S;
    const Propagator prop(qb, S);
    std::vector<int> active;
    for (int i = 0; i < base.size(); ++i)
        if (c_target[i] != base.norming[i]) active.push_back(i);
    Reconstruction rec;
    if (active.empty()) {
        rec.q = qb;
        return rec;
    }
    // The kernel is degenerate, F(x, t) = sum_j w_j phi_j(x) phi_j(t), so
    // K(x, t) = sum_j g_j(x) phi_j(t) with (I + W A(x)) g = -W phi(x),
    // A(x) = int_0^x phi phi^T.
    const int r = static_cast<int>(active.size());
    Eigen::MatrixXcd Phi(S + 1, r), dPhi(S + 1, r);
    Eigen::VectorXcd w(r);
    for (int a = 0; a < r; ++a) {
        const int i = active[a];
        const cplx mu = base.mus[i];
        w(a) = 2.0 * (c_target[i] - base.norming[i]) / (mu * base.sdot[i]);
        const auto tr = prop.trajectory(mu, 1);
        for (int k = 0; k <= S; ++k) Phi(k, a) = mu * tr.s[k], dPhi(k, a) = mu * tr.sp[k];
    }
    rec.report.last_term = std::abs(w(r - 1));
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(r, r);
    cvec dK(G);
    double worst_res = 0, worst_cond = 1;
    for (int k = 0; k <= S; k += 2) {
        if (k > 0) {
            const auto p0 = Phi.row(k - 2), p1 = Phi.row(k - 1), p2 = Phi.row(k);
            A.noalias() += (hf / 3) * (p0.transpose() * p0 + 4.0 * (p1.transpose() * p1) + p2.transpose() * p2);
        }
        if (k % spc) continue;
        const Eigen::VectorXcd ph = Phi.row(k).transpose(), dph = dPhi.row(k).transpose();
        Eigen::MatrixXcd M = w.asDiagonal() * A;
        M.diagonal().array() += 1.0;
        const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
        const double cond = 1.0 / std::max(lu.rcond(), 1e-300);
        if (cond > 1e12)
            throw Error(ErrorKind::unique_solvability_failure,
                        "perturbed Gelfand-Levitan system is numerically singular at x = " + std::to_string(k * hf));
        const Eigen::VectorXcd rhs = -(w.asDiagonal() * ph);
        const Eigen::VectorXcd g = lu.solve(rhs);
        worst_res = std::max(worst_res, (M * g - rhs).cwiseAbs().maxCoeff());
        worst_cond = std::max(worst_cond, cond);
        const Eigen::VectorXcd gp = lu.solve(-(w.asDiagonal() * (dph + ph * ph.transpose() * g)));
        dK[k / spc] = gp.dot(ph.conjugate()) + g.dot(dph.conjugate());
    }
    rec.report.max_residual = worst_res;
    rec.report.max_condition = worst_cond;
    cvec s = qb.samples();
    for (int j = 0; j < G; ++j) s[j] += 2.0 * dK[j];
    rec.q = Potential(std::move(s), q_base.interp());
    return rec;
}

VerificationReport verify_reconstruction(const Potential& qhat, const SpectralData& data, int n_check, int steps) {
    VerificationReport r;
    r.n_check = n_check < 0 ? data.size() : std::min(n_check, data.size());
    double mumax = 0;
    for (int i = 0; i < r.n_check; ++i) mumax = std::max(mumax, std::abs(data.mus[i]));
    const Propagator prop(qhat, steps > 0 ? steps : default_steps(mumax + 1));
    for (int i = 0; i < r.n_check; ++i) {
        const EndpointSolution e = prop.endpoint(data.mus[i]);
        r.max_s = std::max(r.max_s, std::abs(e.s));
        r.max_c = std::max(r.max_c, std::abs(e.c - data.norming[i]));
        r.max_sprime = std::max(r.max_sprime, std::abs(e.sp - 1.0 / data.norming[i]));
    }
    return r;
}

void write_spectral_data_csv(const std::string& path, const SpectralData& d) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::io, "cannot write " + path);
    os << std::setprecision(17) << "n,re_mu,im_mu,re_c,im_c\n";
    for (int i = 0; i < d.size(); ++i)
        os << i + 1 << ',' << d.mus[i].real() << ',' << d.mus[i].imag() << ',' << d.norming[i].real() << ','
           << d.norming[i].imag() << '\n';
}

void write_kernel_csv(const std::string& path, const GLKernel& k, int stride) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::io, "cannot write " + path);
    os << std::setprecision(17) << "x,t,re_F,im_F\n";
    for (int i = 0; i < k.grid_size; i += stride)
        for (int j = 0; j < k.grid_size; j += stride)
            os << i * k.h << ',' << j * k.h << ',' << k.F(i, j).real() << ',' << k.F(i, j).imag() << '\n';
}

}  // namespace sturm
