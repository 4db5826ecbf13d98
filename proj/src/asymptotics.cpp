#include "sturm/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace sturm {

namespace {

void add_term(DiffPoly& p, Monomial m, double c) {
    std::sort(m.begin(), m.end());
    double& v = p[m];
    v += c;
    if (v == 0) p.erase(m);
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// n (n-1) ... (n-k+1)
double falling(int n, int k) {
    double r = 1;
    for (int i = 0; i < k; ++i) r *= n - i;
    return r;
}

}  // namespace

DiffPoly diff_poly_derivative(const DiffPoly& p) {
    DiffPoly out;
    for (const auto& [m, c] : p)
        for (size_t i = 0; i < m.size(); ++i) {
            Monomial d = m;
            ++d[i];
            add_term(out, d, c);
        }
    return out;
}

DiffPoly diff_poly_product(const DiffPoly& a, const DiffPoly& b) {
    DiffPoly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Monomial m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            add_term(out, m, ca * cb);
        }
    return out;
}

int diff_poly_max_order(const DiffPoly& p) {
    int r = -1;
    for (const auto& [m, c] : p)
        for (int o : m) r = std::max(r, o);
    return r;
}

std::string to_string(const DiffPoly& p) {
    if (p.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : p) {
        os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        const double a = std::abs(c);
        if (a != 1 || m.empty()) os << a;
        for (size_t i = 0; i < m.size(); ++i) {
            if (a != 1 || i > 0) os << '*';
            os << 'q';
            if (m[i] > 0) os << '^' << '(' << m[i] << ')';
        }
        first = false;
    }
    return os.str();
}

std::vector<DiffPoly> sigma_symbolic(int k) {
    std::vector<DiffPoly> s;
    if (k <= 0) return s;
    s.push_back({{Monomial{0}, 1.0}});
    for (int j = 1; j < k; ++j) {
        // s[j] = sigma_{j+1} = -sigma_j' - sum_{i=1}^{j-1} sigma_{j-i} sigma_i
        DiffPoly next;
        for (const auto& [m, c] : diff_poly_derivative(s[j - 1])) add_term(next, m, -c);
        for (int i = 1; i <= j - 1; ++i)
            for (const auto& [m, c] : diff_poly_product(s[j - i - 1], s[i - 1])) add_term(next, m, -c);
        s.push_back(std::move(next));
    }
    return s;
}

std::vector<cvec> sigma_recursion(const std::vector<cvec>& derivs, int p) {
    if (p < 0) throw std::invalid_argument("sigma_recursion: p must be >= 0");
    if (static_cast<int>(derivs.size()) < p + 1)
        throw Error(ErrorKind::derivative_unavailable,
                    "sigma_" + std::to_string(p + 1) + " needs q^(" + std::to_string(p) + ")");
    const size_t G = derivs[0].size();
    for (const auto& d : derivs)
        if (d.size() != G) throw std::invalid_argument("sigma_recursion: derivative grids differ");
    const auto sym = sigma_symbolic(p + 1);
    std::vector<cvec> out;
    for (const auto& poly : sym) {
        cvec v(G, 0.0);
        for (const auto& [m, c] : poly)
            for (size_t i = 0; i < G; ++i) {
                cplx t = c;
                for (int o : m) t *= derivs[o][i];
                v[i] += t;
            }
        out.push_back(std::move(v));
    }
    return out;
}

cplx boundary_jump_target(const BoundaryClassification& cls) {
    const Minors& A = cls.minors;
    const double scale = std::max({std::abs(A.a14), std::abs(A.a23), 1e-300});
    if (std::abs(A.a23 - A.a14) <= 1e-12 * scale)
        throw Error(ErrorKind::type_not_applicable, "A14 = A23: the jump condition concerns types III and IV only");
    if (std::abs(A.a14 + A.a23) <= 1e-12 * scale)
        throw Error(ErrorKind::not_in_scope, "A14 + A23 = 0: boundary forms are not regular");
    return 2.0 * A.a34 * A.a34 / ((A.a14 + A.a23) * (A.a23 - A.a14));
}

AsymptoticFit fit_asymptotics(const Spectrum& sp, int l, int n_lo, int n_hi, std::optional<cplx> V1) {
    if (l < 0) throw std::invalid_argument("fit_asymptotics: l must be >= 0");
    AsymptoticFit fit;
    fit.l = l;
    std::vector<double> ms;
    cvec ys;
    for (const auto& pr : sp.pairs) {
        if (pr.n < n_lo || pr.n > n_hi) continue;
        const double m = 2.0 * pr.n - sp.theta;
        fit.n.push_back(pr.n);
        ms.push_back(m);
        ys.push_back(0.5 * (pr.mu1 + pr.mu2) - m - (V1 ? *V1 / m : cplx(0.0)));
    }
    const int K = static_cast<int>(ms.size()), P = l + 1;
    const int k0 = V1 ? 1 : 0;  // first free power minus one
    if (K < l + 3)
        throw Error(ErrorKind::fit_degenerate, "need at least " + std::to_string(l + 3) + " pairs, have " +
                                                   std::to_string(K));
    // columns scaled by the largest m so that entries stay O(1)
    const double mref = *std::min_element(ms.begin(), ms.end());
    if (V1) fit.V.push_back(*V1);
    if (P > k0) {
        Eigen::MatrixXd A(K, P - k0);
        Eigen::VectorXcd y(K);
        for (int i = 0; i < K; ++i) {
            for (int k = k0; k < P; ++k) A(i, k - k0) = std::pow(mref / ms[i], k + 1);
            y(i) = ys[i];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        if (sv(P - k0 - 1) <= 1e-12 * sv(0))
            throw Error(ErrorKind::fit_degenerate, "fit design is numerically rank deficient");
        const Eigen::VectorXcd c = svd.solve(y.real()).cast<cplx>() + kI * svd.solve(y.imag()).cast<cplx>();
        for (int k = k0; k < P; ++k) fit.V.push_back(c(k - k0) * std::pow(mref, k + 1));
    }
    for (int i = 0; i < K; ++i) {
        cplx model = V1 ? -*V1 / ms[i] : cplx(0.0);  // ys already has V1 removed
        for (int k = 0; k < P; ++k) model += fit.V[k] * std::pow(ms[i], -(k + 1));
        fit.residuals.push_back(std::abs(ys[i] - model) * std::pow(ms[i], P));
    }
    const int q = std::max(1, K / 4);
    for (int s = 0; s < K; s += q) {
        double mx = 0;
        for (int i = s; i < std::min(K, s + q); ++i) mx = std::max(mx, fit.residuals[i]);
        fit.residual_trend.push_back(mx);
    }
    return fit;
}

// s = I_t(K+1, K+1): Bernstein sum for the value, and for k >= 1 Leibniz on
// s' = t^K (1 - t)^K / B(K+1, K+1). The plain monomial form cancels badly.
double smoothstep(double t, int K, int k) {
    if (t <= 0) return 0;
    if (t >= 1) return k == 0 ? 1 : 0;
    const double u = 1 - t;
    if (k == 0) {
        double s = 0;
        for (int j = K + 1; j <= 2 * K + 1; ++j) s += binom(2 * K + 1, j) * std::pow(t, j) * std::pow(u, 2 * K + 1 - j);
        return s;
    }
    const int j = k - 1;
    double s = 0;
    for (int i = 0; i <= j; ++i) {
        if (i > K || j - i > K) continue;
        s += binom(j, i) * falling(K, i) * std::pow(t, K - i) * falling(K, j - i) * std::pow(u, K - j + i) *
             ((j - i) % 2 ? -1 : 1);
    }
    return (2 * K + 1) * binom(2 * K, K) * s;
}

cplx SmoothApproximant::trig(double x, int k) const {
    cplx v = k == 0 ? a0 : cplx(0.0);
    const double ph = k * kPi / 2;
    for (size_t j = 0; j < a.size(); ++j) {
        const double w = static_cast<double>(j + 1), f = std::pow(w, k);
        v += f * (a[j] * std::cos(w * x + ph) + b[j] * std::sin(w * x + ph));
    }
    return v;
}

namespace {

cplx poly_deriv(const cvec& p, double x, int k) {
    cplx v = 0;
    for (int i = static_cast<int>(p.size()) - 1; i >= k; --i) v = v * x + p[i] * falling(i, k);
    return v;
}

// cutoff equal to 1 on [0, d/2] and 0 beyond d
double left_cut(double x, double d, int K, int k) {
    const double t = (x - d / 2) / (d / 2);
    const double s = smoothstep(t, K, k) * std::pow(2 / d, k);
    return (k == 0 ? 1.0 : 0.0) - s;
}

}  // namespace

cplx SmoothApproximant::operator()(double x, int k) const {
    const double d = collar;
    const int K = smooth_order;
    cplx v = 0;
    for (int j = 0; j <= k; ++j) {
        const double c = binom(k, j);
        const int r = k - j;
        const double e1 = left_cut(x, d, K, r);
        const double e2 = (r % 2 ? -1.0 : 1.0) * left_cut(kPi - x, d, K, r);
        const double e0 = (r == 0 ? 1.0 : 0.0) - e1 - e2;
        if (e0 != 0) v += c * trig(x, j) * e0;
        if (e1 != 0) v += c * poly_deriv(p_left, x, j) * e1;
        if (e2 != 0) v += c * poly_deriv(p_right, x - kPi, j) * e2;
    }
    return v;
}

Potential SmoothApproximant::sample(int grid_size) const {
    return Potential::from_function([this](double x) { return (*this)(x); }, grid_size);
}

SmoothApproximant smooth_approximant_with_jets(const Potential& f, double eps, const JetSpec& jets) {
    if (!(eps > 0)) throw std::invalid_argument("smooth_approximant_with_jets: eps must be positive");
    const int G = f.grid_size();
    const double h = f.h();
    const rvec w = simpson_weights(G - 1, h);
    Eigen::VectorXd sw(G);
    Eigen::VectorXcd fv(G);
    for (int i = 0; i < G; ++i) sw(i) = std::sqrt(w[i]), fv(i) = f.samples()[i];

    SmoothApproximant s;
    s.trig_error = std::numeric_limits<double>::infinity();
    // least squares on the grid, degree doubled until ||f - T|| < eps/4
    for (int deg = 4;; deg *= 2) {
        const int cols = 2 * deg + 1;
        if (cols > (G - 1) / 2 && deg > 4) break;
        Eigen::MatrixXd A(G, cols);
        for (int i = 0; i < G; ++i) {
            const double x = i * h;
            A(i, 0) = sw(i);
            for (int k = 1; k <= deg; ++k) {
                A(i, 2 * k - 1) = sw(i) * std::cos(k * x);
                A(i, 2 * k) = sw(i) * std::sin(k * x);
            }
        }
        Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXcd rhs = sw.cast<cplx>().cwiseProduct(fv);
        const Eigen::VectorXcd c = svd.solve(rhs.real()).cast<cplx>() + kI * svd.solve(rhs.imag()).cast<cplx>();
        const double err = (rhs - A.cast<cplx>() * c).norm();
        if (err < s.trig_error) {
            s.trig_error = err;
            s.a0 = c(0);
            s.a.assign(deg, 0.0);
            s.b.assign(deg, 0.0);
            for (int k = 1; k <= deg; ++k) s.a[k - 1] = c(2 * k - 1), s.b[k - 1] = c(2 * k);
        }
        if (s.trig_error < eps / 4) break;
    }

    const size_t m = std::max(jets.h.size(), jets.g.size());
    s.smooth_order = std::max(8, static_cast<int>(m));
    s.p_left.assign(m, 0.0);
    s.p_right.assign(m, 0.0);
    double fact = 1;
    for (size_t i = 0; i < m; ++i) {
        if (i > 0) fact *= static_cast<double>(i);
        const cplx hl = i < jets.h.size() && jets.h[i] ? *jets.h[i] : s.trig(0.0, static_cast<int>(i));
        const cplx gr = i < jets.g.size() && jets.g[i] ? *jets.g[i] : s.trig(kPi, static_cast<int>(i));
        s.p_left[i] = hl / fact;
        s.p_right[i] = gr / fact;
    }

    // ||(T - P_j) eta_j|| over each collar; halve the collar until both are below eps/4
    auto collar_norm = [&](double d, bool left) {
        const int n = 2000;
        const rvec cw = simpson_weights(n, d / n);
        double acc = 0;
        for (int i = 0; i <= n; ++i) {
            const double t = i * d / n;
            const double x = left ? t : kPi - t;
            const cplx p = left ? poly_deriv(s.p_left, x, 0) : poly_deriv(s.p_right, x - kPi, 0);
            acc += cw[i] * std::norm((s.trig(x) - p) * left_cut(t, d, s.smooth_order, 0));
        }
        return std::sqrt(acc);
    };
    double d = kPi / 4, c1 = 0, c2 = 0;
    for (;; d /= 2) {
        c1 = collar_norm(d, true);
        c2 = collar_norm(d, false);
        if ((c1 < eps / 4 && c2 < eps / 4) || d < 1e-9) break;
    }
    s.collar = d;
    s.error = s.trig_error + c1 + c2;
    return s;
}

}  // namespace sturm
