#include "sturm/models.hpp"

#include <algorithm>
#include <cmath>

namespace sturm {

namespace {

cplx even_rep(cplx mu) { return mu.real() < 0 ? -mu : mu; }

double parity(int k) { return k % 2 == 0 ? 1.0 : -1.0; }

// sin(pi z)/(z (m^2 - z^2)) without cancellation near z = m
cplx sin_over_near_int(cplx z, int m) {
    return -parity(m) * kPi * sinc(kPi * (z - static_cast<double>(m))) / (z * (static_cast<double>(m) + z));
}

}  // namespace

cplx sine_product_eval(const SineTypeProduct& sp, cplx mu) {
    const cplx z = even_rep(mu);
    const int N = sp.N();
    const int m = static_cast<int>(std::lround(z.real()));
    cplx acc;
    if (m >= 1 && m <= N) acc = sin_over_near_int(z, m) * (sp.mus[m - 1] * sp.mus[m - 1] - z * z);
    else acc = kPi * sinc(kPi * z);
    for (int k = 1; k <= N; ++k) {
        if (k == m) continue;
        const double kk = static_cast<double>(k) * k;
        acc *= (sp.mus[k - 1] * sp.mus[k - 1] - z * z) / (kk - z * z);
    }
    return acc;
}

cplx product_derivative_at_root(const SineTypeProduct& sp, int n) {
    const int N = sp.N();
    if (n < 1) throw std::invalid_argument("product_derivative_at_root: n must be >= 1");
    const cplx mun = sp.root(n);
    const double tol = 1e-13 * (1 + std::abs(mun));
    for (int k = 1; k <= N; ++k)
        if (k != n && std::abs(sp.mus[k - 1] - mun) <= tol)
            throw Error(ErrorKind::derivative_at_multiple_root, "repeated root at index " + std::to_string(n));
    if (n <= N) {
        const double j = std::round(mun.real());
        if (j > N && std::abs(mun - j) <= tol)
            throw Error(ErrorKind::derivative_at_multiple_root, "root collides with an unperturbed integer");
    } else {
        for (int k = 1; k <= N; ++k)
            if (std::abs(sp.mus[k - 1] - mun) <= tol)
                throw Error(ErrorKind::derivative_at_multiple_root, "root collides with an unperturbed integer");
    }

    if (n > N) {
        const double nn = static_cast<double>(n) * n;
        cplx acc = kPi * parity(n) / static_cast<double>(n);
        for (int k = 1; k <= N; ++k) acc *= (sp.mus[k - 1] * sp.mus[k - 1] - nn) / (static_cast<double>(k) * k - nn);
        return acc;
    }
    // s(mu) = (mu_n^2 - mu^2) g(mu), so s'(mu_n) = -2 mu_n g(mu_n)
    const cplx z = even_rep(mun);
    const int m = static_cast<int>(std::lround(z.real()));
    cplx g;
    if (m >= 1 && m <= N) {
        g = sin_over_near_int(z, m);
        if (m != n) g *= (sp.mus[m - 1] * sp.mus[m - 1] - z * z) / (static_cast<double>(n) * n - z * z);
    } else {
        g = kPi * sinc(kPi * z) / (static_cast<double>(n) * n - z * z);
    }
    for (int k = 1; k <= N; ++k) {
        if (k == m || k == n) continue;
        g *= (sp.mus[k - 1] * sp.mus[k - 1] - z * z) / (static_cast<double>(k) * k - z * z);
    }
    const cplx d = -2.0 * z * g;
    return mun.real() < 0 ? -d : d;
}

cplx hadamard_eval(const HadamardModel& hm, cplx mu) {
    const cplx z = even_rep(mu);
    const cplx z2 = z * z;
    const int N = hm.N();
    const int T = std::max({200, static_cast<int>(std::ceil(4 * std::abs(mu))), N});
    const int th = hm.theta;
    const int k = th == 0 ? static_cast<int>(std::lround(z.real() / 2))
                          : std::max(1, static_cast<int>(std::lround((z.real() + 1) / 2)));

    auto numerator = [&](int n) -> cplx {
        if (n <= N) {
            const auto& [a, b] = hm.pairs[n - 1];
            return (a * a - z2) * (b * b - z2);
        }
        const cplx t = hm.tilde(n);
        return (t * t - z2) * (t * t - z2);
    };

    cplx acc;
    if (th == 0) {
        const cplx mu0 = hm.mu0.value_or(0.0);
        if (k >= 1) {
            const double mk = 2.0 * k;
            const cplx sk = -parity(k) * (kPi / 2) * sinc(kPi * (z - mk) / 2.0);  // sin(pi z/2)/(2k - z)
            const cplx r = sk / (z * (mk + z));
            acc = 2.0 * (mu0 * mu0 - z2) * r * r * numerator(k);
        } else {
            const cplx r = (kPi / 2) * sinc(kPi * z / 2.0);
            acc = 2.0 * (mu0 * mu0 - z2) * r * r;
        }
    } else {
        const double mk = 2.0 * k - 1;
        const cplx ck = parity(k + 1) * (kPi / 2) * sinc(kPi * (z - mk) / 2.0);  // cos(pi z/2)/(m_k - z)
        const cplx r = ck / (mk + z);
        acc = 2.0 * r * r * numerator(k);
    }
    for (int n = 1; n <= T; ++n) {
        if (n == k) continue;
        const double mn = hm.m(n);
        const cplx den = mn * mn - z2;
        acc *= numerator(n) / (den * den);
    }
    // n > T: expansion of log(((tilde^2 - z^2)/(m^2 - z^2))^2) in 1/m with
    // midpoint-rule sums of m^-j
    const double M = 2.0 * T + 1 - th;
    const double S2 = 1 / (2 * M) + 1 / (6 * M * M * M);
    const double S3 = 1 / (4 * M * M) + 1 / (4 * std::pow(M, 4));
    const double S4 = 1 / (6 * std::pow(M, 3));
    const double S5 = 1 / (8 * std::pow(M, 4));
    const double S6 = 1 / (10 * std::pow(M, 5));
    const cplx V1 = hm.V1, V2 = hm.V2;
    const cplx tail = 4.0 * V1 * S2 + 4.0 * V2 * S3 + (4.0 * V1 * z2 - 2.0 * V1 * V1) * S4 +
                      4.0 * V2 * z2 * S5 + 4.0 * V1 * z2 * z2 * S6;
    return acc * std::exp(tail);
}

HadamardModel truncated_model(const HadamardModel& hm, int N) {
    if (N < 0) throw std::invalid_argument("truncated_model: N must be >= 0");
    HadamardModel t = hm;
    if (N < t.N()) t.pairs.resize(N);
    return t;
}

HadamardModel hadamard_from_spectrum(const Spectrum& sp, cplx V1, cplx V2) {
    HadamardModel hm;
    hm.theta = sp.theta;
    if (sp.theta == 0) hm.mu0 = sp.mu0.value_or(0.0);
    for (const auto& p : sp.pairs) hm.pairs.emplace_back(p.mu1, p.mu2);
    hm.V1 = V1, hm.V2 = V2;
    return hm;
}

double windowed_difference_norm(const std::function<cplx(cplx)>& a, const std::function<cplx(cplx)>& b,
                                double W, double step) {
    // the integrand is even
    int n = static_cast<int>(std::ceil(W / step));
    if (n % 2) ++n;
    const double h = W / n;
    const rvec w = simpson_weights(n, h);
    double acc = 0;
    for (int i = 0; i <= n; ++i) {
        const double mu = i * h;
        acc += w[i] * std::norm(mu * (a(mu) - b(mu)));
    }
    return std::sqrt(2 * acc);
}

Lemma5Report lemma5_diagnostic(const HadamardModel& hm, const std::vector<int>& N_list, double W,
                               double step) {
    Lemma5Report rep;
    const auto full = [&](cplx mu) { return hadamard_eval(hm, mu); };
    for (int N : N_list) {
        const HadamardModel t = truncated_model(hm, N);
        rep.N.push_back(N);
        rep.norms.push_back(windowed_difference_norm(full, [&](cplx mu) { return hadamard_eval(t, mu); }, W, step));
    }
    for (size_t i = 1; i < rep.norms.size(); ++i)
        if (rep.N[i] > rep.N[i - 1] && rep.norms[i] > rep.norms[i - 1]) rep.monotone = false;
    return rep;
}

PWDiagnostics pw_membership_check(const rvec& grid, const cvec& f, const cvec& f_int) {
    if (grid.size() != f.size() || grid.size() < 3) throw std::invalid_argument("pw_membership_check: grid/sample size mismatch");
    const size_t n = grid.size();
    PWDiagnostics d;
    for (size_t i = 0; i < n; ++i) {
        if (std::abs(grid[i] + grid[n - 1 - i]) > 1e-9 * (1 + std::abs(grid[i])))
            throw std::invalid_argument("pw_membership_check: grid is not symmetric");
        d.odd_defect = std::max(d.odd_defect, std::abs(f[i] + f[n - 1 - i]));
    }
    double s = 0;
    for (const auto& v : f_int) d.integer_partial_sums.push_back(s += std::norm(v));
    const double h = (grid.back() - grid.front()) / static_cast<double>(n - 1);
    const rvec w = simpson_weights(static_cast<int>(n - 1), h);
    double acc = 0;
    for (size_t i = 0; i < n; ++i) acc += w[i] * std::norm(f[i]);
    d.window_l2 = std::sqrt(acc);
    return d;
}

}  // namespace sturm
