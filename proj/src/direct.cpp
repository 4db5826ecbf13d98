#include "sturm/direct.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace sturm {

namespace {

const double kGauss = std::sqrt(3.0) / 6.0;

// exp of the traceless 2x2 [[d, h], [b, -d]]
template <class T>
struct Step {
    std::complex<T> e11, e12, e21, e22;
};

template <class T>
inline Step<T> magnus_step(std::complex<T> a1, std::complex<T> a2, T h) {
    using C = std::complex<T>;
    const T s3 = std::sqrt(T(3));
    const C d = (s3 * h * h / T(12)) * (a1 - a2);
    const C b = T(0.5) * h * (a1 + a2);
    const C nu2 = d * d + h * b;  // Omega^2 = nu2 * I
    C ch, sh;                     // cosh(nu), sinh(nu)/nu
    if (std::abs(nu2) < T(0.25)) {
        // Horner in nu2 through order 11; truncation below 1e-24
        static const auto coef = [] {
            std::array<T, 24> f{};
            f[0] = 1;
            for (int k = 1; k < 24; ++k) f[k] = f[k - 1] / T(k);
            return f;
        }();
        const int top = sizeof(T) > sizeof(double) ? 11 : 9;
        ch = coef[2 * top], sh = coef[2 * top + 1];
        for (int k = top - 1; k >= 0; --k) {
            ch = ch * nu2 + coef[2 * k];
            sh = sh * nu2 + coef[2 * k + 1];
        }
    } else {
        const C nu = std::sqrt(nu2);
        ch = std::cosh(nu);
        sh = std::sinh(nu) / nu;
    }
    return {ch + sh * d, sh * h, sh * b, ch - sh * d};
}

}  // namespace

int default_steps(double mu_abs) {
    const double want = std::max(4096.0, 32.0 * mu_abs * kPi);
    const int s = static_cast<int>(std::ceil(want / 64.0)) * 64;
    return s;
}

Propagator::Propagator(const Potential& q, int steps) : steps_(steps), h_(kPi / steps) {
    if (steps < 64) throw Error(ErrorKind::invalid_potential, "at least 64 integration steps are required");
    q1_.resize(steps);
    q2_.resize(steps);
    for (int k = 0; k < steps; ++k) {
        const double t = k * h_;
        q1_[k] = q(t + (0.5 - kGauss) * h_);
        q2_[k] = q(t + (0.5 + kGauss) * h_);
    }
}

EndpointSolution Propagator::endpoint(cplx mu) const {
    const cplx lam = mu * mu;
    // Y = [[c, s], [c', s']]
    cplx y11 = 1, y12 = 0, y21 = 0, y22 = 1;
    for (int k = 0; k < steps_; ++k) {
        const Step<double> e = magnus_step<double>(q1_[k] - lam, q2_[k] - lam, h_);
        const cplx n11 = e.e11 * y11 + e.e12 * y21;
        const cplx n12 = e.e11 * y12 + e.e12 * y22;
        const cplx n21 = e.e21 * y11 + e.e22 * y21;
        const cplx n22 = e.e21 * y12 + e.e22 * y22;
        y11 = n11, y12 = n12, y21 = n21, y22 = n22;
    }
    EndpointSolution r{y11, y21, y12, y22, mu, 0.0};
    r.wronskian_residual = std::abs(r.c * r.sp - r.cp * r.s - 1.0);
    return r;
}

EndpointSolution Propagator::endpoint_extended(cplx mu) const {
    using L = long double;
    using C = std::complex<L>;
    const L h = 3.141592653589793238462643383279502884L / steps_;
    const C m(mu.real(), mu.imag());
    const C lam = m * m;
    C y11 = 1, y12 = 0, y21 = 0, y22 = 1;
    for (int k = 0; k < steps_; ++k) {
        const C a1 = C(q1_[k].real(), q1_[k].imag()) - lam;
        const C a2 = C(q2_[k].real(), q2_[k].imag()) - lam;
        const Step<L> e = magnus_step<L>(a1, a2, h);
        const C n11 = e.e11 * y11 + e.e12 * y21;
        const C n12 = e.e11 * y12 + e.e12 * y22;
        const C n21 = e.e21 * y11 + e.e22 * y21;
        const C n22 = e.e21 * y12 + e.e22 * y22;
        y11 = n11, y12 = n12, y21 = n21, y22 = n22;
    }
    auto d = [](C z) { return cplx(static_cast<double>(z.real()), static_cast<double>(z.imag())); };
    EndpointSolution r{d(y11), d(y21), d(y12), d(y22), mu, 0.0};
    r.wronskian_residual = static_cast<double>(std::abs(y11 * y22 - y21 * y12 - L(1)));
    return r;
}

Propagator::Trajectory Propagator::trajectory(cplx mu, int stride) const {
    if (stride <= 0 || steps_ % stride != 0)
        throw std::invalid_argument("trajectory stride must divide the step count");
    const int m = steps_ / stride;
    Trajectory t;
    t.c.resize(m + 1), t.cp.resize(m + 1), t.s.resize(m + 1), t.sp.resize(m + 1);
    const cplx lam = mu * mu;
    cplx y11 = 1, y12 = 0, y21 = 0, y22 = 1;
    t.c[0] = 1, t.cp[0] = 0, t.s[0] = 0, t.sp[0] = 1;
    for (int k = 0; k < steps_; ++k) {
        const Step<double> e = magnus_step<double>(q1_[k] - lam, q2_[k] - lam, h_);
        const cplx n11 = e.e11 * y11 + e.e12 * y21;
        const cplx n12 = e.e11 * y12 + e.e12 * y22;
        const cplx n21 = e.e21 * y11 + e.e22 * y21;
        const cplx n22 = e.e21 * y12 + e.e22 * y22;
        y11 = n11, y12 = n12, y21 = n21, y22 = n22;
        if ((k + 1) % stride == 0) {
            const int j = (k + 1) / stride;
            t.c[j] = y11, t.s[j] = y12, t.cp[j] = y21, t.sp[j] = y22;
        }
    }
    return t;
}

EndpointSolution fundamental_system(const Potential& q, cplx mu, int steps) {
    return Propagator(q, steps).endpoint(mu);
}

cplx determinant_from_endpoint(const ProblemCollection& p, const EndpointSolution& e) {
    const double sign = p.theta == 0 ? -1.0 : 1.0;
    return sign + p.alpha * e.c + (1.0 - p.alpha) * e.sp + p.gamma * e.s;
}

cplx char_determinant(const ProblemCollection& p, cplx mu, int steps) {
    if (steps <= 0) steps = default_steps(std::abs(mu));
    return determinant_from_endpoint(p, fundamental_system(p.q, mu, steps));
}

Determinant::Determinant(const ProblemCollection& p, int steps)
    : alpha_(p.alpha), gamma_(p.gamma), theta_(p.theta), prop_(p.q, steps) {}

cplx Determinant::operator()(cplx mu) const {
    const EndpointSolution e = prop_.endpoint(mu);
    const double sign = theta_ == 0 ? -1.0 : 1.0;
    return sign + alpha_ * e.c + (1.0 - alpha_) * e.sp + gamma_ * e.s;
}

cplx Determinant::extended(cplx mu) const {
    const EndpointSolution e = prop_.endpoint_extended(mu);
    const double sign = theta_ == 0 ? -1.0 : 1.0;
    return sign + alpha_ * e.c + (1.0 - alpha_) * e.sp + gamma_ * e.s;
}

cplx DeterminantModel::f_at(cplx mu) const {
    if (f) return f(mu);
    if (mu_grid.size() < 4 || std::abs(mu.imag()) > 0)
        throw std::domain_error("sampled remainder can only be interpolated on the real grid");
    const double x = mu.real();
    const auto it = std::upper_bound(mu_grid.begin(), mu_grid.end(), x);
    int i = static_cast<int>(it - mu_grid.begin()) - 1;
    const int n = static_cast<int>(mu_grid.size());
    if (i < 0 || i >= n - 1) throw std::domain_error("mu outside the sampled remainder grid");
    const int j0 = std::clamp(i - 1, 0, n - 4);
    cplx acc = 0;
    for (int a = 0; a < 4; ++a) {
        double l = 1;
        for (int b = 0; b < 4; ++b)
            if (b != a) l *= (x - mu_grid[j0 + b]) / (mu_grid[j0 + a] - mu_grid[j0 + b]);
        acc += l * remainder[j0 + a];
    }
    return acc;
}

cplx DeterminantModel::operator()(cplx mu) const {
    if (u) return u(mu);
    const double sign = theta == 0 ? -1.0 : 1.0;
    cplx fm;
    if (std::abs(mu) < 1e-7) {
        const double e = 1e-5;  // f is odd: f(mu)/mu -> f'(0)
        fm = (f_at(e) - f_at(-e)) / (2 * e);
    } else {
        fm = f_at(mu) / mu;
    }
    return sign + std::cos(kPi * mu) + beta * kPi * sinc(kPi * mu) + fm;
}

DeterminantModel pw_remainder(const ProblemCollection& p, const rvec& mu_grid, int steps) {
    DeterminantModel m;
    m.theta = p.theta;
    m.beta = p.gamma + kPi * p.q.mean() / 2.0;
    m.mu_grid = mu_grid;
    double mmax = 0;
    for (double x : mu_grid) mmax = std::max(mmax, std::abs(x));
    const Determinant det(p, steps > 0 ? steps : default_steps(mmax));
    const double sign = p.theta == 0 ? -1.0 : 1.0;
    m.remainder.resize(mu_grid.size());
    for (size_t i = 0; i < mu_grid.size(); ++i) {
        const double mu = mu_grid[i];
        m.remainder[i] = mu * (det(mu) - sign - std::cos(kPi * mu)) - m.beta * std::sin(kPi * mu);
    }
    return m;
}

DeterminantModel model_from_function(int theta, cplx beta, std::function<cplx(cplx)> u) {
    DeterminantModel m;
    m.theta = theta;
    m.beta = beta;
    const double sign = theta == 0 ? -1.0 : 1.0;
    m.f = [u, sign, beta](cplx mu) {
        return mu * (u(mu) - sign - std::cos(kPi * mu)) - beta * std::sin(kPi * mu);
    };
    m.u = std::move(u);
    return m;
}

}  // namespace sturm
