#include <doctest.h>

#include <array>
#include <random>

#include "sturm/direct.hpp"
#include "test_util.hpp"

using namespace sturm;

namespace {

// Independent classical RK4 on u'' = (q(x) - mu^2) u with q evaluated exactly.
std::array<cplx, 4> rk4_endpoint(const std::function<cplx(double)>& q, cplx mu, int steps) {
    auto run = [&](cplx u, cplx v) {
        const double h = kPi / steps;
        auto rhs = [&](double x, cplx a, cplx b) { return std::pair<cplx, cplx>{b, (q(x) - mu * mu) * a}; };
        for (int i = 0; i < steps; ++i) {
            const double x = i * h;
            auto [k1u, k1v] = rhs(x, u, v);
            auto [k2u, k2v] = rhs(x + h / 2, u + h / 2 * k1u, v + h / 2 * k1v);
            auto [k3u, k3v] = rhs(x + h / 2, u + h / 2 * k2u, v + h / 2 * k2v);
            auto [k4u, k4v] = rhs(x + h, u + h * k3u, v + h * k3v);
            u += h / 6 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            v += h / 6 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        return std::pair<cplx, cplx>{u, v};
    };
    auto [c, cp] = run(1.0, 0.0);
    auto [s, sp] = run(0.0, 1.0);
    return {c, cp, s, sp};
}

}  // namespace

TEST_SUITE("direct") {

TEST_CASE("closed-form endpoints") {
    auto e = fundamental_system(Potential::constant(0.0), 2.0, 4096);
    CHECK(std::abs(e.c - 1.0) < 1e-12);
    CHECK(std::abs(e.cp) < 1e-12);
    CHECK(std::abs(e.s) < 1e-12);
    CHECK(std::abs(e.sp - 1.0) < 1e-12);

    e = fundamental_system(Potential::constant(1.0), std::sqrt(2.0), 4096);
    CHECK(std::abs(e.c + 1.0) < 1e-12);
    CHECK(std::abs(e.cp) < 1e-12);
    CHECK(std::abs(e.s) < 1e-12);
    CHECK(std::abs(e.sp + 1.0) < 1e-12);
}

TEST_CASE("q = x against a Richardson-converged RK4 oracle") {
    auto qx = [](double x) { return cplx(x); };
    const cplx mu = 3.0;
    auto a = rk4_endpoint(qx, mu, 8000), b = rk4_endpoint(qx, mu, 16000);
    std::array<cplx, 4> ref;
    for (int i = 0; i < 4; ++i) ref[i] = b[i] + (b[i] - a[i]) / 15.0;
    const auto e = fundamental_system(Potential::from_function(qx, 513), mu, 4096);
    CHECK(std::abs(e.c - ref[0]) < 1e-10);
    CHECK(std::abs(e.cp - ref[1]) < 1e-10);
    CHECK(std::abs(e.s - ref[2]) < 1e-10);
    CHECK(std::abs(e.sp - ref[3]) < 1e-10);
}

TEST_CASE("determinant examples for q = 0") {
    const Potential z = Potential::constant(0.0);
    CHECK(std::abs(char_determinant({0.5, 0.0, 0, z}, 1.0) + 2.0) < 1e-12);
    CHECK(std::abs(char_determinant({0.5, 0.0, 0, z}, 2.0)) < 1e-12);
    for (double mu : {0.3, 1.7, 4.25, 9.9}) CHECK(std::abs(char_determinant({1.0, 0.0, 0, z}, mu) - (std::cos(kPi * mu) - 1.0)) < 1e-11);
}

TEST_CASE("extended-precision endpoint agrees with the double one") {
    const Potential q = potential_from_expression("0.2*sin(x) + x", 513);
    const Propagator P(q, 8192);
    for (cplx mu : {cplx(0.7), cplx(5.2, 0.3), cplx(20.1)}) {
        const auto a = P.endpoint(mu), b = P.endpoint_extended(mu);
        CHECK(std::abs(a.c - b.c) < 1e-11);
        CHECK(std::abs(a.sp - b.sp) < 1e-11);
    }
}

TEST_CASE("Wronskian stays 1 for random complex potentials") {
    std::mt19937_64 rng(3);
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
        const Potential q = test::random_potential(rng, 5.0, 257);
        std::uniform_real_distribution<double> U(-30, 30);
        cplx mu(U(rng), U(rng) / 10);
        if (std::abs(mu) > 30) mu *= 30 / std::abs(mu);
        const auto e = fundamental_system(q, mu, 4096);
        // roundoff grows with the size of the products in c s' - c' s
        const double scale = std::max(1.0, std::abs(e.c * e.sp) + std::abs(e.cp * e.s));
        worst = std::max(worst, e.wronskian_residual / scale);
    }
    CHECK(worst <= 1e-11);
}

TEST_CASE("constant shift covariance") {
    const Potential q = potential_from_expression("sin(x) + 0.3*x", 513);
    const cplx q0 = 0.8;
    for (cplx mu : {cplx(0.4), cplx(2.5), cplx(7.3, 0.2)}) {
        const auto a = fundamental_system(q.shifted(q0), mu, 8192);
        const auto b = fundamental_system(q, sqrt_re_pos(mu * mu - q0), 8192);
        CHECK(std::abs(a.c - b.c) < 1e-9);
        CHECK(std::abs(a.s - b.s) < 1e-9);
        CHECK(std::abs(a.sp - b.sp) < 1e-9);
    }
}

TEST_CASE("determinant is even in mu") {
    const ProblemCollection p{2.0, 1.0, 0, potential_from_expression("sin(x)", 513)};
    for (cplx mu : {cplx(0.3), cplx(3.7, 0.5), cplx(12.2, -0.1)})
        CHECK(std::abs(char_determinant(p, mu) - char_determinant(p, -mu)) < 1e-10);
}

TEST_CASE("remainder of the canonical form") {
    rvec grid;
    for (int i = -400; i <= 400; ++i) grid.push_back(i * 0.05);

    SUBCASE("q = 0 gives f = 0") {
        const auto m = pw_remainder({0.5, 0.0, 0, Potential::constant(0.0)}, grid);
        double mx = 0;
        for (cplx v : m.remainder) mx = std::max(mx, std::abs(v));
        CHECK(mx < 1e-10);
    }
    SUBCASE("constant q0: closed form, odd, decaying") {
        const double q0 = 0.7;
        const auto m = pw_remainder({1.0, 0.0, 0, Potential::constant(q0)}, grid);
        double err = 0, odd = 0;
        for (size_t i = 0; i < grid.size(); ++i) {
            const double mu = grid[i];
            const cplx w = sqrt_re_pos(cplx(mu * mu - q0));
            const cplx ref = mu * (std::cos(kPi * w) - std::cos(kPi * mu)) - kPi * q0 / 2 * std::sin(kPi * mu);
            err = std::max(err, std::abs(m.remainder[i] - ref));
            odd = std::max(odd, std::abs(m.remainder[i] + m.remainder[grid.size() - 1 - i]));
        }
        CHECK(err < 1e-9);
        CHECK(odd < 1e-8);
        // O(1/mu): |f| at the far end well below its size near 1
        CHECK(std::abs(m.remainder.back()) < 0.2);
    }
    SUBCASE("q = sin x, gamma = 1: square-summable at the integers") {
        rvec ints;
        for (int n = 1; n <= 60; ++n) ints.push_back(n);
        const auto m = pw_remainder({2.0, 1.0, 0, potential_from_expression("sin(x)", 513)}, ints);
        // |f(n)| = O(1/n): n |f(n)| does not grow
        double mid = 0, far = 0;
        for (int n = 21; n <= 60; ++n) {
            double& slot = n <= 40 ? mid : far;
            slot = std::max(slot, n * std::abs(m.remainder[n - 1]));
        }
        CHECK(std::isfinite(far));
        CHECK(far <= 1.5 * mid);
    }
}

}  // TEST_SUITE
