#include <doctest.h>

#include <random>

#include "sturm/bc.hpp"

using namespace sturm;

namespace {

BCMatrix real_matrix(std::initializer_list<double> v) {
    BCMatrix a{};
    int i = 0;
    for (double x : v) a[i / 4][i % 4] = x, ++i;
    return a;
}

bool close(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_SUITE("bc") {

TEST_CASE("minors by hand") {
    Minors m = compute_minors(real_matrix({1, -1, 0, 0, 0, 0, 1, -1}));
    CHECK(close(m.a12, 0.0));
    CHECK(close(m.a13, 1.0));
    CHECK(close(m.a14, -1.0));
    CHECK(close(m.a23, -1.0));
    CHECK(close(m.a24, 1.0));
    CHECK(close(m.a34, 0.0));

    m = compute_minors(real_matrix({1, 1, 0, 0, 0, 0, 1, 1}));
    CHECK(close(m.a13, 1.0));
    CHECK(close(m.a14, 1.0));
    CHECK(close(m.a23, 1.0));
    CHECK(close(m.a24, 1.0));

    m = compute_minors(real_matrix({1, 0, 0, 0, 0, 1, 0, 0}));
    CHECK(close(m.a12, 1.0));
    for (cplx v : {m.a13, m.a14, m.a23, m.a24, m.a34}) CHECK(close(v, 0.0));
    CHECK(close(m(3, 4), m.a34));
}

TEST_CASE("periodic, antiperiodic and a type II matrix") {
    auto c = classify(real_matrix({1, -1, 0, 0, 0, 0, 1, -1}));
    CHECK(c.bc_type == BCType::I);
    CHECK(close(c.alpha, 0.5));
    CHECK(close(c.gamma, 0.0));
    CHECK(c.theta == 0);

    c = classify(real_matrix({1, 1, 0, 0, 0, 0, 1, 1}));
    CHECK(c.bc_type == BCType::I);
    CHECK(c.theta == 1);

    c = classify(real_matrix({1, -1, 0, 1, 0, 0, 1, -1}));
    CHECK(c.bc_type == BCType::II);
    CHECK(close(c.alpha, 0.5));
    CHECK(close(c.gamma, -0.5));
    CHECK(c.theta == 0);
}

TEST_CASE("out of scope inputs") {
    // Dirichlet: strongly regular
    CHECK_THROWS_AS(classify(real_matrix({1, 0, 0, 0, 0, 0, 1, 0})), Error);
    // both sign relations at once
    try {
        classify(real_matrix({1, 1, 0, 0, 1, 1, 1, -1}));
        FAIL("expected not_in_scope");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::not_in_scope);
    }
    try {
        classify(real_matrix({1, 2, 3, 4, 2, 4, 6, 8}));
        FAIL("expected invalid_boundary_forms");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_boundary_forms);
    }
}

TEST_CASE("random regular matrices keep their parameters under row operations") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-2, 2);
    auto rc = [&] { return cplx(U(rng), U(rng)); };
    int checked = 0;
    for (int t = 0; t < 1000; ++t) {
        const int regime = t % 4;
        cplx alpha = (regime < 2) ? cplx(0.5) : rc();
        cplx gamma = (regime % 2 == 0) ? cplx(0.0) : rc();
        if (regime >= 2 && alpha_is_half(alpha)) continue;
        if (regime % 2 == 1 && gamma_is_zero(gamma, alpha)) continue;
        const int theta = t % 3 == 0;
        const BCMatrix a = canonical_matrix(alpha, gamma, theta);
        // left multiplication by an invertible 2x2 matrix, then row scaling
        cplx m[2][2] = {{rc(), rc()}, {rc(), rc()}};
        if (std::abs(m[0][0] * m[1][1] - m[0][1] * m[1][0]) < 0.1) continue;
        BCMatrix b{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 4; ++j) b[i][j] = m[i][0] * a[0][j] + m[i][1] * a[1][j];
        const cplx s = rc();
        if (std::abs(s) < 0.1) continue;
        for (auto& v : b[1]) v *= s;
        const auto c = classify(b);
        CHECK(c.bc_type == type_of(alpha, gamma));
        CHECK(close(c.alpha, alpha, 1e-9));
        CHECK(close(c.gamma, gamma, 1e-9));
        CHECK(c.theta == theta);
        CHECK(std::abs(c.minors.a12) <= 1e-9 * (1 + std::abs(c.minors.a14 + c.minors.a23)));
        const cplx lhs = c.minors.a14 + c.minors.a23, rhs = c.minors.a13 + c.minors.a24;
        CHECK(close(lhs, theta == 0 ? -rhs : rhs, 1e-9 * std::abs(lhs)));
        ++checked;
    }
    CHECK(checked > 700);
}

}  // TEST_SUITE
