#include <doctest.h>

#include "sturm/gl.hpp"

using namespace sturm;

namespace {

SpectralData unperturbed(int M) {
    SpectralData d;
    for (int n = 1; n <= M; ++n) {
        const double sg = n % 2 ? -1.0 : 1.0;
        d.mus.push_back(double(n));
        d.norming.push_back(sg);
        d.sdot.push_back(kPi * sg / n);
    }
    return d;
}

GLKernel rank_one(double eps, int G) {
    const double h = kPi / (G - 1);
    Eigen::MatrixXcd Phi(G, 1);
    for (int i = 0; i < G; ++i) Phi(i, 0) = std::sin(i * h);
    Eigen::VectorXcd w(1);
    w(0) = eps;
    return kernel_from_basis(Phi, w, h);
}

}  // namespace

TEST_SUITE("gl") {

TEST_CASE("root selection for the unperturbed data") {
    const int M = 12;
    const SpectralData d = unperturbed(M);
    cvec up;
    for (int n = 1; n <= M; ++n) up.push_back(n % 2 ? -1.0 : 1.0);
    const Selection s = choose_norming_roots(up, 0.25, d.sdot, d.mus, 0);
    for (int n = 1; n <= M; ++n) {
        CHECK(std::abs(s.data.norming[n - 1] - d.norming[n - 1]) < 1e-12);
        CHECK(std::abs(s.data.halfplane()[n - 1] - 1 / kPi) < 1e-12);
    }
    CHECK(s.halfplane.ok);
    CHECK(s.max_quadratic_residual <= 1e-10);

    const BranchInfo b = branch_info(0.25);
    CHECK(b.case_id == 2);
    CHECK(std::abs(std::abs(b.ct_plus.imag()) - std::sqrt(3.0)) < 1e-12);
    CHECK(std::abs(b.ct_plus.real()) < 1e-12);
    CHECK(std::abs(b.ct_plus + b.ct_minus) < 1e-12);
}

TEST_CASE("selection reproduces forward norming constants") {
    const Potential q = potential_from_expression("sin(x)", 513);
    const DirichletData dd = dirichlet_spectrum(q, 20);
    for (cplx alpha : {cplx(2.0), cplx(0.25), cplx(0.3, 0.4)}) {
        cvec up;
        for (int n = 0; n < 20; ++n) up.push_back(alpha * dd.c[n] + (1.0 - alpha) / dd.c[n]);
        const Selection s = choose_norming_roots(up, alpha, dd.sdot, dd.roots, 0);
        for (int n = 0; n < 20; ++n) CHECK(std::abs(s.data.norming[n] - dd.c[n]) < 1e-6);
        CHECK(s.halfplane.ok);
        CHECK(s.max_quadratic_residual <= 1e-10);
    }
}

TEST_CASE("target norming constants") {
    const Potential q = potential_from_expression("sin(x)", 513);
    const DirichletData dd = dirichlet_spectrum(q, 20);
    cvec base(20);
    for (int n = 0; n < 20; ++n) base[n] = 2.0 * dd.c[n] - 1.0 / dd.c[n];
    cvec ct = target_norming_constants(base, 2.0, dd.c, 20);
    for (int n = 0; n < 20; ++n) CHECK(std::abs(ct[n] - dd.c[n]) < 1e-12);

    cvec alt(20);
    for (int n = 1; n <= 20; ++n) alt[n - 1] = n % 2 ? -1.0 : 1.0;
    ct = target_norming_constants(alt, 1.0, dd.c, 20);
    for (int n = 1; n <= 20; ++n) CHECK(std::abs(ct[n - 1] - alt[n - 1]) < 1e-12);

    // f -> f + g with g = 0.01 sin(pi mu) exp(-mu^2/200): Delta moves by g/mu
    cvec change(20);
    double worst = 0;
    for (int n = 0; n < 20; ++n) {
        const cplx mu = dd.roots[n];
        change[n] = 0.01 * std::sin(kPi * mu) * std::exp(-mu * mu / 200.0) / mu;
    }
    ct = target_norming_from_change(change, 2.0, dd.c, 20);
    for (int n = 0; n < 20; ++n) {
        if (std::abs(change[n]) < 1e-14) continue;
        worst = std::max(worst, std::abs(ct[n] - dd.c[n]) / std::abs(change[n]));
    }
    CHECK(worst < 1.0);  // first order: 1/|2 alpha - 1| = 1/3
    CHECK(worst > 0.2);
}

TEST_CASE("F kernel special cases") {
    const SpectralData d = unperturbed(30);
    GLKernel k = build_F_kernel(d, 129);
    CHECK(k.F.cwiseAbs().maxCoeff() < 1e-13);

    SpectralData p = unperturbed(30);
    const double eps = 0.01;
    p.norming[0] = -1.0 - kPi * eps / 2;  // u_1 = 2/pi + eps
    k = build_F_kernel(p, 129);
    double err = 0;
    for (int i = 0; i < 129; ++i)
        for (int j = 0; j < 129; ++j) err = std::max(err, std::abs(k.F(i, j) - eps * std::sin(i * k.h) * std::sin(j * k.h)));
    CHECK(err < 1e-13);

    const DirichletData dd = dirichlet_spectrum(potential_from_expression("sin(x)", 513), 40);
    k = build_F_kernel(from_dirichlet(dd), 257);
    CHECK(k.asymmetry <= 1e-10);
}

TEST_CASE("Gelfand-Levitan solves") {
    const SpectralData d = unperturbed(10);
    const GLKernel zero = build_F_kernel(d, 65);
    const GLSolution s0 = solve_gelfand_levitan_all(zero);
    for (cplx v : s0.Kdiag) CHECK(std::abs(v) < 1e-12);
    const Potential q0 = potential_from_kernel(s0.Kdiag, zero.h);
    for (cplx v : q0.samples()) CHECK(std::abs(v) < 1e-10);

    const double eps = 0.3;
    const int G = 257;
    const GLKernel k = rank_one(eps, G);
    auto I = [](double x) { return x / 2 - std::sin(2 * x) / 4; };
    double err = 0;
    for (int i : {10, 128, 256}) {
        const double x = i * k.h;
        const cvec K = solve_gelfand_levitan(k, i);
        for (int j = 0; j <= i; ++j)
            err = std::max(err, std::abs(K[j] + eps * std::sin(x) * std::sin(j * k.h) / (1 + eps * I(x))));
    }
    CHECK(err < 1e-8);

    // q = 2 d/dx K(x,x) against the derivative of the closed form
    const GLSolution s = solve_gelfand_levitan_all(k);
    const Potential q = potential_from_kernel(s.Kdiag, k.h);
    double qerr = 0;
    for (int i = 0; i < G; ++i) {
        const double x = i * k.h, D = 1 + eps * I(x);
        const double dK = -eps * (std::sin(2 * x) * D - std::sin(x) * std::sin(x) * eps * std::sin(x) * std::sin(x)) / (D * D);
        qerr = std::max(qerr, std::abs(q.samples()[i] - 2 * dK));
    }
    CHECK(qerr < 1e-6);
    CHECK(s.max_condition < 10);
}

TEST_CASE("derivative of a synthetic diagonal") {
    const int G = 129;
    const double h = kPi / (G - 1);
    cvec K(G);
    for (int i = 0; i < G; ++i) K[i] = 0.5 * (i * h) * (i * h);
    const Potential q = potential_from_kernel(K, h);
    for (int i = 0; i < G; ++i) CHECK(std::abs(q.samples()[i] - 2.0 * (i * h)) < 1e-10);
}

TEST_CASE("reconstruction from a determinant") {
    SUBCASE("u = -1 + cos, alpha = 1/4") {
        const auto u = model_from_function(0, 0.0, [](cplx m) { return -1.0 + std::cos(kPi * m); });
        const auto r = reconstruct_from_determinant(u, 0.25, 0.0, 0, 0.0);
        CHECK(r.report.det_residual <= 1e-4);
        CHECK(r.report.halfplane.ok);
    }
    SUBCASE("u = 1 + cos, alpha = 2, theta = 1") {
        const auto u = model_from_function(1, 0.0, [](cplx m) { return 1.0 + std::cos(kPi * m); });
        const auto r = reconstruct_from_determinant(u, 2.0, 0.0, 1, 0.0);
        CHECK(r.report.det_residual <= 1e-4);
    }
    SUBCASE("q = 1 keeps its mean") {
        const ProblemCollection p{0.25, 0.0, 0, Potential::constant(1.0)};
        const auto u = model_from_function(0, kPi / 2, [&](cplx m) { return char_determinant(p, m); });
        const auto r = reconstruct_from_determinant(u, 0.25, 0.0, 0, 1.0);
        CHECK(std::abs(r.q.mean() - 1.0) <= 1e-6);
        CHECK(r.report.det_residual <= 1e-4);
    }
}

TEST_CASE("verification residuals") {
    const SpectralData d = unperturbed(20);
    const VerificationReport v = verify_reconstruction(Potential::constant(0.0), d);
    CHECK(v.max_s <= 1e-8);
    CHECK(v.max_c <= 1e-8);
    CHECK(v.max_sprime <= 1e-8);

    SpectralData bad = d;
    bad.norming[2] *= 2.0;
    const VerificationReport vb = verify_reconstruction(Potential::constant(0.0), bad);
    CHECK(vb.max_c >= 0.5);
}

TEST_CASE("moving one norming constant keeps the Dirichlet roots") {
    const Potential q = potential_from_expression("0.2*sin(x)", 257);
    const DirichletData dd = dirichlet_spectrum(q, 16);
    const SpectralData base = from_dirichlet(dd);
    cvec change(16, 0.0);
    change[2] = 1e-4;
    const cvec ct = target_norming_from_change(change, 2.0, base.norming, 16);
    PerturbedOptions o;
    o.grid_size = 257;
    const Reconstruction r = reconstruct_perturbed(q, base, ct, o);
    SpectralData target = base;
    target.norming = ct;
    const VerificationReport v = verify_reconstruction(r.q, target);
    CHECK(v.max_s <= 1e-10);
    CHECK(v.max_c <= 1e-10);
    CHECK(std::abs(r.q.mean() - q.mean()) <= 1e-10);
    CHECK(l2_distance(r.q, q) > 1e-6);
}

}  // TEST_SUITE
