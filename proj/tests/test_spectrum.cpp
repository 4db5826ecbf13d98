#include <doctest.h>

#include <algorithm>

#include "sturm/spectrum.hpp"
#include "test_util.hpp"

using namespace sturm;

TEST_SUITE("spectrum") {

TEST_CASE("double zeros of cos(pi mu) - 1") {
    auto r = find_roots([](cplx m) { return std::cos(kPi * m) - 1.0; }, Box{1, 5, -1, 1});
    REQUIRE(r.size() == 2);
    std::sort(r.begin(), r.end(), [](const Root& a, const Root& b) { return a.z.real() < b.z.real(); });
    CHECK(std::abs(r[0].z - 2.0) < 1e-6);
    CHECK(std::abs(r[1].z - 4.0) < 1e-6);
    CHECK(r[0].multiplicity == 2);
    CHECK(r[1].multiplicity == 2);
}

TEST_CASE("simple zeros of sin(pi mu)/mu") {
    auto r = find_roots([](cplx m) { return kPi * sinc(kPi * m); }, Box{0.5, 4.5, -1, 1});
    REQUIRE(r.size() == 4);
    std::sort(r.begin(), r.end(), [](const Root& a, const Root& b) { return a.z.real() < b.z.real(); });
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(r[k].z - double(k + 1)) < 1e-10);
        CHECK(r[k].multiplicity == 1);
    }
}

TEST_CASE("type IV, q = 0: two simple roots near each 2n") {
    const Analytic f = [](cplx m) { return -1.0 + std::cos(kPi * m) + kPi * sinc(kPi * m); };
    for (int n = 1; n <= 6; ++n) {
        // oracle: winding count of the unit box and of small circles around each root
        const Box b{2.0 * n - 0.6, 2.0 * n + 0.6, -0.7, 0.7};
        CHECK(winding_number(f, b) == 2);
        auto r = find_roots(f, b);
        REQUIRE(r.size() == 2);
        const double sep = std::abs(r[0].z - r[1].z);
        CHECK(sep > 1e-3);
        for (const auto& x : r) {
            CHECK(x.multiplicity == 1);
            CHECK(winding_number_circle(f, x.z, sep / 3) == 1);
            CHECK(std::abs(f(x.z)) < 1e-10);
        }
    }
}

TEST_CASE("series binning") {
    auto sp = eigenvalue_series({{0.0, 1}, {2.0, 2}, {4.0, 2}}, 0);
    REQUIRE(sp.mu0);
    CHECK(std::abs(*sp.mu0) < 1e-14);
    REQUIRE(sp.pairs.size() == 2);
    CHECK(sp.pairs[0].mu1 == cplx(2.0));
    CHECK(sp.pairs[0].mu2 == cplx(2.0));
    CHECK(sp.pairs[1].mu1 == cplx(4.0));

    sp = eigenvalue_series({{1.0, 2}, {3.0, 2}}, 1);
    CHECK(!sp.mu0);
    REQUIRE(sp.pairs.size() == 2);
    CHECK(sp.pairs[0].mu2 == cplx(1.0));
    CHECK(sp.pairs[1].mu1 == cplx(3.0));

    sp = eigenvalue_series({{2.03, 1}, {1.98, 1}, {4.02, 1}, {3.99, 1}}, 0);
    REQUIRE(sp.pairs.size() == 2);
    CHECK(sp.pairs[0].mu1 == cplx(1.98));
    CHECK(sp.pairs[0].mu2 == cplx(2.03));
    CHECK(sp.pairs[1].mu1 == cplx(3.99));
    CHECK(sp.pairs[1].mu2 == cplx(4.02));
}

TEST_CASE("asymptotic verdicts") {
    std::vector<Root> doubles;
    for (int n = 1; n <= 20; ++n) doubles.push_back({2.0 * n, 2});
    const Spectrum d = eigenvalue_series(doubles, 0);
    CHECK(classify_asymptotic(d, 1e-12, 10) == Asymptotic::multiple);
    // scaling roots and tolerance together
    Spectrum s = d;
    for (auto& p : s.pairs) p.mu1 *= 3.0, p.mu2 *= 3.0;
    CHECK(classify_asymptotic(s, 3e-12, 10) == Asymptotic::multiple);

    const ProblemCollection p3{2.0, 0.0, 0, Potential::constant(0.0)};
    const ProblemCollection p4{2.0, 1.0, 0, Potential::constant(0.0)};
    const Spectrum s3 = compute_spectrum(p3, 30), s4 = compute_spectrum(p4, 30);
    CHECK(classify_asymptotic(s3, 1e-6, 30) == Asymptotic::multiple);
    CHECK(classify_asymptotic(s4, 1e-6, 30) == Asymptotic::simple);

    // extended-precision gaps of the exact doubles sit far below 1e-8
    for (const auto& g : refine_gaps_extended(p3, s3, 20, 30)) {
        CHECK(g.refined);
        CHECK(g.gap <= 1e-8);
    }
}

TEST_CASE("eigenvalue asymptotics and conjugate symmetry") {
    const ProblemCollection p{2.0, 1.0, 1, potential_from_expression("0.5*sin(x) + 0.2*x", 513)};
    const Spectrum sp = compute_spectrum(p, 20);
    REQUIRE(sp.pairs.size() == 20);
    cvec all;
    for (const auto& e : sp.pairs) all.push_back(e.mu1), all.push_back(e.mu2);
    for (cplx z : all) {
        double best = 1e9;
        for (cplx w : all) best = std::min(best, std::abs(std::conj(z) - w));
        CHECK(best < 1e-9);
    }
    double gapmax = 0;
    for (const auto& e : sp.pairs) {
        gapmax = std::max(gapmax, e.gap() * std::sqrt(double(e.n)));
        if (e.n >= 10 && e.n < 20) {
            const auto* nx = sp.pair(e.n + 1);
            const double m = 2.0 * e.n - 1;
            auto dev = [](const EigenPair& q, double c) { return std::max(std::abs(q.mu1 - c), std::abs(q.mu2 - c)); };
            CHECK(dev(*nx, m + 2) <= dev(e, m) + 1e-9);
        }
    }
    CHECK(gapmax < 5);
}

TEST_CASE("Dirichlet spectra") {
    auto d0 = dirichlet_spectrum(Potential::constant(0.0), 12);
    CHECK(d0.simple);
    CHECK(d0.zero_excluded);
    for (int n = 1; n <= 12; ++n) CHECK(std::abs(d0.roots[n - 1] - double(n)) < 1e-10);

    auto d1 = dirichlet_spectrum(Potential::constant(1.0), 12);
    for (int n = 1; n <= 12; ++n) CHECK(std::abs(d1.roots[n - 1] - std::sqrt(n * n + 1.0)) < 1e-10);

    const auto ref = test::fd_dirichlet([](double x) { return x; }, 10);
    auto dx = dirichlet_spectrum(potential_from_expression("x", 513), 10);
    for (int n = 1; n <= 10; ++n) CHECK(std::abs(dx.roots[n - 1].real() - ref[n - 1]) < 1e-6);

    auto ds = dirichlet_spectrum(potential_from_expression("sin(x)", 513), 40);
    double bound = 0;
    for (int n = 1; n <= 40; ++n) bound = std::max(bound, std::abs(ds.roots[n - 1] - double(n)) * n);
    CHECK(bound < 1.0);
}

}  // TEST_SUITE
