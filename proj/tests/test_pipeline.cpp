#include <doctest.h>

#include <json.hpp>

#include "sturm/pipeline.hpp"

using namespace sturm;

TEST_SUITE("pipeline") {

TEST_CASE("q = 0, type III: already doubled, q_N stays 0") {
    const auto cls = classify(canonical_matrix(2.0, 0.0, 0));
    Theorem3Options o;
    o.n_pairs = 12;
    o.verify_pairs = 6;
    const auto r = theorem3_pipeline(Potential::constant(0.0, 513), 0.1, cls, 3, o);
    CHECK(r.report.verified);
    CHECK(r.report.gaps_ok);
    CHECK(r.report.mean_ok);
    CHECK(l2_norm(r.qN) < 1e-9);
    // a double root splits like the square root of the perturbation, so the
    // ~1e-11 reconstruction floor alone leaves gaps near 1e-7
    for (const auto& g : r.report.gaps)
        if (g.n > 3) CHECK(g.refined_gap <= 1e-6);

    // the report is machine readable and deterministic
    const auto j = nlohmann::json::parse(report_json(r.report));
    CHECK(j.contains("gaps"));
    CHECK(j["norms"].contains("total"));
    CHECK(j.contains("determinant_residual"));
    CHECK(j["seed"] == 1);
    const auto again = theorem3_pipeline(Potential::constant(0.0, 513), 0.1, cls, 3, o);
    CHECK(report_json(again.report) == report_json(r.report));
}

TEST_CASE("scope checks") {
    const auto cls1 = classify(canonical_matrix(0.5, 0.0, 0));
    try {
        theorem3_pipeline(Potential::constant(0.0, 129), 0.1, cls1, 3);
        FAIL("expected type_not_applicable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::type_not_applicable);
        CHECK(!e.stage().empty());
    }
    const auto cls3 = classify(canonical_matrix(2.0, 0.0, 0));
    CHECK_THROWS_AS(theorem3_pipeline(Potential::constant(0.0, 129), -1.0, cls3, 3), std::invalid_argument);
}

}  // TEST_SUITE
