#include "sturm/pipeline.hpp"

#include <json.hpp>
#include <random>

namespace sturm {

namespace {

template <class F>
auto stage(const char* tag, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (!e.stage().empty()) throw;
        throw Error(e.kind(), e.what(), tag);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::pipeline_stage, e.what(), tag);
    }
}

std::vector<GapRow> gap_rows(const Spectrum& sp, const std::vector<RefinedGap>& ref, int lo, int hi) {
    std::vector<GapRow> rows;
    for (const auto& p : sp.pairs) {
        if (p.n < lo || p.n > hi) continue;
        GapRow g{p.n, p.mu1, p.mu2, p.gap(), p.raw_gap, std::max(p.mult1, p.mult2)};
        for (const auto& r : ref)
            if (r.n == p.n && r.refined) {
                g.mu1 = r.z1, g.mu2 = r.z2;
                g.refined_gap = r.gap;
            }
        rows.push_back(g);
    }
    return rows;
}

// Pairs replaced by their extended-precision estimates.
Spectrum with_refined(Spectrum sp, const std::vector<RefinedGap>& ref) {
    for (auto& p : sp.pairs)
        for (const auto& r : ref)
            if (r.n == p.n && r.refined) {
                p.mu1 = r.z1, p.mu2 = r.z2;
                p.mult1 = p.mult2 = 1;
            }
    return sp;
}

// Smooth random trigonometric perturbation with L2 norm `size`.
Potential random_bump(int G, double size, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1, 1);
    double c[4];
    for (double& v : c) v = U(rng);
    Potential p = Potential::from_function(
        [&](double x) {
            double s = 0;
            for (int k = 0; k < 4; ++k) s += c[k] * std::cos((k + 1) * x);
            return cplx(s);
        },
        G);
    const double n = l2_norm(p);
    cvec s = p.samples();
    for (auto& v : s) v *= size / n;
    return Potential(std::move(s));
}

}  // namespace

Theorem3Result theorem3_pipeline(const Potential& q, double eps, const BoundaryClassification& cls, int N,
                                 const Theorem3Options& opt) {
    if (!(eps > 0)) throw std::invalid_argument("theorem3_pipeline: eps must be positive");
    if (N < 0) throw std::invalid_argument("theorem3_pipeline: N must be >= 0");
    if (alpha_is_half(cls.alpha))
        throw Error(ErrorKind::type_not_applicable, "alpha = 1/2: the construction needs type III or IV", "input");

    Theorem3Result res;
    Theorem3Report& rep = res.report;
    rep.N = N;
    rep.eps = eps;
    rep.seed = opt.seed;
    const int G = opt.grid_size;
    const int n_pairs = opt.n_pairs > 0 ? opt.n_pairs : std::max(2 * N, N + 20);
    const int n_dir = 2 * n_pairs + 20;
    rep.n_pairs = n_pairs;
    rep.n_dirichlet = n_dir;
    rep.jump_target = stage("b-jump", [&] { return boundary_jump_target(cls); });

    // (a) + (b): perturb until the smoothed potential has a simple Dirichlet
    // spectrum away from zero
    std::mt19937_64 rng(opt.seed);
    const Potential q0 = q.resampled(G);
    Potential q1 = q0, q2;
    DirichletData dd;
    for (int attempt = 0;; ++attempt) {
        if (attempt > 0) {
            const Potential b = random_bump(G, eps / 20, rng);
            cvec s = q0.samples();
            for (int i = 0; i < G; ++i) s[i] += b.samples()[i];
            q1 = Potential(std::move(s));
        }
        const SmoothApproximant sa = stage("b-smooth", [&] {
            const cplx mid = 0.5 * (q1.samples().front() + q1.samples().back());
            // values carry the jump; higher orders follow the trigonometric fit
            JetSpec js;
            js.h = {mid - rep.jump_target / 2.0, std::nullopt, std::nullopt, std::nullopt};
            js.g = {mid + rep.jump_target / 2.0, std::nullopt, std::nullopt, std::nullopt};
            return smooth_approximant_with_jets(q1, eps / 10, js);
        });
        int G2 = G;
        while ((G2 - 1) * sa.collar / kPi < 16) G2 = 2 * G2 - 1;
        q2 = sa.sample(G2);
        rep.smooth_collar = sa.collar;
        dd = stage("a-dirichlet", [&] { return dirichlet_spectrum(q2, n_dir); });
        rep.dirichlet_simple = dd.simple;
        rep.zero_excluded = dd.zero_excluded;
        rep.retries = attempt;
        if (dd.simple && dd.zero_excluded) break;
        if (attempt >= opt.max_retries)
            throw Error(ErrorKind::pipeline_stage, "Dirichlet predicate still fails after perturbation", "a-dirichlet");
    }
    rep.dist_perturbation = l2_distance(q1, q0);
    rep.dist_smoothing = l2_distance(q2, q1);

    // (c) spectrum of the smoothed problem
    const ProblemCollection p2{cls.alpha, cls.gamma, cls.theta, q2};
    const Spectrum sp0 = stage("c-spectrum", [&] { return compute_spectrum(p2, n_pairs); });
    const auto ref0 = stage("c-refine", [&] { return refine_gaps_extended(p2, sp0, 1, n_pairs); });
    const Spectrum sp = with_refined(sp0, ref0);
    rep.base_gaps = gap_rows(sp0, ref0, 1, n_pairs);

    // (d) asymptotic fit and the doubled model. V1 is pinned to the identity
    // value: the Dirichlet spectrum, and with it the mean, stays fixed below,
    // so a model with any other V1 cannot be reached.
    rep.V1_identity = (cls.gamma + kPi * q2.mean() / 2.0) / kPi;
    const int fit_lo = std::max(3, n_pairs / 4);
    const AsymptoticFit free_fit = stage("d-fit", [&] { return fit_asymptotics(sp, opt.fit_l, fit_lo, n_pairs); });
    const AsymptoticFit fit =
        stage("d-fit", [&] { return fit_asymptotics(sp, opt.fit_l, fit_lo, n_pairs, rep.V1_identity); });
    rep.V1 = free_fit.V[0];
    rep.V2_free = free_fit.V.size() > 1 ? free_fit.V[1] : cplx(0.0);
    rep.V2 = fit.V.size() > 1 ? fit.V[1] : cplx(0.0);
    rep.fit_residual_trend = fit.residual_trend;
    const HadamardModel hm = hadamard_from_spectrum(sp, rep.V1_identity, rep.V2);
    const HadamardModel hmN = truncated_model(hm, N);

    // (e) move the norming constants so that Delta hits Delta_N at the
    // Dirichlet roots, then solve the perturbed Gelfand-Levitan equation.
    // At a Dirichlet root c s' = 1, so Delta is known exactly from c.
    const SpectralData base = from_dirichlet(dd);
    const cplx sgn = cls.theta == 0 ? -1.0 : 1.0;
    cvec change(n_dir);
    for (int k = 0; k < n_dir; ++k) {
        const cplx c = base.norming[k];
        change[k] = hadamard_eval(hmN, dd.roots[k]) - (sgn + cls.alpha * c + (1.0 - cls.alpha) / c);
        rep.max_change = std::max(rep.max_change, std::abs(change[k]));
    }
    const cvec c_target = stage("e-norming", [&] { return target_norming_from_change(change, cls.alpha, base.norming, n_dir); });
    PerturbedOptions po;
    po.grid_size = std::max(G, opt.recon_grid);
    po.steps_per_cell = opt.steps_per_cell;
    const Reconstruction rec = stage("e-reconstruct", [&] { return reconstruct_perturbed(q2, base, c_target, po); });
    res.qN = rec.q;
    rep.gl_residual = rec.report.max_residual;
    rep.gl_condition = rec.report.max_condition;
    res.q1 = q1;
    res.q2 = q2;
    rep.dist_reconstruction = l2_distance(res.qN, q2);
    rep.dist_total = l2_distance(res.qN, q0);
    rep.mean_q = q0.mean();
    rep.mean_q2 = q2.mean();
    rep.mean_qN = res.qN.mean();
    rep.mean_ok = std::abs(rep.mean_qN - rep.mean_q2) <= opt.mean_tol;

    // (f) verification on the reconstructed potential
    const int top = N + opt.verify_pairs;
    const ProblemCollection pN{cls.alpha, cls.gamma, cls.theta, res.qN};
    {
        Determinant det(pN, 2 * default_steps(2 * top + 3));
        double r = 0;
        for (double mu = 0; mu <= 2.0 * top + 1; mu += 0.1) r = std::max(r, std::abs(det(mu) - hadamard_eval(hmN, mu)));
        rep.det_residual = r;
    }
    SpectrumOptions so;
    so.steps = 2 * default_steps(2 * top + 3);
    const Spectrum spN = stage("f-verify", [&] { return compute_spectrum(pN, top, so); });
    const auto refN = stage("f-verify", [&] { return refine_gaps_extended(pN, spN, 1, top, so.steps); });
    rep.gaps = gap_rows(spN, refN, 1, top);
    rep.gaps_ok = true;
    for (const auto& g : rep.gaps)
        if (g.n > N && (g.refined_gap < 0 || g.refined_gap > opt.gap_tol)) rep.gaps_ok = false;
    rep.verified = rep.gaps_ok && rep.mean_ok;
    if (!rep.verified) {
        rep.failure = rep.gaps_ok ? "mean of q_N moved" : "gap above tolerance beyond N";
        if (opt.strict) throw Error(ErrorKind::pipeline_verification_failure, rep.failure, "f-verify");
    }
    return res;
}

namespace {

nlohmann::json cj(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

std::string report_json(const Theorem3Report& r) {
    using nlohmann::json;
    auto rows = [](const std::vector<GapRow>& g) {
        json a = json::array();
        for (const auto& x : g)
            a.push_back({{"n", x.n}, {"mu1", cj(x.mu1)}, {"mu2", cj(x.mu2)}, {"gap", x.gap}, {"raw_gap", x.raw_gap},
                         {"refined_gap", x.refined_gap},
                         {"multiplicity", x.mult}});
        return a;
    };
    json j = {
        {"N", r.N},
        {"eps", r.eps},
        {"seed", r.seed},
        {"retries", r.retries},
        {"dirichlet", {{"simple", r.dirichlet_simple}, {"zero_excluded", r.zero_excluded}, {"terms", r.n_dirichlet}}},
        {"jump_target", cj(r.jump_target)},
        {"smooth_collar", r.smooth_collar},
        {"norms",
         {{"perturbation", r.dist_perturbation},
          {"smoothing", r.dist_smoothing},
          {"reconstruction", r.dist_reconstruction},
          {"total", r.dist_total}}},
        {"fit", {{"V1", cj(r.V1)}, {"V2", cj(r.V2)}, {"V2_free", cj(r.V2_free)}, {"V1_identity", cj(r.V1_identity)}, {"residual_trend", r.fit_residual_trend}}},
        {"n_pairs", r.n_pairs},
        {"max_change", r.max_change},
        {"gelfand_levitan", {{"residual", r.gl_residual}, {"condition", r.gl_condition}}},
        {"determinant_residual", r.det_residual},
        {"mean", {{"q", cj(r.mean_q)}, {"q2", cj(r.mean_q2)}, {"q_N", cj(r.mean_qN)}, {"ok", r.mean_ok}}},
        {"base_gaps", rows(r.base_gaps)},
        {"gaps", rows(r.gaps)},
        {"gaps_ok", r.gaps_ok},
        {"verified", r.verified},
        {"failure", r.failure},
    };
    return j.dump(2);
}

}  // namespace sturm
