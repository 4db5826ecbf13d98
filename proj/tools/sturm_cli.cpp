// Command-line front end: one subcommand per operation, artifacts written to
// the output directory (--out, else $STURM_OUT, else the current directory).

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "sturm/asymptotics.hpp"
#include "sturm/bc.hpp"
#include "sturm/gl.hpp"
#include "sturm/models.hpp"
#include "sturm/pipeline.hpp"

using namespace sturm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json cj(cplx z) {
    if (z.imag() == 0) return z.real() + 0.0;  // no -0 in the output
    return json::array({z.real() + 0.0, z.imag() + 0.0});
}

cplx parse_cplx(const std::string& s) {
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(s), 0.0};
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
}

std::vector<double> split_doubles(const std::string& s, char sep) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        try {
            v.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + tok + "'");
        }
    }
    return v;
}

rvec parse_grid(const std::string& s) {
    const auto v = split_doubles(s, ':');
    if (v.size() != 3 || !(v[2] > 0) || v[1] < v[0]) throw UsageError("--mu-grid wants a:b:step with b >= a, step > 0");
    rvec g;
    const auto n = static_cast<long>(std::floor((v[1] - v[0]) / v[2] + 1e-9));
    for (long i = 0; i <= n; ++i) g.push_back(v[0] + i * v[2]);
    return g;
}

// 8 values: real 2x4 matrix row by row. 16 values: (re, im) per entry.
BCMatrix parse_matrix(const std::string& s) {
    const auto v = split_doubles(s, ',');
    BCMatrix a{};
    if (v.size() == 8) {
        for (int i = 0; i < 8; ++i) a[i / 4][i % 4] = v[i];
    } else if (v.size() == 16) {
        for (int i = 0; i < 8; ++i) a[i / 4][i % 4] = cplx(v[2 * i], v[2 * i + 1]);
    } else {
        throw UsageError("--matrix wants 8 real or 16 (re,im) values");
    }
    return a;
}

// Options shared by most subcommands.
struct Common {
    std::string alpha = "0.5", gamma = "0", matrix, q = "zero", q_csv, out;
    int theta = 0;
    int grid = 513;

    void add_collection(CLI::App* c) {
        c->add_option("--alpha", alpha, "alpha (re or re,im)");
        c->add_option("--gamma", gamma, "gamma (re or re,im)");
        c->add_option("--theta", theta, "0 or 1")->check(CLI::IsMember({0, 1}));
        c->add_option("--matrix", matrix, "boundary matrix, overrides alpha/gamma/theta");
    }
    void add_potential(CLI::App* c) {
        c->add_option("--q", q, "potential expression");
        c->add_option("--q-csv", q_csv, "potential samples (x,re,im)");
        c->add_option("--grid", grid, "grid size, 2^k + 1");
    }
    void add_out(CLI::App* c) { c->add_option("--out", out, "output directory")->envname("STURM_OUT"); }

    BoundaryClassification cls() const {
        if (!matrix.empty()) return classify(parse_matrix(matrix));
        return classify(canonical_matrix(parse_cplx(alpha), parse_cplx(gamma), theta));
    }
    Potential potential() const {
        if (grid < 3 || ((grid - 1) & (grid - 2)) != 0) throw UsageError("--grid must be 2^k + 1");
        if (!q_csv.empty()) return read_potential_csv(q_csv).resampled(grid);
        return potential_from_expression(q, grid);
    }
    ProblemCollection problem() const {
        const auto c = cls();
        return {c.alpha, c.gamma, c.theta, potential()};
    }
    fs::path dir() const {
        fs::path d = out.empty() ? fs::path(".") : fs::path(out);
        fs::create_directories(d);
        return d;
    }
};

void write_json(const fs::path& p, const json& j) {
    std::ofstream f(p);
    if (!f) throw Error(ErrorKind::io, "cannot write " + p.string());
    f << j.dump(2) << "\n";
}

json classification_json(const BoundaryClassification& c) {
    const Minors& m = c.minors;
    return {{"type", to_string(c.bc_type)},
            {"alpha", cj(c.alpha)},
            {"gamma", cj(c.gamma)},
            {"theta", c.theta},
            {"regular_not_strongly", c.regular_not_strongly},
            {"minors",
             {{"A12", cj(m.a12)}, {"A13", cj(m.a13)}, {"A14", cj(m.a14)}, {"A23", cj(m.a23)}, {"A24", cj(m.a24)},
              {"A34", cj(m.a34)}}}};
}

json gap_table(const Spectrum& sp, const std::vector<RefinedGap>& ref) {
    json rows = json::array();
    for (const auto& p : sp.pairs) {
        json r = {{"n", p.n}, {"mu1", cj(p.mu1)}, {"mu2", cj(p.mu2)}, {"gap", p.gap()}, {"raw_gap", p.raw_gap},
                  {"multiplicity", std::max(p.mult1, p.mult2)}};
        for (const auto& g : ref)
            if (g.n == p.n) r["refined_gap"] = g.refined ? json(g.gap) : json(nullptr);
        rows.push_back(r);
    }
    return rows;
}

// JSON config values are spliced in as flags unless the flag is already on
// the command line, so flags win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config " + path);
    json cfg;
    try {
        cfg = json::parse(f);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    auto given = [&](const std::string& flag) {
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    for (const auto& [k, v] : cfg.items()) {
        const std::string flag = "--" + k;
        if (given(flag)) continue;
        if (k == "out" && std::getenv("STURM_OUT")) continue;
        if (v.is_boolean()) {
            if (v.get<bool>()) args.push_back(flag);
            continue;
        }
        std::string val;
        if (v.is_string()) {
            val = v.get<std::string>();
        } else if (v.is_array()) {
            for (size_t i = 0; i < v.size(); ++i) val += (i ? "," : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
        } else {
            val = v.dump();
        }
        args.push_back(flag);
        args.push_back(val);
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral tools for second-order operators with regular boundary conditions"};
    app.name("sturm");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    std::string config;
    Common cm;

    auto* c_classify = app.add_subcommand("classify", "minors, type, alpha, gamma, theta of a boundary matrix");
    c_classify->add_option("--matrix", cm.matrix, "8 real or 16 (re,im) values")->required();
    cm.add_out(c_classify);

    std::string mu_s = "1";
    int steps = 0;
    auto* c_solve = app.add_subcommand("solve", "fundamental system at x = pi");
    cm.add_collection(c_solve);
    cm.add_potential(c_solve);
    c_solve->add_option("--mu", mu_s, "spectral parameter (re or re,im)");
    c_solve->add_option("--steps", steps, "integrator steps (0: automatic)");
    cm.add_out(c_solve);

    std::string mu_grid = "0:10:0.01";
    auto* c_det = app.add_subcommand("determinant", "characteristic determinant on a real grid");
    cm.add_collection(c_det);
    cm.add_potential(c_det);
    c_det->add_option("--mu-grid", mu_grid, "a:b:step");
    c_det->add_option("--steps", steps, "integrator steps (0: automatic)");
    cm.add_out(c_det);

    int pairs = 20, window = 0;
    double gap_tol = 1e-6, height = 2.0;
    bool refine = false;
    auto* c_spec = app.add_subcommand("spectrum", "eigenvalue series and the asymptotic verdict");
    cm.add_collection(c_spec);
    cm.add_potential(c_spec);
    c_spec->add_option("--pairs", pairs, "pairs n = 1..pairs");
    c_spec->add_option("--height", height, "half-height of the search strip");
    c_spec->add_option("--gap-tol", gap_tol, "gap tolerance for the verdict");
    c_spec->add_option("--window", window, "trailing pairs for the verdict (0: pairs/2)");
    c_spec->add_flag("--refine", refine, "extended-precision gaps");
    c_spec->add_option("--steps", steps, "integrator steps (0: automatic)");
    cm.add_out(c_spec);

    int terms = 40;
    auto* c_dir = app.add_subcommand("dirichlet", "Dirichlet roots and norming constants");
    cm.add_potential(c_dir);
    c_dir->add_option("--n", terms, "number of roots");
    c_dir->add_option("--steps", steps, "integrator steps (0: automatic)");
    cm.add_out(c_dir);

    std::string N_list = "5,10,20";
    double W = 50;
    auto* c_model = app.add_subcommand("model", "Hadamard model of the determinant and truncation norms");
    cm.add_collection(c_model);
    cm.add_potential(c_model);
    c_model->add_option("--pairs", pairs, "pairs in the product");
    c_model->add_option("--N", N_list, "truncation indices, comma separated");
    c_model->add_option("--window", W, "half-width of the norm window");
    c_model->add_option("--mu-grid", mu_grid, "a:b:step for determinant.csv");
    cm.add_out(c_model);

    std::string route = "dirichlet";
    int kernel_stride = 8;
    auto* c_rec = app.add_subcommand("reconstruct", "potential from spectral data of a given potential");
    cm.add_collection(c_rec);
    cm.add_potential(c_rec);
    c_rec->add_option("--route", route, "dirichlet or determinant")->check(CLI::IsMember({"dirichlet", "determinant"}));
    c_rec->add_option("--terms", terms, "Dirichlet pairs (dirichlet route) or data terms (determinant route)");
    int rec_grid = 513;
    c_rec->add_option("--rec-grid", rec_grid, "reconstruction grid, 2^k + 1");
    c_rec->add_option("--kernel-stride", kernel_stride, "row/column stride of kernel.csv");
    cm.add_out(c_rec);

    int node = 1;
    std::string delta = "1e-3";
    auto* c_pert = app.add_subcommand("perturb", "move one Delta_+ value at a Dirichlet root, keep the roots");
    cm.add_collection(c_pert);
    cm.add_potential(c_pert);
    c_pert->add_option("--terms", terms, "Dirichlet roots carried");
    c_pert->add_option("--node", node, "1-based root index");
    c_pert->add_option("--delta", delta, "change of Delta_+ at that root (re or re,im)");
    c_pert->add_option("--rec-grid", rec_grid, "grid of the result, 2^k + 1");
    cm.add_out(c_pert);

    int fit_l = 1, fit_from = 0, sigma = 0;
    auto* c_asym = app.add_subcommand("asymptotics", "pair-centre fit, jump target, sigma polynomials");
    cm.add_collection(c_asym);
    cm.add_potential(c_asym);
    c_asym->add_option("--pairs", pairs, "pairs computed");
    c_asym->add_option("--l", fit_l, "fit V_1 .. V_{l+1}");
    c_asym->add_option("--from", fit_from, "first fitted index (0: pairs/4)");
    c_asym->add_option("--sigma", sigma, "also print sigma_1 .. sigma_k");
    cm.add_out(c_asym);

    double eps = 0.1;
    int N = 15;
    Theorem3Options t3;
    auto* c_t3 = app.add_subcommand("theorem3", "potential nearby whose spectrum is doubled beyond N");
    cm.add_collection(c_t3);
    cm.add_potential(c_t3);
    c_t3->add_option("--eps", eps, "distance budget");
    c_t3->add_option("--N", N, "pairs kept as they are");
    c_t3->add_option("--seed", t3.seed, "seed of the perturbation retry");
    c_t3->add_option("--pairs", t3.n_pairs, "pairs for the fit (0: automatic)");
    c_t3->add_option("--rec-grid", t3.recon_grid, "grid of q_N, 2^k + 1");
    c_t3->add_option("--fit-l", t3.fit_l, "fit order");
    c_t3->add_option("--verify-pairs", t3.verify_pairs, "pairs checked beyond N");
    c_t3->add_option("--gap-tol", t3.gap_tol, "gap tolerance beyond N");
    c_t3->add_flag("--strict", t3.strict, "fail inside the pipeline on a verification miss");
    cm.add_out(c_t3);

    for (auto* s : {c_classify, c_solve, c_det, c_spec, c_dir, c_model, c_rec, c_pert, c_asym, c_t3})
        s->add_option("--config", config, "JSON file of flag values");

    std::vector<std::string> args;
    try {
        args = merge_config(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return 2;
    }
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        auto subs = app.get_subcommands();
        std::cerr << (subs.empty() ? app.help() : subs.front()->help());
        return 2;
    }

    std::cout << std::setprecision(17);
    try {
        if (!(gap_tol > 0) || !(eps > 0) || !(t3.gap_tol > 0)) throw UsageError("tolerances must be positive");

        if (*c_classify) {
            const json j = classification_json(classify(parse_matrix(cm.matrix)));
            write_json(cm.dir() / "report.json", j);
            std::cout << j.dump() << "\n";
        } else if (*c_solve) {
            const ProblemCollection p = cm.problem();
            const cplx mu = parse_cplx(mu_s);
            const EndpointSolution e = fundamental_system(p.q, mu, steps > 0 ? steps : default_steps(std::abs(mu)));
            const json j = {{"mu", cj(mu)},
                            {"c", cj(e.c)},
                            {"c_prime", cj(e.cp)},
                            {"s", cj(e.s)},
                            {"s_prime", cj(e.sp)},
                            {"wronskian_residual", e.wronskian_residual},
                            {"determinant", cj(determinant_from_endpoint(p, e))}};
            write_json(cm.dir() / "report.json", j);
            std::cout << j.dump() << "\n";
        } else if (*c_det) {
            const ProblemCollection p = cm.problem();
            const rvec g = parse_grid(mu_grid);
            double mmax = 0;
            for (double x : g) mmax = std::max(mmax, std::abs(x));
            const Determinant det(p, steps > 0 ? steps : default_steps(mmax));
            const fs::path path = cm.dir() / "determinant.csv";
            std::ofstream f(path);
            if (!f) throw Error(ErrorKind::io, "cannot write " + path.string());
            f << std::setprecision(17) << "mu,re,im\n";
            for (double mu : g) {
                const cplx d = det(mu);
                f << mu << "," << d.real() << "," << d.imag() << "\n";
            }
            std::cout << json({{"points", g.size()}, {"steps", det.propagator().steps()}, {"file", path.string()}}).dump()
                      << "\n";
        } else if (*c_spec) {
            const ProblemCollection p = cm.problem();
            SpectrumOptions so;
            so.steps = steps;
            so.height = height;
            const Spectrum sp = compute_spectrum(p, pairs, so);
            std::vector<RefinedGap> ref;
            if (refine) ref = refine_gaps_extended(p, sp, 1, pairs, steps);
            const int win = window > 0 ? window : std::max(1, pairs / 2);
            const fs::path d = cm.dir();
            write_spectrum_csv((d / "spectrum.csv").string(), sp);
            json j = {{"classification", classification_json(cm.cls())},
                      {"mu0", sp.mu0 ? cj(*sp.mu0) : json(nullptr)},
                      {"verdict", to_string(classify_asymptotic(sp, gap_tol, win))},
                      {"gap_tol", gap_tol},
                      {"window", win},
                      {"gaps", gap_table(sp, ref)}};
            write_json(d / "report.json", j);
            std::cout << json({{"verdict", j["verdict"]}, {"pairs", sp.pairs.size()}}).dump() << "\n";
        } else if (*c_dir) {
            const Potential q = cm.potential();
            const DirichletData dd = dirichlet_spectrum(q, terms, steps);
            const fs::path d = cm.dir();
            write_spectral_data_csv((d / "spectrum.csv").string(), from_dirichlet(dd));
            json roots = json::array();
            for (size_t i = 0; i < dd.roots.size(); ++i)
                roots.push_back({{"n", i + 1}, {"mu", cj(dd.roots[i])}, {"c", cj(dd.c[i])}, {"sdot", cj(dd.sdot[i])}});
            const json j = {{"simple", dd.simple}, {"zero_excluded", dd.zero_excluded}, {"min_mu_sdot", dd.min_mu_sdot},
                            {"roots", roots}};
            write_json(d / "report.json", j);
            std::cout << json({{"simple", dd.simple}, {"zero_excluded", dd.zero_excluded}}).dump() << "\n";
        } else if (*c_model) {
            const ProblemCollection p = cm.problem();
            const Spectrum sp = compute_spectrum(p, pairs);
            const cplx V1 = (p.gamma + kPi * p.q.mean() / 2.0) / kPi;
            const AsymptoticFit fit = fit_asymptotics(sp, 3, std::max(3, pairs / 4), pairs, V1);
            const HadamardModel hm = hadamard_from_spectrum(sp, V1, fit.V[1]);
            std::vector<int> Ns;
            for (double v : split_doubles(N_list, ',')) Ns.push_back(static_cast<int>(v));
            const Lemma5Report l5 = lemma5_diagnostic(hm, Ns, W);
            const rvec g = parse_grid(mu_grid);
            double mmax = 0;
            for (double x : g) mmax = std::max(mmax, std::abs(x));
            const Determinant det(p, default_steps(mmax));
            const fs::path d = cm.dir();
            std::ofstream f(d / "determinant.csv");
            f << std::setprecision(17) << "mu,re_det,im_det,re_model,im_model\n";
            double worst = 0;
            for (double mu : g) {
                const cplx a = det(mu), b = hadamard_eval(hm, mu);
                worst = std::max(worst, std::abs(a - b));
                f << mu << "," << a.real() << "," << a.imag() << "," << b.real() << "," << b.imag() << "\n";
            }
            write_spectrum_csv((d / "spectrum.csv").string(), sp);
            const json j = {{"V1", cj(V1)},        {"V2", cj(fit.V[1])},   {"N", l5.N},
                            {"norms", l5.norms}, {"monotone", l5.monotone}, {"max_model_error", worst}};
            write_json(d / "report.json", j);
            std::cout << j.dump() << "\n";
        } else if (*c_rec) {
            const ProblemCollection p = cm.problem();
            if (rec_grid < 3 || ((rec_grid - 1) & (rec_grid - 2)) != 0) throw UsageError("--rec-grid must be 2^k + 1");
            const fs::path d = cm.dir();
            Reconstruction r;
            json extra;
            if (route == "dirichlet") {
                const DirichletData dd = dirichlet_spectrum(p.q, terms);
                const SpectralData data = from_dirichlet(dd);
                DirichletReconstructOptions o;
                o.grid_size = rec_grid;
                r = reconstruct_from_dirichlet_data(data, o);
                const VerificationReport v = verify_reconstruction(r.q, data);
                extra = {{"verification", {{"max_s", v.max_s}, {"max_c", v.max_c}, {"max_sprime", v.max_sprime}, {"n_check", v.n_check}}}};
                write_spectral_data_csv((d / "spectrum.csv").string(), data);
                write_kernel_csv((d / "kernel.csv").string(), build_F_kernel(data, rec_grid, r.report.tail), kernel_stride);
            } else {
                const Determinant det(p, 4 * default_steps(terms + 2));
                const DeterminantModel u =
                    model_from_function(p.theta, p.gamma + kPi * p.q.mean() / 2.0, [&](cplx m) { return det(m); });
                DeterminantReconstructOptions o;
                o.grid_size = rec_grid;
                o.n_data = terms;
                r = reconstruct_from_determinant(u, p.alpha, p.gamma, p.theta, p.q.mean(), o);
                extra = {{"N", r.report.N}, {"eps1", r.report.eps1}, {"det_residual", r.report.det_residual},
                         {"halfplane_ok", r.report.halfplane.ok}};
            }
            write_potential_csv((d / "potential.csv").string(), r.q);
            json j = {{"route", route},
                      {"l2_error", l2_distance(r.q, p.q)},
                      {"q0", cj(r.report.q0)},
                      {"gl_residual", r.report.max_residual},
                      {"gl_condition", r.report.max_condition},
                      {"last_term", r.report.last_term},
                      {"asymmetry", r.report.asymmetry}};
            j.update(extra);
            write_json(d / "report.json", j);
            std::cout << j.dump() << "\n";
        } else if (*c_pert) {
            const ProblemCollection p = cm.problem();
            if (node < 1 || node > terms) throw UsageError("--node outside 1..terms");
            const DirichletData dd = dirichlet_spectrum(p.q, terms);
            const SpectralData base = from_dirichlet(dd);
            cvec change(terms, 0.0);
            change[node - 1] = parse_cplx(delta);
            const cvec ct = target_norming_from_change(change, p.alpha, base.norming, terms);
            PerturbedOptions po;
            po.grid_size = rec_grid;
            const Reconstruction r = reconstruct_perturbed(p.q, base, ct, po);
            SpectralData target = base;
            target.norming = ct;
            const VerificationReport v = verify_reconstruction(r.q, target);
            const fs::path d = cm.dir();
            write_potential_csv((d / "potential.csv").string(), r.q);
            write_spectral_data_csv((d / "spectrum.csv").string(), target);
            const json j = {{"node", node},
                            {"c_before", cj(base.norming[node - 1])},
                            {"c_after", cj(ct[node - 1])},
                            {"distance", l2_distance(r.q, p.q)},
                            {"gl_residual", r.report.max_residual},
                            {"gl_condition", r.report.max_condition},
                            {"verification", {{"max_s", v.max_s}, {"max_c", v.max_c}, {"max_sprime", v.max_sprime}}}};
            write_json(d / "report.json", j);
            std::cout << j.dump() << "\n";
        } else if (*c_asym) {
            const ProblemCollection p = cm.problem();
            const BoundaryClassification c = cm.cls();
            const Spectrum sp = compute_spectrum(p, pairs);
            const AsymptoticFit fit = fit_asymptotics(sp, fit_l, fit_from > 0 ? fit_from : std::max(3, pairs / 4), pairs);
            json V = json::array();
            for (cplx v : fit.V) V.push_back(cj(v));
            json j = {{"l", fit.l},
                      {"V", V},
                      {"V1_identity", cj((p.gamma + kPi * p.q.mean() / 2.0) / kPi)},
                      {"n", fit.n},
                      {"residual_trend", fit.residual_trend}};
            try {
                j["jump_target"] = cj(boundary_jump_target(c));
            } catch (const Error& e) {
                j["jump_target"] = nullptr;
                j["jump_target_reason"] = to_string(e.kind());
            }
            if (sigma > 0) {
                json s = json::array();
                for (const auto& dp : sigma_symbolic(sigma)) s.push_back(to_string(dp));
                j["sigma"] = s;
            }
            write_json(cm.dir() / "report.json", j);
            std::cout << j.dump() << "\n";
        } else if (*c_t3) {
            const BoundaryClassification c = cm.cls();
            const Potential q = cm.potential();
            t3.grid_size = cm.grid;
            if (t3.recon_grid < 3 || ((t3.recon_grid - 1) & (t3.recon_grid - 2)) != 0)
                throw UsageError("--rec-grid must be 2^k + 1");
            const Theorem3Result r = theorem3_pipeline(q, eps, c, N, t3);
            const fs::path d = cm.dir();
            {
                std::ofstream f(d / "report.json");
                f << report_json(r.report) << "\n";
            }
            write_potential_csv((d / "potential.csv").string(), r.qN);
            {
                std::ofstream f(d / "spectrum.csv");
                f << std::setprecision(17) << "n,j,re_mu,im_mu,refined_gap\n";
                for (const auto& g : r.report.gaps) {
                    f << g.n << ",1," << g.mu1.real() << "," << g.mu1.imag() << "," << g.refined_gap << "\n";
                    f << g.n << ",2," << g.mu2.real() << "," << g.mu2.imag() << "," << g.refined_gap << "\n";
                }
            }
            std::cout << json({{"verified", r.report.verified},
                               {"distance", r.report.dist_total},
                               {"failure", r.report.failure}})
                             .dump()
                      << "\n";
            if (!r.report.verified) return 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.kind()) << (e.stage().empty() ? "" : "@" + e.stage()) << "]: " << e.what()
                  << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
