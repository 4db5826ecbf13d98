#include "sturm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>

namespace sturm {

const EigenPair* Spectrum::pair(int n) const {
    for (const auto& p : pairs)
        if (p.n == n) return &p;
    return nullptr;
}

const char* to_string(Asymptotic a) {
    switch (a) {
        case Asymptotic::multiple: return "asymptotically_multiple";
        case Asymptotic::simple: return "asymptotically_simple";
        case Asymptotic::undetermined: return "undetermined";
    }
    return "?";
}

namespace {

bool lex_less(cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

// keep one representative of each +-mu pair
bool representative(cplx z) {
    const double tol = 1e-10 * (1 + std::abs(z));
    if (std::abs(z) <= tol) return true;
    if (z.real() > tol) return true;
    return std::abs(z.real()) <= tol && z.imag() > 0;
}

// Roots in [x0, x1] x [-H, H]; the right edge and the height are nudged when
// the contour runs into a zero. Returns the right edge actually used.
double search_box(const Analytic& f, double x0, double x1, double& H, int expected,
                  const RootOptions& ro, std::vector<Root>& out) {
    static constexpr double shifts[] = {0.0, 0.1, -0.1, 0.17, -0.17, 0.23, -0.23};
    for (int grow = 0; grow < 6; ++grow) {
        for (double dx : shifts) {
            const double right = x1 + dx;
            if (right <= x0 + 0.3) continue;
            std::vector<Root> found;
            try {
                found = find_roots(f, Box{x0, right, -H, H}, ro);
            } catch (const Error&) {
                continue;
            }
            int count = 0;
            for (const auto& r : found) count += r.multiplicity;
            if (count < expected) break;  // roots beyond the strip: grow it
            for (const auto& r : found)
                if (representative(r.z)) out.push_back(r);
            return right;
        }
        H *= 1.7;
    }
    throw Error(ErrorKind::root_isolation_failure,
                "no admissible search box near [" + std::to_string(x0) + ", " + std::to_string(x1) + "]");
}

}  // namespace

Spectrum eigenvalue_series(const std::vector<Root>& roots, int theta) {
    std::map<int, std::vector<Root>> bins;
    for (const auto& r : roots) {
        if (!representative(r.z))
            throw Error(ErrorKind::series_assignment, "root outside Re mu >= 0");
        const int n = static_cast<int>(std::lround((r.z.real() + theta) / 2));
        if (n < 0 || (n == 0 && theta == 1))
            throw Error(ErrorKind::series_assignment, "root cannot be assigned to an index");
        bins[n].push_back(r);
    }
    Spectrum sp;
    sp.theta = theta;
    for (auto& [n, rs] : bins) {
        int total = 0;
        for (const auto& r : rs) total += r.multiplicity;
        if (n == 0) {
            if (total == 1) sp.mu0 = rs[0].z;
            else if (rs.size() == 1 && total == 2) sp.mu0 = rs[0].z, sp.mu0_multiplicity = 2;
            else throw Error(ErrorKind::series_assignment, "more than one root assigned to mu0");
            continue;
        }
        if (total > 2)
            throw Error(ErrorKind::series_assignment, "more than two roots at index " + std::to_string(n));
        if (total < 2)
            throw Error(ErrorKind::series_assignment, "incomplete pair at index " + std::to_string(n));
        EigenPair p;
        p.n = n;
        if (rs.size() == 1) {
            p.mu1 = p.mu2 = rs[0].z;
            p.mult1 = p.mult2 = 2;
            p.raw_gap = rs[0].spread;
        } else {
            std::sort(rs.begin(), rs.end(), [](const Root& a, const Root& b) { return lex_less(a.z, b.z); });
            p.mu1 = rs[0].z, p.mu2 = rs[1].z;
            p.raw_gap = std::abs(p.mu1 - p.mu2);
        }
        sp.pairs.push_back(p);
    }
    for (size_t i = 0; i < sp.pairs.size(); ++i)
        if (sp.pairs[i].n != static_cast<int>(i) + 1)
            throw Error(ErrorKind::series_assignment, "missing index " + std::to_string(i + 1));
    return sp;
}

Asymptotic classify_asymptotic(const Spectrum& sp, double gap_tol, int window) {
    if (window < 1 || static_cast<int>(sp.pairs.size()) < window)
        throw std::invalid_argument("classify_asymptotic: fewer computed pairs than the window");
    bool all_small = true, all_large = true;
    for (size_t i = sp.pairs.size() - window; i < sp.pairs.size(); ++i) {
        const double g = sp.pairs[i].gap();
        all_small = all_small && g <= gap_tol;
        all_large = all_large && g >= 10 * gap_tol;
    }
    if (all_small) return Asymptotic::multiple;
    if (all_large) return Asymptotic::simple;
    return Asymptotic::undetermined;
}

Spectrum spectrum_of(const Analytic& f, int theta, int n_pairs, const SpectrumOptions& opt) {
    std::vector<Root> roots;
    double H = opt.height;
    double left = theta == 0 ? -1.0 : -2.0;
    double right = theta == 0 ? 1.0 : 2.0;
    int k = theta == 0 ? 0 : 1;  // last pair index covered so far
    left = search_box(f, left, right, H, theta == 0 ? 2 : 4, opt.roots, roots);
    while (k < n_pairs) {
        ++k;
        const double nominal = 2.0 * k + 1 - theta;
        double Hk = opt.height;
        left = search_box(f, left, nominal, Hk, 2, opt.roots, roots);
    }
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return lex_less(a.z, b.z); });
    Spectrum sp = eigenvalue_series(roots, theta);
    // the last box may have caught a root of the next index after a nudge
    while (!sp.pairs.empty() && sp.pairs.back().n > n_pairs) sp.pairs.pop_back();
    return sp;
}

Spectrum compute_spectrum(const ProblemCollection& p, int n_pairs, const SpectrumOptions& opt) {
    const int steps = opt.steps > 0 ? opt.steps : default_steps(2.0 * n_pairs + 3);
    Determinant det(p, steps);
    return spectrum_of([&](cplx mu) { return det(mu); }, p.theta, n_pairs, opt);
}

RefinedGap refine_pair_gap(const Analytic& f, const EigenPair& p) {
    RefinedGap g;
    g.n = p.n;
    g.z1 = p.mu1, g.z2 = p.mu2;
    g.gap = std::abs(p.mu1 - p.mu2);
    const cplx c = 0.5 * (p.mu1 + p.mu2);
    const double r = std::min(0.2, std::max(1e-3, 4 * g.gap));
    g.radius = r;
    cvec b = taylor_scaled(f, c, r, 32);
    b.resize(7);
    const cvec w = poly_roots(b);
    cvec in;
    for (const auto& v : w)
        if (std::abs(v) < 0.5) in.push_back(c + r * v);
    if (in.size() != 2) return g;
    g.z1 = in[0], g.z2 = in[1];
    g.gap = std::abs(in[0] - in[1]);
    g.refined = true;
    return g;
}

std::vector<RefinedGap> refine_gaps_extended(const ProblemCollection& p, const Spectrum& sp, int lo, int hi,
                                             int steps) {
    const Determinant det(p, steps > 0 ? steps : default_steps(2.0 * hi + 3));
    const Analytic f = [&](cplx mu) { return det.extended(mu); };
    std::vector<RefinedGap> out;
    for (const auto& pr : sp.pairs)
        if (pr.n >= lo && pr.n <= hi) out.push_back(refine_pair_gap(f, pr));
    return out;
}

DirichletData dirichlet_spectrum(const Potential& q, int n_max, int steps) {
    if (n_max < 1) throw std::invalid_argument("dirichlet_spectrum: n_max must be >= 1");
    Propagator prop(q, steps > 0 ? steps : default_steps(n_max + 2.0));
    const Analytic s = [&](cplx mu) { return prop.endpoint(mu).s; };

    double qmax = 0;
    for (auto v : q.samples()) qmax = std::max(qmax, std::abs(v));
    std::vector<Root> roots;
    double H0 = std::max(2.0, std::sqrt(qmax) + 1);
    double left = search_box(s, -0.5, 0.5, H0, 0, {}, roots);
    int count = static_cast<int>(roots.size());
    for (int k = 1; count < n_max; ++k) {
        if (k > 2 * n_max + 20)
            throw Error(ErrorKind::root_isolation_failure, "Dirichlet roots not found within search range");
        double H = 2.0;
        left = search_box(s, left, k + 0.5, H, 0, {}, roots);
        count = 0;
        for (const auto& r : roots) count += r.multiplicity;
    }
    std::sort(roots.begin(), roots.end(),
              [](const Root& a, const Root& b) { return std::abs(a.z) < std::abs(b.z); });

    DirichletData d;
    d.zero_excluded = std::abs(prop.endpoint(0.0).s) > 1e-10;
    double min_ms = INFINITY;
    int taken = 0;
    for (size_t i = 0; i < roots.size() && taken < n_max; ++i) {
        const auto& r = roots[i];
        if (r.multiplicity > 1) d.simple = false;
        for (int m = 0; m < r.multiplicity && taken < n_max; ++m, ++taken) {
            d.roots.push_back(r.z);
            d.c.push_back(prop.endpoint(r.z).c);
            double sep = 0.1;
            if (i > 0) sep = std::min(sep, std::abs(r.z - roots[i - 1].z));
            if (i + 1 < roots.size()) sep = std::min(sep, std::abs(r.z - roots[i + 1].z));
            const cplx sd = r.multiplicity > 1 ? cplx(0) : cauchy_derivative(s, r.z, sep / 2, 16);
            d.sdot.push_back(sd);
            min_ms = std::min(min_ms, std::abs(r.z * sd));
        }
    }
    for (size_t i = 1; i < d.roots.size(); ++i)
        if (!(std::abs(d.roots[i]) > std::abs(d.roots[i - 1]))) d.simple = false;
    d.min_mu_sdot = min_ms;
    if (!(min_ms > 1e-8)) d.simple = false;
    return d;
}

void write_spectrum_csv(const std::string& path, const Spectrum& sp) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::io, "cannot write " + path);
    os << std::setprecision(17) << "n,j,re_mu,im_mu,multiplicity\n";
    if (sp.mu0) os << 0 << ',' << 0 << ',' << sp.mu0->real() << ',' << sp.mu0->imag() << ',' << sp.mu0_multiplicity << '\n';
    for (const auto& p : sp.pairs) {
        os << p.n << ",1," << p.mu1.real() << ',' << p.mu1.imag() << ',' << p.mult1 << '\n';
        os << p.n << ",2," << p.mu2.real() << ',' << p.mu2.imag() << ',' << p.mult2 << '\n';
    }
}

}  // namespace sturm
