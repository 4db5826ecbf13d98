#include "sturm/roots.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace sturm {

double Box::diag() const { return std::hypot(x1 - x0, y1 - y0); }

bool Box::contains(cplx z, double margin) const {
    return z.real() >= x0 - margin && z.real() <= x1 + margin && z.imag() >= y0 - margin &&
           z.imag() <= y1 + margin;
}

namespace {

constexpr double kMaxStepPhase = kPi / 4;

double segment_phase(const Analytic& f, cplx za, cplx zb, cplx fa, cplx fb, int depth) {
    const cplx zm = 0.5 * (za + zb);
    const cplx fm = f(zm);
    // a sample far below its neighbours means the contour grazes a zero
    if (!(std::abs(fm) > 1e-12 * std::max(std::abs(fa), std::abs(fb))) || !std::isfinite(std::abs(fm)))
        throw Error(ErrorKind::root_isolation_failure, "zero on contour");
    const double d1 = std::arg(fm / fa), d2 = std::arg(fb / fm);
    if (std::abs(d1) < kMaxStepPhase && std::abs(d2) < kMaxStepPhase) return d1 + d2;
    if (depth > 45 || std::abs(zb - za) < 1e-10 * (1 + std::abs(za)))
        throw Error(ErrorKind::root_isolation_failure, "contour passes through a zero");
    return segment_phase(f, za, zm, fa, fm, depth + 1) + segment_phase(f, zm, zb, fm, fb, depth + 1);
}

double contour_phase(const Analytic& f, const std::vector<cplx>& pts) {
    double total = 0;
    std::vector<cplx> vals(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        vals[i] = f(pts[i]);
        if (vals[i] == 0.0 || !std::isfinite(std::abs(vals[i])))
            throw Error(ErrorKind::root_isolation_failure, "zero on contour");
    }
    const size_t n = pts.size();
    for (size_t i = 0; i < n; ++i) {
        const double nb = std::max(std::abs(vals[(i + 1) % n]), std::abs(vals[(i + n - 1) % n]));
        if (!(std::abs(vals[i]) > 1e-12 * nb))
            throw Error(ErrorKind::root_isolation_failure, "zero on contour");
    }
    for (size_t i = 0; i < n; ++i) {
        const size_t j = (i + 1) % n;
        total += segment_phase(f, pts[i], pts[j], vals[i], vals[j], 0);
    }
    return total;
}

int phase_to_count(double total) {
    const double w = total / (2 * kPi);
    const double r = std::round(w);
    if (std::abs(w - r) > 0.05)
        throw Error(ErrorKind::root_isolation_failure, "non-integer winding " + std::to_string(w));
    return static_cast<int>(r);
}

struct LocalModel {
    cplx c;
    double r = 1;
    cvec b;  // scaled Taylor coefficients
    bool resolved = true;

    static LocalModel build(const Analytic& f, cplx c, double r, int M) {
        LocalModel lm{c, r, taylor_scaled(f, c, r, M), true};
        double amax = 0, tail = 0;
        const int n = static_cast<int>(lm.b.size());
        for (int k = 0; k < n; ++k) {
            amax = std::max(amax, std::abs(lm.b[k]));
            if (k >= n - 6) tail = std::max(tail, std::abs(lm.b[k]));
        }
        lm.resolved = tail <= 1e-11 * amax;
        return lm;
    }

    cplx deriv(cplx z) const {
        const cplx w = (z - c) / r;
        cplx acc = 0;
        for (size_t k = b.size() - 1; k >= 1; --k) acc = acc * w + static_cast<double>(k) * b[k];
        return acc / r;
    }
};

struct Finder {
    const Analytic& f;
    const RootOptions& opt;
    std::vector<Root> out;

    void solve(const Box& b, int m, int depth) {
        if (m == 0) return;
        if (m < 0) throw Error(ErrorKind::root_isolation_failure, "negative winding number");
        if (b.diag() <= opt.leaf_size && leaf(b, m)) return;
        if (depth > opt.max_depth)
            throw Error(ErrorKind::root_isolation_failure, "maximum subdivision depth reached");
        const bool vertical_cut = (b.x1 - b.x0) >= (b.y1 - b.y0);
        // off-centre cuts keep edges away from the real axis and integer lines
        for (double frac : {0.4871, 0.5313, 0.4419, 0.5741, 0.3967, 0.6173, 0.3511, 0.6629}) {
            Box b1 = b, b2 = b;
            if (vertical_cut) {
                const double x = b.x0 + frac * (b.x1 - b.x0);
                b1.x1 = x, b2.x0 = x;
            } else {
                const double y = b.y0 + frac * (b.y1 - b.y0);
                b1.y1 = y, b2.y0 = y;
            }
            int m1, m2;
            try {
                m1 = winding_number(f, b1);
                m2 = winding_number(f, b2);
            } catch (const Error&) {
                continue;
            }
            if (m1 + m2 != m) continue;
            solve(b1, m1, depth + 1);
            solve(b2, m2, depth + 1);
            return;
        }
        throw Error(ErrorKind::root_isolation_failure, "no admissible split of a box");
    }

    // local polynomial model on a circle around the box
    bool leaf(const Box& b, int m) {
        const LocalModel lm = LocalModel::build(f, b.center(), 0.75 * b.diag(), 128);
        if (!lm.resolved) return false;
        std::vector<cplx> inside, outside;
        for (const cplx& wi : poly_roots(lm.b)) {
            const cplx z = lm.c + lm.r * wi;
            if (b.contains(z, 1e-12 * (1 + std::abs(z)))) inside.push_back(z);
            else if (std::abs(wi) < 1.5) outside.push_back(z);
        }
        if (static_cast<int>(inside.size()) != m) return false;
        refine(inside, outside, b, lm);
        return true;
    }

    void refine(std::vector<cplx> zs, const std::vector<cplx>& outside, const Box& b,
                const LocalModel& lm) {
        // group estimates closer than a fraction of the box size
        std::sort(zs.begin(), zs.end(), [](cplx a, cplx c) { return a.real() < c.real(); });
        std::vector<std::vector<cplx>> groups;
        const double link = 0.02 * b.diag();
        for (const cplx& z : zs) {
            bool placed = false;
            for (auto& g : groups) {
                for (const cplx& y : g)
                    if (std::abs(y - z) < link) {
                        g.push_back(z);
                        placed = true;
                        break;
                    }
                if (placed) break;
            }
            if (!placed) groups.push_back({z});
        }
        for (auto& g : groups) {
            double others = b.diag();
            const cplx gc = mean(g);
            for (const cplx& z : outside) others = std::min(others, std::abs(z - gc));
            for (const auto& h : groups)
                if (&h != &g) others = std::min(others, std::abs(mean(h) - gc));
            if (g.size() == 1) {
                const cplx z = newton(g[0], others, lm);
                out.push_back({b.contains(z, 1e-9 * (1 + std::abs(z))) ? z : g[0], 1, 0.0});
            }
            else cluster(g, others);
        }
    }

    static cplx mean(const std::vector<cplx>& g) {
        cplx s = 0;
        for (auto z : g) s += z;
        return s / static_cast<double>(g.size());
    }

    // Newton with the derivative of the local model
    cplx newton(cplx z, double sep, const LocalModel& lm) {
        const cplx z0 = z;
        for (int it = 0; it < 12; ++it) {
            const cplx d = lm.deriv(z);
            if (d == 0.0) break;
            const cplx step = f(z) / d;
            z -= step;
            if (std::abs(z - z0) > sep / 3) return z0;  // wandered off; keep the model estimate
            if (std::abs(step) < opt.tol * (1 + std::abs(z))) break;
        }
        return z;
    }

    void cluster(std::vector<cplx> g, double others) {
        const size_t k = g.size();
        cplx c = mean(g);
        double spread = 0;
        LocalModel lm;
        for (int pass = 0; pass < 4; ++pass) {
            spread = 0;
            for (auto& z : g) spread = std::max(spread, std::abs(z - c));
            const double r = std::min(std::max(4 * spread, 1e-4 * (1 + std::abs(c))), others / 3);
            lm = LocalModel::build(f, c, r, 32);
            cvec w = poly_roots(lm.b);
            std::sort(w.begin(), w.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
            if (w.size() < k) break;
            for (size_t i = 0; i < k; ++i) g[i] = c + r * w[i];
            c = mean(g);
        }
        spread = 0;
        for (size_t i = 0; i < k; ++i)
            for (size_t j = i + 1; j < k; ++j) spread = std::max(spread, std::abs(g[i] - g[j]));
        const double thr = opt.merge_rel * (1 + std::abs(c));
        if (spread < thr) {
            // re-verify the merged multiplicity on a small circle
            const double r = std::min(std::max(10 * thr, 2 * spread), others / 3);
            int wn = -1;
            try {
                wn = winding_number_circle(f, c, r);
            } catch (const Error&) {
            }
            if (wn == static_cast<int>(k)) {
                out.push_back({c, static_cast<int>(k), spread});
                return;
            }
        }
        std::sort(g.begin(), g.end(), [](cplx a, cplx b) {
            return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
        });
        for (size_t i = 0; i < k; ++i) {
            double sep = others;
            for (size_t j = 0; j < k; ++j)
                if (j != i) sep = std::min(sep, std::abs(g[i] - g[j]));
            const cplx z = sep > 100 * thr ? newton(g[i], sep, lm) : g[i];
            out.push_back({z, 1, 0.0});
        }
    }
};

std::vector<Root> merge_close(const Analytic& f, std::vector<Root> rs, const RootOptions& opt) {
    std::sort(rs.begin(), rs.end(), [](const Root& a, const Root& b) {
        return a.z.real() < b.z.real() || (a.z.real() == b.z.real() && a.z.imag() < b.z.imag());
    });
    std::vector<Root> out;
    std::vector<bool> used(rs.size(), false);
    for (size_t i = 0; i < rs.size(); ++i) {
        if (used[i]) continue;
        const double thr = opt.merge_rel * (1 + std::abs(rs[i].z));
        std::vector<size_t> grp{i};
        for (size_t j = i + 1; j < rs.size(); ++j)
            if (!used[j] && std::abs(rs[j].z - rs[i].z) < thr) grp.push_back(j);
        if (grp.size() == 1) {
            out.push_back(rs[i]);
            continue;
        }
        cplx c = 0;
        int mult = 0;
        double spread = 0;
        for (size_t a : grp) {
            c += rs[a].z * static_cast<double>(rs[a].multiplicity);
            mult += rs[a].multiplicity;
            spread = std::max(spread, rs[a].spread);
            for (size_t b : grp) spread = std::max(spread, std::abs(rs[a].z - rs[b].z));
        }
        c /= static_cast<double>(mult);
        int wn = -1;
        try {
            wn = winding_number_circle(f, c, std::max(10 * thr, 2 * spread));
        } catch (const Error&) {
        }
        if (wn != mult) {
            out.push_back(rs[i]);
            continue;
        }
        for (size_t a : grp) used[a] = true;
        // re-estimate the cluster from a model on the verification circle
        const LocalModel lm = LocalModel::build(f, c, std::max(10 * thr, 2 * spread), 32);
        cvec w = poly_roots(lm.b);
        std::sort(w.begin(), w.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
        if (static_cast<int>(w.size()) >= mult) {
            cplx cc = 0;
            double sp = 0;
            for (int a = 0; a < mult; ++a) {
                cc += lm.c + lm.r * w[a];
                for (int b = 0; b < a; ++b) sp = std::max(sp, lm.r * std::abs(w[a] - w[b]));
            }
            c = cc / static_cast<double>(mult);
            spread = sp;
        }
        out.push_back({c, mult, spread});
    }
    return out;
}

}  // namespace

int winding_number(const Analytic& f, const Box& b) {
    std::vector<cplx> pts;
    const int per = 8;
    const cplx c0(b.x0, b.y0), c1(b.x1, b.y0), c2(b.x1, b.y1), c3(b.x0, b.y1);
    for (auto [a, z] : {std::pair{c0, c1}, std::pair{c1, c2}, std::pair{c2, c3}, std::pair{c3, c0}})
        for (int i = 0; i < per; ++i) pts.push_back(a + (z - a) * (static_cast<double>(i) / per));
    return phase_to_count(contour_phase(f, pts));
}

int winding_number_circle(const Analytic& f, cplx c, double r) {
    std::vector<cplx> pts;
    const int M = 32;
    for (int i = 0; i < M; ++i) pts.push_back(c + r * std::polar(1.0, 2 * kPi * i / M));
    // chords are fine: the polygon is within r(1 - cos(pi/M)) of the circle
    return phase_to_count(contour_phase(f, pts));
}

std::vector<Root> find_roots(const Analytic& f, const Box& box, const RootOptions& opt) {
    Finder fd{f, opt, {}};
    const int m = winding_number(f, box);
    fd.solve(box, m, 0);
    // a subdivision edge can split a numerically double root between two boxes
    auto out = merge_close(f, fd.out, opt);
    int total = 0;
    for (const auto& r : out) total += r.multiplicity;
    if (total != m)
        throw Error(ErrorKind::root_isolation_failure,
                    "found " + std::to_string(total) + " roots, winding count " + std::to_string(m));
    return out;
}

cvec poly_roots(cvec a) {
    double amax = 0;
    for (auto v : a) amax = std::max(amax, std::abs(v));
    if (amax == 0) return {};
    while (a.size() > 1 && std::abs(a.back()) <= 1e-13 * amax) a.pop_back();
    const int n = static_cast<int>(a.size()) - 1;
    if (n <= 0) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -a[i] / a[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    cvec r(n);
    for (int i = 0; i < n; ++i) r[i] = es.eigenvalues()[i];
    return r;
}

cvec taylor_scaled(const Analytic& f, cplx c, double r, int M) {
    cvec vals(M);
    for (int j = 0; j < M; ++j) vals[j] = f(c + r * std::polar(1.0, 2 * kPi * j / M));
    cvec b(M / 2 + 1);
    for (int k = 0; k <= M / 2; ++k) {
        cplx acc = 0;
        for (int j = 0; j < M; ++j) acc += vals[j] * std::polar(1.0, -2 * kPi * j * k / M);
        b[k] = acc / static_cast<double>(M);
    }
    return b;
}

cplx cauchy_derivative(const Analytic& f, cplx z, double r, int M) {
    cplx acc = 0;
    for (int j = 0; j < M; ++j) {
        const cplx w = std::polar(1.0, 2 * kPi * j / M);
        acc += f(z + r * w) / w;
    }
    return acc / (static_cast<double>(M) * r);
}

}  // namespace sturm
