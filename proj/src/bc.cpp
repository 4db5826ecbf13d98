#include "sturm/bc.hpp"

#include <algorithm>
#include <cmath>

namespace sturm {

namespace {
constexpr double kRelTol = 1e-10;

cplx det2(const BCMatrix& a, int i, int j) { return a[0][i] * a[1][j] - a[0][j] * a[1][i]; }
}  // namespace

cplx Minors::operator()(int i, int j) const {
    const int key = 10 * i + j;
    switch (key) {
    case 12: return a12;
    case 13: return a13;
    case 14: return a14;
    case 23: return a23;
    case 24: return a24;
    case 34: return a34;
    default: throw std::out_of_range("minor index");
    }
}

const char* to_string(BCType t) {
    switch (t) {
    case BCType::I: return "I";
    case BCType::II: return "II";
    case BCType::III: return "III";
    case BCType::IV: return "IV";
    }
    return "?";
}

Minors compute_minors(const BCMatrix& a) {
    Minors m{det2(a, 0, 1), det2(a, 0, 2), det2(a, 0, 3), det2(a, 1, 2), det2(a, 1, 3), det2(a, 2, 3)};
    double amax = 0, mmax = 0;
    for (const auto& row : a)
        for (const auto& v : row) amax = std::max(amax, std::abs(v));
    for (cplx v : {m.a12, m.a13, m.a14, m.a23, m.a24, m.a34}) mmax = std::max(mmax, std::abs(v));
    if (!(amax > 0) || mmax <= 1e-14 * amax * amax)
        throw Error(ErrorKind::invalid_boundary_forms, "boundary forms are linearly dependent");
    return m;
}

bool alpha_is_half(cplx alpha) { return std::abs(alpha - 0.5) <= 1e-12 * (1 + std::abs(alpha)); }

bool gamma_is_zero(cplx gamma, cplx alpha) { return std::abs(gamma) <= 1e-12 * (1 + std::abs(alpha)); }

BCType type_of(cplx alpha, cplx gamma) {
    const bool half = alpha_is_half(alpha), gz = gamma_is_zero(gamma, alpha);
    if (half) return gz ? BCType::I : BCType::II;
    return gz ? BCType::III : BCType::IV;
}

BoundaryClassification classify(const BCMatrix& a) {
    BoundaryClassification c;
    c.minors = compute_minors(a);
    const Minors& m = c.minors;
    double scale = 0;
    for (cplx v : {m.a12, m.a13, m.a14, m.a23, m.a24, m.a34}) scale = std::max(scale, std::abs(v));

    const cplx s = m.a14 + m.a23, t = m.a13 + m.a24;
    if (std::abs(m.a12) > kRelTol * scale)
        throw Error(ErrorKind::not_in_scope, "A12 != 0: conditions are not regular-but-not-strongly-regular");
    if (std::abs(s) <= kRelTol * scale)
        throw Error(ErrorKind::not_in_scope, "A14 + A23 = 0: conditions are not regular");
    const double side = std::max(std::abs(s), std::abs(t));
    const bool minus = std::abs(s + t) <= kRelTol * side;
    const bool plus = std::abs(s - t) <= kRelTol * side;
    if (minus && plus)
        throw Error(ErrorKind::not_in_scope, "both sign relations hold; contradicts regularity");
    if (!minus && !plus)
        throw Error(ErrorKind::not_in_scope, "A14 + A23 != -+(A13 + A24): strongly regular or irregular");

    c.regular_not_strongly = true;
    c.theta = minus ? 0 : 1;
    c.alpha = m.a14 / s;
    c.gamma = -m.a34 / s;
    c.bc_type = type_of(c.alpha, c.gamma);
    return c;
}

BCMatrix canonical_matrix(cplx alpha, cplx gamma, int theta) {
    // Rows [alpha*e, 1-alpha, 0, gamma] and [0, 0, 1, e], e = -1 (theta=0) or
    // +1 (theta=1), give A12 = 0, A14 + A23 = 1, A13 + A24 = e.
    const double e = theta == 0 ? -1.0 : 1.0;
    BCMatrix a{};
    a[0] = {alpha * e, 1.0 - alpha, 0.0, gamma};
    a[1] = {0.0, 0.0, 1.0, e};
    return a;
}

}  // namespace sturm
