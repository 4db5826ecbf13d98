#include "sturm/common.hpp"

#include <cmath>

namespace sturm {

const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::invalid_boundary_forms: return "invalid-boundary-forms";
    case ErrorKind::not_in_scope: return "not-in-scope";
    case ErrorKind::invalid_potential: return "invalid-potential";
    case ErrorKind::root_isolation_failure: return "root-isolation-failure";
    case ErrorKind::series_assignment: return "series-assignment";
    case ErrorKind::derivative_at_multiple_root: return "derivative-at-multiple-root";
    case ErrorKind::selection_failure: return "selection-failure";
    case ErrorKind::out_of_theorem_scope: return "out-of-theorem-scope";
    case ErrorKind::unique_solvability_failure: return "unique-solvability-failure";
    case ErrorKind::increase_n: return "increase-N";
    case ErrorKind::kernel_divergence: return "kernel-divergence";
    case ErrorKind::division_by_zero: return "division-by-zero";
    case ErrorKind::derivative_unavailable: return "derivative-unavailable";
    case ErrorKind::type_not_applicable: return "type-not-applicable";
    case ErrorKind::fit_degenerate: return "fit-degenerate";
    case ErrorKind::pipeline_verification_failure: return "pipeline-verification-failure";
    case ErrorKind::pipeline_stage: return "pipeline-stage";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

cplx sinc(cplx z) {
    if (std::abs(z) < 1e-4) {
        const cplx z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

cplx sqrt_re_pos(cplx z) {
    cplx r = std::sqrt(z);
    if (r.real() < 0 || (r.real() == 0 && r.imag() < 0)) r = -r;
    return r;
}

rvec simpson_weights(int n, double h) {
    rvec w(static_cast<size_t>(n) + 1, 0.0);
    if (n <= 0) return w;
    if (n == 1) {
        w[0] = w[1] = h / 2;
        return w;
    }
    int m = n;  // intervals covered by plain Simpson
    if (n % 2 == 1) m = n - 3;
    for (int i = 0; i < m; i += 2) {
        w[i] += h / 3;
        w[i + 1] += 4 * h / 3;
        w[i + 2] += h / 3;
    }
    if (n % 2 == 1) {
        w[m] += 3 * h / 8;
        w[m + 1] += 9 * h / 8;
        w[m + 2] += 9 * h / 8;
        w[m + 3] += 3 * h / 8;
    }
    return w;
}

}  // namespace sturm
