#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace sturm {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;
inline const cplx kI{0.0, 1.0};

enum class ErrorKind {
    invalid_boundary_forms,
    not_in_scope,
    invalid_potential,
    root_isolation_failure,
    series_assignment,
    derivative_at_multiple_root,
    selection_failure,
    out_of_theorem_scope,
    unique_solvability_failure,
    increase_n,
    kernel_divergence,
    division_by_zero,
    derivative_unavailable,
    type_not_applicable,
    fit_degenerate,
    pipeline_verification_failure,
    pipeline_stage,
    io,
};

const char* to_string(ErrorKind k);

// Domain error. `stage` is filled by the pipeline when a stage fails.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::string stage = {})
        : std::runtime_error(what), kind_(kind), stage_(std::move(stage)) {}
    ErrorKind kind() const { return kind_; }
    const std::string& stage() const { return stage_; }

private:
    ErrorKind kind_;
    std::string stage_;
};

// sin(z)/z with the removable point handled by series.
cplx sinc(cplx z);

// Square root with Re >= 0 (ties broken toward Im >= 0).
cplx sqrt_re_pos(cplx z);

// Composite Simpson weights for n intervals of width h; odd n closes the last
// three intervals with the 3/8 rule.
rvec simpson_weights(int n, double h);

}  // namespace sturm
