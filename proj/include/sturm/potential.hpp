#pragma once

#include <functional>
#include <string>

#include "sturm/common.hpp"

namespace sturm {

enum class Interp { linear, cubic };

// Complex potential sampled on a uniform grid covering [0, pi] inclusive.
class Potential {
public:
    Potential() = default;
    explicit Potential(cvec samples, Interp interp = Interp::cubic);

    static Potential from_function(const std::function<cplx(double)>& f, int grid_size,
                                   Interp interp = Interp::cubic);
    static Potential constant(cplx c, int grid_size = 257);

    int grid_size() const { return static_cast<int>(samples_.size()); }
    double h() const { return kPi / (grid_size() - 1); }
    double x(int i) const { return i * h(); }
    const cvec& samples() const { return samples_; }
    Interp interp() const { return interp_; }
    cplx mean() const { return mean_; }

    cplx operator()(double x) const;

    Potential shifted(cplx c) const;
    Potential resampled(int grid_size) const;

private:
    cvec samples_;
    Interp interp_ = Interp::cubic;
    cplx mean_{};
};

// L2(0, pi) norm of p - q on p's grid (q is interpolated there).
double l2_distance(const Potential& p, const Potential& q);
double l2_norm(const Potential& p);

// Potential expressions: real-coefficient polynomials and finite trigonometric
// sums in x, e.g. "0.2*sin(x)", "1 + x^2 - cos(3*x)". Named shortcut "zero".
std::function<double(double)> parse_expression(const std::string& text);
Potential potential_from_expression(const std::string& text, int grid_size,
                                    Interp interp = Interp::cubic);

// CSV with columns x, re, im over a uniform grid on [0, pi].
Potential read_potential_csv(const std::string& path, Interp interp = Interp::cubic);
void write_potential_csv(const std::string& path, const Potential& q);

}  // namespace sturm
