#pragma once

#include <array>

#include "sturm/common.hpp"

namespace sturm {

// Two boundary forms U_i(u) = a_i1 u(0) + a_i2 u'(0) + a_i3 u(pi) + a_i4 u'(pi).
using BCMatrix = std::array<std::array<cplx, 4>, 2>;

struct Minors {
    cplx a12, a13, a14, a23, a24, a34;
    cplx operator()(int i, int j) const;  // 1-based, i < j
};

enum class BCType { I, II, III, IV };
const char* to_string(BCType t);

struct BoundaryClassification {
    Minors minors;
    bool regular_not_strongly = false;
    BCType bc_type = BCType::I;
    cplx alpha;
    cplx gamma;
    int theta = 0;
};

Minors compute_minors(const BCMatrix& a);
BoundaryClassification classify(const BCMatrix& a);

bool alpha_is_half(cplx alpha);
bool gamma_is_zero(cplx gamma, cplx alpha);
BCType type_of(cplx alpha, cplx gamma);

// A representative matrix for given (alpha, gamma, theta): its classification
// returns exactly these parameters.
BCMatrix canonical_matrix(cplx alpha, cplx gamma, int theta);

}  // namespace sturm
