#pragma once

#include <vector>

#include "ccmpc/moments.hpp"

namespace ccmpc {

struct ExtractionResult {
    std::vector<double> u_star;
    double rank_ratio = 0.0;    // sigma_2 / sigma_1 of M_r(y_u)
    bool certified = false;     // rank_ratio < rank tolerance
    double moment_trace = 0.0;  // Tr(M_r(y_u))
    double consistency = 0.0;   // max |y_{2a} - (u*)^{2a}| over |a| <= r
};

// Reads the candidate control from the degree-1 moments of y_u and certifies
// the point-mass structure through the rank of the moment matrix. y_u must
// have mass within 1e-6 of one.
ExtractionResult extract_control(const MomentSequence& y_u, int r, double rank_tol = 1e-3);

}  // namespace ccmpc
