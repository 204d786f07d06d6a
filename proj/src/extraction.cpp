#include "ccmpc/extraction.hpp"

#include <cmath>
#include <stdexcept>

namespace ccmpc {

ExtractionResult extract_control(const MomentSequence& y_u, int r, double rank_tol) {
    const double mass = y_u.mass();
    if (std::abs(mass) < 1e-12) throw std::invalid_argument("extract_control: zero-mass moment sequence");
    if (std::abs(mass - 1.0) > 1e-6)
        throw std::invalid_argument("extract_control: mass must be within 1e-6 of one");

    ExtractionResult out;
    const int n = y_u.num_vars;
    out.u_star.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.u_star[static_cast<std::size_t>(i)] = y_u.moment(Monomial::variable(i, n)) / mass;

    const Eigen::MatrixXd M = moment_matrix(y_u, r);
    out.moment_trace = M.trace();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    out.rank_ratio = sv.size() > 1 ? sv[1] / sv[0] : 0.0;
    out.certified = out.rank_ratio < rank_tol;

    for (const auto& mono : monomial_basis(n, r)) {
        double expect = 1.0;
        for (int i = 0; i < n; ++i)
            for (int e = 0; e < 2 * mono.exponents[static_cast<std::size_t>(i)]; ++e)
                expect *= out.u_star[static_cast<std::size_t>(i)];
        out.consistency = std::max(out.consistency, std::abs(y_u.moment(mono * mono) - expect));
    }
    return out;
}

}  // namespace ccmpc
