#include "ccmpc/relaxation.hpp"

#include <stdexcept>
#include <string>

namespace ccmpc {

MomentSequence RelaxationLayout::yu_moments(const Eigen::VectorXd& z) const {
    MomentSequence y(input_vars, 2 * order);
    y.values[0] = 1.0;
    for (std::int64_t r = 1; r < yu_size; ++r) y.values[static_cast<Eigen::Index>(r)] = z[yu_var(r)];
    return y;
}

MomentSequence RelaxationLayout::y_moments(const Eigen::VectorXd& z) const {
    MomentSequence y(joint_vars, 2 * order);
    for (std::int64_t r = 0; r < y_size; ++r) y.values[static_cast<Eigen::Index>(r)] = z[y_var(r)];
    return y;
}

namespace {

int half_degree_up(int d) { return (d + 1) / 2; }

// Box membership quadratic (v - lo)(hi - v) >= 0 over a given space.
Polynomial box_quadratic(int var, int num_vars, double lo, double hi) {
    const Polynomial v = Polynomial::variable(var, num_vars);
    return (v - Polynomial(num_vars, lo)) * (Polynomial(num_vars, hi) - v);
}

enum class Segment { kInput, kJoint };

// Adds the localizing block M_d(segment; p): entry (i,j) = L(p * B_i * B_j).
// For the input segment, rank-0 moments contribute to the constant part.
void add_localizing_block(SdpProblem& problem, const RelaxationLayout& layout, Segment seg, const Polynomial& p,
                          int d, const std::string& label) {
    const int n = seg == Segment::kInput ? layout.input_vars : layout.joint_vars;
    const auto basis = monomial_basis(n, d);
    const int side = static_cast<int>(basis.size());
    const int blk = problem.add_block(side, label);
    for (int i = 0; i < side; ++i)
        for (int j = i; j < side; ++j) {
            const Monomial ij = basis[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(j)];
            for (const auto& [g, c] : p.terms()) {
                const std::int64_t rank0 = static_cast<std::int64_t>(grevlex_rank(g * ij, n)) - 1;
                if (seg == Segment::kInput) {
                    const int var = layout.yu_var(rank0);
                    if (var < 0)
                        problem.add_block_const(blk, i, j, c);
                    else
                        problem.add_block_term(blk, var, i, j, c);
                } else {
                    problem.add_block_term(blk, layout.y_var(rank0), i, j, c);
                }
            }
        }
}

// Domination block M_r(yhat - y), where yhat is the product of the
// u_k-marginal of y_u with the analytic disturbance moments. Affine in the
// decision vector.
void add_domination_block(SdpProblem& problem, const RelaxationLayout& layout, const ProblemSpec& spec) {
    const int n = layout.joint_vars;
    const int n_u = spec.model.n_u;
    const int n_w = spec.model.n_w;
    const auto basis = monomial_basis(n, layout.order);
    const int side = static_cast<int>(basis.size());
    const int blk = problem.add_block(side, "domination");
    for (int i = 0; i < side; ++i)
        for (int j = i; j < side; ++j) {
            const Monomial ij = basis[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(j)];
            // Split (u_k, w_k) exponents; pad the u part to the stacked space.
            double mw = 1.0;
            for (int c = 0; c < n_w; ++c)
                mw *= spec.disturbance.coordinate_moment(c, ij.exponents[static_cast<std::size_t>(n_u + c)]);
            std::vector<int> padded(static_cast<std::size_t>(layout.input_vars), 0);
            for (int c = 0; c < n_u; ++c) padded[static_cast<std::size_t>(c)] = ij.exponents[static_cast<std::size_t>(c)];
            const std::int64_t urank0 =
                static_cast<std::int64_t>(grevlex_rank(Monomial(std::move(padded)), layout.input_vars)) - 1;
            const int uvar = layout.yu_var(urank0);
            if (uvar < 0)
                problem.add_block_const(blk, i, j, mw);
            else
                problem.add_block_term(blk, uvar, i, j, mw);
            const std::int64_t yrank0 = static_cast<std::int64_t>(grevlex_rank(ij, n)) - 1;
            problem.add_block_term(blk, layout.y_var(yrank0), i, j, -1.0);
        }
}

// P_U restricted to (u_k, w_k) when it only involves step-k inputs.
bool restrict_input_poly(const Polynomial& pu, int n_u, int joint_vars, Polynomial& out) {
    for (const auto& [m, c] : pu.terms())
        for (std::size_t i = static_cast<std::size_t>(n_u); i < m.exponents.size(); ++i)
            if (m.exponents[i] != 0) return false;
    out = Polynomial(joint_vars);
    for (const auto& [m, c] : pu.terms()) {
        std::vector<int> e(static_cast<std::size_t>(joint_vars), 0);
        for (int i = 0; i < n_u; ++i) e[static_cast<std::size_t>(i)] = m.exponents[static_cast<std::size_t>(i)];
        out.add_term(Monomial(std::move(e)), c);
    }
    return true;
}

}  // namespace

int min_relaxation_order(const ProblemSpec& spec, const std::vector<double>& x_k) {
    const Polynomial pk = constraint_polynomial(spec, x_k);
    const Polynomial pe = expected_cost(spec, x_k);
    int r = 1;  // box localizers are quadratic
    r = std::max(r, half_degree_up(pk.degree()));
    for (const auto& c : spec.input_set.constraints) r = std::max(r, half_degree_up(c.poly.degree()));
    r = std::max(r, half_degree_up(pe.degree()));
    return r;
}

Relaxation build_relaxation(const ProblemSpec& spec, const std::vector<double>& x_k, const RelaxationConfig& cfg) {
    spec.validate();
    if (static_cast<int>(x_k.size()) != spec.model.n_x)
        throw std::invalid_argument("build_relaxation: state dimension mismatch");

    Relaxation rel;
    rel.constraint_poly = constraint_polynomial(spec, x_k);
    rel.expected_cost_poly = expected_cost(spec, x_k);
    rel.required_mass = required_probability(spec, x_k);

    const int r = cfg.order;
    const int r_min = min_relaxation_order(spec, x_k);
    if (r < r_min)
        throw std::invalid_argument("build_relaxation: order " + std::to_string(r) +
                                    " too small; this instance needs r >= " + std::to_string(r_min));

    RelaxationLayout& lay = rel.layout;
    lay.order = r;
    lay.input_vars = spec.stacked_inputs();
    lay.joint_vars = spec.model.n_u + spec.model.n_w;
    lay.yu_size = static_cast<std::int64_t>(basis_size(lay.input_vars, 2 * r));
    lay.y_size = static_cast<std::int64_t>(basis_size(lay.joint_vars, 2 * r));

    SdpProblem& sdp = rel.problem;
    sdp.num_vars = lay.num_vars();
    sdp.objective = Eigen::VectorXd::Zero(sdp.num_vars);

    const Polynomial one_joint(lay.joint_vars, 1.0);
    const Polynomial one_input(lay.input_vars, 1.0);

    // (a) M_r(y) and (b) the K localizer at order r - r_K.
    add_localizing_block(sdp, lay, Segment::kJoint, one_joint, r, "moment(y)");
    add_localizing_block(sdp, lay, Segment::kJoint, rel.constraint_poly, r - half_degree_up(rel.constraint_poly.degree()),
                         "K(y)");

    // (c) support localizers on y: step-k input box, disturbance support, and
    // the input-set polynomial when it only involves u_k.
    for (int j = 0; j < spec.model.n_u; ++j) {
        const auto& iv = spec.input_set.box[static_cast<std::size_t>(j)];
        add_localizing_block(sdp, lay, Segment::kJoint, box_quadratic(j, lay.joint_vars, iv.lo, iv.hi), r - 1,
                             "ubox(y)" + std::to_string(j + 1));
    }
    for (int c = 0; c < spec.model.n_w; ++c) {
        const auto& [a, b] = spec.disturbance.support[static_cast<std::size_t>(c)];
        add_localizing_block(sdp, lay, Segment::kJoint,
                             box_quadratic(spec.model.n_u + c, lay.joint_vars, a, b), r - 1,
                             "wsupp(y)" + std::to_string(c + 1));
    }
    for (const auto& con : spec.input_set.constraints) {
        Polynomial restricted;
        const Polynomial signed_poly = con.geq ? con.poly : -con.poly;
        if (restrict_input_poly(signed_poly, spec.model.n_u, lay.joint_vars, restricted))
            add_localizing_block(sdp, lay, Segment::kJoint, restricted, r - half_degree_up(restricted.degree()),
                                 "U(y)");
    }

    // (d) M_r(y_u), the U localizer, and the stacked input box localizers.
    add_localizing_block(sdp, lay, Segment::kInput, one_input, r, "moment(yu)");
    for (const auto& con : spec.input_set.constraints) {
        const Polynomial signed_poly = con.geq ? con.poly : -con.poly;
        add_localizing_block(sdp, lay, Segment::kInput, signed_poly, r - half_degree_up(signed_poly.degree()),
                             "U(yu)");
    }
    for (int j = 0; j < lay.input_vars; ++j) {
        const auto& iv = spec.input_set.box[static_cast<std::size_t>(j)];
        add_localizing_block(sdp, lay, Segment::kInput, box_quadratic(j, lay.input_vars, iv.lo, iv.hi), r - 1,
                             "ubox(yu)" + std::to_string(j + 1));
    }

    // (e) the domination block M_r(yhat - y).
    add_domination_block(sdp, lay, spec);

    // Scalar constraints: (y)_0 >= 1 - beta * P_chiD(x_k). The (y_u)_0 = 1
    // equality is baked into the layout.
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(sdp.num_vars);
    mass[lay.y_var(0)] = 1.0;
    sdp.add_inequality(mass, rel.required_mass, "mass(y)");

    // Objective: L_{y_u}(P_E) + omega_r * Tr(M_r(y_u)).
    for (const auto& [m, c] : rel.expected_cost_poly.terms()) {
        const std::int64_t rank0 = static_cast<std::int64_t>(grevlex_rank(m, lay.input_vars)) - 1;
        const int var = lay.yu_var(rank0);
        if (var < 0)
            sdp.objective_constant += c;
        else
            sdp.objective[var] += c;
    }
    if (cfg.trace_weight != 0.0) {
        for (const auto& mono : monomial_basis(lay.input_vars, r)) {
            const std::int64_t rank0 = static_cast<std::int64_t>(grevlex_rank(mono * mono, lay.input_vars)) - 1;
            const int var = lay.yu_var(rank0);
            if (var < 0)
                sdp.objective_constant += cfg.trace_weight;
            else
                sdp.objective[var] += cfg.trace_weight;
        }
    }
    sdp.canonicalize();
    return rel;
}

std::vector<double> ScaledSpec::unscale_inputs(const std::vector<double>& scaled) const {
    std::vector<double> out(scaled.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        const auto& m = input_maps[i % input_maps.size()];
        out[i] = m.center + m.half * scaled[i];
    }
    return out;
}

ScaledSpec scale_problem(const ProblemSpec& spec) {
    spec.validate();
    const int n_u = spec.model.n_u, n_w = spec.model.n_w, n_x = spec.model.n_x;

    ScaledSpec out;
    out.spec = spec;

    // One map per model input coordinate; the stacked box must repeat the
    // same interval at every step for the per-step dynamics to stay a single
    // polynomial map.
    for (int j = 0; j < n_u; ++j) {
        const auto& first = spec.input_set.box[static_cast<std::size_t>(j)];
        for (int s = 1; s < spec.horizon; ++s) {
            const auto& iv = spec.input_set.box[static_cast<std::size_t>(s * n_u + j)];
            if (iv.lo != first.lo || iv.hi != first.hi)
                throw std::invalid_argument("scale_problem: input box must repeat per step");
        }
        if (first.hi - first.lo <= 0.0) throw std::invalid_argument("scale_problem: degenerate input box");
        out.input_maps.push_back({0.5 * (first.lo + first.hi), 0.5 * (first.hi - first.lo)});
    }
    for (int c = 0; c < n_w; ++c) {
        const auto& [a, b] = spec.disturbance.support[static_cast<std::size_t>(c)];
        out.dist_maps.push_back({0.5 * (a + b), 0.5 * (b - a)});
    }

    // Dynamics: substitute u and w by their affine maps.
    const int cv = spec.model.combined_vars();
    std::vector<Polynomial> repl;
    repl.reserve(static_cast<std::size_t>(cv));
    for (int i = 0; i < n_x; ++i) repl.push_back(Polynomial::variable(i, cv));
    for (int j = 0; j < n_u; ++j)
        repl.push_back(Polynomial(cv, out.input_maps[static_cast<std::size_t>(j)].center) +
                       Polynomial::variable(n_x + j, cv) * out.input_maps[static_cast<std::size_t>(j)].half);
    for (int c = 0; c < n_w; ++c)
        repl.push_back(Polynomial(cv, out.dist_maps[static_cast<std::size_t>(c)].center) +
                       Polynomial::variable(n_x + n_u + c, cv) * out.dist_maps[static_cast<std::size_t>(c)].half);
    for (auto& f : out.spec.model.f) f = f.substitute(repl);

    // Input set over the stacked inputs.
    const int nsu = spec.stacked_inputs();
    std::vector<Polynomial> urepl;
    for (int i = 0; i < nsu; ++i) {
        const auto& m = out.input_maps[static_cast<std::size_t>(i % n_u)];
        urepl.push_back(Polynomial(nsu, m.center) + Polynomial::variable(i, nsu) * m.half);
    }
    for (auto& con : out.spec.input_set.constraints) con.poly = con.poly.substitute(urepl);
    for (auto& iv : out.spec.input_set.box) iv = {-1.0, 1.0};

    // Disturbance support.
    for (int c = 0; c < n_w; ++c) {
        const auto half = out.dist_maps[static_cast<std::size_t>(c)].half;
        out.spec.disturbance.support[static_cast<std::size_t>(c)] =
            half == 0.0 ? std::pair<double, double>{0.0, 0.0} : std::pair<double, double>{-1.0, 1.0};
    }

    // Cost: state variables untouched, input variables remapped.
    const int cost_vars = spec.cost.num_vars();
    const int n_sx = spec.horizon * n_x;
    std::vector<Polynomial> crepl;
    for (int i = 0; i < n_sx; ++i) crepl.push_back(Polynomial::variable(i, cost_vars));
    for (int i = 0; i < nsu; ++i) {
        const auto& m = out.input_maps[static_cast<std::size_t>(i % n_u)];
        crepl.push_back(Polynomial(cost_vars, m.center) + Polynomial::variable(n_sx + i, cost_vars) * m.half);
    }
    out.spec.cost = spec.cost.substitute(crepl);
    return out;
}

}  // namespace ccmpc
