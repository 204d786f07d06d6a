#include "ccmpc/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace ccmpc {

void SystemModel::validate() const {
    if (n_x < 1 || n_u < 1 || n_w < 1) throw std::invalid_argument("model: dimensions must be positive");
    if (static_cast<int>(f.size()) != n_x) throw std::invalid_argument("model: need one f component per state");
    for (const auto& p : f)
        if (p.num_vars() != combined_vars())
            throw std::invalid_argument("model: f component over wrong variable space");
}

std::vector<double> SystemModel::step(const std::vector<double>& x, const std::vector<double>& u,
                                      const std::vector<double>& w) const {
    if (static_cast<int>(x.size()) != n_x || static_cast<int>(u.size()) != n_u ||
        static_cast<int>(w.size()) != n_w)
        throw std::invalid_argument("model step: dimension mismatch");
    std::vector<double> point;
    point.reserve(static_cast<std::size_t>(combined_vars()));
    point.insert(point.end(), x.begin(), x.end());
    point.insert(point.end(), u.begin(), u.end());
    point.insert(point.end(), w.begin(), w.end());
    std::vector<double> next(static_cast<std::size_t>(n_x));
    for (int i = 0; i < n_x; ++i) next[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i)].evaluate(point);
    return next;
}

void SemialgebraicSet::validate(int expected_vars) const {
    if (constraints.empty()) throw std::invalid_argument("semialgebraic set: no defining polynomial");
    for (const auto& c : constraints)
        if (c.poly.num_vars() != expected_vars)
            throw std::invalid_argument("semialgebraic set: polynomial over wrong variable space");
    if (static_cast<int>(box.size()) != expected_vars)
        throw std::invalid_argument("semialgebraic set: bounding box dimension mismatch");
    for (const auto& iv : box)
        if (!(iv.lo <= iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
            throw std::invalid_argument("semialgebraic set: bounding box must be finite");
}

bool SemialgebraicSet::in_box(const std::vector<double>& point) const {
    for (std::size_t i = 0; i < box.size(); ++i)
        if (point[i] < box[i].lo || point[i] > box[i].hi) return false;
    return true;
}

bool SemialgebraicSet::contains(const std::vector<double>& point, double tol) const {
    if (!in_box(point)) return false;
    for (const auto& c : constraints) {
        const double v = c.poly.evaluate(point);
        if (c.geq ? v < -tol : v > tol) return false;
    }
    return true;
}

void ProblemSpec::validate() const {
    model.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("spec: need 0 < alpha < 1");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("spec: need 0 < beta < 1");
    if (horizon < 1) throw std::invalid_argument("spec: horizon must be >= 1");
    desired_set.validate(model.n_x);
    if (desired_set.constraints.size() != 1 || desired_set.constraints.front().geq)
        throw std::invalid_argument("spec: desired set must be a single polynomial with P <= 0 inside");
    input_set.validate(stacked_inputs());
    disturbance.validate();
    if (disturbance.dimension() != model.n_w)
        throw std::invalid_argument("spec: disturbance dimension does not match model n_w");
    if (cost.num_vars() != horizon * model.n_x + stacked_inputs())
        throw std::invalid_argument("spec: cost must be over stacked states x_{k+1..k+Np} then stacked inputs");
}

std::vector<std::vector<Polynomial>> unroll(const SystemModel& model, const std::vector<double>& x_k, int horizon) {
    if (static_cast<int>(x_k.size()) != model.n_x) throw std::invalid_argument("unroll: state dimension mismatch");
    if (horizon < 1) throw std::invalid_argument("unroll: horizon must be >= 1");

    const int n_u = model.n_u, n_w = model.n_w, n_x = model.n_x;
    const int hvars = horizon * (n_u + n_w);
    const int u_base = 0, w_base = horizon * n_u;

    // Current state as polynomials over the horizon space; starts numeric.
    std::vector<Polynomial> state;
    state.reserve(static_cast<std::size_t>(n_x));
    for (int i = 0; i < n_x; ++i) state.emplace_back(hvars, x_k[static_cast<std::size_t>(i)]);

    std::vector<std::vector<Polynomial>> out;
    out.reserve(static_cast<std::size_t>(horizon));
    for (int step = 0; step < horizon; ++step) {
        // Replacement list for f's combined space (x, u, w) at this step.
        std::vector<Polynomial> repl = state;
        for (int j = 0; j < n_u; ++j) repl.push_back(Polynomial::variable(u_base + step * n_u + j, hvars));
        for (int j = 0; j < n_w; ++j) repl.push_back(Polynomial::variable(w_base + step * n_w + j, hvars));
        std::vector<Polynomial> next;
        next.reserve(static_cast<std::size_t>(n_x));
        for (const auto& fi : model.f) next.push_back(fi.substitute(repl));
        out.push_back(next);
        state = std::move(next);
    }
    return out;
}

Polynomial expected_cost(const ProblemSpec& spec, const std::vector<double>& x_k) {
    const int n_x = spec.model.n_x;
    const int hvars = spec.horizon_vars();
    const int n_su = spec.stacked_inputs();
    const int n_sw = spec.stacked_dist();
    const int n_wc = spec.model.n_w;

    const auto states = unroll(spec.model, x_k, spec.horizon);

    // Cost variables: stacked states x_{k+1}..x_{k+Np}, then stacked inputs.
    std::vector<Polynomial> repl;
    repl.reserve(static_cast<std::size_t>(spec.cost.num_vars()));
    for (int i = 0; i < spec.horizon; ++i)
        for (int j = 0; j < n_x; ++j) repl.push_back(states[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    for (int j = 0; j < n_su; ++j) repl.push_back(Polynomial::variable(j, hvars));
    const Polynomial composed = spec.cost.substitute(repl);

    // Integrate out the disturbance block: each w-monomial factorizes over
    // (step, coordinate) by independence.
    Polynomial out(n_su);
    for (const auto& [m, c] : composed.terms()) {
        double factor = c;
        for (int j = 0; j < n_sw; ++j) {
            const int e = m.exponents[static_cast<std::size_t>(n_su + j)];
            if (e > 0) factor *= spec.disturbance.coordinate_moment(j % n_wc, e);
        }
        Monomial um(std::vector<int>(m.exponents.begin(), m.exponents.begin() + n_su));
        out.add_term(um, factor);
    }
    return out;
}

Polynomial constraint_polynomial(const ProblemSpec& spec, const std::vector<double>& x_k) {
    const int n_u = spec.model.n_u, n_w = spec.model.n_w, n_x = spec.model.n_x;
    const int kvars = n_u + n_w;

    // One-step image of P_chiD over (u_k, w_k): substitute numeric x_k into f.
    std::vector<Polynomial> repl;
    repl.reserve(static_cast<std::size_t>(spec.model.combined_vars()));
    for (int i = 0; i < n_x; ++i) repl.emplace_back(kvars, x_k[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n_u; ++j) repl.push_back(Polynomial::variable(j, kvars));
    for (int j = 0; j < n_w; ++j) repl.push_back(Polynomial::variable(n_u + j, kvars));

    std::vector<Polynomial> image;
    image.reserve(static_cast<std::size_t>(n_x));
    for (const auto& fi : spec.model.f) image.push_back(fi.substitute(repl));
    const Polynomial p_next = spec.desired_poly().substitute(image);

    const double p_now = spec.desired_value(x_k);
    const Polynomial contraction = Polynomial(kvars, spec.alpha * p_now) - p_next;
    return spec.sign_mode == SignMode::kContraction ? contraction : -contraction;
}

double required_probability(const ProblemSpec& spec, const std::vector<double>& x_k) {
    const double v = 1.0 - spec.beta * spec.desired_value(x_k);
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace ccmpc
