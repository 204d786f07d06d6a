#include "ccmpc/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace ccmpc {

int SdpProblem::add_block(int side, std::string label) {
    if (side < 1) throw std::invalid_argument("add_block: side must be >= 1");
    SdpBlock b;
    b.side = side;
    b.f0 = Eigen::MatrixXd::Zero(side, side);
    b.label = std::move(label);
    blocks.push_back(std::move(b));
    return static_cast<int>(blocks.size()) - 1;
}

void SdpProblem::add_block_const(int block, int row, int col, double value) {
    auto& b = blocks.at(static_cast<std::size_t>(block));
    b.f0(row, col) += value;
    if (row != col) b.f0(col, row) += value;
}

void SdpProblem::add_block_term(int block, int var, int row, int col, double coeff) {
    if (var < 0 || var >= num_vars) throw std::invalid_argument("add_block_term: variable index out of range");
    auto& b = blocks.at(static_cast<std::size_t>(block));
    if (row > col) std::swap(row, col);
    b.terms.push_back({var, row, col, coeff});
}

void SdpProblem::add_equality(const Eigen::VectorXd& coeffs, double rhs, std::string label) {
    if (coeffs.size() != num_vars) throw std::invalid_argument("add_equality: coefficient size mismatch");
    equalities.push_back({coeffs, rhs, std::move(label)});
}

void SdpProblem::add_inequality(const Eigen::VectorXd& coeffs, double rhs, std::string label) {
    if (coeffs.size() != num_vars) throw std::invalid_argument("add_inequality: coefficient size mismatch");
    inequalities.push_back({coeffs, rhs, std::move(label)});
}

void SdpProblem::canonicalize() {
    if (objective.size() != num_vars) throw std::invalid_argument("canonicalize: objective size mismatch");
    for (auto& b : blocks) {
        if ((b.f0 - b.f0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, b.f0.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("canonicalize: block constant not symmetric (" + b.label + ")");
        b.f0 = 0.5 * (b.f0 + b.f0.transpose()).eval();
        for (const auto& t : b.terms)
            if (t.row < 0 || t.col >= b.side) throw std::invalid_argument("canonicalize: entry out of block");
        std::sort(b.terms.begin(), b.terms.end(), [](const SdpBlock::Term& a, const SdpBlock::Term& c) {
            return std::tie(a.var, a.row, a.col) < std::tie(c.var, c.row, c.col);
        });
        std::vector<SdpBlock::Term> merged;
        for (const auto& t : b.terms) {
            if (!merged.empty() && merged.back().var == t.var && merged.back().row == t.row &&
                merged.back().col == t.col)
                merged.back().coeff += t.coeff;
            else
                merged.push_back(t);
        }
        std::erase_if(merged, [](const SdpBlock::Term& t) { return t.coeff == 0.0; });
        b.terms = std::move(merged);
    }
}

Eigen::MatrixXd SdpProblem::block_value(int block, const Eigen::VectorXd& z) const {
    const auto& b = blocks.at(static_cast<std::size_t>(block));
    Eigen::MatrixXd M = b.f0;
    for (const auto& t : b.terms) {
        M(t.row, t.col) += z[t.var] * t.coeff;
        if (t.row != t.col) M(t.col, t.row) += z[t.var] * t.coeff;
    }
    return M;
}

void SolverSettings::validate() const {
    if (!(feasibility_tol > 0.0) || !(gap_tol > 0.0)) throw std::invalid_argument("settings: tolerances must be > 0");
    if (max_iterations < 1) throw std::invalid_argument("settings: max_iterations must be >= 1");
    if (!(step_fraction > 0.0 && step_fraction < 1.0))
        throw std::invalid_argument("settings: step_fraction must lie in (0, 1)");
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::kOptimal: return "optimal";
        case SolveStatus::kInfeasible: return "infeasible";
        case SolveStatus::kUnbounded: return "unbounded";
        case SolveStatus::kMaxIterations: return "max_iterations";
        case SolveStatus::kNumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

PsdCheck psd_check(const Eigen::MatrixXd& matrix, double tol) {
    if (matrix.rows() != matrix.cols()) throw std::invalid_argument("psd_check: matrix not square");
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("psd_check: matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (matrix + matrix.transpose()),
                                                      Eigen::EigenvaluesOnly);
    PsdCheck out;
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    out.ok = out.min_eigenvalue >= -tol;
    return out;
}

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Standard form used by the interior-point iteration: PSD blocks only.
template <typename Scalar>
struct StdBlock {
    int side = 0;
    Mat<Scalar> f0;
    struct VarEntries {
        int var = 0;
        std::vector<int> row, col;
        std::vector<Scalar> val;
    };
    std::vector<VarEntries> vars;

    Mat<Scalar> value(const Vec<Scalar>& z) const {
        Mat<Scalar> M = f0;
        add_combination(M, z, Scalar(1));
        return M;
    }
    // M += scale * sum_i z_i F_i
    void add_combination(Mat<Scalar>& M, const Vec<Scalar>& z, Scalar scale) const {
        for (const auto& ve : vars) {
            const Scalar w = scale * z[ve.var];
            if (w == Scalar(0)) continue;
            for (std::size_t k = 0; k < ve.val.size(); ++k) {
                M(ve.row[k], ve.col[k]) += w * ve.val[k];
                if (ve.row[k] != ve.col[k]) M(ve.col[k], ve.row[k]) += w * ve.val[k];
            }
        }
    }
    // <F_i, G> for a (possibly non-symmetric) G.
    Scalar inner(const VarEntries& ve, const Mat<Scalar>& G) const {
        Scalar s = 0;
        for (std::size_t k = 0; k < ve.val.size(); ++k) {
            s += ve.val[k] * G(ve.row[k], ve.col[k]);
            if (ve.row[k] != ve.col[k]) s += ve.val[k] * G(ve.col[k], ve.row[k]);
        }
        return s;
    }
    // Dense F_i for one variable.
    Mat<Scalar> dense(const VarEntries& ve) const {
        Mat<Scalar> F = Mat<Scalar>::Zero(side, side);
        for (std::size_t k = 0; k < ve.val.size(); ++k) {
            F(ve.row[k], ve.col[k]) += ve.val[k];
            if (ve.row[k] != ve.col[k]) F(ve.col[k], ve.row[k]) += ve.val[k];
        }
        return F;
    }
};

template <typename Scalar>
struct StdProblem {
    int num_vars = 0;
    Vec<Scalar> c;
    std::vector<StdBlock<Scalar>> blocks;
    // Equilibration factors: block b was divided by block_scale[b], the
    // objective by obj_scale. Dual matrices unscale as Z = (obj_scale /
    // block_scale[b]) * Z_tilde.
    std::vector<double> block_scale;
    double obj_scale = 1.0;
};

template <typename To>
StdProblem<To> convert_problem(const StdProblem<double>& in) {
    StdProblem<To> out;
    out.num_vars = in.num_vars;
    out.c = in.c.template cast<To>();
    out.block_scale = in.block_scale;
    out.obj_scale = in.obj_scale;
    for (const auto& b : in.blocks) {
        StdBlock<To> nb;
        nb.side = b.side;
        nb.f0 = b.f0.template cast<To>();
        for (const auto& ve : b.vars) {
            typename StdBlock<To>::VarEntries nv;
            nv.var = ve.var;
            nv.row = ve.row;
            nv.col = ve.col;
            nv.val.assign(ve.val.begin(), ve.val.end());
            nb.vars.push_back(std::move(nv));
        }
        out.blocks.push_back(std::move(nb));
    }
    return out;
}

StdBlock<double> to_std_block(const SdpBlock& b) {
    StdBlock<double> sb;
    sb.side = b.side;
    sb.f0 = b.f0;
    int current = -1;
    for (const auto& t : b.terms) {  // terms are sorted by var after canonicalize()
        if (t.var != current) {
            sb.vars.emplace_back();
            sb.vars.back().var = t.var;
            current = t.var;
        }
        sb.vars.back().row.push_back(t.row);
        sb.vars.back().col.push_back(t.col);
        sb.vars.back().val.push_back(t.coeff);
    }
    return sb;
}

StdProblem<double> to_standard(const SdpProblem& p, bool equilibrate) {
    StdProblem<double> sp;
    sp.num_vars = p.num_vars;
    sp.c = p.objective;
    for (const auto& b : p.blocks) sp.blocks.push_back(to_std_block(b));
    for (const auto& ineq : p.inequalities) {
        StdBlock<double> sb;
        sb.side = 1;
        sb.f0 = Eigen::MatrixXd::Constant(1, 1, -ineq.rhs);
        for (int i = 0; i < p.num_vars; ++i) {
            if (ineq.coeffs[i] == 0.0) continue;
            StdBlock<double>::VarEntries ve;
            ve.var = i;
            ve.row.push_back(0);
            ve.col.push_back(0);
            ve.val.push_back(ineq.coeffs[i]);
            sb.vars.push_back(std::move(ve));
        }
        sp.blocks.push_back(std::move(sb));
    }
    sp.block_scale.assign(sp.blocks.size(), 1.0);
    if (!equilibrate) return sp;
    for (std::size_t b = 0; b < sp.blocks.size(); ++b) {
        double s = sp.blocks[b].f0.cwiseAbs().maxCoeff();
        for (const auto& ve : sp.blocks[b].vars)
            for (double v : ve.val) s = std::max(s, std::abs(v));
        if (s <= 0.0) s = 1.0;
        sp.block_scale[b] = s;
        sp.blocks[b].f0 /= s;
        for (auto& ve : sp.blocks[b].vars)
            for (auto& v : ve.val) v /= s;
    }
    sp.obj_scale = std::max(1e-12, sp.c.cwiseAbs().maxCoeff());
    sp.c /= sp.obj_scale;
    return sp;
}

template <typename Scalar>
Scalar sym_min_eig(const Mat<Scalar>& M) {
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(Scalar(0.5) * (M + M.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Largest step alpha with X + alpha * D still PSD (X assumed PD).
template <typename Scalar>
Scalar max_psd_step(const Eigen::LLT<Mat<Scalar>>& llt, const Mat<Scalar>& D) {
    Mat<Scalar> W = llt.matrixL().solve(D);
    W = llt.matrixL().solve(W.transpose().eval());
    const Scalar lmin = sym_min_eig<Scalar>(W);
    if (lmin >= Scalar(0)) return std::numeric_limits<Scalar>::infinity();
    return Scalar(-1) / lmin;
}

template <typename Scalar>
struct IpmState {
    Vec<Scalar> z;
    std::vector<Mat<Scalar>> S, Z;
};

template <typename Scalar>
struct IpmResult {
    SolveStatus status = SolveStatus::kMaxIterations;
    IpmState<Scalar> state;
    int iterations = 0;
    Scalar primal_infeas = 0.0, dual_infeas = 0.0, gap = 0.0;
    Scalar pobj = 0.0, dobj = 0.0;
};

template <typename Scalar>
IpmResult<Scalar> run_ipm(const StdProblem<Scalar>& sp, const SolverSettings& st) {
    using MatS = Mat<Scalar>;
    using VecS = Vec<Scalar>;
    const int m = sp.num_vars;
    const int nblocks = static_cast<int>(sp.blocks.size());
    Scalar total_side = 0;
    for (const auto& b : sp.blocks) total_side += b.side;

    Scalar f0_scale = 1, fi_scale = 1;
    for (const auto& b : sp.blocks) {
        f0_scale = std::max(f0_scale, b.f0.cwiseAbs().maxCoeff());
        for (const auto& ve : b.vars)
            for (Scalar v : ve.val) fi_scale = std::max(fi_scale, Scalar(std::abs(v)));
    }
    const Scalar c_scale = std::max(Scalar(1), sp.c.size() > 0 ? sp.c.cwiseAbs().maxCoeff() : Scalar(0));

    IpmResult<Scalar> res;
    res.state.z = VecS::Zero(m);
    const Scalar s_init = Scalar(10) * std::max({Scalar(1), f0_scale, fi_scale});
    const Scalar z_init = Scalar(10) * std::max(Scalar(1), c_scale / std::max(Scalar(1), fi_scale));
    for (const auto& b : sp.blocks) {
        res.state.S.push_back(s_init * MatS::Identity(b.side, b.side));
        res.state.Z.push_back(z_init * MatS::Identity(b.side, b.side));
    }
    auto& z = res.state.z;
    auto& S = res.state.S;
    auto& Z = res.state.Z;

    MatS M(m, m);
    VecS rp(m), rhs(m), dz_aff(m), dz(m);
    std::vector<MatS> R(nblocks), Sinv(nblocks), Winv(nblocks), Rfac(nblocks), Rinv(nblocks),
        corr(nblocks), dS_aff(nblocks), dZ_aff(nblocks), dS(nblocks), dZ(nblocks);
    std::vector<VecS> lam(nblocks);
    std::vector<Eigen::LLT<MatS>> lltS(nblocks), lltZ(nblocks);

    // Best-iterate fallback: ill-conditioned endgames can regress, so keep the
    // iterate with the smallest worst-case certificate error.
    IpmState<Scalar> best_state = res.state;
    Scalar best_phi = std::numeric_limits<Scalar>::infinity();
    Scalar best_pinf = 0, best_dinf = 0, best_gap = 0, best_pobj = 0, best_dobj = 0;
    int no_improve = 0;
    auto restore_best = [&]() {
        if (best_phi < std::max({res.primal_infeas, res.dual_infeas, res.gap})) {
            res.state = best_state;
            res.primal_infeas = best_pinf;
            res.dual_infeas = best_dinf;
            res.gap = best_gap;
            res.pobj = best_pobj;
            res.dobj = best_dobj;
        }
    };

    // Dual stationarity is linear in Z, so a leftover residual can be closed
    // by the least-norm correction dZ = sum_i lambda_i F_i. Accepted only when
    // it keeps every Z block within the PSD tolerance.
    Eigen::LDLT<MatS> gram_ldlt;
    MatS gram;
    bool gram_ready = false;
    // mode 0: commit only when the full certificate converges (in-loop exit
    // test). mode 1: commit whenever the PSD violation stays within the
    // feasibility tolerance (final reporting). mode 2: commit only when the
    // corrected dual stays strictly PD (mid-iteration restoration).
    auto dual_polish = [&](int mode) -> bool {
        VecS rp2 = sp.c;
        for (int b = 0; b < nblocks; ++b)
            for (const auto& ve : sp.blocks[b].vars) rp2[ve.var] -= sp.blocks[b].inner(ve, res.state.Z[b]);
        if (rp2.cwiseAbs().maxCoeff() > Scalar(1e-2) * (Scalar(1) + c_scale)) return false;
        // Extended Gram system: the last row pins <F0, dZ> = 0 so the dual
        // objective (and hence the gap) is preserved by the correction.
        if (!gram_ready) {
            MatS G = MatS::Zero(m + 1, m + 1);
            for (int b = 0; b < nblocks; ++b) {
                const auto& blk = sp.blocks[b];
                for (const auto& vj : blk.vars) {
                    const MatS Fj = blk.dense(vj);
                    for (const auto& vi : blk.vars) G(vi.var, vj.var) += blk.inner(vi, Fj);
                    G(m, vj.var) += blk.f0.cwiseProduct(Fj).sum();
                    G(vj.var, m) = G(m, vj.var);
                }
                G(m, m) += blk.f0.squaredNorm();
            }
            gram = G;
            G.diagonal().array() += Scalar(1e-14) * (Scalar(1) + G.diagonal().cwiseAbs().maxCoeff());
            gram_ldlt.compute(G);
            gram_ready = true;
            if (gram_ldlt.info() != Eigen::Success) return false;
        }
        VecS target(m + 1);
        target.head(m) = rp2;
        target[m] = 0;
        VecS lambda = gram_ldlt.solve(target);
        for (int pass = 0; pass < 3; ++pass) lambda += gram_ldlt.solve((target - gram * lambda).eval());
        std::vector<MatS> cand = res.state.Z;
        Scalar viol = 0;
        for (int b = 0; b < nblocks; ++b) {
            sp.blocks[b].add_combination(cand[b], lambda.head(m), Scalar(1));
            cand[b] += lambda[m] * sp.blocks[b].f0;
            viol = std::max(viol, -sym_min_eig<Scalar>(cand[b]));
        }
        const Scalar viol_cap = mode == 2 ? Scalar(0) : Scalar(st.feasibility_tol) * (Scalar(1) + c_scale);
        if (viol > viol_cap || (mode == 2 && viol >= Scalar(0))) {
            // Flat correction leaves the cone; retry in the local metric
            // dZ = Z (sum_a lambda_a F_a) Z, which damps the correction along
            // the near-null directions of Z.
            MatS Gz = MatS::Zero(m + 1, m + 1);
            for (int b = 0; b < nblocks; ++b) {
                const auto& blk = sp.blocks[b];
                std::vector<const typename StdBlock<Scalar>::VarEntries*> fam;
                for (const auto& ve : blk.vars) fam.push_back(&ve);
                for (std::size_t j = 0; j < fam.size(); ++j) {
                    const MatS Gj = res.state.Z[b] * blk.dense(*fam[j]) * res.state.Z[b];
                    for (std::size_t i = 0; i < fam.size(); ++i) Gz(fam[i]->var, fam[j]->var) += blk.inner(*fam[i], Gj);
                    Gz(m, fam[j]->var) += blk.f0.cwiseProduct(Gj).sum();
                    Gz(fam[j]->var, m) = Gz(m, fam[j]->var);
                }
                const MatS G0 = res.state.Z[b] * blk.f0 * res.state.Z[b];
                Gz(m, m) += blk.f0.cwiseProduct(G0).sum();
            }
            Eigen::CompleteOrthogonalDecomposition<MatS> zcod(Gz);
            zcod.setThreshold(Scalar(1e-13));
            // Sweep against the true residual: the constraint is linear in
            // dZ, so repeated corrections converge linearly even when the
            // Gram solve is only approximate.
            cand = res.state.Z;
            VecS sweep_target = target;
            for (int sweep = 0; sweep < 6; ++sweep) {
                if (sweep_target.head(m).cwiseAbs().maxCoeff() <= Scalar(0.1) * Scalar(st.feasibility_tol) * (Scalar(1) + c_scale)) break;
                VecS lam2 = zcod.solve(sweep_target);
                for (int pass = 0; pass < 3; ++pass)
                    lam2 += zcod.solve((sweep_target - Gz * lam2).eval());
                for (int b = 0; b < nblocks; ++b) {
                    MatS D = lam2[m] * sp.blocks[b].f0;
                    sp.blocks[b].add_combination(D, lam2.head(m), Scalar(1));
                    cand[b] += res.state.Z[b] * D * res.state.Z[b];
                    cand[b] = Scalar(0.5) * (cand[b] + cand[b].transpose()).eval();
                }
                sweep_target.setZero();
                sweep_target.head(m) = sp.c;
                for (int b = 0; b < nblocks; ++b) {
                    for (const auto& ve : sp.blocks[b].vars)
                        sweep_target[ve.var] -= sp.blocks[b].inner(ve, cand[b]);
                    sweep_target[m] -= sp.blocks[b].f0.cwiseProduct(cand[b] - res.state.Z[b]).sum();
                }
            }
            viol = 0;
            for (int b = 0; b < nblocks; ++b) viol = std::max(viol, -sym_min_eig<Scalar>(cand[b]));
        }
        if (mode == 2) {
            if (viol >= Scalar(0)) return false;
            res.state.Z = std::move(cand);
            return true;
        }
        if (viol > Scalar(st.feasibility_tol) * (Scalar(1) + c_scale)) return false;
        VecS rp3 = sp.c;
        Scalar dobj_new = 0;
        for (int b = 0; b < nblocks; ++b) {
            for (const auto& ve : sp.blocks[b].vars) rp3[ve.var] -= sp.blocks[b].inner(ve, cand[b]);
            dobj_new -= sp.blocks[b].f0.cwiseProduct(cand[b]).sum();
        }
        const Scalar dinf_new = std::max(rp3.cwiseAbs().maxCoeff(), viol) / (Scalar(1) + c_scale);
        const Scalar gap_new = std::abs(res.pobj - dobj_new) / (Scalar(1) + std::abs(res.pobj) + std::abs(dobj_new));
        const bool converged = res.primal_infeas <= Scalar(st.feasibility_tol) &&
                               dinf_new <= Scalar(st.feasibility_tol) && gap_new <= Scalar(st.gap_tol);
        if (mode == 0 && !converged) return false;
        if (mode == 1 && std::max(dinf_new, gap_new) >= std::max(res.dual_infeas, res.gap)) return false;
        res.state.Z = std::move(cand);
        res.dobj = dobj_new;
        res.dual_infeas = dinf_new;
        res.gap = gap_new;
        return converged;
    };
    auto finish = [&](SolveStatus fallback) {
        restore_best();
        dual_polish(1);
        res.status = (res.primal_infeas <= st.feasibility_tol && res.dual_infeas <= st.feasibility_tol &&
                      res.gap <= st.gap_tol)
                         ? SolveStatus::kOptimal
                         : fallback;
    };

    int stalls = 0;
    for (int iter = 0; iter < st.max_iterations; ++iter) {
        res.iterations = iter;

        // Residuals and convergence check.
        Scalar prim_inf = 0, comp = 0;
        for (int b = 0; b < nblocks; ++b) {
            R[b] = sp.blocks[b].value(z) - S[b];
            prim_inf = std::max(prim_inf, R[b].cwiseAbs().maxCoeff() / (Scalar(1) + f0_scale));
            comp += Z[b].cwiseProduct(S[b]).sum();
        }
        rp = sp.c;
        for (int b = 0; b < nblocks; ++b)
            for (const auto& ve : sp.blocks[b].vars) rp[ve.var] -= sp.blocks[b].inner(ve, Z[b]);
        const Scalar dual_inf = rp.cwiseAbs().maxCoeff() / (Scalar(1) + c_scale);
        const Scalar mu = comp / total_side;

        res.pobj = sp.c.dot(z);
        res.dobj = 0.0;
        for (int b = 0; b < nblocks; ++b) res.dobj -= sp.blocks[b].f0.cwiseProduct(Z[b]).sum();
        const Scalar gap = std::abs(res.pobj - res.dobj) / (Scalar(1) + std::abs(res.pobj) + std::abs(res.dobj));
        res.primal_infeas = prim_inf;
        res.dual_infeas = dual_inf;
        res.gap = gap;

        if (st.verbose)
            std::cerr << "ipm iter " << iter << " mu " << mu << " pinf " << prim_inf << " dinf " << dual_inf
                      << " gap " << gap << " pobj " << res.pobj << "\n";

        if (prim_inf <= Scalar(st.feasibility_tol) && dual_inf <= Scalar(st.feasibility_tol) &&
            gap <= Scalar(st.gap_tol)) {
            res.status = SolveStatus::kOptimal;
            return res;
        }
        if (prim_inf <= Scalar(st.feasibility_tol) && gap <= Scalar(st.gap_tol) && dual_inf <= Scalar(1e-3) &&
            dual_polish(0)) {
            res.status = SolveStatus::kOptimal;
            return res;
        }
        // Progress metric: a moderate dual residual is repairable by the
        // polish step, so rank iterates by the certificate error that would
        // remain after it.
        const Scalar dual_term =
            dual_inf <= Scalar(1e-3) ? std::min(dual_inf, Scalar(10) * Scalar(st.feasibility_tol)) : dual_inf;
        const Scalar phi = std::max({prim_inf, dual_term, gap});
        if (phi < Scalar(0.99) * best_phi) {
            best_phi = phi;
            best_state = res.state;
            best_pinf = prim_inf;
            best_dinf = dual_inf;
            best_gap = gap;
            best_pobj = res.pobj;
            best_dobj = res.dobj;
            no_improve = 0;
        } else if (++no_improve >= 40) {
            finish(SolveStatus::kMaxIterations);
            return res;
        }

        // Infeasibility certificate: Z normalized satisfies <F_i, Z> ~ 0 with
        // <F0, Z> < 0 (Farkas direction for the LMI).
        Scalar zn = 0;
        for (int b = 0; b < nblocks; ++b) zn += Z[b].squaredNorm();
        zn = std::sqrt(zn);
        if (zn > Scalar(1e4)) {
            Scalar max_ai = 0, f0z = 0;
            for (int b = 0; b < nblocks; ++b) {
                for (const auto& ve : sp.blocks[b].vars)
                    max_ai = std::max(max_ai, std::abs(sp.blocks[b].inner(ve, Z[b])));
                f0z += sp.blocks[b].f0.cwiseProduct(Z[b]).sum();
            }
            if (max_ai / zn <= Scalar(1e-9) * std::max(Scalar(1), fi_scale) &&
                f0z / zn < Scalar(-1e-9) * std::max(Scalar(1), f0_scale)) {
                res.status = SolveStatus::kInfeasible;
                return res;
            }
        }
        // Unboundedness certificate: z normalized is an improving ray.
        const Scalar z_norm = z.size() > 0 ? z.cwiseAbs().maxCoeff() : Scalar(0);
        if (z_norm > Scalar(1e7) && res.pobj < Scalar(-1e7) * c_scale) {
            VecS ray = z / z.norm();
            Scalar ray_min = 0;
            for (int b = 0; b < nblocks; ++b) {
                MatS D = MatS::Zero(sp.blocks[b].side, sp.blocks[b].side);
                sp.blocks[b].add_combination(D, ray, Scalar(1));
                ray_min = std::min(ray_min, sym_min_eig<Scalar>(D));
            }
            if (ray_min >= Scalar(-1e-8) * fi_scale && sp.c.dot(ray) < Scalar(-1e-10) * c_scale) {
                res.status = SolveStatus::kUnbounded;
                return res;
            }
        }

        // Factor current iterates and form the Nesterov-Todd scaling point
        // W^{-1} per block (W Z W = S).
        bool ok = true;
        for (int b = 0; b < nblocks && ok; ++b) {
            lltS[b].compute(S[b]);
            lltZ[b].compute(Z[b]);
            ok = lltS[b].info() == Eigen::Success && lltZ[b].info() == Eigen::Success;
        }
        if (!ok) {
            finish(SolveStatus::kNumericalFailure);
            return res;
        }
        for (int b = 0; b < nblocks; ++b) {
            const int side = sp.blocks[b].side;
            Sinv[b] = lltS[b].solve(MatS::Identity(side, side));
            const MatS Ls = lltS[b].matrixL();
            const MatS Lz = lltZ[b].matrixL();
            Eigen::JacobiSVD<MatS> svd(Ls.transpose() * Lz, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const MatS T = Lz * svd.matrixV();
            Winv[b] = T * svd.singularValues().cwiseInverse().asDiagonal() * T.transpose();
            Winv[b] = Scalar(0.5) * (Winv[b] + Winv[b].transpose()).eval();
            // Factor r with W = r r^T, scaled spectrum lambda: r^T Z r =
            // r^{-1} S r^{-T} = diag(lambda).
            lam[b] = svd.singularValues();
            const VecS lam_isqrt = lam[b].cwiseSqrt().cwiseInverse();
            Rfac[b] = Ls * svd.matrixU() * lam_isqrt.asDiagonal();
            Rinv[b] = lam[b].cwiseSqrt().asDiagonal() * svd.matrixU().transpose() *
                      Ls.template triangularView<Eigen::Lower>().solve(MatS::Identity(side, side));
        }

        // Schur complement M_ij = sum_b tr(F_i W^{-1} F_j W^{-1}).
        M.setZero();
        for (int b = 0; b < nblocks; ++b) {
            const auto& blk = sp.blocks[b];
            for (const auto& vj : blk.vars) {
                const MatS G = Winv[b] * blk.dense(vj) * Winv[b];
                for (const auto& vi : blk.vars) M(vi.var, vj.var) += blk.inner(vi, G);
            }
        }
        M = Scalar(0.5) * (M + M.transpose()).eval();

        Eigen::LDLT<MatS> ldlt(M);
        if (ldlt.info() != Eigen::Success) {
            M.diagonal().array() += Scalar(1e-12) * (Scalar(1) + M.diagonal().cwiseAbs().maxCoeff());
            ldlt.compute(M);
            if (ldlt.info() != Eigen::Success) {
                finish(SolveStatus::kNumericalFailure);
                return res;
            }
        }
        auto solve_refined = [&](const VecS& b) {
            VecS x = ldlt.solve(b);
            for (int pass = 0; pass < 2; ++pass) x += ldlt.solve((b - M * x).eval());
            return x;
        };

        // Common right-hand-side pieces: -<F_i, Z> - <F_i, W^{-1} R W^{-1}> - rp_i.
        VecS rhs_base = -rp;
        for (int b = 0; b < nblocks; ++b) {
            const auto& blk = sp.blocks[b];
            const MatS H = Winv[b] * R[b] * Winv[b];
            for (const auto& ve : blk.vars) {
                rhs_base[ve.var] -= blk.inner(ve, Z[b]);
                rhs_base[ve.var] -= blk.inner(ve, H);
            }
        }

        // Predictor (affine scaling) direction.
        dz_aff = solve_refined(rhs_base);
        for (int b = 0; b < nblocks; ++b) {
            const auto& blk = sp.blocks[b];
            dS_aff[b] = R[b];
            blk.add_combination(dS_aff[b], dz_aff, Scalar(1));
            dZ_aff[b] = -Z[b] - Winv[b] * dS_aff[b] * Winv[b];
            dZ_aff[b] = Scalar(0.5) * (dZ_aff[b] + dZ_aff[b].transpose()).eval();
        }
        Scalar ap = 1, ad = 1;
        for (int b = 0; b < nblocks; ++b) {
            ap = std::min(ap, max_psd_step<Scalar>(lltZ[b], dZ_aff[b]));
            ad = std::min(ad, max_psd_step<Scalar>(lltS[b], dS_aff[b]));
        }
        ap = std::min(Scalar(1), ap);
        ad = std::min(Scalar(1), ad);
        Scalar mu_aff = 0;
        for (int b = 0; b < nblocks; ++b)
            mu_aff += (Z[b] + ap * dZ_aff[b]).cwiseProduct(S[b] + ad * dS_aff[b]).sum();
        mu_aff /= total_side;
        Scalar sigma = std::clamp(Scalar(std::pow(std::max(mu_aff, Scalar(0)) / mu, Scalar(3))), Scalar(1e-9), Scalar(1));
        // Keep the barrier from outrunning feasibility, and recenter hard when
        // the affine step is blocked near the cone boundary.
        const bool infeasible_iterate = prim_inf > Scalar(0.5) * Scalar(st.feasibility_tol) ||
                                        dual_inf > Scalar(0.5) * Scalar(st.feasibility_tol);
        if (infeasible_iterate) sigma = std::max(sigma, Scalar(0.3));
        const bool blocked = std::min(ap, ad) < Scalar(0.1);
        if (blocked) sigma = std::max(sigma, Scalar(0.8));

        // Corrector: recenters with sigma*mu and, unless the affine step was
        // blocked, the Mehrotra second-order term in the scaled metric:
        // map dS_aff, dZ_aff through r, symmetrize their product, apply the
        // inverse Lyapunov operator of the scaled spectrum, map back.
        rhs = rhs_base;
        for (int b = 0; b < nblocks; ++b) {
            const auto& blk = sp.blocks[b];
            MatS Rc = sigma * mu * Sinv[b];
            if (!blocked) {
                const MatS dS_hat = Rinv[b] * dS_aff[b] * Rinv[b].transpose();
                const MatS dZ_hat = Rfac[b].transpose() * dZ_aff[b] * Rfac[b];
                MatS E = dZ_hat * dS_hat;
                E = Scalar(0.5) * (E + E.transpose()).eval();
                for (int rr = 0; rr < blk.side; ++rr)
                    for (int cc = 0; cc < blk.side; ++cc) E(rr, cc) *= Scalar(2) / (lam[b][rr] + lam[b][cc]);
                Rc -= Rinv[b].transpose() * E * Rinv[b];
            }
            corr[b] = Rc;
            for (const auto& ve : blk.vars) rhs[ve.var] += blk.inner(ve, Rc);
        }
        dz = solve_refined(rhs);
        for (int b = 0; b < nblocks; ++b) {
            const auto& blk = sp.blocks[b];
            dS[b] = R[b];
            blk.add_combination(dS[b], dz, Scalar(1));
            dZ[b] = corr[b] - Z[b] - Winv[b] * dS[b] * Winv[b];
            dZ[b] = Scalar(0.5) * (dZ[b] + dZ[b].transpose()).eval();
        }
        ap = ad = std::numeric_limits<Scalar>::infinity();
        for (int b = 0; b < nblocks; ++b) {
            ap = std::min(ap, max_psd_step<Scalar>(lltZ[b], dZ[b]));
            ad = std::min(ad, max_psd_step<Scalar>(lltS[b], dS[b]));
        }
        ap = std::min(Scalar(1), Scalar(st.step_fraction) * ap);
        ad = std::min(Scalar(1), Scalar(st.step_fraction) * ad);
        // While infeasible, move both sides together so the residuals and the
        // barrier shrink at the same rate.
        if (infeasible_iterate) ap = ad = std::min(ap, ad);

        // Apply with backoff so the iterates stay safely factorizable.
        bool applied = false;
        for (int attempt = 0; attempt < 12 && !applied; ++attempt) {
            applied = true;
            for (int b = 0; b < nblocks && applied; ++b) {
                Eigen::LLT<MatS> t1(S[b] + ad * dS[b]);
                Eigen::LLT<MatS> t2(Z[b] + ap * dZ[b]);
                applied = t1.info() == Eigen::Success && t2.info() == Eigen::Success;
            }
            if (!applied) {
                ap *= Scalar(0.5);
                ad *= Scalar(0.5);
            }
        }
        if (!applied || !dz.allFinite()) {
            finish(SolveStatus::kNumericalFailure);
            return res;
        }
        z += ad * dz;
        for (int b = 0; b < nblocks; ++b) {
            S[b] += ad * dS[b];
            Z[b] += ap * dZ[b];
        }
        // Dual-feasibility restoration: solver-error buildup in the dual
        // residual is removed whenever the correction keeps Z inside the cone.
        {
            VecS rp_now = sp.c;
            for (int b = 0; b < nblocks; ++b)
                for (const auto& ve : sp.blocks[b].vars) rp_now[ve.var] -= sp.blocks[b].inner(ve, Z[b]);
            const Scalar dinf_now = rp_now.cwiseAbs().maxCoeff() / (Scalar(1) + c_scale);
            if (dinf_now > Scalar(st.feasibility_tol) && dinf_now <= Scalar(1e-3)) dual_polish(2);
        }
        stalls = (ap < Scalar(1e-6) && ad < Scalar(1e-6)) ? stalls + 1 : 0;
        if (stalls >= 8) {
            finish(SolveStatus::kNumericalFailure);
            res.iterations = iter + 1;
            return res;
        }
    }
    finish(SolveStatus::kMaxIterations);
    res.iterations = st.max_iterations;
    return res;
}

}  // namespace

ReducedProblem eliminate_equalities(const SdpProblem& problem) {
    const int m = problem.num_vars;
    const int p = static_cast<int>(problem.equalities.size());
    ReducedProblem out;
    if (p == 0) {
        out.problem = problem;
        out.particular = Eigen::VectorXd::Zero(m);
        out.basis = Eigen::MatrixXd::Identity(m, m);
        return out;
    }
    Eigen::MatrixXd E(p, m);
    Eigen::VectorXd e(p);
    for (int i = 0; i < p; ++i) {
        E.row(i) = problem.equalities[static_cast<std::size_t>(i)].coeffs.transpose();
        e[i] = problem.equalities[static_cast<std::size_t>(i)].rhs;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(E);
    out.particular = cod.solve(e);
    const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
    if ((E * out.particular - e).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw std::invalid_argument("eliminate_equalities: inconsistent equality rows");

    Eigen::FullPivLU<Eigen::MatrixXd> lu(E);
    lu.setThreshold(1e-10);
    Eigen::MatrixXd K = lu.kernel();
    int k = static_cast<int>(K.cols());
    if (k == 1 && K.col(0).norm() == 0.0) k = 0;  // Eigen returns a zero column for trivial kernels
    if (k > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(K.leftCols(k));
        out.basis = qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
    } else {
        out.basis = Eigen::MatrixXd::Zero(m, 0);
    }

    SdpProblem& red = out.problem;
    red.num_vars = k;
    red.objective = out.basis.transpose() * problem.objective;
    red.objective_constant = problem.objective_constant + problem.objective.dot(out.particular);
    for (const auto& b : problem.blocks) {
        const int id = red.add_block(b.side, b.label);
        Eigen::MatrixXd f0 = b.f0;
        for (const auto& t : b.terms) {
            f0(t.row, t.col) += out.particular[t.var] * t.coeff;
            if (t.row != t.col) f0(t.col, t.row) += out.particular[t.var] * t.coeff;
        }
        red.blocks[static_cast<std::size_t>(id)].f0 = f0;
        for (int w = 0; w < k; ++w) {
            Eigen::MatrixXd Fw = Eigen::MatrixXd::Zero(b.side, b.side);
            for (const auto& t : b.terms) {
                Fw(t.row, t.col) += out.basis(t.var, w) * t.coeff;
                if (t.row != t.col) Fw(t.col, t.row) += out.basis(t.var, w) * t.coeff;
            }
            for (int r = 0; r < b.side; ++r)
                for (int c2 = r; c2 < b.side; ++c2)
                    if (Fw(r, c2) != 0.0) red.add_block_term(id, w, r, c2, Fw(r, c2));
        }
    }
    for (const auto& ineq : problem.inequalities) {
        red.add_inequality(out.basis.transpose() * ineq.coeffs, ineq.rhs - ineq.coeffs.dot(out.particular),
                           ineq.label);
    }
    red.canonicalize();
    return out;
}

namespace {
SdpSolution solve_impl(const SdpProblem& problem_in, const SolverSettings& settings, bool allow_feasibility_phase);
}

SdpSolution solve(const SdpProblem& problem_in, const SolverSettings& settings) {
    return solve_impl(problem_in, settings, true);
}

namespace {
SdpSolution solve_impl(const SdpProblem& problem_in, const SolverSettings& settings,
                       bool allow_feasibility_phase) {
    settings.validate();
    SdpProblem problem = problem_in;
    problem.canonicalize();
    if (problem.num_vars < 1) throw std::invalid_argument("solve: problem has no decision variables");
    if (problem.blocks.empty() && problem.inequalities.empty())
        throw std::invalid_argument("solve: problem has no constraints");

    ReducedProblem red = eliminate_equalities(problem);
    {
        // A variable absent from every block and inequality is either an
        // improving ray (unbounded) or irrelevant; pin the irrelevant ones.
        std::vector<bool> present(static_cast<std::size_t>(red.problem.num_vars), false);
        for (const auto& b : red.problem.blocks)
            for (const auto& t : b.terms) present[static_cast<std::size_t>(t.var)] = true;
        for (const auto& ineq : red.problem.inequalities)
            for (int i = 0; i < red.problem.num_vars; ++i)
                if (ineq.coeffs[i] != 0.0) present[static_cast<std::size_t>(i)] = true;
        for (int i = 0; i < red.problem.num_vars; ++i) {
            if (present[static_cast<std::size_t>(i)]) continue;
            if (red.problem.objective[i] != 0.0) {
                SdpSolution sol;
                sol.status = SolveStatus::kUnbounded;
                sol.z = Eigen::VectorXd::Zero(problem.num_vars);
                return sol;
            }
            Eigen::VectorXd a = Eigen::VectorXd::Zero(red.problem.num_vars);
            a[i] = 1.0;
            red.problem.add_inequality(a, -1.0, "pin+");
            red.problem.add_inequality(-a, -1.0, "pin-");
        }
    }
    const StdProblem sp = to_standard(red.problem, true);

    SdpSolution sol;
    if (red.problem.num_vars == 0) {
        // Fully determined by the equality rows: just check feasibility.
        sol.z = red.particular;
        double min_eig = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < problem.blocks.size(); ++b)
            min_eig = std::min(min_eig, sym_min_eig(problem.block_value(static_cast<int>(b), sol.z)));
        for (const auto& ineq : problem.inequalities)
            min_eig = std::min(min_eig, ineq.coeffs.dot(sol.z) - ineq.rhs);
        sol.status = min_eig >= -settings.feasibility_tol ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
        sol.objective = problem.objective.dot(sol.z) + problem.objective_constant;
        sol.dual_objective = sol.objective;
        sol.primal_infeas = std::max(0.0, -min_eig);
        for (const auto& b : problem.blocks) sol.block_duals.push_back(Eigen::MatrixXd::Zero(b.side, b.side));
        sol.ineq_duals = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.inequalities.size()));
        sol.eq_duals = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.equalities.size()));
        return sol;
    }

    IpmResult<double> res = run_ipm<double>(sp, settings);
    if ((res.status == SolveStatus::kMaxIterations || res.status == SolveStatus::kNumericalFailure) &&
        res.primal_infeas <= 1e3 * settings.feasibility_tol) {
        // Retry in extended precision: the endgames of degenerate moment
        // problems can need more digits than double carries.
        const IpmResult<long double> wide = run_ipm<long double>(convert_problem<long double>(sp), settings);
        if (wide.status == SolveStatus::kOptimal || wide.status == SolveStatus::kInfeasible ||
            wide.status == SolveStatus::kUnbounded ||
            std::max({(double)wide.primal_infeas, (double)wide.dual_infeas, (double)wide.gap}) <
                std::max({res.primal_infeas, res.dual_infeas, res.gap})) {
            res.status = wide.status;
            res.iterations = wide.iterations;
            res.primal_infeas = static_cast<double>(wide.primal_infeas);
            res.dual_infeas = static_cast<double>(wide.dual_infeas);
            res.gap = static_cast<double>(wide.gap);
            res.pobj = static_cast<double>(wide.pobj);
            res.dobj = static_cast<double>(wide.dobj);
            res.state.z = wide.state.z.cast<double>();
            res.state.S.clear();
            res.state.Z.clear();
            for (const auto& Sb : wide.state.S) res.state.S.push_back(Sb.cast<double>());
            for (const auto& Zb : wide.state.Z) res.state.Z.push_back(Zb.cast<double>());
        }
    }

    if (allow_feasibility_phase &&
        (res.status == SolveStatus::kMaxIterations || res.status == SolveStatus::kNumericalFailure) &&
        res.primal_infeas > 10.0 * settings.feasibility_tol) {
        // Feasibility phase: minimize the uniform slack t with F(z) + t I
        // PSD. Slater holds for any problem, so this solve is well behaved;
        // a strictly positive optimal slack certifies infeasibility.
        SdpProblem aux = red.problem;
        const int t_var = aux.num_vars;
        aux.num_vars += 1;
        aux.objective = Eigen::VectorXd::Zero(aux.num_vars);
        aux.objective[t_var] = 1.0;
        aux.objective_constant = 0.0;
        for (std::size_t b = 0; b < aux.blocks.size(); ++b)
            for (int d = 0; d < aux.blocks[b].side; ++d)
                aux.blocks[b].terms.push_back({t_var, d, d, 1.0});
        for (auto& ineq : aux.inequalities) {
            Eigen::VectorXd ext = Eigen::VectorXd::Zero(aux.num_vars);
            ext.head(t_var) = ineq.coeffs;
            ext[t_var] = 1.0;
            ineq.coeffs = ext;
        }
        Eigen::VectorXd tlow = Eigen::VectorXd::Zero(aux.num_vars);
        tlow[t_var] = 1.0;
        aux.add_inequality(tlow, -1.0, "slack_floor");
        double f0n = 1.0;
        for (const auto& b : aux.blocks) f0n = std::max(f0n, b.f0.cwiseAbs().maxCoeff());
        SolverSettings aux_settings = settings;
        aux_settings.gap_tol = std::max(settings.gap_tol, 1e-6);
        const SdpSolution aux_sol = solve_impl(aux, aux_settings, false);
        if (aux_sol.status == SolveStatus::kOptimal &&
            aux_sol.z[t_var] > std::max(1e3 * settings.feasibility_tol, 1e-6) * f0n)
            res.status = SolveStatus::kInfeasible;
    }
    if ((res.status == SolveStatus::kMaxIterations || res.status == SolveStatus::kNumericalFailure) &&
        res.state.z.size() > 0 && res.state.z.norm() > 1.0) {
        // Improving-ray certificate: a feasible direction with a strictly
        // negative objective slope proves the problem unbounded below.
        const Eigen::VectorXd ray = res.state.z / res.state.z.norm();
        double dmin = std::numeric_limits<double>::infinity();
        for (const auto& blk : sp.blocks) {
            Eigen::MatrixXd D = Eigen::MatrixXd::Zero(blk.side, blk.side);
            blk.add_combination(D, ray, 1.0);
            dmin = std::min(dmin, sym_min_eig<double>(D));
        }
        if (dmin >= -1e-9 && sp.c.dot(ray) < -1e-6) res.status = SolveStatus::kUnbounded;
    }

    sol.status = res.status;
    sol.iterations = res.iterations;
    sol.z = red.particular + red.basis * res.state.z;
    sol.objective = problem.objective.dot(sol.z) + problem.objective_constant;
    sol.dual_objective = sp.obj_scale * res.dobj + red.problem.objective_constant;
    sol.primal_infeas = res.primal_infeas;
    sol.dual_infeas = res.dual_infeas;
    sol.gap = res.gap;

    const std::size_t npsd = problem.blocks.size();
    for (std::size_t b = 0; b < npsd; ++b)
        sol.block_duals.push_back((sp.obj_scale / sp.block_scale[b]) * res.state.Z[b]);
    sol.ineq_duals = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.inequalities.size()));
    for (std::size_t i = 0; i < problem.inequalities.size(); ++i)
        sol.ineq_duals[static_cast<Eigen::Index>(i)] =
            (sp.obj_scale / sp.block_scale[npsd + i]) * res.state.Z[npsd + i](0, 0);

    // Recover equality multipliers by least squares from stationarity:
    // c - A*(Z) - sum lambda a_ineq = E^T nu.
    const int p = static_cast<int>(problem.equalities.size());
    sol.eq_duals = Eigen::VectorXd::Zero(p);
    if (p > 0) {
        Eigen::VectorXd g = problem.objective;
        const StdProblem orig_sp = to_standard(problem, false);
        for (std::size_t b = 0; b < npsd; ++b)
            for (const auto& ve : orig_sp.blocks[b].vars) g[ve.var] -= orig_sp.blocks[b].inner(ve, sol.block_duals[b]);
        for (std::size_t i = 0; i < problem.inequalities.size(); ++i)
            g -= sol.ineq_duals[static_cast<Eigen::Index>(i)] * problem.inequalities[i].coeffs;
        Eigen::MatrixXd Et(problem.num_vars, p);
        for (int i = 0; i < p; ++i) Et.col(i) = problem.equalities[static_cast<std::size_t>(i)].coeffs;
        sol.eq_duals = Et.completeOrthogonalDecomposition().solve(g);
    }
    return sol;
}
}  // namespace

CertificateCheck verify_certificate(const SdpProblem& problem_in, const SdpSolution& sol) {
    SdpProblem problem = problem_in;
    problem.canonicalize();
    CertificateCheck out;

    double f0_scale = 1.0;
    for (const auto& b : problem.blocks) f0_scale = std::max(f0_scale, b.f0.cwiseAbs().maxCoeff());
    const double c_scale = std::max(1.0, problem.objective.size() > 0 ? problem.objective.cwiseAbs().maxCoeff() : 0.0);

    double viol = 0.0;
    for (std::size_t b = 0; b < problem.blocks.size(); ++b)
        viol = std::max(viol, -sym_min_eig(problem.block_value(static_cast<int>(b), sol.z)));
    for (const auto& eq : problem.equalities) viol = std::max(viol, std::abs(eq.coeffs.dot(sol.z) - eq.rhs));
    for (const auto& ineq : problem.inequalities) viol = std::max(viol, -(ineq.coeffs.dot(sol.z) - ineq.rhs));
    out.primal_infeas = std::max(0.0, viol) / (1.0 + f0_scale);

    Eigen::VectorXd g = problem.objective;
    const StdProblem sp = to_standard(problem, false);
    for (std::size_t b = 0; b < problem.blocks.size(); ++b)
        for (const auto& ve : sp.blocks[b].vars) g[ve.var] -= sp.blocks[b].inner(ve, sol.block_duals[b]);
    for (std::size_t i = 0; i < problem.inequalities.size(); ++i)
        g -= sol.ineq_duals[static_cast<Eigen::Index>(i)] * problem.inequalities[i].coeffs;
    for (std::size_t i = 0; i < problem.equalities.size(); ++i)
        g -= sol.eq_duals[static_cast<Eigen::Index>(i)] * problem.equalities[i].coeffs;
    out.dual_infeas = g.cwiseAbs().maxCoeff() / (1.0 + c_scale);

    double dobj = problem.objective_constant;
    for (std::size_t b = 0; b < problem.blocks.size(); ++b)
        dobj -= problem.blocks[b].f0.cwiseProduct(sol.block_duals[b]).sum();
    for (std::size_t i = 0; i < problem.inequalities.size(); ++i)
        dobj += sol.ineq_duals[static_cast<Eigen::Index>(i)] * problem.inequalities[i].rhs;
    for (std::size_t i = 0; i < problem.equalities.size(); ++i)
        dobj += sol.eq_duals[static_cast<Eigen::Index>(i)] * problem.equalities[i].rhs;
    const double pobj = problem.objective.dot(sol.z) + problem.objective_constant;
    out.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    return out;
}

}  // namespace ccmpc
