#include "qcorr/measurement.hpp"

#include <cmath>

#include "qcorr/qstate.hpp"

namespace qcorr {

Povm::Povm(int d, std::vector<Matrix> eff) : dim(d), effects(std::move(eff)) { validate(); }

void Povm::validate() const {
    if (dim < 1) throw ArgumentError("Povm: dim must be >= 1");
    if (effects.empty()) throw ArgumentError("Povm: no effects");
    Matrix sum = Matrix::Zero(dim, dim);
    for (const Matrix& e : effects) {
        if (e.rows() != dim || e.cols() != dim) throw ArgumentError("Povm: effect size mismatch");
        if ((e - e.adjoint()).cwiseAbs().maxCoeff() > tol::herm)
            throw ArgumentError("Povm: effect not Hermitian");
        Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol::psd) throw ArgumentError("Povm: effect not PSD");
        sum += e;
    }
    if ((sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol::povm)
        throw ArgumentError("Povm: effects do not sum to identity");
}

Povm Povm::computational_projective(int dim) {
    std::vector<Matrix> eff;
    for (int i = 0; i < dim; ++i) {
        Matrix e = Matrix::Zero(dim, dim);
        e(i, i) = 1.0;
        eff.push_back(std::move(e));
    }
    return Povm(dim, std::move(eff));
}

Povm Povm::projective_from_unitary(const Matrix& u) {
    const int d = static_cast<int>(u.rows());
    std::vector<Matrix> eff;
    for (int i = 0; i < d; ++i) eff.push_back(u.col(i) * u.col(i).adjoint());
    return Povm(d, std::move(eff));
}

JointDistribution::JointDistribution(RealMatrix t) : table(std::move(t)) {
    if (table.minCoeff() < -tol::num) throw ArgumentError("JointDistribution: negative entry");
    if (std::abs(table.sum() - 1.0) > tol::trace)
        throw ArgumentError("JointDistribution: entries do not sum to 1");
    marginal_a = table.rowwise().sum();
    marginal_b = table.colwise().sum().transpose();
}

namespace detail {

// Unnormalized conditional operators on the kept side; no state validation.
std::vector<Matrix> unnormalized_conditionals(const Matrix& rho, int dim_a, int dim_b, Side side,
                                              const std::vector<Matrix>& effects) {
    const int dm = (side == Side::A) ? dim_a : dim_b;  // measured
    const int dk = (side == Side::A) ? dim_b : dim_a;  // kept
    std::vector<Matrix> out;
    out.reserve(effects.size());
    for (const Matrix& e : effects) {
        Matrix s = Matrix::Zero(dk, dk);
        if (side == Side::A) {
            for (int a = 0; a < dm; ++a)
                for (int a2 = 0; a2 < dm; ++a2) {
                    const Complex w = e(a, a2);
                    if (w == Complex(0, 0)) continue;
                    s += w * rho.block(static_cast<long long>(a2) * dk,
                                       static_cast<long long>(a) * dk, dk, dk);
                }
        } else {
            for (int b = 0; b < dm; ++b)
                for (int b2 = 0; b2 < dm; ++b2) {
                    const Complex w = e(b, b2);
                    if (w == Complex(0, 0)) continue;
                    for (int m = 0; m < dk; ++m)
                        for (int n = 0; n < dk; ++n)
                            s(m, n) += w * rho(static_cast<long long>(m) * dm + b2,
                                               static_cast<long long>(n) * dm + b);
                }
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace detail

ConditionalEnsemble measure_side(const DensityMatrix& rho, Side side, const Povm& povm) {
    if (rho.dim_spec().size() != 2)
        throw ArgumentError("measure_side: state must be bipartite (use group_bipartite first)");
    const int da = rho.dim_spec().dims[0];
    const int db = rho.dim_spec().dims[1];
    if (povm.dim != ((side == Side::A) ? da : db))
        throw ArgumentError("measure_side: POVM dimension does not match the measured side");
    auto conds = detail::unnormalized_conditionals(rho.entries(), da, db, side, povm.effects);

    std::vector<double> probs;
    std::vector<DensityMatrix> states;
    const int dk = (side == Side::A) ? db : da;
    for (const Matrix& s : conds) {
        const double p = s.trace().real();
        if (p < tol::zero_prob) continue;  // dropped: entropy contribution vanishes in the limit
        Matrix c = (s + s.adjoint().eval()) / (2.0 * p);
        probs.push_back(p);
        states.emplace_back(DimSpec({dk}), std::move(c));
    }
    RealVector pv(static_cast<int>(probs.size()));
    for (std::size_t i = 0; i < probs.size(); ++i) pv[static_cast<int>(i)] = probs[i];
    if (std::abs(pv.sum() - 1.0) > tol::num)
        throw InvalidStateError("measure_side: outcome probabilities do not sum to 1");
    return ConditionalEnsemble{std::move(pv), std::move(states)};
}

JointDistribution joint_distribution(const DensityMatrix& rho, const Povm& povm_a,
                                     const Povm& povm_b) {
    if (rho.dim_spec().size() != 2) throw ArgumentError("joint_distribution: state must be bipartite");
    const int da = rho.dim_spec().dims[0];
    const int db = rho.dim_spec().dims[1];
    if (povm_a.dim != da || povm_b.dim != db)
        throw ArgumentError("joint_distribution: POVM dimension mismatch");
    auto conds = detail::unnormalized_conditionals(rho.entries(), da, db, Side::A, povm_a.effects);
    RealMatrix t(povm_a.n_outcomes(), povm_b.n_outcomes());
    for (std::size_t i = 0; i < conds.size(); ++i)
        for (std::size_t j = 0; j < povm_b.n_outcomes(); ++j)
            t(static_cast<int>(i), static_cast<int>(j)) =
                std::max(0.0, (povm_b.effects[j] * conds[i]).trace().real());
    return JointDistribution(std::move(t));
}

double shannon_entropy(const RealVector& p) {
    double h = 0.0;
    for (int i = 0; i < p.size(); ++i)
        if (p[i] > tol::clip) h -= p[i] * std::log2(p[i]);
    return h;
}

double classical_mutual_information(const JointDistribution& jd) {
    double h_joint = 0.0;
    for (int i = 0; i < jd.table.rows(); ++i)
        for (int j = 0; j < jd.table.cols(); ++j) {
            const double p = jd.table(i, j);
            if (p > tol::clip) h_joint -= p * std::log2(p);
        }
    return shannon_entropy(jd.marginal_a) + shannon_entropy(jd.marginal_b) - h_joint;
}

double holevo_quantity(const ConditionalEnsemble& ens) {
    if (ens.states.empty()) throw ArgumentError("holevo_quantity: empty ensemble");
    const int d = ens.states[0].dim();
    Matrix avg = Matrix::Zero(d, d);
    double cond = 0.0;
    for (int i = 0; i < ens.probs.size(); ++i) {
        avg += ens.probs[i] * ens.states[i].entries();
        cond += ens.probs[i] * von_neumann_entropy(ens.states[i]);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(avg, Eigen::EigenvaluesOnly);
    return entropy_of_spectrum(es.eigenvalues()) - cond;
}

double holevo_quantity(const EnsembleOfStates& ens) {
    ConditionalEnsemble c{ens.probs, ens.states};
    return holevo_quantity(c);
}

}  // namespace qcorr
