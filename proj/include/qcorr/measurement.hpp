#pragma once

#include "qcorr/types.hpp"

namespace qcorr {

enum class Side { A, B };

/// POVM on a single subsystem: PSD effects summing to identity.
struct Povm {
    int dim = 0;
    std::vector<Matrix> effects;

    Povm() = default;
    Povm(int d, std::vector<Matrix> eff);

    std::size_t n_outcomes() const { return effects.size(); }
    void validate() const;

    /// Projective POVM onto the computational basis.
    static Povm computational_projective(int dim);
    /// Projective POVM onto the columns of a unitary.
    static Povm projective_from_unitary(const Matrix& u);
};

/// Probabilities and conditional states left on the unmeasured side.
/// Outcomes with probability below tol::zero_prob are dropped.
struct ConditionalEnsemble {
    RealVector probs;
    std::vector<DensityMatrix> states;
};

struct JointDistribution {
    RealMatrix table;
    RealVector marginal_a;
    RealVector marginal_b;

    explicit JointDistribution(RealMatrix t);
};

/// Measures one side of a bipartite state (dims must have exactly two entries).
ConditionalEnsemble measure_side(const DensityMatrix& rho, Side side, const Povm& povm);

JointDistribution joint_distribution(const DensityMatrix& rho, const Povm& povm_a,
                                     const Povm& povm_b);

namespace detail {
/// Unnormalized post-measurement operators on the kept side; no validation.
std::vector<Matrix> unnormalized_conditionals(const Matrix& rho, int dim_a, int dim_b, Side side,
                                              const std::vector<Matrix>& effects);
}  // namespace detail

double shannon_entropy(const RealVector& p);
double classical_mutual_information(const JointDistribution& jd);

/// S(average state) - average S(conditional state), in bits.
double holevo_quantity(const ConditionalEnsemble& ens);
double holevo_quantity(const EnsembleOfStates& ens);

}  // namespace qcorr
