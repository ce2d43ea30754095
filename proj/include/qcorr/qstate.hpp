#pragma once

#include <cstdint>
#include <optional>

#include "qcorr/types.hpp"

namespace qcorr {

// --- algebra ---------------------------------------------------------------

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
PureState tensor(const PureState& a, const PureState& b);

/// Traces out every subsystem not listed in `keep` (indices into dim_spec).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// Reorders subsystems so that subsystem perm[i] of the input becomes
/// subsystem i of the output.
DensityMatrix permute_subsystems(const DensityMatrix& rho, const std::vector<int>& perm);
PureState permute_subsystems(const PureState& psi, const std::vector<int>& perm);

/// Coarse-grains to a bipartite state with dims [prod(party_a), prod(party_b)].
/// The two index lists must partition the subsystems.
DensityMatrix group_bipartite(const DensityMatrix& rho, const std::vector<int>& party_a,
                              const std::vector<int>& party_b);

/// Minimal purification via eigendecomposition; ancilla dimension equals the
/// numerical rank (eigenvalues > tol::clip).
PureState purify(const DensityMatrix& rho);

/// -sum lambda log2 lambda, in bits.  Eigenvalues in [-tol::psd, tol::clip]
/// are clipped to zero; anything below -tol::psd is rejected.
double von_neumann_entropy(const DensityMatrix& rho);
double entropy_of_spectrum(const RealVector& eigenvalues);

// --- named states ----------------------------------------------------------

PureState computational_basis_state(int dim, int index);
PureState epr_state();                // (|00> + |11>)/sqrt(2), dims [2,2]
PureState ghz_state();                // (|000> + |111>)/sqrt(2), dims [2,2,2]
DensityMatrix cc_state();             // (|00><00| + |11><11|)/2, dims [2,2]
DensityMatrix maximally_mixed(int dim);

/// sum_i p_i |i><i| (x) rho_i^B, computational basis on the A side.
DensityMatrix make_cq_state(const RealVector& probs, const std::vector<DensityMatrix>& cond_states);

/// Qutrit (x) qubit CQ state whose conditional qubit states sit on the Bloch
/// equator at angles 0, 2pi/3, 4pi/3 with weight 1/3 each.
DensityMatrix make_trine();
PureState trine_qubit(int i);

/// GHZ_{a1 b1 c1} (x) EPR_{a2 b2} (x) EPR_{a3 c2}, 7 qubits ordered
/// [a1 a2 a3 b1 b2 c1 c2] (A = 0..2, B = 3..4, C = 5..6).
PureState make_ghz_epr_psi();

/// The 7-qubit state above with an extra EPR_{b3 c3}; 9 qubits ordered
/// [a1 a2 a3 b1 b2 b3 c1 c2 c3] (A = 0..2, B = 3..5, C = 6..8).
PureState make_ghz_epr_phi();

struct PartyCut {
    std::vector<int> party_a;
    std::vector<int> party_b;
};

/// rho_AC of make_ghz_epr_psi / make_ghz_epr_phi, coarse-grained to [8,4] / [8,8].
DensityMatrix ghz_epr_psi_rho_ac();
DensityMatrix ghz_epr_phi_rho_ac();
DensityMatrix ghz_epr_psi_rho_ab();
DensityMatrix ghz_epr_phi_rho_ab();

/// The pure (x) separable factorization of rho_AC used by the additivity
/// shortcut: rho_AC = permute(pure_part (x) sep_part) with both factors
/// bipartite across the same A|C cut.
struct BipartiteSplit {
    DensityMatrix pure_part;
    DensityMatrix sep_part;
};
BipartiteSplit ghz_epr_psi_ac_split();
BipartiteSplit ghz_epr_phi_ac_split();

/// rho_AC = sum_ij sqrt(p_i p_j) <b_j|b_i> |a_i><a_j| (x) |i><j|.
/// `overlaps`(i,j) = <b_j|b_i> must form a valid Gram matrix.
DensityMatrix make_one_way_mcs(const RealVector& probs, const std::vector<PureState>& a_states,
                               const Matrix& overlaps);

// --- random states ---------------------------------------------------------

DensityMatrix random_density(const DimSpec& spec, int rank, std::uint64_t seed);
PureState random_pure(const DimSpec& spec, std::uint64_t seed);
/// sum_k q_k rho_k^A (x) sigma_k^B; separable by construction (and flagged so).
DensityMatrix random_separable(int dim_a, int dim_b, int terms, std::uint64_t seed);
RealVector random_prob_vector(int n, std::uint64_t seed);

/// Stable per-restart seed derivation (splitmix-style hash of (master, n)).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n);

}  // namespace qcorr
