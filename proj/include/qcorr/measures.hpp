#pragma once

#include <optional>
#include <string>

#include "qcorr/povm_opt.hpp"
#include "qcorr/qstate.hpp"

namespace qcorr {

enum class BoundDirection { Lower, Upper, Exact };

struct Diagnostics {
    bool closed_form = true;
    int restarts = 0;
    bool converged = true;
    int iters = 0;
};

struct MeasureReport {
    std::string name;
    double value = 0.0;  // bits
    BoundDirection bound_direction = BoundDirection::Exact;
    std::optional<Povm> certificate;
    std::optional<Povm> certificate_b;
    Diagnostics diagnostics;
};

/// Partition of the subsystems of a multipartite state into two parties.
struct CutSpec {
    std::vector<int> party_a;
    std::vector<int> party_b;
};

DensityMatrix apply_cut(const DensityMatrix& rho, const CutSpec& cut);

/// Tensor of two bipartite states regrouped across the joint cut
/// (A1 A2 | B1 B2); the result is again bipartite.
DensityMatrix tensor_bipartite(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Product POVM Pi_i (x) Pi_j on the joint measured side of tensor_bipartite.
Povm product_povm(const Povm& first, const Povm& second);

// All measure operations below expect bipartite-grouped states
// (dim_spec of exactly two entries); use apply_cut / group_bipartite first.

MeasureReport mutual_information(const DensityMatrix& rho);           // exact
MeasureReport s_min(const DensityMatrix& rho);                        // exact
MeasureReport coherent_information(const DensityMatrix& rho);         // exact

/// Holevo classical correlation, measuring `measured`; certified lower bound.
MeasureReport holevo_correlation(const DensityMatrix& rho, Side measured, const OptConfig& cfg);

/// Classical correlation over product measurements; certified lower bound.
MeasureReport symmetric_correlation(const DensityMatrix& rho, const OptConfig& cfg_a,
                                    const OptConfig& cfg_b, int sweeps = 6);

/// Mutual information minus the Holevo correlation; upper bound.
MeasureReport discord(const DensityMatrix& rho, Side measured, const OptConfig& cfg);

/// Mutual information minus the symmetric correlation; upper bound.
MeasureReport symmetric_discord(const DensityMatrix& rho, const OptConfig& cfg_a,
                                const OptConfig& cfg_b, int sweeps = 6);

/// Two-qubit entanglement of formation via the concurrence closed form.
MeasureReport eof_two_qubit(const DensityMatrix& rho);

/// E^F(rho_AB) + C^h(rho_AC, measured C) - S(rho_A) for a tripartite pure
/// state; lies in [-tol_kw, tol_num] when the optimizer has converged.
double koashi_winter_residual(const PureState& psi, const std::vector<int>& party_a,
                              const std::vector<int>& party_b, const std::vector<int>& party_c,
                              const OptConfig& cfg);

struct IrreversibilityReport {
    double s_min_ac = 0.0;
    double chbar_est = 0.0;       // best certified lower bound on the regularized value
    double bound = 0.0;           // s_min_ac - chbar_est, upper bound on E^C - E^D
    double discord_form = 0.0;    // S(A:C) - chbar_est
    MeasureReport report;         // bound as a MeasureReport (upper)
};

/// Upper bound on entanglement irreversibility of rho_AB from the companion
/// marginal rho_AC of a tripartite pure state.  `split`, when given, supplies
/// a pure (x) separable factorization of rho_AC enabling the additivity
/// shortcut; the n=2 collective probe is used when the doubled state fits.
IrreversibilityReport irreversibility_bound(const PureState& psi, const std::vector<int>& party_a,
                                            const std::vector<int>& party_b,
                                            const std::vector<int>& party_c, const OptConfig& cfg,
                                            const BipartiteSplit* split = nullptr);

/// C^h(rho (x) sigma) = C^h(rho) + C^h(sigma) for separable sigma; the sum of
/// the two certified addends is returned as the exact-by-additivity value.
MeasureReport lemma2_additive_value(const DensityMatrix& rho, const DensityMatrix& sigma_separable,
                                    Side measured, const OptConfig& cfg);

/// C^h(rho (x) rho)/2 with the two-copy search seeded from the single-copy
/// certificate; a lower bound on the regularized value.
MeasureReport regularization_probe_n2(const DensityMatrix& rho, Side measured, const OptConfig& cfg);

struct ClSandwich {
    MeasureReport lower;        // symmetric correlation
    MeasureReport upper;        // Holevo correlation, A measured, chain-seeded
    double locked_width = 0.0;  // interval width reported for the locked correlation
};

ClSandwich cl_sandwich(const DensityMatrix& rho, const OptConfig& cfg_a, const OptConfig& cfg_b,
                       int sweeps = 6);

}  // namespace qcorr
