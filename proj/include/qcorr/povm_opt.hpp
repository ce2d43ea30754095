#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "qcorr/measurement.hpp"
#include "qcorr/types.hpp"

namespace qcorr {

enum class OptMode { Rank1Stiefel, General, Projective };

struct OptConfig {
    int n_outcomes = 0;  // 0 -> d^2 for rank-1/general, d for projective
    int restarts = 24;
    int max_iters = 2000;  // pattern-search sweeps per start
    double conv_tol = 1e-9;
    std::uint64_t seed = 0;
    OptMode mode = OptMode::Rank1Stiefel;
    std::vector<Povm> seeds_in;  // warm starts, tried in addition to the built-ins

    void validate(int measured_dim) const;
    int outcomes_for(int measured_dim) const;
};

struct OptResult {
    double value = 0.0;  // bits; a certified lower bound
    Povm certificate;
    std::optional<Povm> certificate_b;  // product mode only
    bool converged = true;
    int restarts_used = 0;
    int iters = 0;
    std::vector<std::pair<int, double>> best_restart_trace;
};

/// k rank-1 effects a_i a_i^dag built from the polar (Stiefel) projection of
/// the raw k x d complex matrix packed in `params` (re,im interleaved,
/// row-major).  Rank-deficient raw matrices get a deterministic diagonal
/// perturbation (up to 3 attempts) before being rejected.
Povm parameterize_rank1(const std::vector<double>& params, int d, int k);

/// Pi_i = S^{-1/2} B_i^dag B_i S^{-1/2} with S = sum B_i^dag B_i.
Povm parameterize_general(const std::vector<Matrix>& param_mats);

/// Recovers a raw parameter vector whose rank-1 projection reproduces the
/// POVM (effects are split into rank-1 pieces; padded or truncated to k rows).
std::vector<double> rank1_params_from_povm(const Povm& povm, int k);

/// Maximizes the Holevo quantity of the ensemble produced by measuring `side`
/// of a bipartite state.  Multistart; canonical starts (computational basis,
/// marginal eigenbasis) are always tried in addition to cfg.seeds_in and
/// cfg.restarts random starts.
OptResult maximize_single(const DensityMatrix& rho, Side side, const OptConfig& cfg);

/// Maximizes classical mutual information over product POVMs by alternating
/// block ascent (fix A, optimize B, alternate `sweeps` times per start).
OptResult maximize_product(const DensityMatrix& rho, const OptConfig& cfg_a,
                           const OptConfig& cfg_b, int sweeps = 6);

/// Worker cap for multistart searches (also set by QCORR_THREADS).  Results
/// do not depend on the thread count.
void set_max_threads(int n);
int max_threads();

}  // namespace qcorr
