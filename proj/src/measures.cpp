#include "qcorr/measures.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace qcorr {

namespace {

void require_bipartite(const DensityMatrix& rho, const char* op) {
    if (rho.dim_spec().size() != 2)
        throw ArgumentError(std::string(op) + ": state must be bipartite-grouped");
}

Diagnostics from_opt(const OptResult& r) {
    Diagnostics d;
    d.closed_form = false;
    d.restarts = r.restarts_used;
    d.converged = r.converged;
    d.iters = r.iters;
    return d;
}

double binary_entropy(double x) {
    double h = 0.0;
    if (x > tol::clip) h -= x * std::log2(x);
    if (1.0 - x > tol::clip) h -= (1.0 - x) * std::log2(1.0 - x);
    return h;
}

struct MarginalEntropies {
    double sa, sb, sab, mi;
};

MarginalEntropies marginal_entropies(const DensityMatrix& rho) {
    const double sa = von_neumann_entropy(partial_trace(rho, {0}));
    const double sb = von_neumann_entropy(partial_trace(rho, {1}));
    const double sab = von_neumann_entropy(rho);
    return {sa, sb, sab, sa + sb - sab};
}

}  // namespace

DensityMatrix apply_cut(const DensityMatrix& rho, const CutSpec& cut) {
    return group_bipartite(rho, cut.party_a, cut.party_b);
}

DensityMatrix tensor_bipartite(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_bipartite(rho, "tensor_bipartite");
    require_bipartite(sigma, "tensor_bipartite");
    DensityMatrix t = tensor(rho, sigma);  // [A1 B1 A2 B2]
    return group_bipartite(t, {0, 2}, {1, 3});
}

Povm product_povm(const Povm& first, const Povm& second) {
    std::vector<Matrix> eff;
    for (const Matrix& e1 : first.effects)
        for (const Matrix& e2 : second.effects)
            eff.push_back(Eigen::kroneckerProduct(e1, e2).eval());
    return Povm(first.dim * second.dim, std::move(eff));
}

MeasureReport mutual_information(const DensityMatrix& rho) {
    require_bipartite(rho, "mutual_information");
    auto e = marginal_entropies(rho);
    return {"mutual-information", e.mi, BoundDirection::Exact, {}, {}, {}};
}

MeasureReport s_min(const DensityMatrix& rho) {
    require_bipartite(rho, "s_min");
    auto e = marginal_entropies(rho);
    return {"s-min", std::min({e.sa, e.sb, e.mi}), BoundDirection::Exact, {}, {}, {}};
}

MeasureReport coherent_information(const DensityMatrix& rho) {
    require_bipartite(rho, "coherent_information");
    auto e = marginal_entropies(rho);
    const double v = std::max({0.0, e.sa - e.sab, e.sb - e.sab});
    return {"coherent-information", v, BoundDirection::Exact, {}, {}, {}};
}

MeasureReport holevo_correlation(const DensityMatrix& rho, Side measured, const OptConfig& cfg) {
    require_bipartite(rho, "holevo_correlation");
    OptResult r = maximize_single(rho, measured, cfg);
    MeasureReport rep;
    rep.name = "holevo-correlation";
    rep.value = r.value;
    rep.bound_direction = BoundDirection::Lower;
    rep.certificate = r.certificate;
    rep.diagnostics = from_opt(r);
    return rep;
}

MeasureReport symmetric_correlation(const DensityMatrix& rho, const OptConfig& cfg_a,
                                    const OptConfig& cfg_b, int sweeps) {
    require_bipartite(rho, "symmetric_correlation");
    OptResult r = maximize_product(rho, cfg_a, cfg_b, sweeps);
    MeasureReport rep;
    rep.name = "symmetric-correlation";
    rep.value = r.value;
    rep.bound_direction = BoundDirection::Lower;
    rep.certificate = r.certificate;
    rep.certificate_b = r.certificate_b;
    rep.diagnostics = from_opt(r);
    return rep;
}

MeasureReport discord(const DensityMatrix& rho, Side measured, const OptConfig& cfg) {
    MeasureReport ch = holevo_correlation(rho, measured, cfg);
    MeasureReport rep;
    rep.name = "discord";
    rep.value = mutual_information(rho).value - ch.value;
    rep.bound_direction = BoundDirection::Upper;
    rep.certificate = ch.certificate;
    rep.diagnostics = ch.diagnostics;
    return rep;
}

MeasureReport symmetric_discord(const DensityMatrix& rho, const OptConfig& cfg_a,
                                const OptConfig& cfg_b, int sweeps) {
    MeasureReport c = symmetric_correlation(rho, cfg_a, cfg_b, sweeps);
    MeasureReport rep;
    rep.name = "symmetric-discord";
    rep.value = mutual_information(rho).value - c.value;
    rep.bound_direction = BoundDirection::Upper;
    rep.certificate = c.certificate;
    rep.certificate_b = c.certificate_b;
    rep.diagnostics = c.diagnostics;
    return rep;
}

MeasureReport eof_two_qubit(const DensityMatrix& rho) {
    if (rho.dim_spec().dims != std::vector<int>{2, 2})
        throw ArgumentError("eof_two_qubit: dims must be [2,2]");
    Matrix sy2 = Matrix::Zero(4, 4);  // sigma_y (x) sigma_y
    sy2(0, 3) = -1.0;
    sy2(1, 2) = 1.0;
    sy2(2, 1) = 1.0;
    sy2(3, 0) = -1.0;
    Matrix rt = rho.entries() * sy2 * rho.entries().conjugate() * sy2;
    Eigen::ComplexEigenSolver<Matrix> es(rt);
    std::vector<double> lam;
    for (int i = 0; i < 4; ++i) lam.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[i].real())));
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    const double c = std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
    const double e = binary_entropy((1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))) / 2.0);
    return {"eof-two-qubit", e, BoundDirection::Exact, {}, {}, {}};
}

double koashi_winter_residual(const PureState& psi, const std::vector<int>& party_a,
                              const std::vector<int>& party_b, const std::vector<int>& party_c,
                              const OptConfig& cfg) {
    DensityMatrix full = psi.to_density();
    std::vector<int> ab = party_a;
    ab.insert(ab.end(), party_b.begin(), party_b.end());
    std::vector<int> ac = party_a;
    ac.insert(ac.end(), party_c.begin(), party_c.end());
    DensityMatrix rho_ab_raw = partial_trace(full, ab);
    DensityMatrix rho_ac_raw = partial_trace(full, ac);
    // after partial_trace indices are renumbered in sorted order
    auto local_indices = [](std::size_t n_first, std::size_t n_second) {
        std::vector<int> first(n_first), second(n_second);
        for (std::size_t i = 0; i < n_first; ++i) first[i] = static_cast<int>(i);
        for (std::size_t i = 0; i < n_second; ++i) second[i] = static_cast<int>(n_first + i);
        return std::make_pair(first, second);
    };
    auto [ab_a, ab_b] = local_indices(party_a.size(), party_b.size());
    DensityMatrix rho_ab = group_bipartite(rho_ab_raw, ab_a, ab_b);
    auto [ac_a, ac_c] = local_indices(party_a.size(), party_c.size());
    DensityMatrix rho_ac = group_bipartite(rho_ac_raw, ac_a, ac_c);
    if (rho_ab.dim_spec().dims[0] != 2 || rho_ab.dim_spec().dims[1] != 2)
        throw ArgumentError("koashi_winter_residual: A and B parties must be qubits");
    if (rho_ac.dim_spec().dims[1] > 4)
        throw ArgumentError("koashi_winter_residual: C party dimension above 4");
    const double ef = eof_two_qubit(rho_ab).value;
    const double ch = holevo_correlation(rho_ac, Side::B, cfg).value;
    const double sa = von_neumann_entropy(partial_trace(rho_ab, {0}));
    return ef + ch - sa;
}

MeasureReport lemma2_additive_value(const DensityMatrix& rho, const DensityMatrix& sigma_separable,
                                    Side measured, const OptConfig& cfg) {
    require_bipartite(rho, "lemma2_additive_value");
    require_bipartite(sigma_separable, "lemma2_additive_value");
    if (!sigma_separable.separable_by_construction())
        throw ArgumentError("lemma2_additive_value: sigma is not flagged separable");
    MeasureReport lhs = holevo_correlation(rho, measured, cfg);
    MeasureReport rhs = holevo_correlation(sigma_separable, measured, cfg);
    MeasureReport rep;
    rep.name = "lemma2-additive-value";
    rep.value = lhs.value + rhs.value;
    rep.bound_direction = BoundDirection::Lower;
    rep.certificate = lhs.certificate;
    rep.certificate_b = rhs.certificate;
    rep.diagnostics = lhs.diagnostics;
    rep.diagnostics.iters += rhs.diagnostics.iters;
    rep.diagnostics.restarts += rhs.diagnostics.restarts;
    rep.diagnostics.converged = lhs.diagnostics.converged && rhs.diagnostics.converged;
    return rep;
}

MeasureReport regularization_probe_n2(const DensityMatrix& rho, Side measured, const OptConfig& cfg) {
    require_bipartite(rho, "regularization_probe_n2");
    const long long doubled = static_cast<long long>(rho.dim()) * rho.dim();
    if (doubled > 64) throw CapacityError("regularization_probe_n2: two-copy dimension above 64");
    OptResult single = maximize_single(rho, measured, cfg);
    DensityMatrix two = tensor_bipartite(rho, rho);
    OptConfig cfg2 = cfg;
    cfg2.n_outcomes = 0;  // d^2 of the doubled measured side
    cfg2.seeds_in = {product_povm(single.certificate, single.certificate)};
    OptResult r2 = maximize_single(two, measured, cfg2);
    MeasureReport rep;
    rep.name = "regularization-probe-n2";
    rep.value = r2.value / 2.0;
    rep.bound_direction = BoundDirection::Lower;
    rep.certificate = r2.certificate;
    rep.diagnostics = from_opt(r2);
    return rep;
}

IrreversibilityReport irreversibility_bound(const PureState& psi, const std::vector<int>& party_a,
                                            const std::vector<int>& party_b,
                                            const std::vector<int>& party_c, const OptConfig& cfg,
                                            const BipartiteSplit* split) {
    DimCapGuard guard(psi.dim());  // psi already exists; its reductions only shrink
    DensityMatrix full = psi.to_density();
    std::vector<int> ac = party_a;
    ac.insert(ac.end(), party_c.begin(), party_c.end());
    DensityMatrix rho_ac_raw = partial_trace(full, ac);
    std::vector<int> loc_a(party_a.size()), loc_c(party_c.size());
    for (std::size_t i = 0; i < party_a.size(); ++i) loc_a[i] = static_cast<int>(i);
    for (std::size_t i = 0; i < party_c.size(); ++i) loc_c[i] = static_cast<int>(party_a.size() + i);
    DensityMatrix rho_ac = group_bipartite(rho_ac_raw, loc_a, loc_c);

    auto ent = marginal_entropies(rho_ac);
    const double smin_ac = std::min({ent.sa, ent.sb, ent.mi});

    // Best certified lower bound on the regularized Holevo correlation.
    double chbar = 0.0;
    Diagnostics diag;
    diag.closed_form = false;
    bool any_estimator = false;
    if (split) {
        // pure factor: all classical-correlation measures equal the marginal entropy
        const double pure_val = von_neumann_entropy(partial_trace(split->pure_part, {0}));
        MeasureReport sep = holevo_correlation(split->sep_part, Side::B, cfg);
        chbar = std::max(chbar, pure_val + sep.value);
        diag = sep.diagnostics;
        any_estimator = true;
    }
    if (static_cast<long long>(rho_ac.dim()) * rho_ac.dim() <= 64) {
        MeasureReport probe = regularization_probe_n2(rho_ac, Side::B, cfg);
        chbar = std::max(chbar, probe.value);
        if (!any_estimator) diag = probe.diagnostics;
        any_estimator = true;
    }
    if (!any_estimator || rho_ac.dim() <= 16) {
        MeasureReport single = holevo_correlation(rho_ac, Side::B, cfg);
        chbar = std::max(chbar, single.value);
        if (!any_estimator) diag = single.diagnostics;
    }

    IrreversibilityReport out;
    out.s_min_ac = smin_ac;
    out.chbar_est = chbar;
    out.bound = smin_ac - chbar;
    out.discord_form = ent.mi - chbar;
    out.report.name = "irreversibility-bound";
    out.report.value = out.bound;
    out.report.bound_direction = BoundDirection::Upper;
    out.report.diagnostics = diag;
    return out;
}

ClSandwich cl_sandwich(const DensityMatrix& rho, const OptConfig& cfg_a, const OptConfig& cfg_b,
                       int sweeps) {
    require_bipartite(rho, "cl_sandwich");
    ClSandwich out;
    out.lower = symmetric_correlation(rho, cfg_a, cfg_b, sweeps);
    OptConfig cfg_h = cfg_a;
    if (out.lower.certificate) cfg_h.seeds_in.push_back(*out.lower.certificate);
    out.upper = holevo_correlation(rho, Side::A, cfg_h);
    out.upper.name = "cl-upper-holevo";
    out.lower.name = "cl-lower-symmetric";
    out.locked_width = out.upper.value - out.lower.value;
    return out;
}

}  // namespace qcorr
