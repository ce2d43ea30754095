// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "qcorr/verify.hpp"

using namespace qcorr;

namespace {

int g_failures = 0;

void report(int idx, const std::string& what, bool ok, const std::string& detail) {
    std::printf("criterion %d [%s]: %s (%s)\n", idx, ok ? "PASS" : "FAIL", what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

OptConfig accept_cfg(std::uint64_t seed) {
    OptConfig cfg;
    cfg.restarts = 6;
    cfg.max_iters = 500;
    cfg.seed = seed;
    return cfg;
}

void criterion1_seven_qubit_example() {
    const auto t0 = std::chrono::steady_clock::now();
    DensityMatrix ac = ghz_epr_psi_rho_ac();
    const double sm = s_min(ac).value;
    const bool sm_ok = std::abs(sm - 2.0) <= 1e-9;

    OptConfig cfg = accept_cfg(1);
    MeasureReport ch = holevo_correlation(ac, Side::B, cfg);
    const bool ch_ok = ch.value >= 2.0 - 1e-3 && ch.value <= 2.0 + 1e-9;

    PureState psi = make_ghz_epr_psi();
    BipartiteSplit split = ghz_epr_psi_ac_split();
    auto irr = irreversibility_bound(psi, {0, 1, 2}, {3, 4}, {5, 6}, cfg, &split);
    const bool qd_ok = std::abs(irr.discord_form - 1.0) <= 1e-3;

    char buf[160];
    std::snprintf(buf, sizeof(buf), "s_min=%.10f holevo_C=%.6f reg_discord=%.6f in %.1fs", sm,
                  ch.value, irr.discord_form, elapsed_s(t0));
    report(1, "seven-qubit example: s_min=2, holevo(measure C)=2, regularized discord=1",
           sm_ok && ch_ok && qd_ok, buf);
}

void criterion2_nine_qubit_example() {
    const auto t0 = std::chrono::steady_clock::now();
    DensityMatrix ac = ghz_epr_phi_rho_ac();
    const double sm = s_min(ac).value;
    const bool sm_ok = std::abs(sm - 3.0) <= 1e-9;

    OptConfig cfg = accept_cfg(1);
    PureState phi = make_ghz_epr_phi();
    BipartiteSplit split = ghz_epr_phi_ac_split();
    auto irr = irreversibility_bound(phi, {0, 1, 2}, {3, 4, 5}, {6, 7, 8}, cfg, &split);
    const bool ch_ok = std::abs(irr.chbar_est - 2.0) <= 1e-3;
    const bool bound_ok = std::abs(irr.bound - 1.0) <= 1e-3;
    // known entanglement cost and distillable entanglement of the AB marginal:
    // one EPR pair crosses the AB cut each way, so both equal 1 and the
    // irreversibility gap is 0 -- strictly below the reported upper bound
    const double e_cost = 1.0, e_dist = 1.0;
    const bool not_tight = irr.bound > (e_cost - e_dist) + 0.5;

    char buf[160];
    std::snprintf(buf, sizeof(buf), "s_min=%.10f chbar=%.6f bound=%.6f E_C=E_D=1 in %.1fs", sm,
                  irr.chbar_est, irr.bound, elapsed_s(t0));
    report(2, "nine-qubit example: s_min=3, additive-shortcut holevo=2, loose bound=1",
           sm_ok && ch_ok && bound_ok && not_tight, buf);
}

void criterion3_tripartite_residual() {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteSpec spec;
    spec.suite = SuiteKind::KoashiWinter;
    spec.trials = 200;
    spec.seed = 1;
    SuiteReport r = run_suite(spec);
    const double dt = elapsed_s(t0);
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%d trials, %zu failures, %.1fs", r.trials_run,
                  r.failures.size(), dt);
    report(3, "entanglement/classical-correlation residual on 200 random tripartite pure states",
           r.passed() && dt < 600.0, buf);
}

void criterion4_trine_advantage() {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteSpec spec;
    spec.suite = SuiteKind::TrineGap;
    spec.seed = 1;
    spec.trials = 1;
    SuiteReport r = run_suite(spec);
    const double margin = r.extra.value("margin", -1.0);
    const double povm_value = r.extra.value("povm_value", 0.0);

    // equality of the symmetric and one-sided values on this classical-quantum state
    DensityMatrix trine = make_trine();
    OptConfig cfg_a = accept_cfg(1);
    cfg_a.mode = OptMode::Projective;
    OptConfig cfg_b = accept_cfg(1);
    cfg_b.n_outcomes = 4;
    MeasureReport c = symmetric_correlation(trine, cfg_a, cfg_b, 4);
    OptConfig cfg_h = cfg_b;
    if (c.certificate_b) cfg_h.seeds_in.push_back(*c.certificate_b);
    MeasureReport ch_b = holevo_correlation(trine, Side::B, cfg_h);
    const bool eq_ok = std::abs(c.value - ch_b.value) <= 1e-3;

    char buf[160];
    std::snprintf(buf, sizeof(buf), "povm=%.6f gap=%.6f |C-Ch_B|=%.2e in %.1fs", povm_value,
                  margin, std::abs(c.value - ch_b.value), elapsed_s(t0));
    report(4, "trine state: povm beats the projective grid oracle by >= 0.01 bits",
           r.passed() && margin >= 0.01 && eq_ok, buf);
}

void criterion5_theorem_suites() {
    struct Job {
        SuiteKind suite;
        int trials;
    };
    const Job jobs[] = {
        {SuiteKind::Prop1, 50},      {SuiteKind::Prop5, 500},  {SuiteKind::SmSuperadd, 200},
        {SuiteKind::Lemma2, 10},     {SuiteKind::PureCollapse, 50}, {SuiteKind::Prop3, 20},
    };
    const auto t0 = std::chrono::steady_clock::now();
    bool all_ok = true;
    std::string detail;
    for (const Job& job : jobs) {
        for (std::uint64_t seed : {1ull, 7ull, 42ull}) {
            SuiteSpec spec;
            spec.suite = job.suite;
            spec.trials = job.trials;
            spec.seed = seed;
            SuiteReport r = run_suite(spec);
            if (!r.passed()) {
                all_ok = false;
                detail += suite_name(job.suite) + "@" + std::to_string(seed) + ":" +
                          std::to_string(r.failures.size()) + "fails ";
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%sall suites x seeds {1,7,42} in %.1fs", detail.c_str(),
                  elapsed_s(t0));
    report(5, "theorem suites pass with zero failures at three seeds", all_ok, buf);
}

void criterion6_outcome_sufficiency() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
        const std::uint64_t ts = derive_seed(6, static_cast<std::uint64_t>(t));
        DensityMatrix rho = random_density(DimSpec({2, 2}), 4, ts);
        OptConfig cfg4 = accept_cfg(ts);
        cfg4.n_outcomes = 4;
        MeasureReport r4 = holevo_correlation(rho, Side::A, cfg4);
        OptConfig cfg8 = accept_cfg(ts);
        cfg8.n_outcomes = 8;
        if (r4.certificate) cfg8.seeds_in.push_back(*r4.certificate);
        MeasureReport r8 = holevo_correlation(rho, Side::A, cfg8);
        const double gap = std::abs(r8.value - r4.value);
        worst = std::max(worst, gap);
        if (gap > 1e-4) ok = false;
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "worst |v8-v4| = %.2e over 100 states in %.1fs", worst,
                  elapsed_s(t0));
    report(6, "four measurement outcomes suffice for qubit-side extraction", ok, buf);
}

void criterion7_scope_statement() {
    report(7,
           "out of desk-scale scope: exact two-sided classical correlation, exact entanglement "
           "cost/distillation for generic states, and true many-copy regularized limits; only the "
           "certified sandwich and bound reports cover these",
           true, "statement");
}

}  // namespace

int main() {
    criterion1_seven_qubit_example();
    criterion2_nine_qubit_example();
    criterion3_tripartite_residual();
    criterion4_trine_advantage();
    criterion5_theorem_suites();
    criterion6_outcome_sufficiency();
    criterion7_scope_statement();
    if (g_failures > 0) {
        std::printf("acceptance: %d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("acceptance: all criteria passed\n");
    return 0;
}
