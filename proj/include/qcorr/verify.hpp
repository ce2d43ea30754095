#pragma once

#include <string>

#include <json.hpp>

#include "qcorr/measures.hpp"

namespace qcorr {

enum class SuiteKind {
    Prop1,
    Prop3,
    Prop4,
    Prop5,
    Lemma2,
    SmSuperadd,
    PureCollapse,
    KoashiWinter,
    TrineGap,
};

std::string suite_name(SuiteKind kind);
SuiteKind suite_from_name(const std::string& name);

struct SuiteSpec {
    SuiteKind suite = SuiteKind::Prop1;
    int trials = 50;
    std::uint64_t seed = 1;
    std::vector<std::pair<int, int>> dims = {{2, 2}, {2, 3}, {3, 3}};
    // tolerance overrides
    double tol_chain = tol::chain;
    double tol_eq = 1e-3;       // optimizer-reached equalities
    double tol_kw = tol::kw;
    double tol_exact = tol::num;
    std::string dump_dir = "qcorr_failures";
    OptConfig opt;  // base optimizer settings for the suite's searches

    SuiteSpec() {
        opt.restarts = 6;
        opt.max_iters = 500;
    }
};

struct TrialFailure {
    std::uint64_t seed = 0;
    std::string state_file;
    nlohmann::json values;
    double margin = 0.0;
};

struct SuiteReport {
    std::string suite;
    int trials_run = 0;
    std::vector<TrialFailure> failures;
    double wall_time_s = 0.0;
    nlohmann::json extra;  // suite-specific margins and values

    bool passed() const { return failures.empty(); }
};

SuiteReport run_suite(const SuiteSpec& spec);

/// Re-runs the single-state check of `suite` on a dumped state file.
SuiteReport replay(const std::string& state_file, SuiteKind suite, const SuiteSpec& spec = {});

nlohmann::json suite_report_to_json(const SuiteReport& report);
std::string suite_report_table(const SuiteReport& report);

/// Best classical mutual information for the trine state over the projective
/// strategy family: basis measurement on the qutrit, Bloch-axis projective
/// measurement on the qubit swept at `grid_degrees` resolution.
double trine_projective_oracle(double grid_degrees = 1.0);

}  // namespace qcorr
