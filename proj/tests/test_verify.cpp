#include <doctest.h>

#include <filesystem>

#include "qcorr/io.hpp"
#include "qcorr/verify.hpp"

using namespace qcorr;

namespace {

SuiteSpec small_spec(SuiteKind kind, int trials, std::uint64_t seed) {
    SuiteSpec spec;
    spec.suite = kind;
    spec.trials = trials;
    spec.seed = seed;
    spec.dump_dir = (std::filesystem::temp_directory_path() / "qcorr_verify_test").string();
    return spec;
}

}  // namespace

TEST_CASE("suite names round trip") {
    for (SuiteKind k : {SuiteKind::Prop1, SuiteKind::Prop3, SuiteKind::Prop4, SuiteKind::Prop5,
                        SuiteKind::Lemma2, SuiteKind::SmSuperadd, SuiteKind::PureCollapse,
                        SuiteKind::KoashiWinter, SuiteKind::TrineGap})
        CHECK(suite_from_name(suite_name(k)) == k);
    CHECK_THROWS_AS(suite_from_name("nope"), ArgumentError);
}

TEST_CASE("chain suite smoke") {
    SuiteReport r = run_suite(small_spec(SuiteKind::Prop1, 3, 1));
    CHECK(r.passed());
    CHECK(r.trials_run == 3);
}

TEST_CASE("cq equality suite smoke") {
    SuiteReport r = run_suite(small_spec(SuiteKind::Prop3, 3, 1));
    CHECK(r.passed());
}

TEST_CASE("pure collapse suite smoke") {
    SuiteReport r = run_suite(small_spec(SuiteKind::PureCollapse, 3, 1));
    CHECK(r.passed());
}

TEST_CASE("separable additivity suite smoke") {
    SuiteReport r = run_suite(small_spec(SuiteKind::Lemma2, 2, 1));
    CHECK(r.passed());
}

TEST_CASE("tripartite residual suite smoke") {
    SuiteReport r = run_suite(small_spec(SuiteKind::KoashiWinter, 10, 1));
    CHECK(r.passed());
}

TEST_CASE("ensemble inequality suite smoke") {
    SuiteReport r = run_suite(small_spec(SuiteKind::Prop5, 25, 1));
    CHECK(r.passed());
}

TEST_CASE("entropy superadditivity suite records the strict gap") {
    SuiteReport r = run_suite(small_spec(SuiteKind::SmSuperadd, 10, 1));
    CHECK(r.passed());
    REQUIRE(r.extra.contains("strict_gap"));
    CHECK(r.extra["strict_gap"].get<double>() > 0.5);
}

TEST_CASE("report serialization matches the schema") {
    SuiteReport r = run_suite(small_spec(SuiteKind::Prop5, 5, 2));
    Json j = suite_report_to_json(r);
    CHECK(j.at("suite") == "prop5");
    CHECK(j.at("trials_run") == 5);
    CHECK(j.at("failures").is_array());
    std::string table = suite_report_table(r);
    CHECK(table.find("prop5") != std::string::npos);
}

TEST_CASE("projective oracle for the trine state at a coarse grid") {
    const double v = trine_projective_oracle(10.0);
    CHECK(v > 0.3);
    CHECK(v < 0.585);  // strictly below the povm optimum
}

TEST_CASE("replay re-checks a dumped state") {
    // fabricate a dump the way the suite would write one
    SuiteSpec spec = small_spec(SuiteKind::PureCollapse, 1, 5);
    std::filesystem::create_directories(spec.dump_dir);
    const std::uint64_t ts = derive_seed(spec.seed, 0);
    PureState psi = random_pure(DimSpec({2, 2}), ts);
    const std::string path = spec.dump_dir + "/replay_case.json";
    write_json_file(path, state_to_json(psi.to_density(), "pure-collapse;seed=" + std::to_string(ts)));
    SuiteReport r = replay(path, SuiteKind::PureCollapse, spec);
    CHECK(r.passed());
    CHECK(r.suite == "pure-collapse-replay");
    std::filesystem::remove_all(spec.dump_dir);
}
