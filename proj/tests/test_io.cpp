#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "qcorr/io.hpp"

using namespace qcorr;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "qcorr_io_test";
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("density matrix json round trip is entrywise exact") {
    DensityMatrix rho = random_density(DimSpec({2, 3}), 4, 41);
    Json j = state_to_json(rho, "round-trip");
    DensityMatrix back = density_from_json(j);
    CHECK((back.entries() - rho.entries()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(back.dim_spec().dims == rho.dim_spec().dims);
    CHECK(j.at("label") == "round-trip");
}

TEST_CASE("pure state json round trip") {
    PureState psi = random_pure(DimSpec({2, 2}), 43);
    Json j = state_to_json(psi);
    CHECK(json_is_pure_state(j));
    PureState back = pure_from_json(j);
    CHECK((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() <= 1e-15);
    // a pure-state file also loads as a density matrix
    DensityMatrix rho = density_from_json(j);
    CHECK((rho.entries() - psi.to_density().entries()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("povm json round trip") {
    Povm p = Povm::computational_projective(3);
    Povm back = povm_from_json(povm_to_json(p));
    back.validate();
    for (std::size_t i = 0; i < 3; ++i) CHECK((back.effects[i] - p.effects[i]).norm() <= 1e-15);
}

TEST_CASE("file io and parse errors") {
    TempDir tmp;
    Json j = state_to_json(cc_state());
    write_json_file(tmp.file("cc.json"), j);
    Json back = read_json_file(tmp.file("cc.json"));
    CHECK(back == j);
    CHECK_THROWS_AS(read_json_file(tmp.file("missing.json")), IoError);
    {
        std::FILE* f = std::fopen(tmp.file("bad.json").c_str(), "w");
        std::fputs("{not json", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(read_json_file(tmp.file("bad.json")), IoError);
    CHECK_THROWS_AS(density_from_json(Json{{"dims", {2, 2}}}), IoError);
}

TEST_CASE("measure report serialization") {
    MeasureReport rep;
    rep.name = "holevo-correlation";
    rep.value = 1.25;
    rep.bound_direction = BoundDirection::Lower;
    rep.diagnostics.closed_form = false;
    rep.diagnostics.restarts = 5;
    rep.diagnostics.converged = true;
    rep.diagnostics.iters = 40;
    Json j = measure_report_to_json(rep, "cert.json");
    CHECK(j.at("bound_direction") == "lower");
    CHECK(j.at("certificate_file") == "cert.json");
    CHECK(j.at("diagnostics").at("kind") == "optimizer");
    CHECK(j.at("diagnostics").at("restarts") == 5);

    MeasureReport exact;
    exact.name = "mutual-information";
    Json je = measure_report_to_json(exact);
    CHECK(je.at("diagnostics").at("kind") == "closed-form");
    CHECK(!je.contains("certificate_file"));
}

TEST_CASE("opt config parsing rejects unknown keys") {
    Json j{{"restarts", 3}, {"mode", "projective"}, {"sweeps", 4}};
    OptConfig cfg = opt_config_from_json(j);
    CHECK(cfg.restarts == 3);
    CHECK(cfg.mode == OptMode::Projective);
    CHECK(sweeps_from_json(j) == 4);
    CHECK(sweeps_from_json(Json::object(), 6) == 6);
    CHECK_THROWS_AS(opt_config_from_json(Json{{"restart", 3}}), IoError);
    CHECK_THROWS_AS(opt_config_from_json(Json{{"mode", "magic"}}), IoError);
}

TEST_CASE("schema validation subset") {
    Json schema{{"type", "object"},
                {"required", {"dims"}},
                {"properties", {{"dims", {{"type", "array"}, {"items", {{"type", "integer"}}}}}}}};
    CHECK(validate_against_schema(Json{{"dims", {2, 2}}}, schema).empty());
    CHECK(!validate_against_schema(Json{{"other", 1}}, schema).empty());
    CHECK(!validate_against_schema(Json{{"dims", {2, "x"}}}, schema).empty());

    Json enum_schema{{"enum", {"lower", "upper", "exact"}}};
    CHECK(validate_against_schema(Json("lower"), enum_schema).empty());
    CHECK(!validate_against_schema(Json("sideways"), enum_schema).empty());
}

TEST_CASE("emitted artifacts validate against the shipped schemas") {
    Json state_schema = read_json_file(std::string(QCORR_SCHEMA_DIR) + "/state.schema.json");
    CHECK(validate_against_schema(state_to_json(cc_state()), state_schema).empty());
    CHECK(validate_against_schema(state_to_json(epr_state()), state_schema).empty());

    Json povm_schema = read_json_file(std::string(QCORR_SCHEMA_DIR) + "/povm.schema.json");
    CHECK(validate_against_schema(povm_to_json(Povm::computational_projective(2)), povm_schema)
              .empty());

    Json report_schema = read_json_file(std::string(QCORR_SCHEMA_DIR) + "/measure_report.schema.json");
    CHECK(validate_against_schema(measure_report_to_json(mutual_information(cc_state())),
                                  report_schema)
              .empty());
}
