#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "qcorr/io.hpp"

using namespace qcorr;

namespace {

const std::string kCli = QCORR_CLI_PATH;

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "qcorr_cli_test";
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const int rc = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("") == 2);
    CHECK(run("compute") == 2);                        // missing required flags
    CHECK(run("compute --state x --measure nope") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("--help") == 0);
}

TEST_CASE("examples, info and compute round trip through files") {
    TempDir tmp;
    CHECK(run("examples --name epr --out " + tmp.path.string()) == 0);
    REQUIRE(std::filesystem::exists(tmp.file("epr.json")));
    REQUIRE(std::filesystem::exists(tmp.file("epr.expected.json")));

    Json expected = read_json_file(tmp.file("epr.expected.json"));
    CHECK(expected.at("name") == "epr");
    CHECK(!expected.at("values").empty());
    for (const Json& v : expected.at("values")) {
        CHECK(v.contains("quantity"));
        CHECK((v.at("source") == "analytic" || v.at("source") == "computed"));
    }

    CHECK(run("info --state " + tmp.file("epr.json")) == 0);
    CHECK(run("compute --state " + tmp.file("epr.json") + " --measure mutual-information") == 0);
    CHECK(run("compute --state " + tmp.file("epr.json") +
              " --measure holevo --measured A --certificate " + tmp.file("cert.json")) == 0);
    REQUIRE(std::filesystem::exists(tmp.file("cert.json")));
    Povm cert = povm_from_json(read_json_file(tmp.file("cert.json")));
    cert.validate();

    CHECK(run("examples --name no-such-example --out " + tmp.path.string()) == 2);
}

TEST_CASE("measured side C aliases the second party") {
    TempDir tmp;
    CHECK(run("examples --name ghz-epr-psi --out " + tmp.path.string()) == 0);
    REQUIRE(std::filesystem::exists(tmp.file("ghz-epr-psi_AC.json")));
    write_json_file(tmp.file("cfg.json"),
                    Json{{"restarts", 1}, {"max_iters", 100}, {"mode", "projective"}});
    CHECK(run("compute --state " + tmp.file("ghz-epr-psi_AC.json") +
              " --measure holevo --measured C --config " + tmp.file("cfg.json")) == 0);
    CHECK(run("compute --state " + tmp.file("ghz-epr-psi_AC.json") +
              " --measure holevo --measured D") == 2);
}

TEST_CASE("bad state files exit with code 2") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("broken.json"));
        out << "{\"dims\": [2, 2]}";
    }
    CHECK(run("compute --state " + tmp.file("broken.json") + " --measure mutual-information") == 2);
    CHECK(run("compute --state " + tmp.file("absent.json") + " --measure mutual-information") == 2);
}

TEST_CASE("capacity violations exit with code 3") {
    TempDir tmp;
    Json j;
    j["dims"] = Json::array({32, 32});  // 1024 > default cap
    j["matrix"] = Json::array();
    write_json_file(tmp.file("huge.json"), j);
    CHECK(run("compute --state " + tmp.file("huge.json") + " --measure s-min") == 3);
}

TEST_CASE("verify subcommand exits 0 on pass and writes a schema-valid report") {
    TempDir tmp;
    CHECK(run("verify --suite prop5 --trials 10 --seed 1 --report " + tmp.file("report.json")) == 0);
    Json report = read_json_file(tmp.file("report.json"));
    Json schema = read_json_file(std::string(QCORR_SCHEMA_DIR) + "/suite_report.schema.json");
    CHECK(validate_against_schema(report, schema).empty());
    CHECK(report.at("trials_run") == 10);
}

TEST_CASE("compute with a config file and thread cap") {
    TempDir tmp;
    CHECK(run("examples --name cc --out " + tmp.path.string()) == 0);
    write_json_file(tmp.file("cfg.json"),
                    Json{{"restarts", 2}, {"max_iters", 150}, {"mode", "projective"}});
    CHECK(run("--threads 1 compute --state " + tmp.file("cc.json") +
              " --measure holevo --config " + tmp.file("cfg.json")) == 0);
    CHECK(run("compute --state " + tmp.file("cc.json") + " --measure holevo --config " +
              tmp.file("cfg.json") + " --mode bogus") == 2);
    // unknown config key
    write_json_file(tmp.file("bad_cfg.json"), Json{{"restartz", 2}});
    CHECK(run("compute --state " + tmp.file("cc.json") + " --measure holevo --config " +
              tmp.file("bad_cfg.json")) == 2);
}
