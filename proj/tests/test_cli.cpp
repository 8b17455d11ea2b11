#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "cli_app.hpp"
#include "fms/common.hpp"

using namespace fms::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path("cli_test_out") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json read_json(const fs::path& path) { return json::parse(slurp(path)); }

fs::path write_config(const fs::path& dir, const json& config) {
    const fs::path path = dir / "config.json";
    std::ofstream out(path, std::ios::binary);
    out << config.dump(2) << "\n";
    return path;
}

json banach_solve_config() {
    return json{
        {"space", {{"kind", "md"}, {"metric", "euclidean"}}},
        {"tnorm", "product"},
        {"relation", {{"kind", "trivial"}}},
        {"theta", {{"kind", "banach"}, {"lambda", "0.5"}}},
        {"map", {{"kind", "banach_ln"}, {"lambda", "0.5"}}},
        {"x0", "1"},
        {"options", {{"max_iterations", "100"}, {"tolerance", "1e-8"}}},
    };
}

}  // namespace

TEST_CASE("verify-space: canonical space passes, exit 0") {
    const auto dir = fresh_dir("vs_pass");
    const auto cfg = write_config(dir, json{
        {"space", {{"kind", "md"}, {"metric", "euclidean"}}},
        {"tnorm", "product"},
        {"axioms", {"km1", "km2", "km3", "km4", "km5", "monotone_in_t", "non_archimedean"}},
        {"points", {{"kind", "list"}, {"values", {"0", "1", "2", "3.5"}}}},
    });
    const int code = run({"verify-space", "--config", cfg.string(), "--out", dir.string()});
    CHECK(code == kExitSuccess);
    const json report = read_json(dir / "verify_space.json");
    CHECK(report["all_passed"] == true);
    CHECK(report["command"] == "verify-space");
}

TEST_CASE("verify-space: minimum norm breaks the single-time triangle, exit 2 with witness") {
    const auto dir = fresh_dir("vs_fail");
    const auto cfg = write_config(dir, json{
        {"space", {{"kind", "md"}, {"metric", "euclidean"}}},
        {"tnorm", "minimum"},
        {"axioms", {"non_archimedean"}},
        {"points", {{"kind", "list"}, {"values", {"0", "1", "2"}}}},
    });
    const int code = run({"verify-space", "--config", cfg.string(), "--out", dir.string()});
    CHECK(code == kExitFailure);
    const json report = read_json(dir / "verify_space.json");
    CHECK(report["all_passed"] == false);
    CHECK(report["reports"][0]["verdict"] == "fail");
    CHECK(report["reports"][0].contains("witness"));
}

TEST_CASE("verify-space: malformed descriptor exits 4 and writes nothing") {
    const auto dir = fresh_dir("vs_bad");
    const auto cfg = write_config(dir, json{
        {"space", {{"kind", "nonexistent_space"}}},
        {"tnorm", "product"},
    });
    const int code = run({"verify-space", "--config", cfg.string(), "--out", dir.string()});
    CHECK(code == kExitConfigError);
    CHECK_FALSE(fs::exists(dir / "verify_space.json"));
}

TEST_CASE("verify-tnorm: product passes, drastic fails boundary continuity") {
    const auto dir = fresh_dir("vt");
    const auto good = write_config(dir, json{{"tnorm", "product"}});
    CHECK(run({"verify-tnorm", "--config", good.string(), "--out", dir.string()}) == kExitSuccess);
    const json pass_report = read_json(dir / "verify_tnorm.json");
    CHECK(pass_report["all_passed"] == true);
    CHECK(pass_report["order"]["above_drastic"] == true);

    const auto dir2 = fresh_dir("vt_drastic");
    const auto bad = write_config(dir2, json{{"tnorm", "drastic"}});
    CHECK(run({"verify-tnorm", "--config", bad.string(), "--out", dir2.string()}) == kExitFailure);
    const json fail_report = read_json(dir2 / "verify_tnorm.json");
    CHECK(fail_report["boundary_continuity"]["holds"] == false);
    CHECK(fail_report["boundary_continuity"].contains("witness_s"));
    // the sampling used is reported next to the verdict
    CHECK(fail_report["boundary_continuity"].contains("n_max"));
}

TEST_CASE("solve: banach instance exits 0 with a near-zero fixed point and a trace") {
    const auto dir = fresh_dir("solve_ok");
    const auto cfg = write_config(dir, banach_solve_config());
    const int code = run({"solve", "--config", cfg.string(), "--out", dir.string()});
    CHECK(code == kExitSuccess);
    const json report = read_json(dir / "solve.json");
    CHECK(report["outcome"] == "fixed_point");
    CHECK(std::abs(fms::parse_double(report["fixed_point"].get<std::string>())) < 1e-8);
    const std::string trace = slurp(dir / "trace.csv");
    CHECK(trace.rfind("n,x_n,", 0) == 0);
}

TEST_CASE("solve: identity map is a hypothesis violation, exit 2") {
    const auto dir = fresh_dir("solve_identity");
    json cfg_json = banach_solve_config();
    cfg_json["map"] = json{{"kind", "identity"}};
    const auto cfg = write_config(dir, cfg_json);
    const int code = run({"solve", "--config", cfg.string(), "--out", dir.string()});
    CHECK(code == kExitFailure);
    const json report = read_json(dir / "solve.json");
    CHECK(report["outcome"] == "hypothesis_violation");
    CHECK(report["violated_hypothesis"] == "F4");
}

TEST_CASE("solve: tiny budget exits 3 nonconvergent") {
    const auto dir = fresh_dir("solve_budget");
    const auto cfg = write_config(dir, banach_solve_config());
    const int code = run({"solve", "--config", cfg.string(), "--out", dir.string(), "--max-iter", "3"});
    CHECK(code == kExitNoResult);
    const json report = read_json(dir / "solve.json");
    CHECK(report["outcome"] == "nonconvergent");
}

TEST_CASE("solve: uniqueness probe is embedded when requested") {
    const auto dir = fresh_dir("solve_probe");
    json cfg_json = banach_solve_config();
    cfg_json["uniqueness"] = json{{"fp_a", "0"}, {"fp_b", "0"}, {"bridge", "3"}};
    const auto cfg = write_config(dir, cfg_json);
    const int code = run({"solve", "--config", cfg.string(), "--out", dir.string()});
    CHECK(code == kExitSuccess);
    const json report = read_json(dir / "solve.json");
    REQUIRE(report.contains("uniqueness"));
    CHECK(report["uniqueness"]["unique_supported"] == true);
    CHECK(report["uniqueness"]["toward_a"]["converged"] == true);
}

TEST_CASE("nc-demo: harmonic sums produce a verified witness, exit 0") {
    const auto dir = fresh_dir("nc_ok");
    const auto cfg = write_config(dir, json{
        {"space", {{"kind", "md"}, {"metric", "euclidean"}}},
        {"sequence", {{"kind", "harmonic_sums"}, {"n_terms", "2000"}}},
    });
    const int code = run({"nc-demo", "--config", cfg.string(), "--out", dir.string()});
    CHECK(code == kExitSuccess);
    const json report = read_json(dir / "nc.json");
    CHECK(report["found"] == true);
    CHECK(report["invariants_verified"] == true);
    const std::string csv = slurp(dir / "nc_witness.csv");
    CHECK(csv.rfind("k,n_k,m_k,M_outer,M_inner,residual_outer,residual_inner\n", 0) == 0);
}

TEST_CASE("nc-demo: a Cauchy orbit is rejected naming the precondition, exit 2") {
    const auto dir = fresh_dir("nc_cauchy");
    const auto cfg = write_config(dir, json{
        {"space", {{"kind", "md"}, {"metric", "euclidean"}}},
        {"sequence",
         {{"kind", "picard"},
          {"map", {{"kind", "banach_ln"}, {"lambda", "0.5"}}},
          {"x0", "1"},
          {"n_terms", "100"}}},
    });
    const int code = run({"nc-demo", "--config", cfg.string(), "--out", dir.string()});
    CHECK(code == kExitFailure);
    const json report = read_json(dir / "nc.json");
    const std::string error = report["error"].get<std::string>();
    CHECK(error.find("not Cauchy") != std::string::npos);
}

TEST_CASE("nc-demo: an irregular sequence is rejected naming the check, exit 2") {
    const auto dir = fresh_dir("nc_irregular");
    const auto cfg = write_config(dir, json{
        {"space", {{"kind", "md"}, {"metric", "euclidean"}}},
        {"sequence", {{"kind", "arithmetic"}, {"step", "1"}, {"n_terms", "200"}}},
    });
    const int code = run({"nc-demo", "--config", cfg.string(), "--out", dir.string()});
    CHECK(code == kExitFailure);
    const json report = read_json(dir / "nc.json");
    CHECK(report["error"].get<std::string>().find("regularity") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical reports and CSVs") {
    const auto dir_a = fresh_dir("det_a");
    const auto dir_b = fresh_dir("det_b");
    const auto cfg_a = write_config(dir_a, banach_solve_config());
    const auto cfg_b = write_config(dir_b, banach_solve_config());
    REQUIRE(run({"solve", "--config", cfg_a.string(), "--out", dir_a.string()}) == kExitSuccess);
    REQUIRE(run({"solve", "--config", cfg_b.string(), "--out", dir_b.string()}) == kExitSuccess);
    CHECK(slurp(dir_a / "solve.json") == slurp(dir_b / "solve.json"));
    CHECK(slurp(dir_a / "trace.csv") == slurp(dir_b / "trace.csv"));

    const auto nc_cfg = json{
        {"space", {{"kind", "md"}, {"metric", "euclidean"}}},
        {"sequence", {{"kind", "harmonic_sums"}, {"n_terms", "1000"}}},
    };
    const auto dir_c = fresh_dir("det_c");
    const auto dir_d = fresh_dir("det_d");
    REQUIRE(run({"nc-demo", "--config", write_config(dir_c, nc_cfg).string(), "--out",
                 dir_c.string()}) == kExitSuccess);
    REQUIRE(run({"nc-demo", "--config", write_config(dir_d, nc_cfg).string(), "--out",
                 dir_d.string()}) == kExitSuccess);
    CHECK(slurp(dir_c / "nc_witness.csv") == slurp(dir_d / "nc_witness.csv"));
}

TEST_CASE("report: batch run with isolated outputs and aggregated exit code") {
    const auto dir = fresh_dir("batch");
    json solve_entry = banach_solve_config();
    solve_entry["name"] = "banach";
    solve_entry["command"] = "solve";
    json verify_entry = json{
        {"name", "md_product"},
        {"command", "verify-space"},
        {"space", {{"kind", "md"}, {"metric", "euclidean"}}},
        {"tnorm", "product"},
        {"points", {{"kind", "list"}, {"values", {"0", "1", "2"}}}},
    };
    const auto cfg = write_config(dir, json{{"experiments", json::array({solve_entry, verify_entry})}});
    const int code = run({"report", "--config", cfg.string(), "--out", dir.string()});
    CHECK(code == kExitSuccess);
    const json summary = read_json(dir / "report.json");
    CHECK(summary["experiments"].size() == 2);
    CHECK(fs::exists(dir / "banach" / "solve.json"));
    CHECK(fs::exists(dir / "md_product" / "verify_space.json"));

    // a failing member dominates the batch exit code
    json failing = verify_entry;
    failing["name"] = "md_minimum_na";
    failing["tnorm"] = "minimum";
    failing["axioms"] = json::array({"non_archimedean"});
    const auto dir2 = fresh_dir("batch_fail");
    const auto cfg2 = write_config(
        dir2, json{{"experiments", json::array({solve_entry, verify_entry, failing})}});
    CHECK(run({"report", "--config", cfg2.string(), "--out", dir2.string()}) == kExitFailure);
}

TEST_CASE("config errors: missing file and missing subcommand") {
    CHECK(run({"solve", "--config", "does_not_exist.json"}) == kExitConfigError);
    CHECK(run({}) == kExitConfigError);
    CHECK(run({"frobnicate"}) == kExitConfigError);
}
