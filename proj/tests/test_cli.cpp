#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CliResult run_cli(const std::string& args) {
    fs::path out = fs::temp_directory_path() / "qcs_cli_out.txt";
    fs::path err = fs::temp_directory_path() / "qcs_cli_err.txt";
    std::string cmd = std::string(QCS_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                      err.string();
    int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_config(const std::string& text) {
    fs::path p = fs::temp_directory_path() / "qcs_cli_config.json";
    std::ofstream(p) << text;
    return p;
}

// keep the fixture fast: a couple of benchmarks, no scenarios
const char* quick_config = R"({
  "seed": 5,
  "machine": {"bank_size": 4},
  "benchmarks": [
    {"family": "bm11", "variant": "single", "n_inout": 1},
    {"family": "bm12", "variant": "single", "n_inout": 1},
    {"family": "bm13", "kind": "amplitude", "variant": "aggregated", "n_inout": 3}
  ]
})";

std::string strip_wall(const std::string& report) {
    std::istringstream in(report);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("wall_seconds") == std::string::npos) out << line << "\n";
    return out.str();
}

}  // namespace

TEST_CASE("run writes a report and is reproducible modulo wall clock") {
    fs::path cfg = write_config(quick_config);
    fs::path rep = fs::temp_directory_path() / "qcs_cli_report.json";

    auto r1 = run_cli("run --config " + cfg.string() + " --out " + rep.string());
    CHECK(r1.exit_code == 0);
    std::string first = slurp(rep);
    CHECK(first.find("\"tool_version\"") != std::string::npos);
    CHECK(first.find("bm11/single/n1") != std::string::npos);
    CHECK(first.find("bm13/amplitude/aggregated/n3") != std::string::npos);
    CHECK(first.find("\"wall_seconds\"") != std::string::npos);

    auto r2 = run_cli("run --config " + cfg.string() + " --out " + rep.string());
    CHECK(r2.exit_code == 0);
    CHECK(strip_wall(first) == strip_wall(slurp(rep)));

    // a different seed changes the hash inside the report
    auto r3 = run_cli("run --config " + cfg.string() + " --seed 6 --out " + rep.string());
    CHECK(r3.exit_code == 0);
    CHECK(strip_wall(first) != strip_wall(slurp(rep)));
}

TEST_CASE("run error paths map to exit codes") {
    auto missing = run_cli("run --config /no/such/config.json");
    CHECK(missing.exit_code == 2);
    CHECK(missing.err.find("cannot open") != std::string::npos);

    fs::path bad = write_config(R"({"jobs": 2})");
    CHECK(run_cli("run --config " + bad.string()).exit_code == 2);

    fs::path tight = write_config(R"({
      "seed": 5,
      "max_latency": 10,
      "benchmarks": [{"family": "bm11", "variant": "single", "n_inout": 1}]
    })");
    auto over = run_cli("run --config " + tight.string());
    CHECK(over.exit_code == 3);
    CHECK(over.err.find("bm11/single/n1") != std::string::npos);

    CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("check validates programs") {
    fs::path corpus = fs::path(QCS_CORPUS_DIR);
    CHECK(run_cli("check " + (corpus / "bm11_single.qcl").string()).exit_code == 0);
    CHECK(run_cli("check /no/such/file.qcl").exit_code == 2);

    fs::path nested = fs::temp_directory_path() / "qcs_cli_nested.qcl";
    std::ofstream(nested) << "strict_timing:\n    strict_timing:\n        play(pi, qubit)\n";
    auto r = run_cli("check " + nested.string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("nested") != std::string::npos);
}

TEST_CASE("trace emits one JSON object per line") {
    fs::path cfg = write_config(quick_config);
    fs::path out = fs::temp_directory_path() / "qcs_cli_trace.jsonl";
    auto r = run_cli("trace bm11/single/n1 --config " + cfg.string() + " --out " + out.string());
    CHECK(r.exit_code == 0);
    std::istringstream in(slurp(out));
    std::string line;
    int lines = 0;
    bool readout_start = false;
    while (std::getline(in, line)) {
        ++lines;
        CHECK(line.front() == '{');
        CHECK(line.back() == '}');
        if (line.find("output_sample_start") != std::string::npos &&
            line.find("readout_element") != std::string::npos &&
            line.find("\"tick\":0") != std::string::npos)
            readout_start = true;
    }
    CHECK(lines > 3);
    CHECK(readout_start);

    CHECK(run_cli("trace bm99/na --config " + cfg.string()).exit_code == 2);
}

TEST_CASE("list-benchmarks prints ids") {
    auto all = run_cli("list-benchmarks");
    CHECK(all.exit_code == 0);
    CHECK(all.out.find("bm11/single/n1\n") != std::string::npos);
    CHECK(all.out.find("bm21/frequency/dense/n10x10\n") != std::string::npos);

    fs::path cfg = write_config(quick_config);
    auto from_cfg = run_cli("list-benchmarks --config " + cfg.string());
    CHECK(from_cfg.exit_code == 0);
    CHECK(from_cfg.out ==
          "bm11/single/n1\nbm12/single/n1\nbm13/amplitude/aggregated/n3\n");
}
