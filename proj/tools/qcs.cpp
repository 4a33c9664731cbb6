#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qcs/bench/bench.hpp"
#include "qcs/lang/parser.hpp"
#include "qcs/report/report.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config_error = 2;
constexpr int exit_sim_abort = 3;

struct CommonOpts {
    std::string config_path;
    int64_t seed = -1;  // -1 = no override
    int n_inout = 0;    // 0 = no override
    std::string out_path;
    bool suite = false;
    int jobs = 0;
};

qcs::report::RunConfig load_config(const CommonOpts& opt) {
    qcs::report::RunConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = qcs::report::load_run_config_file(opt.config_path);
    } else {
        if (opt.seed < 0)
            throw qcs::report::ReportError("config: pass --config or an explicit --seed");
        cfg.machine = qcs::default_machine_config(cfg.bank_size);
        cfg.benchmarks = qcs::bench::default_suite();
    }
    if (opt.seed >= 0) cfg.seed = static_cast<uint64_t>(opt.seed);
    if (opt.suite) cfg.benchmarks = qcs::bench::default_suite();
    if (opt.n_inout > 0) cfg.benchmarks = qcs::bench::default_suite({opt.n_inout});
    if (opt.jobs > 0) cfg.jobs = opt.jobs;
    return cfg;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw qcs::report::ReportError("config: cannot write '" + path + "'");
    out << text;
}

int cmd_run(const CommonOpts& opt) {
    auto cfg = load_config(opt);
    auto rep = qcs::report::run_all(cfg);
    write_output(opt.out_path, qcs::report::suite_report_json(rep));
    return exit_ok;
}

int cmd_check(const std::string& program_path, const CommonOpts& opt) {
    std::ifstream in(program_path);
    if (!in) {
        std::cerr << "error: cannot open '" << program_path << "'\n";
        return exit_config_error;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    qcs::MachineConfig mc =
        opt.config_path.empty() ? qcs::default_machine_config() : [&] {
            auto cfg = qcs::report::load_run_config_file(opt.config_path);
            return cfg.machine;
        }();
    try {
        qcs::lang::check_program(qcs::lang::parse_program(buf.str()), mc);
    } catch (const qcs::lang::ParseError& e) {
        std::cerr << program_path << ":" << e.line << ":" << e.column << ": " << e.what() << "\n";
        return 1;
    } catch (const qcs::lang::CheckError& e) {
        std::cerr << program_path << ": " << e.what() << "\n";
        return 1;
    }
    return exit_ok;
}

int cmd_trace(const std::string& benchmark_id, const CommonOpts& opt) {
    auto cfg = load_config(opt);
    const qcs::bench::BenchmarkSpec* spec = nullptr;
    for (const auto& s : cfg.benchmarks)
        if (s.id() == benchmark_id) spec = &s;
    if (!spec)
        throw qcs::report::ReportError("config: unknown benchmark id '" + benchmark_id + "'");
    auto tr = qcs::report::run_benchmark_trace(cfg, *spec);
    write_output(opt.out_path, tr.to_jsonl());
    return exit_ok;
}

int cmd_list(const CommonOpts& opt) {
    std::vector<qcs::bench::BenchmarkSpec> specs;
    if (!opt.config_path.empty() || opt.seed >= 0) {
        specs = load_config(opt).benchmarks;
    } else {
        specs = qcs::bench::default_suite();
        if (opt.n_inout > 0) specs = qcs::bench::default_suite({opt.n_inout});
    }
    std::ostringstream out;
    for (const auto& s : specs) out << s.id() << "\n";
    write_output(opt.out_path, out.str());
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulse-controller co-simulation harness"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qcs::report::tool_version);

    CommonOpts opt;
    std::string program_path, benchmark_id;

    auto add_common = [&](CLI::App* sub, bool with_run_flags) {
        sub->add_option("--config", opt.config_path, "run configuration JSON");
        sub->add_option("--seed", opt.seed, "override the configured seed");
        sub->add_option("--out", opt.out_path, "output file (default stdout)");
        if (with_run_flags) {
            sub->add_option("--n-inout", opt.n_inout,
                            "run the default suite at one channel count");
            sub->add_flag("--suite", opt.suite, "run the full default suite");
            sub->add_option("--jobs", opt.jobs, "worker threads for benchmark runs");
        }
    };

    CLI::App* run = app.add_subcommand("run", "run benchmarks and scenarios, write a report");
    add_common(run, true);

    CLI::App* check = app.add_subcommand("check", "parse and validate a program");
    check->add_option("program", program_path, "program file")->required();
    check->add_option("--config", opt.config_path, "run configuration JSON");

    CLI::App* trace = app.add_subcommand("trace", "write one benchmark's event trace as JSONL");
    trace->add_option("benchmark", benchmark_id, "benchmark id from list-benchmarks")->required();
    add_common(trace, false);

    CLI::App* list = app.add_subcommand("list-benchmarks", "print benchmark ids");
    list->add_option("--config", opt.config_path, "run configuration JSON");
    list->add_option("--n-inout", opt.n_inout, "default suite at one channel count");
    list->add_option("--out", opt.out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? exit_config_error : exit_ok;
    }

    try {
        if (run->parsed()) return cmd_run(opt);
        if (check->parsed()) return cmd_check(program_path, opt);
        if (trace->parsed()) return cmd_trace(benchmark_id, opt);
        if (list->parsed()) return cmd_list(opt);
    } catch (const qcs::report::MaxLatencyExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_sim_abort;
    } catch (const qcs::sim::SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_sim_abort;
    } catch (const qcs::report::ReportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const qcs::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const qcs::bench::InvalidSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_sim_abort;
    }
    return exit_ok;
}
