#include "qcs/report/report.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qcs::report {

using nlohmann::json;
using nlohmann::ordered_json;

const char* const tool_version = "0.1.0";

// ---------------------------------------------------------------------------
// Config parsing

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ReportError("config: " + msg); }

void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const auto& k : allowed)
            if (it.key() == k) known = true;
        if (!known) fail("unknown key '" + it.key() + "' in " + where);
    }
}

int64_t get_int(const json& obj, const std::string& key, int64_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) fail("'" + key + "' must be an integer");
    return obj[key].get<int64_t>();
}

double get_double(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail("'" + key + "' must be a number");
    return obj[key].get<double>();
}

bool get_bool(const json& obj, const std::string& key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) fail("'" + key + "' must be a boolean");
    return obj[key].get<bool>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) fail("'" + key + "' must be a string");
    return obj[key].get<std::string>();
}

template <typename E>
E parse_enum(const std::string& text, const std::vector<std::pair<const char*, E>>& table,
             const std::string& what) {
    for (const auto& [name, value] : table)
        if (text == name) return value;
    fail("unknown " + what + " '" + text + "'");
}

bench::Family parse_family(const std::string& s) {
    return parse_enum<bench::Family>(s,
                                     {{"bm11", bench::Family::bm11},
                                      {"bm12", bench::Family::bm12},
                                      {"bm13", bench::Family::bm13},
                                      {"bm21", bench::Family::bm21}},
                                     "family");
}

bench::Variant parse_variant(const std::string& s) {
    return parse_enum<bench::Variant>(s,
                                      {{"single", bench::Variant::single},
                                       {"distributed", bench::Variant::distributed},
                                       {"aggregated", bench::Variant::aggregated},
                                       {"aggregated_int", bench::Variant::aggregated_int}},
                                      "variant");
}

bench::Bm13Kind parse_bm13_kind(const std::string& s) {
    return parse_enum<bench::Bm13Kind>(s,
                                       {{"frame_lut", bench::Bm13Kind::frame_lut},
                                        {"binary_rep", bench::Bm13Kind::binary_rep},
                                        {"frequency", bench::Bm13Kind::frequency},
                                        {"amplitude", bench::Bm13Kind::amplitude},
                                        {"threshold", bench::Bm13Kind::threshold}},
                                       "parameter kind");
}

bench::Bm21Param parse_bm21_param(const std::string& s) {
    return parse_enum<bench::Bm21Param>(s,
                                        {{"frequency", bench::Bm21Param::frequency},
                                         {"amplitude", bench::Bm21Param::amplitude},
                                         {"dc_offset", bench::Bm21Param::dc_offset},
                                         {"threshold", bench::Bm21Param::threshold}},
                                        "parameter kind");
}

bench::Bm21Matrix parse_bm21_matrix(const std::string& s) {
    return parse_enum<bench::Bm21Matrix>(s,
                                         {{"dense", bench::Bm21Matrix::dense},
                                          {"diagonal", bench::Bm21Matrix::diagonal},
                                          {"blocks2", bench::Bm21Matrix::blocks2}},
                                         "matrix form");
}

bench::BenchmarkSpec parse_benchmark(const json& obj) {
    if (!obj.is_object()) fail("benchmark entries must be objects");
    bench::BenchmarkSpec spec;
    spec.family = parse_family(get_string(obj, "family", ""));
    if (spec.family == bench::Family::bm21) {
        require_keys(obj, {"family", "param", "matrix", "n_in", "n_out", "n_shots",
                           "shot_period", "normalize"},
                     "bm21 benchmark");
        spec.bm21.param_kind = parse_bm21_param(get_string(obj, "param", "frequency"));
        spec.bm21.matrix_form = parse_bm21_matrix(get_string(obj, "matrix", "dense"));
        spec.bm21.n_in = static_cast<int>(get_int(obj, "n_in", spec.bm21.n_in));
        spec.bm21.n_out = static_cast<int>(get_int(obj, "n_out", spec.bm21.n_out));
        spec.bm21.n_shots = get_int(obj, "n_shots", spec.bm21.n_shots);
        spec.bm21.shot_period = get_int(obj, "shot_period", spec.bm21.shot_period);
        spec.bm21.normalize = get_bool(obj, "normalize", spec.bm21.normalize);
    } else {
        require_keys(obj, {"family", "variant", "kind", "n_inout"}, "benchmark");
        spec.variant = parse_variant(get_string(obj, "variant", "single"));
        if (obj.contains("kind")) {
            if (spec.family != bench::Family::bm13) fail("'kind' only applies to bm13");
            spec.bm13_kind = parse_bm13_kind(get_string(obj, "kind", "frame_lut"));
        }
        spec.n_inout = static_cast<int>(get_int(obj, "n_inout", 1));
    }
    try {
        spec.validate();
    } catch (const bench::InvalidSpec& e) {
        fail(e.what());
    }
    return spec;
}

PlantModel parse_plant(const json& obj) {
    if (!obj.is_object()) fail("plant entries must be objects");
    std::string kind = get_string(obj, "kind", "");
    if (kind == "bernoulli") {
        require_keys(obj, {"kind", "p_excited"}, "bernoulli plant");
        return bernoulli_plant(get_double(obj, "p_excited", 0.5));
    }
    if (kind == "success_after_k") {
        require_keys(obj, {"kind", "k"}, "success_after_k plant");
        return success_after_k_plant(get_int(obj, "k", 0));
    }
    if (kind == "scripted") {
        require_keys(obj, {"kind", "schedules"}, "scripted plant");
        if (!obj.contains("schedules") || !obj["schedules"].is_object())
            fail("scripted plant needs a 'schedules' object");
        std::map<std::string, std::vector<int>> schedules;
        for (auto it = obj["schedules"].begin(); it != obj["schedules"].end(); ++it) {
            if (!it.value().is_array()) fail("schedule for '" + it.key() + "' must be an array");
            std::vector<int> states;
            for (const auto& v : it.value()) {
                if (!v.is_number_integer()) fail("schedule entries must be 0 or 1");
                states.push_back(v.get<int>() ? 1 : 0);
            }
            schedules[it.key()] = std::move(states);
        }
        return scripted_plant(std::move(schedules));
    }
    if (kind == "rabi") {
        require_keys(obj, {"kind", "amp_error", "amp_scale"}, "rabi plant");
        PlantModel p;
        p.kind = PlantModel::Kind::rabi;
        p.amp_error = get_double(obj, "amp_error", 0.0);
        p.amp_scale = get_double(obj, "amp_scale", p.amp_scale);
        return p;
    }
    if (kind == "ramsey_drift") {
        require_keys(obj, {"kind", "drift"}, "ramsey_drift plant");
        PlantModel p;
        p.kind = PlantModel::Kind::ramsey_drift;
        if (obj.contains("drift")) {
            const json& d = obj["drift"];
            require_keys(d, {"kind", "offset_hz", "amplitude_hz", "period_s", "step_std_hz"},
                         "drift model");
            std::string dk = get_string(d, "kind", "constant_offset");
            if (dk == "constant_offset") {
                p.drift.kind = DriftModel::Kind::constant_offset;
            } else if (dk == "sinusoid") {
                p.drift.kind = DriftModel::Kind::sinusoid;
            } else if (dk == "random_walk") {
                p.drift.kind = DriftModel::Kind::random_walk;
            } else {
                fail("unknown drift kind '" + dk + "'");
            }
            p.drift.offset_hz = get_double(d, "offset_hz", 0.0);
            p.drift.amplitude_hz = get_double(d, "amplitude_hz", 0.0);
            p.drift.period_s = get_double(d, "period_s", 1.0);
            p.drift.step_std_hz = get_double(d, "step_std_hz", 0.0);
        }
        return p;
    }
    fail("unknown plant kind '" + kind + "'");
}

ScenarioConfig parse_scenario(const json& obj,
                              const std::map<std::string, PlantModel>& plants) {
    if (!obj.is_object()) fail("scenario entries must be objects");
    require_keys(obj,
                 {"name", "kind", "plant", "gain", "shots_per_round", "rounds", "tracking",
                  "exact_probabilities", "tau_points_s", "deliberate_detuning_hz",
                  "search_range_hz", "round_duration_s"},
                 "scenario");
    ScenarioConfig sc;
    sc.name = get_string(obj, "name", "");
    if (sc.name.empty()) fail("scenario needs a name");
    sc.kind = get_string(obj, "kind", "");
    if (sc.kind != "rabi" && sc.kind != "ramsey") fail("scenario kind must be rabi or ramsey");

    sc.scenario.gain = get_double(obj, "gain", sc.scenario.gain);
    sc.scenario.shots_per_round =
        static_cast<int>(get_int(obj, "shots_per_round", sc.scenario.shots_per_round));
    sc.scenario.rounds = static_cast<int>(get_int(obj, "rounds", sc.scenario.rounds));
    sc.scenario.tracking_enabled = get_bool(obj, "tracking", true);
    sc.scenario.exact_probabilities = get_bool(obj, "exact_probabilities", false);
    if (obj.contains("tau_points_s")) {
        if (!obj["tau_points_s"].is_array()) fail("'tau_points_s' must be an array");
        sc.scenario.tau_points_s.clear();
        for (const auto& v : obj["tau_points_s"]) {
            if (!v.is_number()) fail("'tau_points_s' entries must be numbers");
            sc.scenario.tau_points_s.push_back(v.get<double>());
        }
    }
    sc.scenario.deliberate_detuning_hz =
        get_double(obj, "deliberate_detuning_hz", sc.scenario.deliberate_detuning_hz);
    sc.scenario.search_range_hz = get_double(obj, "search_range_hz", sc.scenario.search_range_hz);
    sc.scenario.round_duration_s =
        get_double(obj, "round_duration_s", sc.scenario.round_duration_s);

    if (obj.contains("plant")) {
        if (obj["plant"].is_string()) {
            auto it = plants.find(obj["plant"].get<std::string>());
            if (it == plants.end())
                fail("scenario '" + sc.name + "' references unknown plant '" +
                     obj["plant"].get<std::string>() + "'");
            sc.plant = it->second;
        } else {
            sc.plant = parse_plant(obj["plant"]);
        }
    } else if (sc.kind == "rabi") {
        sc.plant.kind = PlantModel::Kind::rabi;
    } else {
        sc.plant.kind = PlantModel::Kind::ramsey_drift;
    }
    if (sc.kind == "rabi" && sc.plant.kind != PlantModel::Kind::rabi)
        fail("scenario '" + sc.name + "' needs a rabi plant");
    if (sc.kind == "ramsey" && sc.plant.kind != PlantModel::Kind::ramsey_drift)
        fail("scenario '" + sc.name + "' needs a ramsey_drift plant");
    try {
        sc.plant.validate();
    } catch (const PlantError& e) {
        fail(e.what());
    }
    return sc;
}

Tick cost_field(const json& obj, const std::string& key, Tick fallback) {
    int64_t v = get_int(obj, key, fallback);
    if (v < 0) fail("'" + key + "' must be non-negative");
    return v;
}

}  // namespace

RunConfig load_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) fail("top level must be an object");
    require_keys(root,
                 {"seed", "jobs", "repeat_until_success_k", "max_latency", "machine",
                  "cost_model", "benchmarks", "default_suite", "plants", "scenarios"},
                 "config");

    RunConfig cfg;
    if (!root.contains("seed")) fail("'seed' is mandatory");
    if (!root["seed"].is_number_integer() || root["seed"].get<int64_t>() < 0)
        fail("'seed' must be a non-negative integer");
    cfg.seed = root["seed"].get<uint64_t>();
    cfg.jobs = static_cast<int>(get_int(root, "jobs", 1));
    if (cfg.jobs < 1) fail("'jobs' must be at least 1");
    cfg.repeat_until_success_k = get_int(root, "repeat_until_success_k", 3);
    if (cfg.repeat_until_success_k < 0) fail("'repeat_until_success_k' must be non-negative");
    cfg.max_latency = get_int(root, "max_latency", 0);
    if (cfg.max_latency < 0) fail("'max_latency' must be non-negative");

    Tick tof = 28, window = 200;
    if (root.contains("machine")) {
        const json& m = root["machine"];
        if (!m.is_object()) fail("'machine' must be an object");
        require_keys(m, {"bank_size", "time_of_flight", "sampling_window"}, "machine");
        cfg.bank_size = static_cast<int>(get_int(m, "bank_size", 50));
        if (cfg.bank_size < 1) fail("'bank_size' must be at least 1");
        tof = get_int(m, "time_of_flight", tof);
        window = get_int(m, "sampling_window", window);
        if (tof < 0 || window < 1) fail("readout timing must be positive");
    }
    cfg.machine = default_machine_config(cfg.bank_size);
    for (auto& [name, elem] : cfg.machine.elements) {
        if (!elem.can_read()) continue;
        elem.time_of_flight = tof;
        elem.sampling_window = window;
    }
    cfg.machine.validate();

    if (root.contains("cost_model")) {
        const json& c = root["cost_model"];
        if (!c.is_object()) fail("'cost_model' must be an object");
        require_keys(c,
                     {"discrimination_cost", "lut_cost", "arithmetic_cost_per_op",
                      "bin2dec_cost_per_bit", "matvec_cost_per_entry", "param_update_cost",
                      "issue_cost", "aggregation_c0", "aggregation_c1", "branch_cost"},
                     "cost_model");
        CostModel& cm = cfg.cost_model;
        cm.discrimination_cost = cost_field(c, "discrimination_cost", cm.discrimination_cost);
        cm.lut_cost = cost_field(c, "lut_cost", cm.lut_cost);
        cm.arithmetic_cost_per_op = cost_field(c, "arithmetic_cost_per_op", cm.arithmetic_cost_per_op);
        cm.bin2dec_cost_per_bit = cost_field(c, "bin2dec_cost_per_bit", cm.bin2dec_cost_per_bit);
        cm.matvec_cost_per_entry = cost_field(c, "matvec_cost_per_entry", cm.matvec_cost_per_entry);
        cm.param_update_cost = cost_field(c, "param_update_cost", cm.param_update_cost);
        cm.issue_cost = cost_field(c, "issue_cost", cm.issue_cost);
        cm.aggregation_c0 = cost_field(c, "aggregation_c0", cm.aggregation_c0);
        cm.aggregation_c1 = cost_field(c, "aggregation_c1", cm.aggregation_c1);
        cm.branch_cost = cost_field(c, "branch_cost", cm.branch_cost);
        cm.validate();
    }

    if (root.contains("benchmarks") && root.contains("default_suite"))
        fail("give either 'benchmarks' or 'default_suite', not both");
    if (root.contains("benchmarks")) {
        if (!root["benchmarks"].is_array()) fail("'benchmarks' must be an array");
        for (const auto& b : root["benchmarks"]) cfg.benchmarks.push_back(parse_benchmark(b));
    } else {
        std::vector<int> n_values = {1, 20, 50};
        if (root.contains("default_suite")) {
            if (!root["default_suite"].is_array()) fail("'default_suite' must be an array");
            n_values.clear();
            for (const auto& v : root["default_suite"]) {
                if (!v.is_number_integer() || v.get<int64_t>() < 1)
                    fail("'default_suite' entries are channel counts");
                n_values.push_back(v.get<int>());
            }
        }
        cfg.benchmarks = bench::default_suite(n_values);
    }
    for (const auto& spec : cfg.benchmarks)
        if (spec.family != bench::Family::bm21 && spec.n_inout > cfg.bank_size)
            fail("benchmark '" + spec.id() + "' needs " + std::to_string(spec.n_inout) +
                 " channels but bank_size is " + std::to_string(cfg.bank_size));
    for (const auto& spec : cfg.benchmarks)
        if (spec.family == bench::Family::bm21 &&
            std::max(spec.bm21.n_in, spec.bm21.n_out) > cfg.bank_size)
            fail("benchmark '" + spec.id() + "' does not fit bank_size " +
                 std::to_string(cfg.bank_size));

    std::map<std::string, PlantModel> plants;
    if (root.contains("plants")) {
        if (!root["plants"].is_object()) fail("'plants' must be an object");
        for (auto it = root["plants"].begin(); it != root["plants"].end(); ++it)
            plants[it.key()] = parse_plant(it.value());
    }
    if (root.contains("scenarios")) {
        if (!root["scenarios"].is_array()) fail("'scenarios' must be an array");
        for (const auto& s : root["scenarios"]) cfg.scenarios.push_back(parse_scenario(s, plants));
    }
    for (size_t i = 0; i < cfg.scenarios.size(); ++i)
        for (size_t j = i + 1; j < cfg.scenarios.size(); ++j)
            if (cfg.scenarios[i].name == cfg.scenarios[j].name)
                fail("duplicate scenario name '" + cfg.scenarios[i].name + "'");
    return cfg;
}

RunConfig load_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_run_config(buf.str());
}

// ---------------------------------------------------------------------------
// Canonicalization and hashing

namespace {

json canonical_plant(const PlantModel& p) {
    json out;
    switch (p.kind) {
        case PlantModel::Kind::scripted:
            out["kind"] = "scripted";
            out["schedules"] = p.schedules;
            break;
        case PlantModel::Kind::bernoulli:
            out["kind"] = "bernoulli";
            out["p_excited"] = p.p_excited;
            break;
        case PlantModel::Kind::success_after_k:
            out["kind"] = "success_after_k";
            out["k"] = p.k;
            break;
        case PlantModel::Kind::rabi:
            out["kind"] = "rabi";
            out["amp_error"] = p.amp_error;
            out["amp_scale"] = p.amp_scale;
            break;
        case PlantModel::Kind::ramsey_drift: {
            out["kind"] = "ramsey_drift";
            json d;
            switch (p.drift.kind) {
                case DriftModel::Kind::constant_offset:
                    d["kind"] = "constant_offset";
                    d["offset_hz"] = p.drift.offset_hz;
                    break;
                case DriftModel::Kind::sinusoid:
                    d["kind"] = "sinusoid";
                    d["amplitude_hz"] = p.drift.amplitude_hz;
                    d["period_s"] = p.drift.period_s;
                    break;
                case DriftModel::Kind::random_walk:
                    d["kind"] = "random_walk";
                    d["step_std_hz"] = p.drift.step_std_hz;
                    break;
            }
            out["drift"] = d;
            break;
        }
    }
    return out;
}

json canonical_benchmark(const bench::BenchmarkSpec& spec) {
    json out;
    out["family"] = bench::family_name(spec.family);
    if (spec.family == bench::Family::bm21) {
        out["param"] = bench::bm21_param_name(spec.bm21.param_kind);
        out["matrix"] = bench::bm21_matrix_name(spec.bm21.matrix_form);
        out["n_in"] = spec.bm21.n_in;
        out["n_out"] = spec.bm21.n_out;
        out["n_shots"] = spec.bm21.n_shots;
        out["shot_period"] = spec.bm21.shot_period;
        out["normalize"] = spec.bm21.normalize;
        return out;
    }
    out["variant"] = bench::variant_name(spec.variant);
    if (spec.family == bench::Family::bm13) out["kind"] = bench::bm13_kind_name(spec.bm13_kind);
    out["n_inout"] = spec.n_inout;
    return out;
}

json canonical_config(const RunConfig& cfg) {
    // plain json keeps keys sorted, which is the canonical order
    json out;
    out["seed"] = cfg.seed;
    out["repeat_until_success_k"] = cfg.repeat_until_success_k;
    out["max_latency"] = cfg.max_latency;
    out["machine"]["bank_size"] = cfg.bank_size;
    const auto& re = cfg.machine.element("readout_element");
    out["machine"]["time_of_flight"] = re.time_of_flight;
    out["machine"]["sampling_window"] = re.sampling_window;

    const CostModel& cm = cfg.cost_model;
    json c;
    c["discrimination_cost"] = cm.discrimination_cost;
    c["lut_cost"] = cm.lut_cost;
    c["arithmetic_cost_per_op"] = cm.arithmetic_cost_per_op;
    c["bin2dec_cost_per_bit"] = cm.bin2dec_cost_per_bit;
    c["matvec_cost_per_entry"] = cm.matvec_cost_per_entry;
    c["param_update_cost"] = cm.param_update_cost;
    c["issue_cost"] = cm.issue_cost;
    c["aggregation_c0"] = cm.aggregation_c0;
    c["aggregation_c1"] = cm.aggregation_c1;
    c["branch_cost"] = cm.branch_cost;
    out["cost_model"] = c;

    out["benchmarks"] = json::array();
    for (const auto& spec : cfg.benchmarks) out["benchmarks"].push_back(canonical_benchmark(spec));

    out["scenarios"] = json::array();
    for (const auto& sc : cfg.scenarios) {
        json s;
        s["name"] = sc.name;
        s["kind"] = sc.kind;
        s["plant"] = canonical_plant(sc.plant);
        s["gain"] = sc.scenario.gain;
        s["shots_per_round"] = sc.scenario.shots_per_round;
        s["rounds"] = sc.scenario.rounds;
        s["tracking"] = sc.scenario.tracking_enabled;
        s["exact_probabilities"] = sc.scenario.exact_probabilities;
        s["tau_points_s"] = sc.scenario.tau_points_s;
        s["deliberate_detuning_hz"] = sc.scenario.deliberate_detuning_hz;
        s["search_range_hz"] = sc.scenario.search_range_hz;
        s["round_duration_s"] = sc.scenario.round_duration_s;
        out["scenarios"].push_back(s);
    }
    return out;
}

uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::string config_hash(const RunConfig& cfg) {
    uint64_t h = fnv1a64(canonical_config(cfg).dump());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Execution

sim::EventTrace run_benchmark_trace(const RunConfig& cfg, const bench::BenchmarkSpec& spec) {
    spec.validate();
    auto tp = lang::check_program(bench::build_benchmark(spec), cfg.machine);
    PlantModel plant = spec.family == bench::Family::bm12
                           ? success_after_k_plant(cfg.repeat_until_success_k)
                           : bernoulli_plant(0.5);
    return sim::run(tp, cfg.machine, cfg.cost_model, plant, cfg.seed);
}

SuiteReport run_all(const RunConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    SuiteReport rep;
    rep.tool_version = tool_version;
    rep.config_hash = config_hash(cfg);

    bench::SuiteConfig sc;
    sc.benchmarks = cfg.benchmarks;
    sc.machine = cfg.machine;
    sc.cost_model = cfg.cost_model;
    sc.seed = cfg.seed;
    sc.repeat_until_success_k = cfg.repeat_until_success_k;
    sc.jobs = cfg.jobs;
    rep.latencies = bench::run_suite(sc);
    for (auto& lr : rep.latencies) {
        lr.config_hash = rep.config_hash;
        if (cfg.max_latency > 0 && lr.feedback_latency > cfg.max_latency)
            throw MaxLatencyExceeded(lr.spec.id(), lr.feedback_latency, cfg.max_latency);
    }

    for (const auto& scen : cfg.scenarios) {
        ScenarioSummary sum;
        sum.name = scen.name;
        sum.kind = scen.kind;
        sum.rounds = scen.scenario.rounds;
        if (scen.kind == "rabi") {
            auto series = calib::simulate_rabi_tracking(scen.scenario, scen.plant, cfg.seed);
            sum.metrics["initial_amp_error"] = scen.plant.amp_error;
            sum.metrics["final_amp_error"] = series.empty() ? scen.plant.amp_error
                                                           : series.back().amp_error;
        } else {
            auto series = calib::simulate_ramsey_tracking(scen.scenario, scen.plant, cfg.seed);
            std::vector<double> res_true, res_corr;
            for (const auto& r : series) {
                res_true.push_back(r.true_detuning_hz);
                res_corr.push_back(r.corrected_detuning_hz);
            }
            sum.metrics["rms_true_detuning_hz"] = calib::rms(res_true);
            sum.metrics["rms_corrected_detuning_hz"] = calib::rms(res_corr);
        }
        rep.scenarios.push_back(std::move(sum));
    }

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string suite_report_json(const SuiteReport& rep, bool include_wall) {
    ordered_json out;
    out["tool_version"] = rep.tool_version;
    out["config_hash"] = rep.config_hash;
    out["latency_reports"] = ordered_json::array();
    for (const auto& lr : rep.latencies) {
        ordered_json r;
        r["id"] = lr.spec.id();
        r["feedback_latency"] = lr.feedback_latency;
        r["component_breakdown"] = lr.component_breakdown;
        r["re_times"] = lr.re_times;
        r["ce_times"] = lr.ce_times;
        r["seed"] = lr.seed;
        r["config_hash"] = lr.config_hash;
        out["latency_reports"].push_back(r);
    }
    out["scenario_summaries"] = ordered_json::array();
    for (const auto& sc : rep.scenarios) {
        ordered_json s;
        s["name"] = sc.name;
        s["kind"] = sc.kind;
        s["rounds"] = sc.rounds;
        s["metrics"] = sc.metrics;
        out["scenario_summaries"].push_back(s);
    }
    if (include_wall) out["wall_seconds"] = rep.wall_seconds;
    return out.dump(2) + "\n";
}

}  // namespace qcs::report
