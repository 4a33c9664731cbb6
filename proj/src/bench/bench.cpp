#include "qcs/bench/bench.hpp"

#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "qcs/lang/parser.hpp"
#include "qcs/plant.hpp"

namespace qcs::bench {

const char* family_name(Family f) {
    switch (f) {
        case Family::bm11: return "bm11";
        case Family::bm12: return "bm12";
        case Family::bm13: return "bm13";
        case Family::bm21: return "bm21";
    }
    return "?";
}

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::single: return "single";
        case Variant::distributed: return "distributed";
        case Variant::aggregated: return "aggregated";
        case Variant::aggregated_int: return "aggregated_int";
    }
    return "?";
}

const char* bm13_kind_name(Bm13Kind k) {
    switch (k) {
        case Bm13Kind::frame_lut: return "frame_lut";
        case Bm13Kind::binary_rep: return "binary_rep";
        case Bm13Kind::frequency: return "frequency";
        case Bm13Kind::amplitude: return "amplitude";
        case Bm13Kind::threshold: return "threshold";
    }
    return "?";
}

const char* bm21_param_name(Bm21Param p) {
    switch (p) {
        case Bm21Param::frequency: return "frequency";
        case Bm21Param::amplitude: return "amplitude";
        case Bm21Param::dc_offset: return "dc_offset";
        case Bm21Param::threshold: return "threshold";
    }
    return "?";
}

const char* bm21_matrix_name(Bm21Matrix m) {
    switch (m) {
        case Bm21Matrix::dense: return "dense";
        case Bm21Matrix::diagonal: return "diagonal";
        case Bm21Matrix::blocks2: return "blocks2";
    }
    return "?";
}

std::string BenchmarkSpec::id() const {
    std::ostringstream out;
    out << family_name(family);
    if (family == Family::bm21) {
        out << "/" << bm21_param_name(bm21.param_kind) << "/" << bm21_matrix_name(bm21.matrix_form)
            << "/n" << bm21.n_in << "x" << bm21.n_out;
        return out.str();
    }
    if (family == Family::bm13) out << "/" << bm13_kind_name(bm13_kind);
    out << "/" << variant_name(variant) << "/n" << n_inout;
    return out.str();
}

void BenchmarkSpec::validate() const {
    auto bad = [this](const std::string& why) { throw InvalidSpec(id() + ": " + why); };
    if (family == Family::bm21) {
        const auto& b = bm21;
        if (b.n_in < 1 || b.n_in > 20) bad("n_in must be in 1..20");
        if (b.n_out < 1) bad("n_out must be positive");
        if (b.n_shots < 1) bad("n_shots must be positive");
        if (b.shot_period <= 200) bad("shot period must exceed the readout length");
        return;
    }
    if (n_inout < 1) bad("channel count must be positive");
    if (variant == Variant::single && n_inout != 1) bad("single variant is one channel");
    if (variant == Variant::aggregated_int && family != Family::bm11)
        bad("integer aggregation exists only in the conditional-play family");
    if (family == Family::bm13) {
        if (bm13_kind == Bm13Kind::binary_rep && variant != Variant::single)
            bad("binary representation is a single-channel program");
        if (bm13_kind == Bm13Kind::threshold && variant != Variant::distributed)
            bad("threshold update exists only in distributed form");
        if (variant == Variant::single && bm13_kind != Bm13Kind::frame_lut &&
            bm13_kind != Bm13Kind::binary_rep)
            bad("single-channel form exists only for frame LUT and binary representation");
    } else if (bm13_kind != Bm13Kind::frame_lut) {
        bad("kind applies only to the parameter-update family");
    }
}

// ---------------------------------------------------------------------------
// Program builders

namespace {

std::string re(int i) { return "readout_element_" + std::to_string(i); }
std::string ce(int i) { return "control_element_" + std::to_string(i); }

std::string bm11_single_src() {
    return R"(fixed x
bool s

strict_timing:
    measure(readout_pulse, readout_element, demod(x), timestamp -> re_time)
    s = x > 0
    wait(max_time = 5000, control_element)
    play(control_pulse, control_element, condition = s, timestamp -> ce_time)
)";
}

std::string bm11_distributed_src(int n) {
    std::ostringstream o;
    o << "fixed[" << n << "] x\n";
    o << "bool[" << n << "] s_ar\n\n";
    o << "strict_timing:\n";
    for (int i = 0; i < n; ++i) {
        o << "    measure(readout_pulse, " << re(i) << ", demod(x[" << i
          << "]), timestamp -> re_time[" << i << "])\n";
        o << "    s_ar[" << i << "] = x[" << i << "] > 0\n";
        o << "    wait(max_time = 5000, " << ce(i) << ")\n";
        o << "    play(control_pulse, " << ce(i) << ", condition = s_ar[" << i
          << "], timestamp -> ce_time[" << i << "])\n";
    }
    return o.str();
}

void emit_element_list(std::ostringstream& o, int n, bool readout, bool control) {
    bool first = true;
    for (int i = 0; readout && i < n; ++i) {
        o << (first ? "" : ", ") << re(i);
        first = false;
    }
    for (int i = 0; control && i < n; ++i) {
        o << (first ? "" : ", ") << ce(i);
        first = false;
    }
}

std::string bm11_aggregated_src(int n, bool integer) {
    std::ostringstream o;
    o << "fixed[" << n << "] x\n";
    if (!integer) o << "bool[" << n << "] s_ar\n";
    o << "bool s\n\n";
    o << "strict_timing:\n";
    for (int i = 0; i < n; ++i) {
        o << "    measure(readout_pulse, " << re(i) << ", demod(x[" << i
          << "]), timestamp -> re_time[" << i << "])\n";
        if (!integer) o << "    s_ar[" << i << "] = x[" << i << "] > 0\n";
    }
    o << (integer ? "    s = sum(x) > 0\n" : "    s = and_all(s_ar)\n");
    o << "    wait(max_time = 5000, ";
    emit_element_list(o, n, false, true);
    o << ")\n";
    o << "    align(";
    emit_element_list(o, n, true, true);
    o << ")\n";
    for (int i = 0; i < n; ++i)
        o << "    play(control_pulse, " << ce(i) << ", condition = s, timestamp -> ce_time[" << i
          << "])\n";
    return o.str();
}

std::string bm12_single_src() {
    return R"(fixed x
bool s = False

strict_timing:
    while s == False:
        measure(readout_pulse, readout_element, demod(x), timestamp -> re_time)
        s = x > 0
        wait(max_time = 5000, readout_element)
    align(control_element, readout_element)
    play(control_pulse, control_element, timestamp -> ce_time)
)";
}

std::string bm12_distributed_src(int n) {
    std::ostringstream o;
    o << "fixed[" << n << "] x\n";
    o << "bool[" << n << "] s_ar\n\n";
    for (int i = 0; i < n; ++i) o << "s_ar[" << i << "] = False\n";
    o << "strict_timing:\n";
    for (int i = 0; i < n; ++i) {
        o << "    while s_ar[" << i << "] == False:\n";
        o << "        measure(readout_pulse, " << re(i) << ", demod(x[" << i
          << "]), timestamp -> re_time[" << i << "])\n";
        o << "        s_ar[" << i << "] = x[" << i << "] > 0\n";
        o << "        wait(max_time = 5000, " << re(i) << ")\n";
        o << "    align(" << ce(i) << ", " << re(i) << ")\n";
        o << "    play(control_pulse, " << ce(i) << ", timestamp -> ce_time[" << i << "])\n";
    }
    return o.str();
}

std::string bm12_aggregated_src(int n) {
    std::ostringstream o;
    o << "fixed[" << n << "] x\n";
    o << "bool[" << n << "] s_ar\n";
    o << "bool s = False\n\n";
    o << "strict_timing:\n";
    o << "    while s == False:\n";
    for (int i = 0; i < n; ++i) {
        o << "        measure(readout_pulse, " << re(i) << ", demod(x[" << i
          << "]), timestamp -> re_time[" << i << "])\n";
        o << "        s_ar[" << i << "] = x[" << i << "] > 0\n";
    }
    o << "        s = and_all(s_ar)\n";
    o << "        wait(max_time = 5000, ";
    emit_element_list(o, n, true, false);
    o << ")\n";
    o << "    align(";
    emit_element_list(o, n, true, true);
    o << ")\n";
    for (int i = 0; i < n; ++i)
        o << "    play(control_pulse, " << ce(i) << ", timestamp -> ce_time[" << i << "])\n";
    return o.str();
}

std::string bm13_frame_lut_single_src() {
    return R"(fixed x
int s
fixed frame_rot_ang
fixed[2] frame_lut = [0.1, 0.2]

strict_timing:
    measure(readout_pulse, readout_element, demod(x), timestamp -> re_time)
    s = x > 0
    frame_rot_ang = frame_lut[s]
    wait(max_time = 5000, control_element)
    frame_rotation_2pi(frame_rot_ang, control_element)
    play(control_pulse, control_element, timestamp -> ce_time)
)";
}

std::string bm13_binary_rep_src() {
    return R"(fixed[16] x
bool[16] s
fixed frame_rot_ang
int i

strict_timing:
    for (i, 0, i < 16, i + 1):
        measure(readout_pulse, readout_element, demod(x[i]), timestamp -> re_time[i])
        s[i] = x[i] > 0
    frame_rot_ang = bin2dec(s) / 2 ** 16
    wait(max_time = 5000, control_element)
    frame_rotation_2pi(frame_rot_ang, control_element)
    play(control_pulse, control_element, timestamp -> ce_time)
)";
}

std::string bm13_distributed_src(int n, Bm13Kind kind) {
    std::ostringstream o;
    o << "fixed[" << n << "] x\n";
    switch (kind) {
        case Bm13Kind::frame_lut:
            o << "fixed[" << n << "] frame_rot_ang_ar\n";
            o << "fixed[2] frame_lut = [0.1, 0.2]\n";
            break;
        case Bm13Kind::frequency:
            o << "int[" << n << "] frequency_ar\n";
            o << "int[2] frequency_lut = [50000000, 70000000]\n";
            break;
        case Bm13Kind::amplitude:
            o << "fixed[" << n << "] amp_ar\n";
            o << "fixed[2] amp_lut = [0.7, 0.9]\n";
            break;
        default: break;
    }
    o << "\nstrict_timing:\n";
    for (int i = 0; i < n; ++i) {
        o << "    measure(readout_pulse, " << re(i) << ", demod(x[" << i
          << "]), timestamp -> re_time[" << i << "])\n";
        switch (kind) {
            case Bm13Kind::frame_lut:
                o << "    frame_rot_ang_ar[" << i << "] = frame_lut[x[" << i << "] > 0]\n";
                break;
            case Bm13Kind::frequency:
                o << "    frequency_ar[" << i << "] = frequency_lut[x[" << i << "] > 0]\n";
                break;
            case Bm13Kind::amplitude:
                o << "    amp_ar[" << i << "] = amp_lut[x[" << i << "] > 0]\n";
                break;
            default: break;
        }
        o << "    wait(max_time = 5000, " << ce(i) << ")\n";
        switch (kind) {
            case Bm13Kind::frame_lut:
                o << "    frame_rotation_2pi(frame_rot_ang_ar[" << i << "], " << ce(i) << ")\n";
                o << "    play(control_pulse, " << ce(i) << ", timestamp -> ce_time[" << i
                  << "])\n";
                break;
            case Bm13Kind::frequency:
                o << "    update_frequency(" << ce(i) << ", frequency_ar[" << i << "])\n";
                o << "    play(control_pulse, " << ce(i) << ", timestamp -> ce_time[" << i
                  << "])\n";
                break;
            case Bm13Kind::amplitude:
                o << "    play(control_pulse * amp(amp_ar[" << i << "]), " << ce(i)
                  << ", timestamp -> ce_time[" << i << "])\n";
                break;
            default: break;
        }
    }
    return o.str();
}

std::string bm13_threshold_src(int n) {
    std::ostringstream o;
    o << "fixed[" << n << "] x1\n";
    o << "fixed[" << n << "] x2\n";
    o << "fixed[" << n << "] threshold_ar\n";
    o << "fixed[2] threshold_lut = [0.1, 0.2]\n";
    o << "bool[" << n << "] s_ar\n\n";
    o << "strict_timing:\n";
    for (int i = 0; i < n; ++i) {
        o << "    measure(readout_pulse, " << re(i) << ", demod(x1[" << i
          << "]), timestamp -> re_time[" << i << "])\n";
        o << "    threshold_ar[" << i << "] = threshold_lut[x1[" << i << "] > 0]\n";
        o << "    measure(readout_pulse, " << re(i) << ", demod(x2[" << i << "]))\n";
        o << "    s_ar[" << i << "] = x2[" << i << "] > threshold_ar[" << i << "]\n";
        o << "    wait(max_time = 5000, " << ce(i) << ")\n";
        o << "    play(control_pulse, " << ce(i) << ", condition = s_ar[" << i
          << "], timestamp -> ce_time[" << i << "])\n";
    }
    return o.str();
}

std::string bm13_aggregated_src(int n, Bm13Kind kind) {
    std::ostringstream o;
    o << "fixed[" << n << "] x\n";
    o << "bool[" << n << "] s_ar\n";
    switch (kind) {
        case Bm13Kind::frame_lut: o << "fixed frame_rot_ang\n"; break;
        case Bm13Kind::frequency: o << "int frequency_update\n"; break;
        case Bm13Kind::amplitude: o << "fixed amp_update\n"; break;
        default: break;
    }
    o << "\nstrict_timing:\n";
    for (int i = 0; i < n; ++i) {
        o << "    measure(readout_pulse, " << re(i) << ", demod(x[" << i
          << "]), timestamp -> re_time[" << i << "])\n";
        o << "    s_ar[" << i << "] = x[" << i << "] > 0\n";
    }
    switch (kind) {
        case Bm13Kind::frame_lut:
            o << "    frame_rot_ang = bin2dec(s_ar) / 2 ** " << n << "\n";
            break;
        case Bm13Kind::frequency:
            o << "    frequency_update = 100000000 * bin2dec(s_ar) // 2 ** " << n << "\n";
            break;
        case Bm13Kind::amplitude:
            o << "    amp_update = bin2dec(s_ar) / 2 ** " << n << "\n";
            break;
        default: break;
    }
    o << "    align(";
    emit_element_list(o, n, true, true);
    o << ")\n";
    o << "    wait(max_time = 5000, ";
    emit_element_list(o, n, false, true);
    o << ")\n";
    for (int i = 0; i < n; ++i) {
        switch (kind) {
            case Bm13Kind::frame_lut:
                o << "    frame_rotation_2pi(frame_rot_ang, " << ce(i) << ")\n";
                o << "    play(control_pulse, " << ce(i) << ", timestamp -> ce_time[" << i
                  << "])\n";
                break;
            case Bm13Kind::frequency:
                o << "    update_frequency(" << ce(i) << ", frequency_update)\n";
                break;
            case Bm13Kind::amplitude:
                o << "    play(control_pulse * amp(amp_update), " << ce(i)
                  << ", timestamp -> ce_time[" << i << "])\n";
                break;
            default: break;
        }
    }
    if (kind == Bm13Kind::frequency) {
        o << "    align(";
        emit_element_list(o, n, false, true);
        o << ")\n";
        for (int i = 0; i < n; ++i)
            o << "    play(control_pulse, " << ce(i) << ", timestamp -> ce_time[" << i << "])\n";
    }
    return o.str();
}

std::string bm21_src(const Bm21Config& b) {
    int64_t bins = int64_t{1} << b.n_in;
    std::ostringstream o;
    o << "fixed[" << b.n_in << "] x\n";
    o << "bool[" << b.n_in << "] s\n";
    o << "int[" << bins << "] h\n";
    o << "int[" << bins << "] h0\n";
    o << "fixed[" << b.n_out << "][" << bins << "] t = random(" << b.n_out << ", " << bins;
    if (b.matrix_form != Bm21Matrix::dense) o << ", " << bm21_matrix_name(b.matrix_form);
    o << ")\n";
    o << "fixed[" << b.n_out << "] f\n";
    o << "int i\n\n";
    o << "strict_timing:\n";
    o << "    for (i, 0, i < " << b.n_shots << ", i + 1):\n";
    for (int i = 0; i < b.n_in; ++i)
        o << "        measure(readout_pulse, " << re(i) << ", demod(x[" << i
          << "]), timestamp -> re_time[" << i << "])\n";
    for (int i = 0; i < b.n_in; ++i) o << "        s[" << i << "] = x[" << i << "] > 0\n";
    o << "        h[bin2dec(s)] = h[bin2dec(s)] + 1\n";
    o << "        wait(" << (b.shot_period - 200) << ", ";
    emit_element_list(o, b.n_in, true, false);
    o << ")\n";
    o << "f = f + matvec(t, h - h0)";
    if (b.normalize) o << " / " << b.n_shots;
    o << "\n";
    const bool threshold = b.param_kind == Bm21Param::threshold;
    auto out_elem = [&](int i) { return threshold ? re(i) : ce(i); };
    switch (b.param_kind) {
        case Bm21Param::frequency:
            for (int i = 0; i < b.n_out; ++i)
                o << "update_frequency(" << ce(i) << ", f[" << i << "])\n";
            break;
        case Bm21Param::dc_offset:
            for (int i = 0; i < b.n_out; ++i)
                o << "set_dc_offset(" << ce(i) << ", f[" << i << "])\n";
            break;
        case Bm21Param::threshold:
            for (int i = 0; i < b.n_out; ++i)
                o << "set_threshold(" << re(i) << ", f[" << i << "])\n";
            break;
        case Bm21Param::amplitude:
            break;  // the amplitude rides on the plays themselves
    }
    o << "strict_timing:\n";
    for (int i = 0; i < b.n_out; ++i) {
        if (b.param_kind == Bm21Param::amplitude)
            o << "    play(control_pulse * amp(f[" << i << "]), " << ce(i)
              << ", timestamp -> ce_time[" << i << "])\n";
        else if (threshold)
            o << "    play(readout_pulse, " << re(i) << ", timestamp -> ce_time[" << i << "])\n";
        else
            o << "    play(control_pulse, " << ce(i) << ", timestamp -> ce_time[" << i << "])\n";
    }
    return o.str();
}

}  // namespace

std::string benchmark_source(const BenchmarkSpec& spec) {
    spec.validate();
    int n = spec.n_inout;
    switch (spec.family) {
        case Family::bm11:
            switch (spec.variant) {
                case Variant::single: return bm11_single_src();
                case Variant::distributed: return bm11_distributed_src(n);
                case Variant::aggregated: return bm11_aggregated_src(n, false);
                case Variant::aggregated_int: return bm11_aggregated_src(n, true);
            }
            break;
        case Family::bm12:
            switch (spec.variant) {
                case Variant::single: return bm12_single_src();
                case Variant::distributed: return bm12_distributed_src(n);
                default: return bm12_aggregated_src(n);
            }
            break;
        case Family::bm13:
            if (spec.variant == Variant::single)
                return spec.bm13_kind == Bm13Kind::frame_lut ? bm13_frame_lut_single_src()
                                                             : bm13_binary_rep_src();
            if (spec.bm13_kind == Bm13Kind::threshold) return bm13_threshold_src(n);
            if (spec.variant == Variant::distributed)
                return bm13_distributed_src(n, spec.bm13_kind);
            return bm13_aggregated_src(n, spec.bm13_kind);
        case Family::bm21: return bm21_src(spec.bm21);
    }
    throw InvalidSpec(spec.id());
}

lang::Program build_benchmark(const BenchmarkSpec& spec) {
    return lang::parse_program(benchmark_source(spec));
}

// ---------------------------------------------------------------------------
// Latency extraction

LatencyReport extract_latency(const sim::EventTrace& tr, const BenchmarkSpec& spec,
                              const MachineConfig& mc) {
    spec.validate();
    LatencyReport rep;
    rep.spec = spec;
    rep.seed = tr.seed;

    const bool single_elems = spec.family != Family::bm21 && spec.variant == Variant::single;
    const ElementConfig& readout =
        mc.element(single_elems ? "readout_element" : "readout_element_0");
    const Tick acq = readout.time_of_flight + readout.sampling_window;

    try {
        rep.re_times = sim::get_timestamps(tr, "re_time");
        rep.ce_times = sim::get_timestamps(tr, "ce_time");
    } catch (const sim::UnknownLabelError& e) {
        throw MissingTimestamp(e.what());
    }
    if (rep.re_times.empty() || rep.ce_times.empty())
        throw MissingTimestamp(spec.id() + ": empty timestamp vector");

    const bool per_channel =
        spec.family != Family::bm21 && spec.variant == Variant::distributed;
    if (per_channel) {
        if (rep.re_times.size() != rep.ce_times.size())
            throw MissingTimestamp(spec.id() + ": channel count mismatch");
        Tick worst = 0;
        for (size_t i = 0; i < rep.re_times.size(); ++i)
            worst = std::max(worst, rep.ce_times[i] - (rep.re_times[i] + acq));
        rep.feedback_latency = worst;
    } else {
        // centralized: first dependent output vs the last of all inputs
        Tick last_input = 0;
        for (Tick t : rep.re_times) last_input = std::max(last_input, t);
        rep.feedback_latency = rep.ce_times.front() - (last_input + acq);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Analytic oracle

namespace {

Tick comm(const CostModel& cm, int n) { return cm.aggregation_c0 + cm.aggregation_c1 * n; }

int64_t bm21_nnz(const Bm21Config& b) {
    int64_t bins = int64_t{1} << b.n_in;
    switch (b.matrix_form) {
        case Bm21Matrix::dense: return static_cast<int64_t>(b.n_out) * bins;
        case Bm21Matrix::diagonal: return std::min<int64_t>(b.n_out, bins);
        case Bm21Matrix::blocks2: {
            int64_t nnz = 0;
            for (int r = 0; r < b.n_out; ++r) {
                if (2 * r < bins) ++nnz;
                if (2 * r + 1 < bins) ++nnz;
            }
            return nnz;
        }
    }
    return 0;
}

}  // namespace

std::map<std::string, Tick> predict_breakdown(const CostModel& cm, const BenchmarkSpec& spec,
                                              const MachineConfig& mc) {
    spec.validate();
    const int n = spec.n_inout;
    std::map<std::string, Tick> b;
    switch (spec.family) {
        case Family::bm12:
            throw NotDeterministic(
                spec.id() + ": iteration count depends on the plant; use the repeat-until-success "
                            "oracle");
        case Family::bm11:
            b["discrimination"] = cm.discrimination_cost;
            b["issue"] = cm.issue_cost;
            if (spec.variant == Variant::aggregated || spec.variant == Variant::aggregated_int) {
                b["aggregation"] = comm(cm, n);
                b["arithmetic"] = cm.arithmetic_cost_per_op;
            }
            return b;
        case Family::bm13:
            b["discrimination"] = cm.discrimination_cost;
            b["issue"] = cm.issue_cost;
            if (spec.variant == Variant::single && spec.bm13_kind == Bm13Kind::binary_rep) {
                b["bin2dec"] = cm.bin2dec_cost_per_bit * 16;
                b["arithmetic"] = cm.arithmetic_cost_per_op;
                b["param_update"] = cm.param_update_cost;
                return b;
            }
            if (spec.variant == Variant::aggregated) {
                b["aggregation"] = comm(cm, n);
                b["bin2dec"] = cm.bin2dec_cost_per_bit * n;
                switch (spec.bm13_kind) {
                    case Bm13Kind::frame_lut:
                        b["arithmetic"] = cm.arithmetic_cost_per_op;
                        b["param_update"] = cm.param_update_cost;
                        break;
                    case Bm13Kind::amplitude:
                        b["arithmetic"] = cm.arithmetic_cost_per_op;
                        break;
                    case Bm13Kind::frequency:
                        b["arithmetic"] = 2 * cm.arithmetic_cost_per_op;
                        // n serialized applies race the first apply + issue
                        b.erase("issue");
                        b["apply_and_issue"] = std::max<Tick>(
                            n * cm.param_update_cost, cm.param_update_cost + cm.issue_cost);
                        break;
                    default: break;
                }
                return b;
            }
            // single frame LUT and the distributed kinds
            switch (spec.bm13_kind) {
                case Bm13Kind::frame_lut:
                case Bm13Kind::frequency:
                    b["lut"] = cm.lut_cost;
                    b["param_update"] = cm.param_update_cost;
                    break;
                case Bm13Kind::amplitude: b["lut"] = cm.lut_cost; break;
                case Bm13Kind::threshold:
                    // the second readout and the threshold lookup overlap
                    b["reacquisition"] = std::max<Tick>(
                        mc.pulse("readout_pulse").length_ns, cm.discrimination_cost + cm.lut_cost);
                    break;
                default: break;
            }
            return b;
        case Family::bm21: {
            const auto& p = spec.bm21;
            int64_t bins = int64_t{1} << p.n_in;
            b["discrimination"] = cm.discrimination_cost;
            b["aggregation"] = comm(cm, p.n_in);
            b["bin2dec"] = cm.bin2dec_cost_per_bit * p.n_in;
            b["lut"] = cm.lut_cost;
            Tick arith = cm.arithmetic_cost_per_op;               // histogram increment
            arith += cm.arithmetic_cost_per_op * bins;            // residual vector
            arith += cm.arithmetic_cost_per_op * p.n_out;         // parameter accumulate
            if (p.normalize) arith += cm.arithmetic_cost_per_op * p.n_out;
            b["arithmetic"] = arith;
            b["matvec"] = cm.matvec_cost_per_entry * bm21_nnz(p);
            if (p.param_kind != Bm21Param::amplitude) b["param_update"] = cm.param_update_cost;
            b["issue"] = cm.issue_cost;
            return b;
        }
    }
    return b;
}

Tick predict_latency(const CostModel& cm, const BenchmarkSpec& spec, const MachineConfig& mc) {
    Tick total = 0;
    for (const auto& [name, ticks] : predict_breakdown(cm, spec, mc)) total += ticks;
    return total;
}

Tick predict_repeat_until_success_latency(const CostModel& cm, const BenchmarkSpec& spec,
                                          int64_t) {
    spec.validate();
    if (spec.family != Family::bm12)
        throw InvalidSpec(spec.id() + ": not a repeat-until-success benchmark");
    // last readout -> discriminate -> loop-exit compare -> branch; the final
    // play rides the branch decision with no issue charge
    Tick t = cm.discrimination_cost + cm.arithmetic_cost_per_op + cm.branch_cost;
    if (spec.variant == Variant::aggregated)
        t += comm(cm, spec.n_inout) + cm.arithmetic_cost_per_op;
    return t;
}

// ---------------------------------------------------------------------------
// Suite

std::vector<BenchmarkSpec> default_suite(const std::vector<int>& n_values) {
    std::vector<BenchmarkSpec> out;
    auto add = [&](Family f, Variant v, Bm13Kind k, int n) {
        BenchmarkSpec s;
        s.family = f;
        s.variant = v;
        s.bm13_kind = k;
        s.n_inout = n;
        out.push_back(s);
    };
    add(Family::bm11, Variant::single, Bm13Kind::frame_lut, 1);
    add(Family::bm12, Variant::single, Bm13Kind::frame_lut, 1);
    add(Family::bm13, Variant::single, Bm13Kind::frame_lut, 1);
    add(Family::bm13, Variant::single, Bm13Kind::binary_rep, 1);
    for (int n : n_values) {
        add(Family::bm11, Variant::distributed, Bm13Kind::frame_lut, n);
        add(Family::bm11, Variant::aggregated, Bm13Kind::frame_lut, n);
        add(Family::bm11, Variant::aggregated_int, Bm13Kind::frame_lut, n);
        add(Family::bm12, Variant::distributed, Bm13Kind::frame_lut, n);
        add(Family::bm12, Variant::aggregated, Bm13Kind::frame_lut, n);
        for (Bm13Kind k :
             {Bm13Kind::frame_lut, Bm13Kind::frequency, Bm13Kind::amplitude, Bm13Kind::threshold})
            add(Family::bm13, Variant::distributed, k, n);
        for (Bm13Kind k : {Bm13Kind::frame_lut, Bm13Kind::frequency, Bm13Kind::amplitude})
            add(Family::bm13, Variant::aggregated, k, n);
    }
    BenchmarkSpec bm21;
    bm21.family = Family::bm21;
    out.push_back(bm21);
    return out;
}

std::vector<LatencyReport> run_suite(const SuiteConfig& cfg) {
    std::vector<LatencyReport> reports(cfg.benchmarks.size());
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;

    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= cfg.benchmarks.size()) return;
            try {
                const BenchmarkSpec& spec = cfg.benchmarks[i];
                spec.validate();
                auto tp = lang::check_program(build_benchmark(spec), cfg.machine);
                PlantModel plant = spec.family == Family::bm12
                                       ? success_after_k_plant(cfg.repeat_until_success_k)
                                       : bernoulli_plant(0.5);
                auto tr = sim::run(tp, cfg.machine, cfg.cost_model, plant, cfg.seed);
                LatencyReport rep = extract_latency(tr, spec, cfg.machine);
                if (spec.family == Family::bm12) {
                    rep.component_breakdown["repeat_until_success_path"] =
                        predict_repeat_until_success_latency(cfg.cost_model, spec,
                                                             cfg.repeat_until_success_k);
                } else {
                    rep.component_breakdown =
                        predict_breakdown(cfg.cost_model, spec, cfg.machine);
                }
                reports[i] = std::move(rep);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return reports;
}

}  // namespace qcs::bench
