#include "qcs/sim/executor.hpp"

#include <algorithm>
#include <cmath>

namespace qcs::sim {

namespace {

using lang::BinOp;
using lang::Builtin;
using lang::Expr;
using lang::Ref;
using lang::Stmt;
using lang::UnOp;
using lang::VarKind;

constexpr int64_t kLoopCap = 1'000'000;

int64_t round_div128(__int128 num, __int128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 q = num >= 0 ? (num + den / 2) / den : -((-num + den / 2) / den);
    if (q > Fixed::max_raw) return Fixed::max_raw;
    if (q < Fixed::min_raw) return Fixed::min_raw;
    return static_cast<int64_t>(q);
}

// A computed value plus its dataflow timing: when it is ready for use, which
// measurement elements it (transitively) depends on, and the latest
// input_last_sample tick among those dependencies.
struct Eval {
    VarKind kind = VarKind::int_kind;
    std::vector<int64_t> dims;
    std::vector<int64_t> ints;
    std::vector<Fixed> fx;
    Tick ready = 0;
    Tick baseline = 0;
    std::set<std::string> sources;

    bool scalar() const { return dims.empty(); }
    size_t len() const {
        size_t n = 1;
        for (auto d : dims) n *= static_cast<size_t>(d);
        return n;
    }
    bool tainted() const { return !sources.empty(); }
    int64_t as_int() const { return ints.at(0); }
    bool as_bool() const { return ints.at(0) != 0; }
    Fixed as_fixed() const { return fx.at(0); }
    double numeric(size_t i) const {
        return kind == VarKind::fixed_kind ? fx[i].to_double() : static_cast<double>(ints[i]);
    }
};

struct Slot {
    int64_t i = 0;
    Fixed f;
    Tick ready = 0;
    Tick baseline = 0;
    std::set<std::string> sources;
};

struct Var {
    VarKind kind = VarKind::int_kind;
    std::vector<int64_t> dims;
    std::vector<Slot> slots;
    bool growable = false;  // implicit timestamp vectors grow on demand
};

struct ElemState {
    const ElementConfig* cfg = nullptr;
    Tick time = 0;
    double freq = 0.0;
    double frame_turns = 0.0;
    Fixed dc_offset;
    Fixed threshold;
    int64_t shots = 0;

    bool pending_wait = false;
    Tick wait_limit = 0;
    Tick wait_issue = 0;

    bool param_pending = false;
    Tick param_apply = 0;
    Tick param_baseline = 0;
    bool param_tainted = false;

    bool touched = false;  // has an op in the current strict block
};

class Executor {
  public:
    Executor(const lang::TypedProgram& tp, const MachineConfig& mc, const CostModel& cm,
             PlantModel& plant, uint64_t seed)
        : tp_(tp),
          mc_(mc),
          cm_(cm),
          plant_(plant),
          plant_rng_(seed, rng_stream::plant),
          matrix_rng_(seed, rng_stream::bm21_matrix) {
        trace_.seed = seed;
    }

    EventTrace run() {
        init_vars();
        exec_block(tp_.program.body);
        expire_waits();
        capture_final_vars();
        trace_.finalize();
        return std::move(trace_);
    }

  private:
    const lang::TypedProgram& tp_;
    const MachineConfig& mc_;
    const CostModel& cm_;
    PlantModel& plant_;
    CounterRng plant_rng_;
    CounterRng matrix_rng_;
    EventTrace trace_;

    std::map<std::string, Var> vars_;
    std::map<std::string, ElemState> elems_;

    bool in_strict_ = false;
    int block_id_ = 0;
    Tick control_time_ = 0;      // floor for quantum ops after tainted branches
    Tick control_baseline_ = 0;
    Tick central_seq_ = 0;  // serialization point for multi-source parameter updates

    // ---- setup ----

    void init_vars() {
        for (const auto& [name, info] : tp_.symbols) {
            Var v;
            v.kind = info.kind;
            v.dims = info.dims;
            if (!info.dims.empty() && info.dims[0] < 0) {
                v.dims.clear();
                v.growable = true;
            } else {
                size_t n = 1;
                for (auto d : info.dims) n *= static_cast<size_t>(d);
                v.slots.resize(n);
                if (!info.dims.empty()) v.dims = info.dims;
            }
            if (info.dims.empty()) v.slots.resize(1);
            vars_[name] = v;
        }
        for (const auto& d : tp_.program.declarations) {
            Var& v = vars_.at(d.name);
            switch (d.init_kind) {
                case lang::VarDecl::InitKind::none:
                    break;
                case lang::VarDecl::InitKind::scalar: {
                    Eval e = eval(*d.init_scalar);
                    store_scalar(v.slots[0], v.kind, e);
                    break;
                }
                case lang::VarDecl::InitKind::list:
                    for (size_t i = 0; i < d.init_list.size(); ++i) {
                        Eval e = eval(*d.init_list[i]);
                        store_scalar(v.slots[i], v.kind, e);
                    }
                    break;
                case lang::VarDecl::InitKind::random: {
                    // every entry is drawn so the stream position does not
                    // depend on the form; structured forms zero the rest
                    int64_t cols = d.random_cols;
                    for (size_t i = 0; i < v.slots.size(); ++i) {
                        Fixed f = Fixed::from_double(matrix_rng_.next_double() * 2.0 - 1.0);
                        int64_t r = static_cast<int64_t>(i) / cols;
                        int64_t c = static_cast<int64_t>(i) % cols;
                        bool keep = true;
                        if (d.random_form == "diagonal")
                            keep = c == r;
                        else if (d.random_form == "blocks2")
                            keep = c == 2 * r || c == 2 * r + 1;
                        v.slots[i].f = keep ? f : Fixed();
                    }
                    break;
                }
            }
        }
        for (const auto& name : tp_.elements_used) {
            const ElementConfig& cfg = mc_.element(name);
            ElemState e;
            e.cfg = &cfg;
            e.freq = cfg.if_freq_hz;
            elems_[name] = e;
        }
    }

    void store_scalar(Slot& s, VarKind kind, const Eval& e) {
        if (kind == VarKind::fixed_kind)
            s.f = e.as_fixed();
        else
            s.i = e.kind == VarKind::bool_kind ? (e.as_bool() ? 1 : 0) : e.as_int();
        s.ready = e.ready;
        s.baseline = e.baseline;
        s.sources = e.sources;
    }

    ElemState& elem(const std::string& name) { return elems_.at(name); }

    void saturation_event(const std::string& element, Tick tick, const std::string& label) {
        trace_.add(EventKind::saturation, element, tick, label);
    }

    // ---- expression evaluation ----

    Tick comm_cost(const Eval& vec) const {
        // Fan-in communication applies when the reduction really gathers one
        // value from each of as many elements as the vector is long.
        if (!vec.dims.empty() && vec.sources.size() == vec.len())
            return cm_.aggregation_c0 + cm_.aggregation_c1 * static_cast<Tick>(vec.len());
        return 0;
    }

    Eval eval(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::int_lit: {
                Eval r;
                r.kind = VarKind::int_kind;
                r.ints = {e.int_value};
                return r;
            }
            case Expr::Kind::fixed_lit: {
                Eval r;
                r.kind = VarKind::fixed_kind;
                bool sat = false;
                r.fx = {Fixed::from_double(e.fixed_value, &sat)};
                if (sat) saturation_event("", 0, "literal");
                return r;
            }
            case Expr::Kind::bool_lit: {
                Eval r;
                r.kind = VarKind::bool_kind;
                r.ints = {e.bool_value ? 1 : 0};
                return r;
            }
            case Expr::Kind::var_ref: return read_var(e.name);
            case Expr::Kind::index: return read_index(e.name, *e.index_expr);
            case Expr::Kind::unary: return eval_unary(e);
            case Expr::Kind::binary: return eval_binary(e);
            case Expr::Kind::call: return eval_call(e);
        }
        throw SimError("unreachable expression kind");
    }

    Eval read_var(const std::string& name) {
        const Var& v = vars_.at(name);
        Eval r;
        r.kind = v.kind;
        r.dims = v.dims;
        if (v.growable) r.dims = {static_cast<int64_t>(v.slots.size())};
        for (const auto& s : v.slots) {
            if (v.kind == VarKind::fixed_kind)
                r.fx.push_back(s.f);
            else
                r.ints.push_back(s.i);
            r.ready = std::max(r.ready, s.ready);
            r.baseline = std::max(r.baseline, s.baseline);
            r.sources.insert(s.sources.begin(), s.sources.end());
        }
        return r;
    }

    Slot& slot_for(const std::string& name, int64_t index) {
        Var& v = vars_.at(name);
        if (v.growable) {
            if (index < 0) throw SimError("negative index into '" + name + "'");
            if (index >= static_cast<int64_t>(v.slots.size()))
                v.slots.resize(static_cast<size_t>(index) + 1);
            return v.slots[static_cast<size_t>(index)];
        }
        if (v.dims.size() != 1 || index < 0 || index >= v.dims[0])
            throw SimError("index " + std::to_string(index) + " out of range for '" + name + "'");
        return v.slots[static_cast<size_t>(index)];
    }

    Eval read_index(const std::string& name, const Expr& idx_expr) {
        Eval idx = eval(idx_expr);
        const Slot& s = slot_for(name, idx.as_int());
        const Var& v = vars_.at(name);
        Eval r;
        r.kind = v.kind;
        if (v.kind == VarKind::fixed_kind)
            r.fx = {s.f};
        else
            r.ints = {s.i};
        r.ready = std::max(s.ready, idx.ready);
        r.baseline = std::max(s.baseline, idx.baseline);
        r.sources = s.sources;
        r.sources.insert(idx.sources.begin(), idx.sources.end());
        // data-dependent table lookup
        if (idx.tainted()) r.ready += cm_.lut_cost;
        return r;
    }

    Eval eval_unary(const Expr& e) {
        Eval a = eval(*e.lhs);
        Eval r = a;
        if (e.un_op == UnOp::logic_not) {
            r.ints[0] = a.ints[0] ? 0 : 1;
        } else if (a.kind == VarKind::fixed_kind) {
            for (size_t i = 0; i < r.fx.size(); ++i) {
                bool sat = false;
                r.fx[i] = a.fx[i].neg(&sat);
                if (sat) saturation_event("", r.ready, "neg");
            }
        } else {
            for (auto& v : r.ints) v = -v;
        }
        if (r.tainted()) r.ready += cm_.arithmetic_cost_per_op * static_cast<Tick>(r.len());
        return r;
    }

    static bool is_matvec(const Expr& e) {
        return e.kind == Expr::Kind::call && e.builtin == Builtin::matvec;
    }

    Eval eval_binary(const Expr& e) {
        // matvec(T, v) / d computes the division on the wide per-entry
        // accumulator, with a single rounding at the end.
        if (e.bin_op == BinOp::div && is_matvec(*e.lhs)) {
            Eval d = eval(*e.rhs);
            if (d.scalar() && d.kind == VarKind::int_kind && !d.tainted())
                return eval_matvec(*e.lhs, d.as_int());
        }
        Eval l = eval(*e.lhs);
        Eval r = eval(*e.rhs);
        Eval out;
        out.ready = std::max(l.ready, r.ready);
        out.baseline = std::max(l.baseline, r.baseline);
        out.sources = l.sources;
        out.sources.insert(r.sources.begin(), r.sources.end());
        Tick cost = 0;
        switch (e.bin_op) {
            case BinOp::logic_and:
            case BinOp::logic_or: {
                out.kind = VarKind::bool_kind;
                bool v = e.bin_op == BinOp::logic_and ? (l.as_bool() && r.as_bool())
                                                     : (l.as_bool() || r.as_bool());
                out.ints = {v ? 1 : 0};
                cost = cm_.arithmetic_cost_per_op;
                break;
            }
            case BinOp::lt:
            case BinOp::gt:
            case BinOp::eq: {
                out.kind = VarKind::bool_kind;
                bool fixed_cmp = l.kind == VarKind::fixed_kind || r.kind == VarKind::fixed_kind;
                int cmp;
                if (fixed_cmp) {
                    // compare exactly as raw values scaled to a common grid
                    __int128 a = l.kind == VarKind::fixed_kind
                                     ? static_cast<__int128>(l.as_fixed().raw())
                                     : static_cast<__int128>(l.as_int()) << Fixed::frac_bits;
                    __int128 b = r.kind == VarKind::fixed_kind
                                     ? static_cast<__int128>(r.as_fixed().raw())
                                     : static_cast<__int128>(r.as_int()) << Fixed::frac_bits;
                    cmp = a < b ? -1 : a > b ? 1 : 0;
                } else {
                    int64_t a = l.as_int(), b = r.as_int();
                    cmp = a < b ? -1 : a > b ? 1 : 0;
                }
                bool v = e.bin_op == BinOp::lt ? cmp < 0 : e.bin_op == BinOp::gt ? cmp > 0 : cmp == 0;
                out.ints = {v ? 1 : 0};
                // threshold discrimination on analog values vs plain compare
                cost = fixed_cmp ? cm_.discrimination_cost : cm_.arithmetic_cost_per_op;
                break;
            }
            case BinOp::pow: {
                out.kind = VarKind::int_kind;
                int64_t base = l.as_int(), exp = r.as_int(), v = 1;
                if (exp < 0) throw SimError("negative exponent");
                for (int64_t i = 0; i < exp; ++i)
                    v = static_cast<int64_t>(static_cast<uint64_t>(v) * static_cast<uint64_t>(base));
                out.ints = {v};
                cost = cm_.arithmetic_cost_per_op;
                break;
            }
            default:
                return eval_arith(e.bin_op, l, r, out);
        }
        if (out.tainted()) out.ready += cost;
        return out;
    }

    Eval eval_arith(BinOp op, const Eval& l, const Eval& r, Eval out) {
        // out arrives with timing/taint merged; fill shape, kind and values
        const bool l_vec = !l.dims.empty(), r_vec = !r.dims.empty();
        out.dims = l_vec ? l.dims : r.dims;
        size_t n = out.len();
        auto lat = [&](size_t i) { return l_vec ? i : 0; };
        auto rat = [&](size_t i) { return r_vec ? i : 0; };

        bool fixed_out = op == BinOp::div || l.kind == VarKind::fixed_kind ||
                         r.kind == VarKind::fixed_kind;
        out.kind = op == BinOp::int_div ? VarKind::int_kind
                   : fixed_out          ? VarKind::fixed_kind
                                        : VarKind::int_kind;
        for (size_t i = 0; i < n; ++i) {
            bool sat = false;
            if (out.kind == VarKind::int_kind) {
                int64_t a = l.ints[lat(i)], b = r.ints[rat(i)];
                int64_t v = 0;
                // wrap on overflow, like the register arithmetic it models
                auto wrap = [](uint64_t u) { return static_cast<int64_t>(u); };
                switch (op) {
                    case BinOp::add: v = wrap(static_cast<uint64_t>(a) + static_cast<uint64_t>(b)); break;
                    case BinOp::sub: v = wrap(static_cast<uint64_t>(a) - static_cast<uint64_t>(b)); break;
                    case BinOp::mul: v = wrap(static_cast<uint64_t>(a) * static_cast<uint64_t>(b)); break;
                    case BinOp::int_div:
                        if (b == 0) throw SimError("integer division by zero");
                        v = a / b;
                        break;
                    default: throw SimError("bad int op");
                }
                out.ints.push_back(v);
            } else if (l.kind == VarKind::fixed_kind && r.kind == VarKind::fixed_kind) {
                Fixed a = l.fx[lat(i)], b = r.fx[rat(i)];
                Fixed v;
                switch (op) {
                    case BinOp::add: v = a.add(b, &sat); break;
                    case BinOp::sub: v = a.sub(b, &sat); break;
                    case BinOp::mul: v = a.mul(b, &sat); break;
                    case BinOp::div: v = a.div(b, &sat); break;
                    default: throw SimError("bad fixed op");
                }
                out.fx.push_back(v);
            } else if (l.kind != VarKind::fixed_kind && r.kind != VarKind::fixed_kind) {
                // int / int: exact rational into fixed
                out.fx.push_back(Fixed::from_ratio(l.ints[lat(i)], r.ints[rat(i)], &sat));
            } else {
                // fixed scaled by an int: exact, single clamp
                bool l_fixed = l.kind == VarKind::fixed_kind;
                Fixed f = l_fixed ? l.fx[lat(i)] : r.fx[rat(i)];
                int64_t m = l_fixed ? r.ints[rat(i)] : l.ints[lat(i)];
                if (op == BinOp::mul) {
                    out.fx.push_back(Fixed::from_raw(fixed_clamp_raw(
                        static_cast<int64_t>(f.raw()) * m, &sat)));
                } else if (op == BinOp::div && l_fixed) {
                    if (m == 0) {
                        sat = true;
                        out.fx.push_back(Fixed::from_raw(f.raw() >= 0 ? Fixed::max_raw
                                                                      : Fixed::min_raw));
                    } else {
                        out.fx.push_back(Fixed::from_raw(static_cast<int32_t>(
                            round_div128(static_cast<__int128>(f.raw()), m))));
                    }
                } else {
                    throw SimError("unsupported mixed-kind operation");
                }
            }
            if (sat) saturation_event("", out.ready, lang::bin_op_text(op));
        }
        if (out.tainted())
            out.ready += cm_.arithmetic_cost_per_op * static_cast<Tick>(n);
        return out;
    }

    Eval eval_call(const Expr& e) {
        if (e.builtin == Builtin::matvec) return eval_matvec(e, 1);
        Eval a = eval(*e.args[0]);
        Eval out;
        out.ready = a.ready;
        out.baseline = a.baseline;
        out.sources = a.sources;
        Tick cost = 0;
        switch (e.builtin) {
            case Builtin::bin2dec: {
                size_t n = a.len();
                if (n > 62) throw SimError("bin2dec vector longer than 62 bits (Overflow)");
                // index 0 is the least-significant bit
                int64_t v = 0;
                for (size_t i = 0; i < n; ++i)
                    if (a.ints[i]) v |= int64_t{1} << i;
                out.kind = VarKind::int_kind;
                out.ints = {v};
                cost = cm_.bin2dec_cost_per_bit * static_cast<Tick>(n) + comm_cost(a);
                break;
            }
            case Builtin::sum: {
                out.kind = a.kind;
                if (a.kind == VarKind::fixed_kind) {
                    int64_t acc = 0;
                    for (const auto& f : a.fx) acc += f.raw();
                    bool sat = false;
                    out.fx = {Fixed::from_raw(fixed_clamp_raw(acc, &sat))};
                    if (sat) saturation_event("", out.ready, "sum");
                } else {
                    int64_t acc = 0;
                    for (auto v : a.ints) acc += v;
                    out.ints = {acc};
                }
                cost = cm_.arithmetic_cost_per_op + comm_cost(a);
                break;
            }
            case Builtin::and_all: {
                bool v = true;
                for (auto b : a.ints) v = v && b;
                out.kind = VarKind::bool_kind;
                out.ints = {v ? 1 : 0};
                cost = cm_.arithmetic_cost_per_op + comm_cost(a);
                break;
            }
            case Builtin::to_int:
                out.kind = VarKind::int_kind;
                out.ints = {a.as_fixed().to_int()};
                cost = cm_.arithmetic_cost_per_op;
                break;
            case Builtin::to_fixed: {
                out.kind = VarKind::fixed_kind;
                bool sat = false;
                out.fx = {Fixed::from_int(a.as_int(), &sat)};
                if (sat) saturation_event("", out.ready, "to_fixed");
                cost = cm_.arithmetic_cost_per_op;
                break;
            }
            default: throw SimError("bad builtin");
        }
        if (out.tainted()) out.ready += cost;
        return out;
    }

    // matvec on the 64/128-bit accumulator; divisor folds into the single
    // rounding so counts can be normalized without intermediate saturation.
    Eval eval_matvec(const Expr& call, int64_t divisor) {
        const Var& m = vars_.at(call.args[0]->name);
        Eval v = eval(*call.args[1]);
        int64_t rows = m.dims[0], cols = m.dims[1];
        Eval out;
        out.kind = VarKind::fixed_kind;
        out.dims = {rows};
        out.ready = v.ready;
        out.baseline = v.baseline;
        out.sources = v.sources;
        if (divisor == 0) throw SimError("matvec divisor is zero");
        int64_t nnz = 0;
        for (const auto& s : m.slots)
            if (s.f.raw() != 0) ++nnz;
        bool v_fixed = v.kind == VarKind::fixed_kind;
        __int128 den = static_cast<__int128>(divisor) * (v_fixed ? Fixed::one_raw : 1);
        for (int64_t r = 0; r < rows; ++r) {
            __int128 acc = 0;
            for (int64_t c = 0; c < cols; ++c) {
                const Slot& s = m.slots[static_cast<size_t>(r * cols + c)];
                if (v_fixed)
                    acc += static_cast<__int128>(s.f.raw()) * v.fx[static_cast<size_t>(c)].raw();
                else
                    acc += static_cast<__int128>(s.f.raw()) * v.ints[static_cast<size_t>(c)];
            }
            int64_t raw = round_div128(acc, den);
            if (raw == Fixed::max_raw || raw == Fixed::min_raw) {
                // clamped only if truly out of range
                __int128 exact_num = acc;
                __int128 lim = (static_cast<__int128>(Fixed::max_raw) + 1) * den;
                if (exact_num >= lim || exact_num < -lim) saturation_event("", out.ready, "matvec");
            }
            out.fx.push_back(Fixed::from_raw(static_cast<int32_t>(raw)));
        }
        if (out.tainted()) {
            Tick cost = cm_.matvec_cost_per_entry * nnz;
            if (divisor != 1) cost += cm_.arithmetic_cost_per_op * rows;
            out.ready += cost;
        }
        return out;
    }

    // ---- statements ----

    void exec_block(const lang::StmtList& body) {
        for (const auto& s : body) exec(*s);
    }

    void exec(const Stmt& s) {
        switch (s.kind) {
            case Stmt::Kind::assign: exec_assign(s); break;
            case Stmt::Kind::play: exec_play(s); break;
            case Stmt::Kind::measure: exec_measure(s); break;
            case Stmt::Kind::wait_duration: exec_wait(s); break;
            case Stmt::Kind::wait_max_time: exec_wait_max(s); break;
            case Stmt::Kind::align: exec_align(s); break;
            case Stmt::Kind::strict_timing: exec_strict(s); break;
            case Stmt::Kind::if_stmt: {
                Eval c = eval(*s.cond);
                note_branch(c);
                if (c.as_bool()) exec_block(s.body);
                break;
            }
            case Stmt::Kind::while_stmt: {
                int64_t guard = 0;
                while (true) {
                    Eval c = eval(*s.cond);
                    note_branch(c);
                    if (!c.as_bool()) break;
                    exec_block(s.body);
                    if (++guard > kLoopCap) throw SimError("loop iteration cap exceeded");
                }
                break;
            }
            case Stmt::Kind::for_stmt: {
                Var& v = vars_.at(s.loop_var);
                store_scalar(v.slots[0], v.kind, eval(*s.loop_init));
                int64_t guard = 0;
                while (true) {
                    Eval c = eval(*s.cond);
                    note_branch(c);
                    if (!c.as_bool()) break;
                    exec_block(s.body);
                    store_scalar(v.slots[0], v.kind, eval(*s.loop_step));
                    if (++guard > kLoopCap) throw SimError("loop iteration cap exceeded");
                }
                break;
            }
            case Stmt::Kind::update_frequency:
            case Stmt::Kind::frame_rotation:
            case Stmt::Kind::set_dc_offset:
            case Stmt::Kind::set_threshold:
                exec_param_update(s);
                break;
        }
    }

    void note_branch(const Eval& c) {
        if (!c.tainted()) return;
        Tick decision = c.ready + cm_.branch_cost;
        control_time_ = std::max(control_time_, decision);
        control_baseline_ = std::max(control_baseline_, c.baseline);
    }

    void exec_assign(const Stmt& s) {
        Eval val = eval(*s.value);
        Var& v = vars_.at(s.target.name);
        if (s.target.index) {
            Eval idx = eval(*s.target.index);
            Slot& slot = slot_for(s.target.name, idx.as_int());
            store_scalar(slot, v.kind, val);
            slot.ready = std::max(slot.ready, idx.ready);
            slot.baseline = std::max(slot.baseline, idx.baseline);
            slot.sources.insert(idx.sources.begin(), idx.sources.end());
        } else if (v.dims.empty() && !v.growable) {
            store_scalar(v.slots[0], v.kind, val);
        } else {
            if (val.len() != v.slots.size()) throw SimError("vector assignment length mismatch");
            for (size_t i = 0; i < v.slots.size(); ++i) {
                Slot& slot = v.slots[i];
                if (v.kind == VarKind::fixed_kind)
                    slot.f = val.fx[i];
                else
                    slot.i = val.ints[i];
                slot.ready = val.ready;
                slot.baseline = val.baseline;
                slot.sources = val.sources;
            }
        }
    }

    void exec_param_update(const Stmt& s) {
        Eval v = eval(*s.value);
        ElemState& e = elem(s.element);
        Tick apply = e.time;
        if (v.tainted()) {
            if (v.sources.size() > 1) {
                // values gathered from several elements go through one
                // central sequencer, so their applies serialize
                central_seq_ = std::max(central_seq_, v.ready) + cm_.param_update_cost;
                apply = central_seq_;
            } else {
                apply = v.ready + cm_.param_update_cost;
            }
            e.param_pending = true;
            e.param_apply = std::max(e.param_apply, apply);
            e.param_baseline = std::max(e.param_baseline, v.baseline);
            e.param_tainted = true;
        }
        switch (s.kind) {
            case Stmt::Kind::update_frequency:
                e.freq = v.kind == VarKind::fixed_kind ? v.as_fixed().to_double()
                                                       : static_cast<double>(v.as_int());
                break;
            case Stmt::Kind::frame_rotation: e.frame_turns += v.as_fixed().to_double(); break;
            case Stmt::Kind::set_dc_offset: e.dc_offset = v.as_fixed(); break;
            case Stmt::Kind::set_threshold: e.threshold = v.as_fixed(); break;
            default: break;
        }
        const char* what = s.kind == Stmt::Kind::update_frequency ? "update_frequency"
                           : s.kind == Stmt::Kind::frame_rotation ? "frame_rotation_2pi"
                           : s.kind == Stmt::Kind::set_dc_offset  ? "set_dc_offset"
                                                                  : "set_threshold";
        trace_.add(EventKind::instruction_issue, s.element, apply, what);
    }

    struct Gate {
        Tick value_gate = -1;  // latest data dependency; -1 if none
        Tick baseline = 0;
    };

    void merge_dep(Gate& g, Tick ready, Tick baseline) {
        g.value_gate = std::max(g.value_gate, ready);
        g.baseline = std::max(g.baseline, baseline);
    }

    // Issue a pulse op on element e at the earliest legal start, consuming a
    // pending max_time wait if there is one. Returns the start tick.
    Tick schedule_op(ElemState& e, const std::string& element, const Gate& g, Tick duration) {
        Tick start = std::max(e.time, control_time_);
        if (g.value_gate >= 0) start = std::max(start, g.value_gate + cm_.issue_cost);
        Tick baseline = std::max(g.baseline, control_baseline_);

        if (e.pending_wait) {
            Tick counted = start - std::max(e.wait_issue, baseline);
            if (counted < 0) counted = 0;
            if (counted > e.wait_limit) throw MaxLatencyError(element, counted, e.wait_limit);
            if (in_strict_ && e.touched && start > e.time)
                trace_.strict_ops.push_back(StrictOp{block_id_, element, e.time, start, false});
            e.pending_wait = false;
        } else if (in_strict_ && e.touched && start > e.time) {
            throw StrictTimingError(element, start, start - e.time);
        }
        if (in_strict_) {
            // the first operation on an element in a block (or after an
            // align) starts a fresh chain
            trace_.strict_ops.push_back(
                StrictOp{block_id_, element, start, start + duration, !e.touched});
            e.touched = true;
        }
        e.time = start + duration;
        return start;
    }

    Slot& scalar_slot(const std::string& name) {
        Var& v = vars_.at(name);
        if (v.growable && v.slots.empty()) v.slots.resize(1);
        return v.slots[0];
    }

    void capture_timestamp(const Ref& r, Tick t) {
        int64_t index = 0;
        if (r.index) index = eval(*r.index).as_int();
        Slot& s = r.index ? slot_for(r.name, index) : scalar_slot(r.name);
        s.i = t;
        s.ready = t;
        auto& vec = trace_.timestamps[r.name];
        if (index >= static_cast<int64_t>(vec.size())) vec.resize(static_cast<size_t>(index) + 1, -1);
        vec[static_cast<size_t>(index)] = t;
        std::string label = r.name;
        if (r.index) label += "[" + std::to_string(index) + "]";
        trace_.add(EventKind::timestamp_capture, "", t, label);
    }

    PulseDef pulse_for(const ElemState& e, const std::string& name) {
        PulseDef p = mc_.pulse(name);
        p.if_freq_hz = e.freq;
        return p;
    }

    void exec_play(const Stmt& s) {
        ElemState& e = elem(s.element);
        Gate g;
        bool cond_value = true;
        if (s.condition) {
            Eval c = eval(*s.condition);
            cond_value = c.as_bool();
            if (c.tainted()) merge_dep(g, c.ready, c.baseline);
        }
        double amp = 1.0;
        if (s.amp_scale) {
            Eval a = eval(*s.amp_scale);
            amp = a.as_fixed().to_double();
            if (a.tainted()) merge_dep(g, a.ready, a.baseline);
        }
        if (e.param_pending) {
            if (e.param_tainted) merge_dep(g, e.param_apply, e.param_baseline);
            e.param_pending = false;
            e.param_tainted = false;
            e.param_apply = 0;
            e.param_baseline = 0;
        }
        const PulseDef p = pulse_for(e, s.pulse);
        Tick start = schedule_op(e, s.element, g, p.length_ns);
        trace_.add(EventKind::instruction_issue, s.element, start, "play " + s.pulse);
        if (s.timestamp) capture_timestamp(*s.timestamp, start);
        if (cond_value) {
            SampleBuffer buf = synthesize(p, e.frame_turns, start, amp);
            if (buf.saturated) saturation_event(s.element, start, "synthesize");
            trace_.add(EventKind::output_sample_start, s.element, start, s.pulse);
            trace_.waveforms.push_back(EmittedPulse{s.element, start, std::move(buf.samples)});
        }
    }

    void exec_measure(const Stmt& s) {
        ElemState& e = elem(s.element);
        Gate g;
        if (e.param_pending) {
            if (e.param_tainted) merge_dep(g, e.param_apply, e.param_baseline);
            e.param_pending = false;
            e.param_tainted = false;
            e.param_apply = 0;
            e.param_baseline = 0;
        }
        const PulseDef p = pulse_for(e, s.pulse);
        Tick start = schedule_op(e, s.element, g, p.length_ns);
        trace_.add(EventKind::instruction_issue, s.element, start, "measure " + s.pulse);
        if (s.timestamp) capture_timestamp(*s.timestamp, start);

        SampleBuffer out = synthesize(p, e.frame_turns, start, 1.0);
        if (out.saturated) saturation_event(s.element, start, "synthesize");
        trace_.add(EventKind::output_sample_start, s.element, start, s.pulse);
        trace_.waveforms.push_back(EmittedPulse{s.element, start, std::move(out.samples)});

        SampleBuffer in = plant_respond(plant_, *e.cfg, e.shots, start, plant_rng_);
        ++e.shots;
        Tick last_sample = start + e.cfg->time_of_flight + e.cfg->sampling_window;
        trace_.add(EventKind::input_last_sample, s.element, last_sample, s.demod_target.name);

        DemodSpec spec{e.cfg->if_freq_hz, e.cfg->sampling_window, e.cfg->time_of_flight};
        bool sat = false;
        Fixed value = demodulate(in, spec, &sat);
        if (sat) saturation_event(s.element, last_sample, "demod");

        Slot& slot = s.demod_target.index
                         ? slot_for(s.demod_target.name, eval(*s.demod_target.index).as_int())
                         : scalar_slot(s.demod_target.name);
        slot.f = value;
        slot.ready = last_sample;
        slot.baseline = last_sample;
        slot.sources = {s.element};
    }

    void exec_wait(const Stmt& s) {
        Eval d = eval(*s.duration);
        Tick dur = d.as_int();
        if (dur < 0) throw SimError("negative wait duration");
        for (const auto& name : s.elements) {
            ElemState& e = elem(name);
            trace_.add(EventKind::instruction_issue, name, e.time, "wait");
            if (in_strict_) {
                trace_.strict_ops.push_back(
                    StrictOp{block_id_, name, e.time, e.time + dur, !e.touched});
                e.touched = true;
            }
            e.time += dur;
        }
    }

    void exec_wait_max(const Stmt& s) {
        Eval limit = eval(*s.duration);
        for (const auto& name : s.elements) {
            ElemState& e = elem(name);
            e.pending_wait = true;
            e.wait_limit = limit.as_int();
            e.wait_issue = e.time;
            trace_.add(EventKind::instruction_issue, name, e.time, "wait max_time");
        }
    }

    void exec_align(const Stmt& s) {
        Tick target = control_time_;
        for (const auto& name : s.elements) {
            const ElemState& e = elem(name);
            target = std::max(target, e.time);
            if (e.param_pending) target = std::max(target, e.param_apply);
        }
        for (const auto& name : s.elements) {
            ElemState& e = elem(name);
            e.time = target;
            e.touched = false;  // operations after a barrier re-float
            trace_.add(EventKind::instruction_issue, name, target, "align");
            if (in_strict_)
                trace_.strict_ops.push_back(StrictOp{block_id_, name, target, target, true});
        }
    }

    void exec_strict(const Stmt& s) {
        ++block_id_;
        in_strict_ = true;
        for (auto& [name, e] : elems_) e.touched = false;
        exec_block(s.body);
        expire_waits();
        in_strict_ = false;
    }

    void expire_waits() {
        for (auto& [name, e] : elems_) e.pending_wait = false;
    }

    void capture_final_vars() {
        for (const auto& [name, v] : vars_) {
            FinalVar fv;
            fv.kind = v.kind;
            fv.dims = v.dims;
            if (v.growable) fv.dims = {static_cast<int64_t>(v.slots.size())};
            for (const auto& s : v.slots) {
                if (v.kind == VarKind::fixed_kind)
                    fv.fx.push_back(s.f);
                else
                    fv.ints.push_back(s.i);
            }
            trace_.final_vars[name] = std::move(fv);
        }
    }
};

}  // namespace

EventTrace run(const lang::TypedProgram& tp, const MachineConfig& mc, const CostModel& cm,
               PlantModel& plant, uint64_t seed) {
    Executor ex(tp, mc, cm, plant, seed);
    return ex.run();
}

}  // namespace qcs::sim
