#include "qcs/lang/checker.hpp"

namespace qcs::lang {

namespace {

struct Type {
    VarKind kind = VarKind::int_kind;
    std::vector<int64_t> dims;

    bool scalar() const { return dims.empty(); }
    bool vector() const { return dims.size() == 1; }
    bool matrix() const { return dims.size() == 2; }
    bool numeric() const { return kind != VarKind::bool_kind; }
};

[[noreturn]] void type_error(const std::string& msg) {
    throw CheckError(CheckErrorKind::type_mismatch, "", "type mismatch: " + msg);
}

class Checker {
  public:
    Checker(const Program& p, const MachineConfig& mc) : prog_(p), mc_(mc) {}

    TypedProgram run() {
        for (const auto& d : prog_.declarations) declare(d);
        check_body(prog_.body, false);
        TypedProgram tp;
        tp.program = prog_;
        tp.symbols = symbols_;
        tp.elements_used = elements_used_;
        return tp;
    }

  private:
    const Program& prog_;
    const MachineConfig& mc_;
    std::map<std::string, SymbolInfo> symbols_;
    std::set<std::string> elements_used_;

    void declare(const VarDecl& d) {
        if (symbols_.count(d.name))
            throw CheckError(CheckErrorKind::duplicate_declaration, d.name,
                             "variable '" + d.name + "' declared more than once");
        SymbolInfo info;
        info.kind = d.kind;
        info.dims = d.dims;
        symbols_[d.name] = info;
        switch (d.init_kind) {
            case VarDecl::InitKind::none:
                break;
            case VarDecl::InitKind::scalar: {
                if (!d.is_scalar()) type_error("scalar initializer on non-scalar '" + d.name + "'");
                Type t = infer(*d.init_scalar);
                require_assignable(Type{d.kind, {}}, t, d.name);
                break;
            }
            case VarDecl::InitKind::list: {
                if (!d.is_vector() || d.dims[0] != static_cast<int64_t>(d.init_list.size()))
                    type_error("initializer list length does not match '" + d.name + "'");
                for (const auto& e : d.init_list)
                    require_assignable(Type{d.kind, {}}, infer(*e), d.name);
                break;
            }
            case VarDecl::InitKind::random:
                if (!d.is_matrix() || d.kind != VarKind::fixed_kind ||
                    d.dims[0] != d.random_rows || d.dims[1] != d.random_cols)
                    type_error("random(...) initializer requires a matching fixed matrix");
                break;
        }
    }

    const SymbolInfo& lookup(const std::string& name) {
        auto it = symbols_.find(name);
        if (it == symbols_.end())
            throw CheckError(CheckErrorKind::undeclared_variable, name,
                             "undeclared variable '" + name + "'");
        return it->second;
    }

    const ElementConfig& element(const std::string& name) {
        auto it = mc_.elements.find(name);
        if (it == mc_.elements.end())
            throw CheckError(CheckErrorKind::unknown_element, name,
                             "unknown element '" + name + "'");
        elements_used_.insert(name);
        return it->second;
    }

    void check_pulse(const ElementConfig& e, const std::string& pulse) {
        if (!e.pulses.count(pulse))
            throw CheckError(CheckErrorKind::unknown_pulse, pulse,
                             "pulse '" + pulse + "' not configured for element '" + e.name + "'");
    }

    // bool widens to int; everything else must match exactly.
    void require_assignable(const Type& target, const Type& value, const std::string& what) {
        if (target.dims != value.dims)
            type_error("shape mismatch assigning to '" + what + "'");
        if (target.kind == value.kind) return;
        if (target.kind == VarKind::int_kind && value.kind == VarKind::bool_kind) return;
        type_error(std::string("cannot assign ") + var_kind_name(value.kind) + " to " +
                   var_kind_name(target.kind) + " '" + what + "'");
    }

    Type ref_slot_type(const Ref& r) {
        const SymbolInfo& s = lookup(r.name);
        if (r.index) {
            if (s.dims.size() != 1) type_error("'" + r.name + "' is not a vector");
            Type it = infer(*r.index);
            if (!it.scalar() || it.kind == VarKind::fixed_kind)
                type_error("index into '" + r.name + "' must be int or bool");
            return Type{s.kind, {}};
        }
        return Type{s.kind, s.dims};
    }

    Type infer(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::int_lit: return {VarKind::int_kind, {}};
            case Expr::Kind::fixed_lit: return {VarKind::fixed_kind, {}};
            case Expr::Kind::bool_lit: return {VarKind::bool_kind, {}};
            case Expr::Kind::var_ref: {
                const SymbolInfo& s = lookup(e.name);
                return {s.kind, s.dims};
            }
            case Expr::Kind::index: {
                Ref r;
                r.name = e.name;
                r.index = e.index_expr;
                Type t = ref_slot_type(r);
                if (!t.scalar()) type_error("indexing must produce a scalar");
                return t;
            }
            case Expr::Kind::unary: {
                Type t = infer(*e.lhs);
                if (e.un_op == UnOp::logic_not) {
                    if (t.kind != VarKind::bool_kind || !t.scalar()) type_error("'not' needs a bool");
                    return t;
                }
                if (!t.numeric()) type_error("unary '-' needs a numeric operand");
                return t;
            }
            case Expr::Kind::binary: return infer_binary(e);
            case Expr::Kind::call: return infer_call(e);
        }
        type_error("unreachable expression kind");
    }

    Type infer_binary(const Expr& e) {
        Type l = infer(*e.lhs);
        Type r = infer(*e.rhs);
        switch (e.bin_op) {
            case BinOp::logic_and:
            case BinOp::logic_or:
                if (l.kind != VarKind::bool_kind || r.kind != VarKind::bool_kind || !l.scalar() ||
                    !r.scalar())
                    type_error("'and'/'or' need bool operands");
                return l;
            case BinOp::eq:
                if (!l.scalar() || !r.scalar()) type_error("'==' needs scalars");
                if (l.kind == VarKind::bool_kind || r.kind == VarKind::bool_kind) {
                    if (l.kind != r.kind) type_error("'==' between bool and non-bool");
                }
                return {VarKind::bool_kind, {}};
            case BinOp::lt:
            case BinOp::gt:
                // Int literals compare against fixed values directly (x > 0).
                if (!l.scalar() || !r.scalar() || !l.numeric() || !r.numeric())
                    type_error("comparison needs numeric scalars");
                return {VarKind::bool_kind, {}};
            case BinOp::pow:
                if (!l.scalar() || !r.scalar() || l.kind != VarKind::int_kind ||
                    r.kind != VarKind::int_kind)
                    type_error("'**' needs int scalars");
                return {VarKind::int_kind, {}};
            case BinOp::int_div:
                if (!l.scalar() || !r.scalar() || l.kind != VarKind::int_kind ||
                    r.kind != VarKind::int_kind)
                    type_error("'//' needs int scalars");
                return {VarKind::int_kind, {}};
            case BinOp::div:
                return infer_arith(l, r, /*division=*/true);
            case BinOp::add:
            case BinOp::sub:
                if (l.kind != r.kind)
                    type_error("'+'/'-' need matching operand kinds (use to_fixed/to_int)");
                return infer_arith(l, r, false);
            case BinOp::mul:
                return infer_arith(l, r, false);
        }
        type_error("unreachable operator");
    }

    // Shapes: scalar op scalar, same-length elementwise, or vector op scalar.
    // '/' always yields fixed; int "mixing" is allowed only with '*' and '/'
    // where the int operand scales exactly.
    Type infer_arith(const Type& l, const Type& r, bool division) {
        if (!l.numeric() || !r.numeric()) type_error("arithmetic needs numeric operands");
        std::vector<int64_t> dims;
        if (l.dims == r.dims)
            dims = l.dims;
        else if (r.scalar())
            dims = l.dims;
        else if (l.scalar())
            dims = r.dims;
        else
            type_error("shape mismatch in arithmetic");
        if (dims.size() > 1) type_error("matrix arithmetic is limited to matvec()");
        VarKind kind;
        if (division)
            kind = VarKind::fixed_kind;
        else if (l.kind == r.kind)
            kind = l.kind;
        else
            kind = VarKind::fixed_kind;  // fixed * int
        if (!division && kind == VarKind::fixed_kind && l.kind != r.kind) {
            // only '*' may mix fixed and int
            if (l.kind != VarKind::fixed_kind && r.kind != VarKind::fixed_kind)
                type_error("unexpected operand kinds");
        }
        return {kind, dims};
    }

    Type infer_call(const Expr& e) {
        auto arity = [&](size_t n) {
            if (e.args.size() != n)
                type_error(std::string(builtin_name(e.builtin)) + " expects " + std::to_string(n) +
                           " argument(s)");
        };
        switch (e.builtin) {
            case Builtin::bin2dec: {
                arity(1);
                Type t = infer(*e.args[0]);
                if (!t.vector() || t.kind != VarKind::bool_kind)
                    type_error("bin2dec needs a bool vector");
                if (t.dims[0] > 62) type_error("bin2dec vector longer than 62 bits");
                return {VarKind::int_kind, {}};
            }
            case Builtin::sum: {
                arity(1);
                Type t = infer(*e.args[0]);
                if (!t.vector() || !t.numeric()) type_error("sum needs a numeric vector");
                return {t.kind, {}};
            }
            case Builtin::and_all: {
                arity(1);
                Type t = infer(*e.args[0]);
                if (!t.vector() || t.kind != VarKind::bool_kind)
                    type_error("and_all needs a bool vector");
                return {VarKind::bool_kind, {}};
            }
            case Builtin::to_int: {
                arity(1);
                Type t = infer(*e.args[0]);
                if (!t.scalar() || t.kind != VarKind::fixed_kind) type_error("to_int needs a fixed scalar");
                return {VarKind::int_kind, {}};
            }
            case Builtin::to_fixed: {
                arity(1);
                Type t = infer(*e.args[0]);
                if (!t.scalar() || t.kind == VarKind::fixed_kind) type_error("to_fixed needs an int or bool scalar");
                return {VarKind::fixed_kind, {}};
            }
            case Builtin::matvec: {
                arity(2);
                if (e.args[0]->kind != Expr::Kind::var_ref)
                    type_error("matvec matrix argument must be a variable");
                Type m = infer(*e.args[0]);
                Type v = infer(*e.args[1]);
                if (!m.matrix() || m.kind != VarKind::fixed_kind)
                    type_error("matvec needs a fixed matrix");
                if (!v.vector() || !v.numeric() || v.dims[0] != m.dims[1])
                    type_error("matvec vector length must match matrix columns");
                return {VarKind::fixed_kind, {m.dims[0]}};
            }
        }
        type_error("unreachable builtin");
    }

    void ensure_timestamp_slot(const Ref& r) {
        auto it = symbols_.find(r.name);
        if (it == symbols_.end()) {
            // Timestamp variables are declared implicitly as ticks (int).
            SymbolInfo info;
            info.kind = VarKind::int_kind;
            info.implicit_timestamp = true;
            if (r.index) info.dims = {-1};  // grown on demand during execution
            symbols_[r.name] = info;
        } else if (it->second.kind != VarKind::int_kind) {
            type_error("timestamp target '" + r.name + "' must be int");
        }
        if (r.index) {
            Type it2 = infer(*r.index);
            if (!it2.scalar() || it2.kind == VarKind::fixed_kind)
                type_error("timestamp index must be int");
        }
    }

    void check_body(const StmtList& body, bool in_strict) {
        for (const auto& sp : body) check_stmt(*sp, in_strict);
    }

    void check_stmt(const Stmt& s, bool in_strict) {
        switch (s.kind) {
            case Stmt::Kind::play: {
                const ElementConfig& e = element(s.element);
                check_pulse(e, s.pulse);
                if (s.amp_scale) {
                    Type t = infer(*s.amp_scale);
                    if (!t.scalar() || t.kind != VarKind::fixed_kind)
                        type_error("amp(...) needs a fixed scalar");
                }
                if (s.condition) {
                    Type t = infer(*s.condition);
                    if (!t.scalar() || t.kind != VarKind::bool_kind)
                        type_error("play condition must be bool");
                }
                if (s.timestamp) ensure_timestamp_slot(*s.timestamp);
                break;
            }
            case Stmt::Kind::measure: {
                const ElementConfig& e = element(s.element);
                if (!e.can_read())
                    throw CheckError(CheckErrorKind::unknown_element, s.element,
                                     "element '" + s.element + "' cannot measure");
                check_pulse(e, s.pulse);
                Type t = ref_slot_type(s.demod_target);
                if (!t.scalar() || t.kind != VarKind::fixed_kind)
                    type_error("demod target must be a fixed scalar slot");
                if (s.timestamp) ensure_timestamp_slot(*s.timestamp);
                break;
            }
            case Stmt::Kind::wait_duration:
            case Stmt::Kind::wait_max_time: {
                Type t = infer(*s.duration);
                if (!t.scalar() || t.kind != VarKind::int_kind)
                    type_error("wait duration must be an int scalar");
                for (const auto& el : s.elements) element(el);
                break;
            }
            case Stmt::Kind::align:
                for (const auto& el : s.elements) element(el);
                break;
            case Stmt::Kind::strict_timing:
                if (in_strict)
                    throw CheckError(CheckErrorKind::nested_strict_timing, "",
                                     "strict_timing blocks cannot be nested");
                check_body(s.body, true);
                break;
            case Stmt::Kind::if_stmt:
            case Stmt::Kind::while_stmt: {
                Type t = infer(*s.cond);
                if (!t.scalar() || t.kind != VarKind::bool_kind)
                    type_error("condition must be bool");
                check_body(s.body, in_strict);
                break;
            }
            case Stmt::Kind::for_stmt: {
                const SymbolInfo& v = lookup(s.loop_var);
                if (v.kind != VarKind::int_kind || !v.dims.empty())
                    type_error("loop variable must be an int scalar");
                Type ti = infer(*s.loop_init);
                if (!ti.scalar() || ti.kind != VarKind::int_kind)
                    type_error("loop init must be int");
                Type tc = infer(*s.cond);
                if (!tc.scalar() || tc.kind != VarKind::bool_kind)
                    type_error("loop condition must be bool");
                Type ts = infer(*s.loop_step);
                if (!ts.scalar() || ts.kind != VarKind::int_kind)
                    type_error("loop step must be int");
                check_body(s.body, in_strict);
                break;
            }
            case Stmt::Kind::assign: {
                Type target = ref_slot_type(s.target);
                Type value = infer(*s.value);
                require_assignable(target, value, s.target.name);
                break;
            }
            case Stmt::Kind::update_frequency: {
                element(s.element);
                Type t = infer(*s.value);
                if (!t.scalar() || !t.numeric())
                    type_error("update_frequency needs a numeric scalar");
                break;
            }
            case Stmt::Kind::frame_rotation:
            case Stmt::Kind::set_dc_offset:
            case Stmt::Kind::set_threshold: {
                element(s.element);
                Type t = infer(*s.value);
                if (!t.scalar() || t.kind != VarKind::fixed_kind)
                    type_error("parameter update needs a fixed scalar");
                break;
            }
        }
    }
};

}  // namespace

TypedProgram check_program(const Program& p, const MachineConfig& mc) {
    return Checker(p, mc).run();
}

}  // namespace qcs::lang
