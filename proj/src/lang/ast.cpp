#include "qcs/lang/ast.hpp"

namespace qcs::lang {

const char* var_kind_name(VarKind k) {
    switch (k) {
        case VarKind::int_kind: return "int";
        case VarKind::fixed_kind: return "fixed";
        case VarKind::bool_kind: return "bool";
    }
    return "?";
}

const char* bin_op_text(BinOp op) {
    switch (op) {
        case BinOp::add: return "+";
        case BinOp::sub: return "-";
        case BinOp::mul: return "*";
        case BinOp::div: return "/";
        case BinOp::int_div: return "//";
        case BinOp::pow: return "**";
        case BinOp::lt: return "<";
        case BinOp::gt: return ">";
        case BinOp::eq: return "==";
        case BinOp::logic_and: return "and";
        case BinOp::logic_or: return "or";
    }
    return "?";
}

const char* builtin_name(Builtin b) {
    switch (b) {
        case Builtin::bin2dec: return "bin2dec";
        case Builtin::sum: return "sum";
        case Builtin::and_all: return "and_all";
        case Builtin::to_int: return "to_int";
        case Builtin::to_fixed: return "to_fixed";
        case Builtin::matvec: return "matvec";
    }
    return "?";
}

static bool expr_ptr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a && !b) return true;
    if (!a || !b) return false;
    return a->equals(*b);
}

bool Expr::equals(const Expr& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::int_lit: return int_value == o.int_value;
        case Kind::fixed_lit: return fixed_value == o.fixed_value;
        case Kind::bool_lit: return bool_value == o.bool_value;
        case Kind::var_ref: return name == o.name;
        case Kind::index: return name == o.name && expr_ptr_equal(index_expr, o.index_expr);
        case Kind::unary: return un_op == o.un_op && expr_ptr_equal(lhs, o.lhs);
        case Kind::binary:
            return bin_op == o.bin_op && expr_ptr_equal(lhs, o.lhs) && expr_ptr_equal(rhs, o.rhs);
        case Kind::call: {
            if (builtin != o.builtin || args.size() != o.args.size()) return false;
            for (size_t i = 0; i < args.size(); ++i)
                if (!expr_ptr_equal(args[i], o.args[i])) return false;
            return true;
        }
    }
    return false;
}

ExprPtr make_int(int64_t v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::int_lit;
    e->int_value = v;
    return e;
}

ExprPtr make_fixed(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::fixed_lit;
    e->fixed_value = v;
    return e;
}

ExprPtr make_bool(bool v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::bool_lit;
    e->bool_value = v;
    return e;
}

ExprPtr make_var(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::var_ref;
    e->name = std::move(name);
    return e;
}

ExprPtr make_index(std::string name, ExprPtr idx) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::index;
    e->name = std::move(name);
    e->index_expr = std::move(idx);
    return e;
}

ExprPtr make_unary(UnOp op, ExprPtr operand) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::unary;
    e->un_op = op;
    e->lhs = std::move(operand);
    return e;
}

ExprPtr make_binary(BinOp op, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::binary;
    e->bin_op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

ExprPtr make_call(Builtin b, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::call;
    e->builtin = b;
    e->args = std::move(args);
    return e;
}

bool Ref::equals(const Ref& o) const {
    return name == o.name && expr_ptr_equal(index, o.index);
}

static bool opt_ref_equal(const std::optional<Ref>& a, const std::optional<Ref>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || a->equals(*b);
}

bool Stmt::equals(const Stmt& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::play:
            return pulse == o.pulse && element == o.element &&
                   expr_ptr_equal(amp_scale, o.amp_scale) &&
                   expr_ptr_equal(condition, o.condition) && opt_ref_equal(timestamp, o.timestamp);
        case Kind::measure:
            return pulse == o.pulse && element == o.element &&
                   demod_target.equals(o.demod_target) && opt_ref_equal(timestamp, o.timestamp);
        case Kind::wait_duration:
        case Kind::wait_max_time:
            return expr_ptr_equal(duration, o.duration) && elements == o.elements;
        case Kind::align:
            return elements == o.elements;
        case Kind::strict_timing:
            return stmt_lists_equal(body, o.body);
        case Kind::if_stmt:
        case Kind::while_stmt:
            return expr_ptr_equal(cond, o.cond) && stmt_lists_equal(body, o.body);
        case Kind::for_stmt:
            return loop_var == o.loop_var && expr_ptr_equal(loop_init, o.loop_init) &&
                   expr_ptr_equal(cond, o.cond) && expr_ptr_equal(loop_step, o.loop_step) &&
                   stmt_lists_equal(body, o.body);
        case Kind::assign:
            return target.equals(o.target) && expr_ptr_equal(value, o.value);
        case Kind::update_frequency:
        case Kind::frame_rotation:
        case Kind::set_dc_offset:
        case Kind::set_threshold:
            return element == o.element && expr_ptr_equal(value, o.value);
    }
    return false;
}

bool stmt_lists_equal(const StmtList& a, const StmtList& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!a[i]->equals(*b[i])) return false;
    return true;
}

bool VarDecl::equals(const VarDecl& o) const {
    if (name != o.name || kind != o.kind || dims != o.dims || init_kind != o.init_kind)
        return false;
    switch (init_kind) {
        case InitKind::none: return true;
        case InitKind::scalar: return expr_ptr_equal(init_scalar, o.init_scalar);
        case InitKind::list: {
            if (init_list.size() != o.init_list.size()) return false;
            for (size_t i = 0; i < init_list.size(); ++i)
                if (!expr_ptr_equal(init_list[i], o.init_list[i])) return false;
            return true;
        }
        case InitKind::random:
            return random_rows == o.random_rows && random_cols == o.random_cols &&
                   random_form == o.random_form;
    }
    return false;
}

bool Program::equals(const Program& o) const {
    if (declarations.size() != o.declarations.size()) return false;
    for (size_t i = 0; i < declarations.size(); ++i)
        if (!declarations[i].equals(o.declarations[i])) return false;
    return stmt_lists_equal(body, o.body);
}

}  // namespace qcs::lang
