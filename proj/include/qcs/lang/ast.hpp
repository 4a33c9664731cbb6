#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qcs::lang {

enum class VarKind { int_kind, fixed_kind, bool_kind };

const char* var_kind_name(VarKind k);

// ---------------------------------------------------------------------------
// Expressions

enum class BinOp {
    add, sub, mul,
    div,      // '/'  : always produces fixed (exact rational for int operands)
    int_div,  // '//' : integer division, truncating
    pow,      // '**' : integer power
    lt, gt, eq,
    logic_and, logic_or,
};

enum class UnOp { neg, logic_not };

enum class Builtin { bin2dec, sum, and_all, to_int, to_fixed, matvec };

const char* bin_op_text(BinOp op);
const char* builtin_name(Builtin b);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { int_lit, fixed_lit, bool_lit, var_ref, index, unary, binary, call };

    Kind kind;
    // int_lit
    int64_t int_value = 0;
    // fixed_lit (kept as the parsed double; quantized at evaluation)
    double fixed_value = 0.0;
    // bool_lit
    bool bool_value = false;
    // var_ref / index (base variable name)
    std::string name;
    // index
    ExprPtr index_expr;
    // unary / binary
    UnOp un_op = UnOp::neg;
    BinOp bin_op = BinOp::add;
    ExprPtr lhs, rhs;
    // call
    Builtin builtin = Builtin::bin2dec;
    std::vector<ExprPtr> args;

    bool equals(const Expr& o) const;
};

ExprPtr make_int(int64_t v);
ExprPtr make_fixed(double v);
ExprPtr make_bool(bool v);
ExprPtr make_var(std::string name);
ExprPtr make_index(std::string name, ExprPtr idx);
ExprPtr make_unary(UnOp op, ExprPtr e);
ExprPtr make_binary(BinOp op, ExprPtr l, ExprPtr r);
ExprPtr make_call(Builtin b, std::vector<ExprPtr> args);

// ---------------------------------------------------------------------------
// Statements

// Assignment / demod / timestamp target: a variable, optionally indexed.
struct Ref {
    std::string name;
    ExprPtr index;  // null for scalar targets

    bool equals(const Ref& o) const;
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;
using StmtList = std::vector<StmtPtr>;

struct Stmt {
    enum class Kind {
        play, measure, wait_duration, wait_max_time, align, strict_timing,
        if_stmt, while_stmt, for_stmt, assign,
        update_frequency, frame_rotation, set_dc_offset, set_threshold,
    };

    Kind kind;
    // play / measure
    std::string pulse;
    std::string element;  // also used by the parameter-update statements
    ExprPtr amp_scale;    // play only, may be null
    ExprPtr condition;    // play only, may be null
    std::optional<Ref> timestamp;
    Ref demod_target;  // measure only
    // waits / align
    ExprPtr duration;  // wait_duration / wait_max_time limit
    std::vector<std::string> elements;
    // blocks
    StmtList body;
    // if / while / for
    ExprPtr cond;
    std::string loop_var;
    ExprPtr loop_init, loop_step;
    // assign / parameter updates
    Ref target;
    ExprPtr value;

    bool equals(const Stmt& o) const;
};

bool stmt_lists_equal(const StmtList& a, const StmtList& b);

// ---------------------------------------------------------------------------
// Declarations and programs

struct VarDecl {
    enum class InitKind { none, scalar, list, random };

    std::string name;
    VarKind kind = VarKind::int_kind;
    std::vector<int64_t> dims;  // empty = scalar, [n] = vector, [r, c] = matrix
    InitKind init_kind = InitKind::none;
    ExprPtr init_scalar;
    std::vector<ExprPtr> init_list;
    int64_t random_rows = 0, random_cols = 0;
    std::string random_form;  // "" (dense), "diagonal", "blocks2"

    bool is_scalar() const { return dims.empty(); }
    bool is_vector() const { return dims.size() == 1; }
    bool is_matrix() const { return dims.size() == 2; }

    bool equals(const VarDecl& o) const;
};

struct Program {
    std::vector<VarDecl> declarations;
    StmtList body;

    bool equals(const Program& o) const;
};

}  // namespace qcs::lang
