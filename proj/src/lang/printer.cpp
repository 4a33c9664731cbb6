#include "qcs/lang/printer.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace qcs::lang {

namespace {

// Shortest decimal form that parses back to the same double.
std::string format_fixed_literal(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    std::string s = buf;
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) s += ".0";
    return s;
}

int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::binary:
            switch (e.bin_op) {
                case BinOp::logic_or: return 1;
                case BinOp::logic_and: return 2;
                case BinOp::lt:
                case BinOp::gt:
                case BinOp::eq: return 4;
                case BinOp::add:
                case BinOp::sub: return 5;
                case BinOp::mul:
                case BinOp::div:
                case BinOp::int_div: return 6;
                case BinOp::pow: return 7;
            }
            return 0;
        case Expr::Kind::unary: return e.un_op == UnOp::logic_not ? 3 : 8;
        default: return 9;
    }
}

void print_expr_rec(std::ostringstream& out, const Expr& e, int parent_prec) {
    int prec = precedence(e);
    bool parens = prec < parent_prec;
    if (parens) out << "(";
    switch (e.kind) {
        case Expr::Kind::int_lit: out << e.int_value; break;
        case Expr::Kind::fixed_lit: out << format_fixed_literal(e.fixed_value); break;
        case Expr::Kind::bool_lit: out << (e.bool_value ? "True" : "False"); break;
        case Expr::Kind::var_ref: out << e.name; break;
        case Expr::Kind::index:
            out << e.name << "[";
            print_expr_rec(out, *e.index_expr, 0);
            out << "]";
            break;
        case Expr::Kind::unary:
            if (e.un_op == UnOp::neg) {
                out << "-";
                print_expr_rec(out, *e.lhs, prec);
            } else {
                out << "not ";
                print_expr_rec(out, *e.lhs, prec);
            }
            break;
        case Expr::Kind::binary: {
            const char* op = bin_op_text(e.bin_op);
            print_expr_rec(out, *e.lhs, prec);
            out << " " << op << " ";
            // Left-associative operators need parens on equal-precedence rhs.
            print_expr_rec(out, *e.rhs, e.bin_op == BinOp::pow ? prec : prec + 1);
            break;
        }
        case Expr::Kind::call: {
            out << builtin_name(e.builtin) << "(";
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) out << ", ";
                print_expr_rec(out, *e.args[i], 0);
            }
            out << ")";
            break;
        }
    }
    if (parens) out << ")";
}

void print_ref(std::ostringstream& out, const Ref& r) {
    out << r.name;
    if (r.index) {
        out << "[";
        print_expr_rec(out, *r.index, 0);
        out << "]";
    }
}

void print_stmt(std::ostringstream& out, const Stmt& s, int depth);

void print_block(std::ostringstream& out, const StmtList& body, int depth) {
    for (const auto& s : body) print_stmt(out, *s, depth);
}

void print_stmt(std::ostringstream& out, const Stmt& s, int depth) {
    std::string ind(static_cast<size_t>(depth) * 4, ' ');
    switch (s.kind) {
        case Stmt::Kind::play:
            out << ind << "play(" << s.pulse;
            if (s.amp_scale) {
                out << " * amp(";
                print_expr_rec(out, *s.amp_scale, 0);
                out << ")";
            }
            out << ", " << s.element;
            if (s.condition) {
                out << ", condition = ";
                print_expr_rec(out, *s.condition, 0);
            }
            if (s.timestamp) {
                out << ", timestamp -> ";
                print_ref(out, *s.timestamp);
            }
            out << ")\n";
            break;
        case Stmt::Kind::measure:
            out << ind << "measure(" << s.pulse << ", " << s.element << ", demod(";
            print_ref(out, s.demod_target);
            out << ")";
            if (s.timestamp) {
                out << ", timestamp -> ";
                print_ref(out, *s.timestamp);
            }
            out << ")\n";
            break;
        case Stmt::Kind::wait_duration:
        case Stmt::Kind::wait_max_time:
            out << ind << "wait(";
            if (s.kind == Stmt::Kind::wait_max_time) out << "max_time = ";
            print_expr_rec(out, *s.duration, 0);
            for (const auto& e : s.elements) out << ", " << e;
            out << ")\n";
            break;
        case Stmt::Kind::align: {
            out << ind << "align(";
            for (size_t i = 0; i < s.elements.size(); ++i) {
                if (i) out << ", ";
                out << s.elements[i];
            }
            out << ")\n";
            break;
        }
        case Stmt::Kind::strict_timing:
            out << ind << "strict_timing:\n";
            print_block(out, s.body, depth + 1);
            break;
        case Stmt::Kind::if_stmt:
            out << ind << "if ";
            print_expr_rec(out, *s.cond, 0);
            out << ":\n";
            print_block(out, s.body, depth + 1);
            break;
        case Stmt::Kind::while_stmt:
            out << ind << "while ";
            print_expr_rec(out, *s.cond, 0);
            out << ":\n";
            print_block(out, s.body, depth + 1);
            break;
        case Stmt::Kind::for_stmt:
            out << ind << "for (" << s.loop_var << ", ";
            print_expr_rec(out, *s.loop_init, 0);
            out << ", ";
            print_expr_rec(out, *s.cond, 0);
            out << ", ";
            print_expr_rec(out, *s.loop_step, 0);
            out << "):\n";
            print_block(out, s.body, depth + 1);
            break;
        case Stmt::Kind::assign:
            out << ind;
            print_ref(out, s.target);
            out << " = ";
            print_expr_rec(out, *s.value, 0);
            out << "\n";
            break;
        case Stmt::Kind::update_frequency:
        case Stmt::Kind::set_dc_offset:
        case Stmt::Kind::set_threshold: {
            const char* name = s.kind == Stmt::Kind::update_frequency ? "update_frequency"
                               : s.kind == Stmt::Kind::set_dc_offset  ? "set_dc_offset"
                                                                      : "set_threshold";
            out << ind << name << "(" << s.element << ", ";
            print_expr_rec(out, *s.value, 0);
            out << ")\n";
            break;
        }
        case Stmt::Kind::frame_rotation:
            out << ind << "frame_rotation_2pi(";
            print_expr_rec(out, *s.value, 0);
            out << ", " << s.element << ")\n";
            break;
    }
}

}  // namespace

std::string print_expr(const Expr& e) {
    std::ostringstream out;
    print_expr_rec(out, e, 0);
    return out.str();
}

std::string print_program(const Program& p) {
    std::ostringstream out;
    for (const auto& d : p.declarations) {
        out << var_kind_name(d.kind);
        for (auto dim : d.dims) out << "[" << dim << "]";
        out << " " << d.name;
        switch (d.init_kind) {
            case VarDecl::InitKind::none: break;
            case VarDecl::InitKind::scalar:
                out << " = ";
                print_expr_rec(out, *d.init_scalar, 0);
                break;
            case VarDecl::InitKind::list: {
                out << " = [";
                for (size_t i = 0; i < d.init_list.size(); ++i) {
                    if (i) out << ", ";
                    print_expr_rec(out, *d.init_list[i], 0);
                }
                out << "]";
                break;
            }
            case VarDecl::InitKind::random:
                out << " = random(" << d.random_rows << ", " << d.random_cols;
                if (!d.random_form.empty()) out << ", " << d.random_form;
                out << ")";
                break;
        }
        out << "\n";
    }
    if (!p.declarations.empty() && !p.body.empty()) out << "\n";
    print_block(out, p.body, 0);
    return out.str();
}

}  // namespace qcs::lang
