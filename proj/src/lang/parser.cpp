#include "qcs/lang/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <vector>

namespace qcs::lang {

namespace {

enum class Tok {
    ident, int_lit, float_lit,
    lparen, rparen, lbracket, rbracket, comma, colon, assign,
    eq, lt, gt, plus, minus, star, slash, dslash, dstar, arrow,
    newline, indent, dedent, eof,
};

struct Token {
    Tok kind;
    std::string text;
    int64_t int_value = 0;
    double float_value = 0.0;
    int line = 0, col = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) { tokenize(src); }
    std::vector<Token> tokens;

  private:
    void tokenize(const std::string& src) {
        std::vector<int> indents{0};
        int line_no = 0;
        size_t pos = 0;
        while (pos <= src.size()) {
            size_t eol = src.find('\n', pos);
            if (eol == std::string::npos) eol = src.size();
            std::string line = src.substr(pos, eol - pos);
            ++line_no;
            lex_line(line, line_no, indents);
            if (eol == src.size()) break;
            pos = eol + 1;
        }
        while (indents.size() > 1) {
            indents.pop_back();
            push(Tok::dedent, "", line_no + 1, 0);
        }
        push(Tok::eof, "", line_no + 1, 0);
    }

    void lex_line(const std::string& line, int line_no, std::vector<int>& indents) {
        size_t i = 0;
        int indent = 0;
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
            indent += line[i] == '\t' ? 4 : 1;
            ++i;
        }
        // Blank or comment-only lines do not affect indentation.
        if (i >= line.size() || line[i] == '#') return;
        if (indent > indents.back()) {
            indents.push_back(indent);
            push(Tok::indent, "", line_no, 1);
        } else {
            while (indent < indents.back()) {
                indents.pop_back();
                push(Tok::dedent, "", line_no, 1);
            }
            if (indent != indents.back())
                throw ParseError(line_no, 1, "inconsistent indentation");
        }
        while (i < line.size()) {
            char c = line[i];
            int col = static_cast<int>(i) + 1;
            if (c == ' ' || c == '\t') {
                ++i;
                continue;
            }
            if (c == '#') break;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t j = i;
                while (j < line.size() &&
                       (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
                    ++j;
                push(Tok::ident, line.substr(i, j - i), line_no, col);
                i = j;
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t j = i;
                bool is_float = false;
                while (j < line.size() &&
                       (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.')) {
                    if (line[j] == '.') is_float = true;
                    ++j;
                }
                Token t;
                t.line = line_no;
                t.col = col;
                t.text = line.substr(i, j - i);
                if (is_float) {
                    t.kind = Tok::float_lit;
                    t.float_value = std::strtod(t.text.c_str(), nullptr);
                } else {
                    t.kind = Tok::int_lit;
                    t.int_value = std::strtoll(t.text.c_str(), nullptr, 10);
                }
                tokens.push_back(t);
                i = j;
                continue;
            }
            auto two = line.substr(i, 2);
            if (two == "==") { push(Tok::eq, two, line_no, col); i += 2; continue; }
            if (two == "//") { push(Tok::dslash, two, line_no, col); i += 2; continue; }
            if (two == "**") { push(Tok::dstar, two, line_no, col); i += 2; continue; }
            if (two == "->") { push(Tok::arrow, two, line_no, col); i += 2; continue; }
            switch (c) {
                case '(': push(Tok::lparen, "(", line_no, col); break;
                case ')': push(Tok::rparen, ")", line_no, col); break;
                case '[': push(Tok::lbracket, "[", line_no, col); break;
                case ']': push(Tok::rbracket, "]", line_no, col); break;
                case ',': push(Tok::comma, ",", line_no, col); break;
                case ':': push(Tok::colon, ":", line_no, col); break;
                case '=': push(Tok::assign, "=", line_no, col); break;
                case '<': push(Tok::lt, "<", line_no, col); break;
                case '>': push(Tok::gt, ">", line_no, col); break;
                case '+': push(Tok::plus, "+", line_no, col); break;
                case '-': push(Tok::minus, "-", line_no, col); break;
                case '*': push(Tok::star, "*", line_no, col); break;
                case '/': push(Tok::slash, "/", line_no, col); break;
                default:
                    throw ParseError(line_no, col, std::string("unknown character '") + c + "'");
            }
            ++i;
        }
        push(Tok::newline, "", line_no, static_cast<int>(line.size()) + 1);
    }

    void push(Tok k, std::string text, int line, int col) {
        Token t;
        t.kind = k;
        t.text = std::move(text);
        t.line = line;
        t.col = col;
        tokens.push_back(t);
    }
};

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program parse() {
        Program p;
        skip_newlines();
        bool seen_stmt = false;
        while (!at(Tok::eof)) {
            if (is_decl_start()) {
                if (seen_stmt)
                    fail("declarations must precede statements");
                p.declarations.push_back(parse_decl());
            } else {
                seen_stmt = true;
                p.body.push_back(parse_stmt(false));
            }
            skip_newlines();
        }
        return p;
    }

  private:
    std::vector<Token> toks_;
    size_t pos_ = 0;

    const Token& cur() const { return toks_[pos_]; }
    bool at(Tok k) const { return cur().kind == k; }
    bool at_ident(const char* s) const { return at(Tok::ident) && cur().text == s; }

    const Token& advance() { return toks_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(cur().line, cur().col, msg);
    }

    const Token& expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        return advance();
    }

    std::string expect_ident(const char* what) {
        if (!at(Tok::ident)) fail(std::string("expected ") + what);
        return advance().text;
    }

    void skip_newlines() {
        while (at(Tok::newline)) advance();
    }

    bool is_decl_start() const {
        return at_ident("int") || at_ident("fixed") || at_ident("bool");
    }

    // ---- declarations ----

    VarDecl parse_decl() {
        VarDecl d;
        std::string kw = expect_ident("type name");
        d.kind = kw == "int"     ? VarKind::int_kind
                 : kw == "fixed" ? VarKind::fixed_kind
                                 : VarKind::bool_kind;
        while (at(Tok::lbracket)) {
            advance();
            const Token& n = expect(Tok::int_lit, "dimension");
            if (n.int_value <= 0) throw ParseError(n.line, n.col, "dimension must be positive");
            d.dims.push_back(n.int_value);
            expect(Tok::rbracket, "']'");
            if (d.dims.size() > 2) fail("at most two dimensions");
        }
        d.name = expect_ident("variable name");
        if (at(Tok::assign)) {
            advance();
            if (at(Tok::lbracket)) {
                advance();
                d.init_kind = VarDecl::InitKind::list;
                d.init_list.push_back(parse_expr());
                while (at(Tok::comma)) {
                    advance();
                    d.init_list.push_back(parse_expr());
                }
                expect(Tok::rbracket, "']'");
            } else if (at_ident("random")) {
                advance();
                d.init_kind = VarDecl::InitKind::random;
                expect(Tok::lparen, "'('");
                d.random_rows = expect(Tok::int_lit, "row count").int_value;
                expect(Tok::comma, "','");
                d.random_cols = expect(Tok::int_lit, "column count").int_value;
                if (at(Tok::comma)) {
                    advance();
                    d.random_form = expect_ident("matrix form");
                    if (d.random_form != "diagonal" && d.random_form != "blocks2")
                        fail("matrix form must be 'diagonal' or 'blocks2'");
                }
                expect(Tok::rparen, "')'");
            } else {
                d.init_kind = VarDecl::InitKind::scalar;
                d.init_scalar = parse_expr();
            }
        }
        expect(Tok::newline, "end of line");
        return d;
    }

    // ---- statements ----

    StmtPtr parse_stmt(bool inside_strict) {
        if (at_ident("play")) return parse_play();
        if (at_ident("measure")) return parse_measure();
        if (at_ident("wait")) return parse_wait();
        if (at_ident("align")) return parse_align();
        if (at_ident("update_frequency")) return parse_elem_update(Stmt::Kind::update_frequency);
        if (at_ident("set_dc_offset")) return parse_elem_update(Stmt::Kind::set_dc_offset);
        if (at_ident("set_threshold")) return parse_elem_update(Stmt::Kind::set_threshold);
        if (at_ident("frame_rotation_2pi") || at_ident("frame_rot_2pi")) return parse_frame_rot();
        if (at_ident("strict_timing")) return parse_strict(inside_strict);
        if (at_ident("if")) return parse_if(inside_strict);
        if (at_ident("while")) return parse_while(inside_strict);
        if (at_ident("for")) return parse_for(inside_strict);
        if (is_decl_start()) fail("declarations are only allowed at the top of the program");
        return parse_assign();
    }

    StmtList parse_block(bool inside_strict) {
        expect(Tok::colon, "':'");
        expect(Tok::newline, "end of line");
        skip_newlines();
        expect(Tok::indent, "indented block");
        StmtList body;
        skip_newlines();
        while (!at(Tok::dedent) && !at(Tok::eof)) {
            body.push_back(parse_stmt(inside_strict));
            skip_newlines();
        }
        if (at(Tok::dedent)) advance();
        if (body.empty()) fail("empty block");
        return body;
    }

    std::optional<Ref> parse_opt_timestamp() {
        if (!at(Tok::comma)) return std::nullopt;
        size_t save = pos_;
        advance();
        if (at_ident("timestamp")) {
            advance();
            expect(Tok::arrow, "'->'");
            return parse_ref();
        }
        pos_ = save;
        return std::nullopt;
    }

    Ref parse_ref() {
        Ref r;
        r.name = expect_ident("identifier");
        if (at(Tok::lbracket)) {
            advance();
            r.index = parse_expr();
            expect(Tok::rbracket, "']'");
        }
        return r;
    }

    StmtPtr parse_play() {
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::play;
        advance();
        expect(Tok::lparen, "'('");
        s->pulse = expect_ident("pulse name");
        if (at(Tok::star)) {
            advance();
            if (!at_ident("amp")) fail("expected amp(...)");
            advance();
            expect(Tok::lparen, "'('");
            s->amp_scale = parse_expr();
            expect(Tok::rparen, "')'");
        }
        expect(Tok::comma, "','");
        s->element = expect_ident("element name");
        if (at(Tok::comma)) {
            size_t save = pos_;
            advance();
            if (at_ident("condition")) {
                advance();
                expect(Tok::assign, "'='");
                s->condition = parse_expr();
            } else {
                pos_ = save;
            }
        }
        s->timestamp = parse_opt_timestamp();
        expect(Tok::rparen, "')'");
        expect(Tok::newline, "end of line");
        return s;
    }

    StmtPtr parse_measure() {
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::measure;
        advance();
        expect(Tok::lparen, "'('");
        s->pulse = expect_ident("pulse name");
        expect(Tok::comma, "','");
        s->element = expect_ident("element name");
        expect(Tok::comma, "','");
        if (!at_ident("demod")) fail("expected demod(...)");
        advance();
        expect(Tok::lparen, "'('");
        s->demod_target = parse_ref();
        expect(Tok::rparen, "')'");
        s->timestamp = parse_opt_timestamp();
        expect(Tok::rparen, "')'");
        expect(Tok::newline, "end of line");
        return s;
    }

    StmtPtr parse_wait() {
        auto s = std::make_shared<Stmt>();
        advance();
        expect(Tok::lparen, "'('");
        if (at_ident("max_time")) {
            advance();
            expect(Tok::assign, "'='");
            s->kind = Stmt::Kind::wait_max_time;
        } else {
            s->kind = Stmt::Kind::wait_duration;
        }
        s->duration = parse_expr();
        while (at(Tok::comma)) {
            advance();
            s->elements.push_back(expect_ident("element name"));
        }
        if (s->elements.empty()) fail("wait requires at least one element");
        expect(Tok::rparen, "')'");
        expect(Tok::newline, "end of line");
        return s;
    }

    StmtPtr parse_align() {
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::align;
        advance();
        expect(Tok::lparen, "'('");
        s->elements.push_back(expect_ident("element name"));
        while (at(Tok::comma)) {
            advance();
            s->elements.push_back(expect_ident("element name"));
        }
        expect(Tok::rparen, "')'");
        expect(Tok::newline, "end of line");
        return s;
    }

    StmtPtr parse_elem_update(Stmt::Kind kind) {
        auto s = std::make_shared<Stmt>();
        s->kind = kind;
        advance();
        expect(Tok::lparen, "'('");
        s->element = expect_ident("element name");
        expect(Tok::comma, "','");
        s->value = parse_expr();
        expect(Tok::rparen, "')'");
        expect(Tok::newline, "end of line");
        return s;
    }

    StmtPtr parse_frame_rot() {
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::frame_rotation;
        advance();
        expect(Tok::lparen, "'('");
        s->value = parse_expr();
        expect(Tok::comma, "','");
        s->element = expect_ident("element name");
        expect(Tok::rparen, "')'");
        expect(Tok::newline, "end of line");
        return s;
    }

    StmtPtr parse_strict(bool inside_strict) {
        const Token& kw = cur();
        if (inside_strict)
            throw ParseError(kw.line, kw.col, "strict_timing blocks cannot be nested");
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::strict_timing;
        advance();
        s->body = parse_block(true);
        return s;
    }

    StmtPtr parse_if(bool inside_strict) {
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::if_stmt;
        advance();
        // Both "if cond:" and "if (cond):" appear in the wild.
        s->cond = parse_expr();
        s->body = parse_block(inside_strict);
        return s;
    }

    StmtPtr parse_while(bool inside_strict) {
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::while_stmt;
        advance();
        s->cond = parse_expr();
        s->body = parse_block(inside_strict);
        return s;
    }

    StmtPtr parse_for(bool inside_strict) {
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::for_stmt;
        advance();
        expect(Tok::lparen, "'('");
        s->loop_var = expect_ident("loop variable");
        expect(Tok::comma, "','");
        s->loop_init = parse_expr();
        expect(Tok::comma, "','");
        s->cond = parse_expr();
        expect(Tok::comma, "','");
        s->loop_step = parse_expr();
        expect(Tok::rparen, "')'");
        s->body = parse_block(inside_strict);
        return s;
    }

    StmtPtr parse_assign() {
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::assign;
        s->target = parse_ref();
        expect(Tok::assign, "'='");
        s->value = parse_expr();
        expect(Tok::newline, "end of line");
        return s;
    }

    // ---- expressions (precedence climbing) ----

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        auto e = parse_and();
        while (at_ident("or")) {
            advance();
            e = make_binary(BinOp::logic_or, e, parse_and());
        }
        return e;
    }

    ExprPtr parse_and() {
        auto e = parse_not();
        while (at_ident("and")) {
            advance();
            e = make_binary(BinOp::logic_and, e, parse_not());
        }
        return e;
    }

    ExprPtr parse_not() {
        if (at_ident("not")) {
            advance();
            return make_unary(UnOp::logic_not, parse_not());
        }
        return parse_comparison();
    }

    ExprPtr parse_comparison() {
        auto e = parse_additive();
        if (at(Tok::lt) || at(Tok::gt) || at(Tok::eq)) {
            BinOp op = at(Tok::lt) ? BinOp::lt : at(Tok::gt) ? BinOp::gt : BinOp::eq;
            advance();
            e = make_binary(op, e, parse_additive());
        }
        return e;
    }

    ExprPtr parse_additive() {
        auto e = parse_multiplicative();
        while (at(Tok::plus) || at(Tok::minus)) {
            BinOp op = at(Tok::plus) ? BinOp::add : BinOp::sub;
            advance();
            e = make_binary(op, e, parse_multiplicative());
        }
        return e;
    }

    ExprPtr parse_multiplicative() {
        auto e = parse_power();
        while (at(Tok::star) || at(Tok::slash) || at(Tok::dslash)) {
            BinOp op = at(Tok::star) ? BinOp::mul : at(Tok::slash) ? BinOp::div : BinOp::int_div;
            advance();
            e = make_binary(op, e, parse_power());
        }
        return e;
    }

    ExprPtr parse_power() {
        auto e = parse_unary();
        if (at(Tok::dstar)) {
            advance();
            e = make_binary(BinOp::pow, e, parse_power());  // right associative
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (at(Tok::minus)) {
            advance();
            return make_unary(UnOp::neg, parse_unary());
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        if (at(Tok::int_lit)) return make_int(advance().int_value);
        if (at(Tok::float_lit)) return make_fixed(advance().float_value);
        if (at(Tok::lparen)) {
            advance();
            auto e = parse_expr();
            expect(Tok::rparen, "')'");
            return e;
        }
        if (at(Tok::ident)) {
            const std::string name = cur().text;
            if (name == "True") { advance(); return make_bool(true); }
            if (name == "False") { advance(); return make_bool(false); }
            std::optional<Builtin> b;
            if (name == "bin2dec") b = Builtin::bin2dec;
            else if (name == "sum") b = Builtin::sum;
            else if (name == "and_all") b = Builtin::and_all;
            else if (name == "to_int") b = Builtin::to_int;
            else if (name == "to_fixed") b = Builtin::to_fixed;
            else if (name == "matvec") b = Builtin::matvec;
            if (b) {
                advance();
                expect(Tok::lparen, "'('");
                std::vector<ExprPtr> args{parse_expr()};
                while (at(Tok::comma)) {
                    advance();
                    args.push_back(parse_expr());
                }
                expect(Tok::rparen, "')'");
                return make_call(*b, std::move(args));
            }
            if (name == "lut_lookup") {
                // Alias for table indexing; canonical form is table[index].
                advance();
                expect(Tok::lparen, "'('");
                std::string table = expect_ident("table name");
                expect(Tok::comma, "','");
                auto idx = parse_expr();
                expect(Tok::rparen, "')'");
                return make_index(table, idx);
            }
            advance();
            if (at(Tok::lbracket)) {
                advance();
                auto idx = parse_expr();
                expect(Tok::rbracket, "']'");
                return make_index(name, idx);
            }
            return make_var(name);
        }
        fail("expected expression");
    }
};

}  // namespace

Program parse_program(const std::string& source_text) {
    Lexer lex(source_text);
    Parser parser(std::move(lex.tokens));
    return parser.parse();
}

}  // namespace qcs::lang
