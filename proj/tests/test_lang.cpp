#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcs/lang/checker.hpp"
#include "qcs/lang/parser.hpp"
#include "qcs/lang/printer.hpp"

using namespace qcs;
using namespace qcs::lang;

namespace {

void check_round_trip(const std::string& src) {
    Program p1 = parse_program(src);
    std::string printed = print_program(p1);
    Program p2 = parse_program(printed);
    CHECK(p1.equals(p2));
    // printing is a fixed point
    CHECK(print_program(p2) == printed);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("empty program") {
    Program p = parse_program("");
    CHECK(p.declarations.empty());
    CHECK(p.body.empty());
    CHECK(print_program(p) == "");
}

TEST_CASE("single play statement prints canonically") {
    Program p = parse_program("play(control_pulse, control_element)\n");
    REQUIRE(p.body.size() == 1);
    CHECK(p.body[0]->kind == Stmt::Kind::play);
    CHECK(print_program(p) == "play(control_pulse, control_element)\n");
}

TEST_CASE("conditional feedback program parses into one strict block of four") {
    const char* src = R"(fixed x
bool s

strict_timing:
    measure(readout_pulse, readout_element, demod(x), timestamp -> re_time)
    s = x > 0
    wait(max_time = 100, control_element)
    play(control_pulse, control_element, condition = s, timestamp -> ce_time)
)";
    Program p = parse_program(src);
    REQUIRE(p.body.size() == 1);
    REQUIRE(p.body[0]->kind == Stmt::Kind::strict_timing);
    CHECK(p.body[0]->body.size() == 4);
    check_round_trip(src);

    auto tp = check_program(p, default_machine_config(1));
    CHECK(tp.symbols.at("x").kind == VarKind::fixed_kind);
    CHECK(tp.symbols.at("re_time").kind == VarKind::int_kind);
    CHECK(tp.symbols.at("re_time").implicit_timestamp);
    CHECK(tp.elements_used.count("readout_element") == 1);
    CHECK(tp.elements_used.count("control_element") == 1);
}

TEST_CASE("malformed input gives positioned errors") {
    CHECK_THROWS_AS(parse_program("play(p1 q0)\n"), ParseError);
    try {
        parse_program("play(p1 q0)\n");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.column == 9);
    }
    CHECK_THROWS_AS(parse_program("x = $\n"), ParseError);
    CHECK_THROWS_AS(parse_program("if True:\nplay(a, b)\n"), ParseError);  // empty block
}

TEST_CASE("nested strict blocks are rejected at parse time") {
    const char* src = R"(strict_timing:
    strict_timing:
        play(control_pulse, control_element)
)";
    CHECK_THROWS_AS(parse_program(src), ParseError);
}

TEST_CASE("declarations after statements are rejected") {
    CHECK_THROWS_AS(parse_program("play(control_pulse, control_element)\nint n\n"), ParseError);
}

TEST_CASE("expression precedence and round trips") {
    check_round_trip("int a\nint b\nint c\n\na = b + c * 2\n");
    check_round_trip("int a\nint b\nint c\n\na = (b + c) * 2\n");
    check_round_trip("int a\n\na = 2 ** 3 ** 2\n");
    check_round_trip("int a\nint b\n\na = -b ** 2\n");
    check_round_trip("bool t\nfixed x\n\nt = x > 0 and not (x > 1)\n");
    check_round_trip("int a\nint b\n\na = b // 3 - a // (b - 1)\n");
    check_round_trip("fixed y\nint n\n\ny = n / 7\n");

    Program p = parse_program("int a\n\na = 2 ** 3 ** 2\n");
    // right associative: 2 ** (3 ** 2)
    const Expr& e = *p.body[0]->value;
    REQUIRE(e.kind == Expr::Kind::binary);
    CHECK(e.lhs->kind == Expr::Kind::int_lit);
    CHECK(e.rhs->kind == Expr::Kind::binary);
}

TEST_CASE("lut_lookup is the same as indexing") {
    Program a = parse_program("fixed[4] t\nint i\nfixed v\n\nv = lut_lookup(t, i)\n");
    Program b = parse_program("fixed[4] t\nint i\nfixed v\n\nv = t[i]\n");
    CHECK(a.equals(b));
}

TEST_CASE("frame rotation aliases") {
    Program a = parse_program("frame_rot_2pi(0.25, control_element)\n");
    Program b = parse_program("frame_rotation_2pi(0.25, control_element)\n");
    CHECK(a.equals(b));
    CHECK(print_program(a) == "frame_rotation_2pi(0.25, control_element)\n");
}

TEST_CASE("declaration forms round trip") {
    check_round_trip("int n = 5\nfixed[4] lut = [0.1, 0.2, 0.3, 0.4]\nbool[16] s\nfixed[2][3] m = random(2, 3)\n");
    Program p = parse_program("fixed[2][3] m = random(2, 3)\n");
    CHECK(p.declarations[0].init_kind == VarDecl::InitKind::random);
    CHECK(p.declarations[0].random_rows == 2);
    CHECK(p.declarations[0].random_cols == 3);
}

TEST_CASE("checker rejects bad programs") {
    auto mc = default_machine_config(1);
    auto check_src = [&](const char* src) { return check_program(parse_program(src), mc); };

    CHECK_THROWS_AS(check_src("int x\n\ny = 1\n"), CheckError);
    try {
        check_src("int x\n\ny = 1\n");
    } catch (const CheckError& e) {
        CHECK(e.error_kind == CheckErrorKind::undeclared_variable);
        CHECK(e.symbol == "y");
    }

    CHECK_THROWS_AS(check_src("int x\nint x\n"), CheckError);
    CHECK_THROWS_AS(check_src("bool b\nfixed x\n\nb = x\n"), CheckError);          // fixed into bool
    CHECK_THROWS_AS(check_src("fixed x\nint n\n\nx = x + n\n"), CheckError);       // mixed add
    CHECK_THROWS_AS(check_src("play(control_pulse, nowhere)\n"), CheckError);      // unknown element
    CHECK_THROWS_AS(check_src("play(readout_pulse, control_element)\n"), CheckError);  // wrong pulse
    CHECK_THROWS_AS(check_src("fixed x\n\nmeasure(control_pulse, control_element, demod(x))\n"),
                    CheckError);  // control elements cannot measure
    CHECK_THROWS_AS(check_src("bool[4] s\nint n\n\nn = bin2dec(n)\n"), CheckError);
    CHECK_THROWS_AS(check_src("fixed x\n\nif x:\n    play(control_pulse, control_element)\n"),
                    CheckError);  // non-bool condition
}

TEST_CASE("checker accepts the mixed-kind idioms the corpus uses") {
    auto mc = default_machine_config(1);
    auto ok = [&](const char* src) { CHECK_NOTHROW(check_program(parse_program(src), mc)); };

    ok("fixed x\nint s\n\ns = x > 0\n");                         // bool widens into int
    ok("bool[16] s\nfixed v\n\nv = bin2dec(s) / 2 ** 16\n");     // '/' yields fixed
    ok("fixed[2] lut\nfixed v\nbool b\n\nv = lut[b]\n");         // bool index coerces
    ok("fixed x\nint n\n\nx = x * n\n");                         // fixed scaled by int
    ok("fixed x\nint n\n\nx = x / n\n");
    ok("int[3] h\nfixed[2][3] t\nfixed[2] f\n\nf = matvec(t, h) / 10\n");
    ok("fixed x\n\nmeasure(readout_pulse, readout_element, demod(x))\n");
    ok("bool s\nfixed x\n\ns = x > 0\nplay(pi, control_element, condition = s)\n");
}

TEST_CASE("checker enforces matvec shapes") {
    auto mc = default_machine_config(1);
    CHECK_THROWS_AS(
        check_program(parse_program("int[4] h\nfixed[2][3] t\nfixed[2] f\n\nf = matvec(t, h)\n"), mc),
        CheckError);
    CHECK_THROWS_AS(
        check_program(parse_program("int[3] h\nfixed[2][3] t\nfixed[3] f\n\nf = matvec(t, h)\n"), mc),
        CheckError);
}

TEST_CASE("corpus files parse, round trip, and check") {
    std::filesystem::path dir = QCS_CORPUS_DIR;
    REQUIRE(std::filesystem::exists(dir));
    auto mc = default_machine_config(50);
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".qcl") continue;
        ++count;
        INFO("file: ", entry.path().string());
        std::string src = read_file(entry.path());
        Program p1 = parse_program(src);
        Program p2 = parse_program(print_program(p1));
        CHECK(p1.equals(p2));
        CHECK_NOTHROW(check_program(p1, mc));
    }
    CHECK(count >= 15);
}
