#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "qcs/config.hpp"
#include "qcs/lang/ast.hpp"

namespace qcs::lang {

enum class CheckErrorKind {
    undeclared_variable,
    duplicate_declaration,
    type_mismatch,
    unknown_element,
    unknown_pulse,
    nested_strict_timing,
    invalid_shape,
};

struct CheckError : std::runtime_error {
    CheckErrorKind error_kind;
    std::string symbol;  // offending variable/element name when applicable
    CheckError(CheckErrorKind k, std::string sym, const std::string& msg)
        : std::runtime_error(msg), error_kind(k), symbol(std::move(sym)) {}
};

struct SymbolInfo {
    VarKind kind = VarKind::int_kind;
    std::vector<int64_t> dims;  // empty = scalar
    bool implicit_timestamp = false;
};

// A checked program: every variable resolved and typed, every element and
// pulse reference resolved against the machine configuration.
struct TypedProgram {
    Program program;
    std::map<std::string, SymbolInfo> symbols;
    std::set<std::string> elements_used;
};

TypedProgram check_program(const Program& p, const MachineConfig& mc);

}  // namespace qcs::lang
