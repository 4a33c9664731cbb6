#pragma once

#include <string>

#include "qcs/lang/ast.hpp"

namespace qcs::lang {

// Canonical text; parse_program(print_program(p)) is structurally equal to p.
std::string print_program(const Program& p);
std::string print_expr(const Expr& e);

}  // namespace qcs::lang
