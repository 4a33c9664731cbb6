#pragma once

#include <stdexcept>
#include <string>

#include "qcs/lang/ast.hpp"

namespace qcs::lang {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + msg),
          line(line_),
          column(col_) {}
};

// Parses a .qcl source text (see docs/grammar.md). Throws ParseError.
Program parse_program(const std::string& source_text);

}  // namespace qcs::lang
