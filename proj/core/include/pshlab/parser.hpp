#pragma once

#include <string_view>

#include "pshlab/expr.hpp"

namespace pshlab {

// Grammar:
//   expr   := ('+'|'-')? term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := number | 'i' | 'z'uint | 'conj(' expr ')' | 'exp(' expr ')'
//           | 're(' expr ')' | 'im(' expr ')' | 'abs2(' expr ')' | '(' expr ')'
// Numbers are decimal literals; a literal immediately followed by 'i' is an
// imaginary constant, so "(1.5+2i)" is a complex constant. re/im/abs2 are
// sugar expanded at parse time. Whitespace is insignificant.

/// Parses `text` into a normalized expression over C^n.
/// Throws ParseError on syntax errors and std::out_of_range when a variable
/// index exceeds n.
Expr parse_expr(std::string_view text, int n);

/// Parses a constant expression (no variables) and evaluates it, e.g. "1+1i".
Cplx parse_complex(std::string_view text);

/// Parses a comma-separated list of complex constants into a point of C^n.
CPoint parse_point(std::string_view text, int n);

} // namespace pshlab
