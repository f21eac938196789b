#pragma once

#include <string>

#include "sf/expr.hpp"

namespace sf {

struct ParseError : ExprError {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : ExprError(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

// Grammar:
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | atom ('^' exponent)?
//   atom    := integer | name | name '('args')' | name primes '('args')'
//            | 'D' '[' int(,int)* ']' name '('args')' | 'exp' '('expr')' | '('expr')'
//   exponent:= atom-or-signed-parenthesized, must fold to a rational constant
// Rational literals are written as quotients of integers (e.g. 3/2).
ExprPtr parse(const std::string& text);

}  // namespace sf
