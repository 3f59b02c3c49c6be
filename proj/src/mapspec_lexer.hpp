#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "p2dyn/mapspec.hpp"

namespace p2dyn::detail {

enum class Tok { Ident, Int, Number, Imag, String, Equals, LParen, RParen, LBracket, RBracket, Comma, Plus, Minus, End };

struct Token {
  Tok kind;
  std::string text;  // identifier name, string contents, or the raw number
  std::int64_t i = 0;
  double x = 0.0;  // Number and Imag (the coefficient of i)
  SourcePos pos;
};

const char* describe(Tok t);

/// Throws SpecError with a single lexical diagnostic. A lone "i" lexes as the
/// imaginary unit, so it cannot name a declaration.
std::vector<Token> lex(std::string_view text);

}  // namespace p2dyn::detail
