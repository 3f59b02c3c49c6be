#include "mapspec_lexer.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>

namespace p2dyn::detail {

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident:
      return "identifier";
    case Tok::Int:
      return "integer";
    case Tok::Number:
      return "number";
    case Tok::Imag:
      return "imaginary number";
    case Tok::String:
      return "string";
    case Tok::Equals:
      return "'='";
    case Tok::LParen:
      return "'('";
    case Tok::RParen:
      return "')'";
    case Tok::LBracket:
      return "'['";
    case Tok::RBracket:
      return "']'";
    case Tok::Comma:
      return "','";
    case Tok::Plus:
      return "'+'";
    case Tok::Minus:
      return "'-'";
    case Tok::End:
      return "end of input";
  }
  return "?";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      const SourcePos start = here();
      if (at_end()) {
        out.push_back({Tok::End, "", 0, 0.0, start});
        return out;
      }
      const char c = s_[k_];
      if (ident_start(c)) {
        out.push_back(identifier(start));
      } else if (digit(c) || (c == '.' && k_ + 1 < s_.size() && digit(s_[k_ + 1]))) {
        out.push_back(number(start));
      } else if (c == '"') {
        out.push_back(string(start));
      } else {
        Tok t;
        switch (c) {
          case '=':
            t = Tok::Equals;
            break;
          case '(':
            t = Tok::LParen;
            break;
          case ')':
            t = Tok::RParen;
            break;
          case '[':
            t = Tok::LBracket;
            break;
          case ']':
            t = Tok::RBracket;
            break;
          case ',':
            t = Tok::Comma;
            break;
          case '+':
            t = Tok::Plus;
            break;
          case '-':
            t = Tok::Minus;
            break;
          default:
            fail(start, printable(c));
        }
        advance();
        out.push_back({t, std::string(1, c), 0, 0.0, start});
      }
    }
  }

 private:
  std::string_view s_;
  std::size_t k_ = 0;
  int line_ = 1, col_ = 1;

  bool at_end() const { return k_ >= s_.size(); }
  SourcePos here() const { return {line_, col_}; }

  void advance() {
    if (s_[k_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(s_[k_]) & 0xC0) != 0x80) {
      ++col_;  // count code points, not UTF-8 continuation bytes
    }
    ++k_;
  }

  [[noreturn]] static void fail(SourcePos p, const std::string& msg) {
    throw SpecError({Diagnostic{Diagnostic::Kind::Lexical, p, msg}});
  }

  static std::string printable(char c) {
    if (std::isprint(static_cast<unsigned char>(c))) return std::string("unexpected character '") + c + "'";
    return "unexpected byte 0x" + std::to_string(static_cast<unsigned char>(c));
  }

  void skip_blank() {
    while (!at_end()) {
      const char c = s_[k_];
      if (c == '#') {
        while (!at_end() && s_[k_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        return;
      }
    }
  }

  Token identifier(SourcePos start) {
    const std::size_t b = k_;
    while (!at_end() && ident_char(s_[k_])) advance();
    std::string name(s_.substr(b, k_ - b));
    if (name == "i") return {Tok::Imag, name, 0, 1.0, start};
    return {Tok::Ident, name, 0, 0.0, start};
  }

  Token number(SourcePos start) {
    const std::size_t b = k_;
    bool integral = true;
    while (!at_end() && digit(s_[k_])) advance();
    if (!at_end() && s_[k_] == '.') {
      integral = false;
      advance();
      while (!at_end() && digit(s_[k_])) advance();
    }
    if (!at_end() && (s_[k_] == 'e' || s_[k_] == 'E')) {
      integral = false;
      advance();
      if (!at_end() && (s_[k_] == '+' || s_[k_] == '-')) advance();
      if (at_end() || !digit(s_[k_])) fail(here(), "malformed exponent");
      while (!at_end() && digit(s_[k_])) advance();
    }
    const std::string raw(s_.substr(b, k_ - b));
    bool imag = false;
    if (!at_end() && s_[k_] == 'i') {
      imag = true;
      advance();
    }
    if (!at_end() && ident_char(s_[k_])) fail(here(), "unexpected character '" + std::string(1, s_[k_]) + "' after number");

    errno = 0;
    if (integral && !imag) {
      char* end = nullptr;
      const long long v = std::strtoll(raw.c_str(), &end, 10);
      if (errno == ERANGE) fail(start, "integer out of range: " + raw);
      return {Tok::Int, raw, static_cast<std::int64_t>(v), static_cast<double>(v), start};
    }
    const double v = std::strtod(raw.c_str(), nullptr);
    if (std::isinf(v)) fail(start, "number out of range: " + raw);
    return {imag ? Tok::Imag : Tok::Number, raw, 0, v, start};
  }

  Token string(SourcePos start) {
    advance();  // opening quote
    std::string out;
    for (;;) {
      if (at_end() || s_[k_] == '\n') fail(start, "unterminated string");
      const char c = s_[k_];
      if (c == '"') {
        advance();
        return {Tok::String, out, 0, 0.0, start};
      }
      if (c == '\\') {
        const SourcePos esc = here();
        advance();
        if (at_end()) fail(start, "unterminated string");
        const char e = s_[k_];
        if (e == '"' || e == '\\') {
          out.push_back(e);
        } else if (e == 'n') {
          out.push_back('\n');
        } else if (e == 't') {
          out.push_back('\t');
        } else {
          fail(esc, std::string("unknown escape '\\") + e + "'");
        }
        advance();
        continue;
      }
      out.push_back(c);
      advance();
    }
  }
};

}  // namespace

std::vector<Token> lex(std::string_view text) { return Lexer(text).run(); }

}  // namespace p2dyn::detail
