#include <cmath>
#include <cstdio>
#include <string>

#include "p2dyn/mapspec.hpp"

namespace p2dyn {

Value Value::integer(std::int64_t v) {
  Value out;
  out.kind = Kind::Int;
  out.i = v;
  return out;
}

Value Value::real(double v) {
  Value out;
  out.kind = Kind::Real;
  out.x = v;
  return out;
}

Value Value::cplx(complex v) {
  Value out;
  out.kind = Kind::Complex;
  out.c = v;
  return out;
}

Value Value::of_list(std::vector<complex> v) {
  Value out;
  out.kind = Kind::List;
  out.list = std::move(v);
  return out;
}

Value Value::string(std::string s) {
  Value out;
  out.kind = Kind::String;
  out.text = std::move(s);
  return out;
}

Value Value::ident(std::string s) {
  Value out;
  out.kind = Kind::Ident;
  out.text = std::move(s);
  return out;
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Int:
      return a.i == b.i;
    case Value::Kind::Real:
      return a.x == b.x;
    case Value::Kind::Complex:
      return a.c == b.c;
    case Value::Kind::List:
      return a.list == b.list;
    case Value::Kind::String:
    case Value::Kind::Ident:
      return a.text == b.text;
  }
  return false;
}

const Arg* find_arg(const std::vector<Arg>& args, std::string_view name) {
  for (const Arg& a : args) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const MapDecl* Spec::find_map(std::string_view name) const {
  for (const MapDecl& m : maps) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

const JobDecl* Spec::find_job(std::string_view name) const {
  for (const JobDecl& j : jobs) {
    if (j.name == name) return &j;
  }
  return nullptr;
}

std::string Diagnostic::str() const {
  const char* k = kind == Kind::Lexical ? "lexical" : kind == Kind::Syntax ? "syntax" : "semantic";
  return std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + k + " error: " + message;
}

namespace {

std::string join(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const Diagnostic& d : diags) out += (out.empty() ? "" : "\n") + d.str();
  return out;
}

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// A real must not re-lex as an integer.
std::string real_literal(double x) {
  std::string s = g17(x);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string complex_literal(complex z) {
  return g17(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + g17(std::abs(z.imag())) + "i";
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out.push_back(c);
    }
  }
  return out + "\"";
}

std::string literal(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int:
      return std::to_string(v.i);
    case Value::Kind::Real:
      return real_literal(v.x);
    case Value::Kind::Complex:
      return complex_literal(v.c);
    case Value::Kind::List: {
      std::string out = "[";
      for (std::size_t k = 0; k < v.list.size(); ++k) {
        if (k) out += ", ";
        const complex z = v.list[k];
        out += z.imag() == 0.0 && !std::signbit(z.imag()) ? g17(z.real()) : complex_literal(z);
      }
      return out + "]";
    }
    case Value::Kind::String:
      return quoted(v.text);
    case Value::Kind::Ident:
      return v.text;
  }
  return "";
}

std::string arg_list(const std::vector<Arg>& args) {
  std::string out;
  for (const Arg& a : args) out += (out.empty() ? "" : ", ") + a.name + "=" + literal(a.value);
  return out;
}

}  // namespace

SpecError::SpecError(std::vector<Diagnostic> diags) : std::runtime_error(join(diags)), diags_(std::move(diags)) {}

bool SpecError::is_parse_error() const {
  for (const Diagnostic& d : diags_) {
    if (d.kind != Diagnostic::Kind::Semantic) return true;
  }
  return false;
}

std::string format_spec(const Spec& spec) {
  std::string out;
  for (const MapDecl& m : spec.maps) {
    out += "map " + m.name + " = " + m.kind + "(" + arg_list(m.args) + ")" + (m.conj ? " conj" : "") + "\n";
  }
  for (const JobDecl& j : spec.jobs) out += "job " + j.name + " = " + j.kind + "(" + arg_list(j.args) + ")\n";
  return out;
}

}  // namespace p2dyn
