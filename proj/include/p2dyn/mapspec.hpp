#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "p2dyn/iteration.hpp"
#include "p2dyn/maps.hpp"

namespace p2dyn {

/// 1-based line and column.
struct SourcePos {
  int line = 1;
  int col = 1;
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

/// A parsed argument value. Positions are kept for diagnostics and ignored
/// by operator==.
struct Value {
  enum class Kind { Int, Real, Complex, List, String, Ident };

  Kind kind = Kind::Int;
  std::int64_t i = 0;
  double x = 0.0;
  complex c{};
  std::vector<complex> list;
  std::string text;  // String and Ident
  SourcePos pos;
  std::vector<SourcePos> item_pos;

  static Value integer(std::int64_t v);
  static Value real(double v);
  static Value cplx(complex v);
  static Value of_list(std::vector<complex> v);
  static Value string(std::string s);
  static Value ident(std::string s);

  friend bool operator==(const Value& a, const Value& b);
};

struct Arg {
  std::string name;
  Value value;
  SourcePos pos;
  friend bool operator==(const Arg& a, const Arg& b) { return a.name == b.name && a.value == b.value; }
};

const Arg* find_arg(const std::vector<Arg>& args, std::string_view name);

/// kind is one of moebius, canonical, blaschke, form1, finite_blaschke.
struct MapDecl {
  std::string name;
  std::string kind;
  std::vector<Arg> args;
  bool conj = false;
  SourcePos pos;
  friend bool operator==(const MapDecl& a, const MapDecl& b) {
    return a.name == b.name && a.kind == b.kind && a.args == b.args && a.conj == b.conj;
  }
};

/// kind is one of julia, steiner, orbit.
struct JobDecl {
  std::string name;
  std::string kind;
  std::vector<Arg> args;
  SourcePos pos;
  friend bool operator==(const JobDecl& a, const JobDecl& b) {
    return a.name == b.name && a.kind == b.kind && a.args == b.args;
  }
};

struct Spec {
  std::vector<MapDecl> maps;
  std::vector<JobDecl> jobs;

  const MapDecl* find_map(std::string_view name) const;
  const JobDecl* find_job(std::string_view name) const;

  friend bool operator==(const Spec&, const Spec&) = default;
};

struct Diagnostic {
  enum class Kind { Lexical, Syntax, Semantic };
  Kind kind;
  SourcePos pos;
  std::string message;

  /// "line:col: <kind> error: message"
  std::string str() const;
};

class SpecError : public std::runtime_error {
 public:
  explicit SpecError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  /// True when any diagnostic is lexical or syntactic.
  bool is_parse_error() const;

 private:
  std::vector<Diagnostic> diags_;
};

/// Parses and validates a .kmap text. Lexical and syntax errors stop at the
/// first one; semantic checks run afterwards and report every violation.
/// Throws SpecError.
Spec parse(std::string_view text);

/// Canonical text: one declaration per line, maps first, numbers with 17
/// significant digits.
std::string format_spec(const Spec& spec);

/// Builds the map object; the declaration must have passed validation.
DianalyticMap build_map(const MapDecl& decl);

/// Defaults filled in; window height follows res_h / res_w.
struct JuliaJob {
  std::string map;
  Window window;
  Resolution res{512, 512};
  int max_iter = kDefaultMaxIter;
  double eps = kDefaultEps;
  std::string out;
};

struct SteinerJob {
  std::string map;
  Window window;
  Resolution res{512, 512};
  int meridians = 12;
  int latitudes = 9;
  std::string out;
};

struct OrbitJob {
  std::string map;
  ExtComplex start;
  int steps = 10;
  std::optional<std::string> out;  // standard output when empty
};

JuliaJob julia_job(const JobDecl& job);
SteinerJob steiner_job(const JobDecl& job);
OrbitJob orbit_job(const JobDecl& job);

}  // namespace p2dyn
