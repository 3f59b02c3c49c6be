#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mapspec_lexer.hpp"
#include "p2dyn/mapspec.hpp"

namespace p2dyn {

using detail::Tok;
using detail::Token;

namespace {

constexpr int kMaxResolution = 16384;

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Spec file() {
    Spec s;
    while (peek().kind != Tok::End) {
      if (is_word("map")) {
        s.maps.push_back(map_decl());
      } else if (is_word("job")) {
        s.jobs.push_back(job_decl());
      } else {
        fail(peek().pos, "expected 'map' or 'job', found " + shown(peek()));
      }
    }
    return s;
  }

 private:
  std::vector<Token> t_;
  std::size_t k_ = 0;

  const Token& peek() const { return t_[k_]; }
  const Token& next() { return t_[k_ < t_.size() - 1 ? k_++ : k_]; }
  bool is_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

  static std::string shown(const Token& t) {
    if (t.kind == Tok::Ident) return "'" + t.text + "'";
    if (t.kind == Tok::Int || t.kind == Tok::Number) return "number " + t.text;
    return detail::describe(t.kind);
  }

  [[noreturn]] static void fail(SourcePos p, const std::string& msg) {
    throw SpecError({Diagnostic{Diagnostic::Kind::Syntax, p, msg}});
  }

  const Token& expect(Tok kind, const char* context) {
    if (peek().kind != kind) {
      fail(peek().pos, std::string("expected ") + detail::describe(kind) + " " + context + ", found " + shown(peek()));
    }
    return next();
  }

  std::string expect_kind(std::initializer_list<const char*> kinds, const char* what) {
    const Token& t = expect(Tok::Ident, what);
    for (const char* k : kinds) {
      if (t.text == k) return t.text;
    }
    std::string list;
    for (const char* k : kinds) list += std::string(list.empty() ? "" : ", ") + k;
    fail(t.pos, "unknown " + std::string(what) + " '" + t.text + "' (expected one of " + list + ")");
  }

  MapDecl map_decl() {
    MapDecl d;
    d.pos = next().pos;
    d.name = expect(Tok::Ident, "after 'map'").text;
    expect(Tok::Equals, "after map name");
    d.kind = expect_kind({"moebius", "canonical", "blaschke", "form1", "finite_blaschke"}, "map kind");
    expect(Tok::LParen, "after map kind");
    if (peek().kind != Tok::RParen) d.args = args();
    expect(Tok::RParen, "to close the argument list");
    if (is_word("conj")) {
      next();
      d.conj = true;
    }
    return d;
  }

  JobDecl job_decl() {
    JobDecl d;
    d.pos = next().pos;
    d.name = expect(Tok::Ident, "after 'job'").text;
    expect(Tok::Equals, "after job name");
    d.kind = expect_kind({"julia", "steiner", "orbit"}, "job kind");
    expect(Tok::LParen, "after job kind");
    d.args = args();
    expect(Tok::RParen, "to close the argument list");
    return d;
  }

  std::vector<Arg> args() {
    std::vector<Arg> out;
    for (;;) {
      Arg a;
      const Token& name = expect(Tok::Ident, "as argument name");
      a.name = name.text;
      a.pos = name.pos;
      expect(Tok::Equals, "after argument name");
      a.value = value();
      out.push_back(std::move(a));
      if (peek().kind != Tok::Comma) return out;
      next();
    }
  }

  Value value() {
    const SourcePos pos = peek().pos;
    Value v;
    switch (peek().kind) {
      case Tok::LBracket: {
        next();
        v = Value::of_list({});
        if (peek().kind != Tok::RBracket) {
          for (;;) {
            const SourcePos item = peek().pos;
            const Value e = scalar();
            v.list.push_back(e.kind == Value::Kind::Int ? complex(static_cast<double>(e.i))
                             : e.kind == Value::Kind::Real ? complex(e.x)
                                                           : e.c);
            v.item_pos.push_back(item);
            if (peek().kind != Tok::Comma) break;
            next();
          }
        }
        expect(Tok::RBracket, "to close the list");
        break;
      }
      case Tok::String:
        v = Value::string(next().text);
        break;
      case Tok::Ident:
        v = Value::ident(next().text);
        break;
      default:
        v = scalar();
    }
    v.pos = pos;
    return v;
  }

  // [sign] (INT | NUMBER | IMAG) [ ("+" | "-") IMAG ]; the leading sign
  // binds to the first component only.
  Value scalar() {
    double sign = 1.0;
    bool negate = false;
    if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      negate = next().kind == Tok::Minus;
      sign = negate ? -1.0 : 1.0;
    }
    const Token& t = peek();
    if (t.kind != Tok::Int && t.kind != Tok::Number && t.kind != Tok::Imag) {
      fail(t.pos, "expected a number, found " + shown(t));
    }
    next();
    if (t.kind == Tok::Imag) return Value::cplx({0.0, sign * t.x});
    const double re = sign * t.x;
    if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const double isign = next().kind == Tok::Minus ? -1.0 : 1.0;
      if (peek().kind != Tok::Imag) fail(peek().pos, "expected imaginary part after sign, found " + shown(peek()));
      return Value::cplx({re, isign * next().x});
    }
    if (t.kind == Tok::Int) return Value::integer(negate ? -t.i : t.i);
    return Value::real(re);
  }
};

// ---- semantic validation ----

enum class ArgType { Real, Complex, Int, List, String, MapRef };

struct ArgSpec {
  const char* name;
  ArgType type;
  bool required;
};

const std::vector<ArgSpec>& schema(const std::string& kind) {
  static const std::vector<ArgSpec> moebius{
      {"theta", ArgType::Real, false}, {"a", ArgType::Complex, true}, {"b", ArgType::Complex, true}};
  static const std::vector<ArgSpec> canonical{
      {"alpha", ArgType::Real, false}, {"zeros", ArgType::List, true}, {"infinite_zeros", ArgType::Int, false}};
  static const std::vector<ArgSpec> blaschke{
      {"theta", ArgType::Real, false}, {"p", ArgType::Int, false}, {"zeros", ArgType::List, false}};
  static const std::vector<ArgSpec> form1{
      {"theta", ArgType::Real, false}, {"coeffs", ArgType::List, true}, {"den", ArgType::List, false}};
  static const std::vector<ArgSpec> finite{{"theta", ArgType::Real, false}, {"zeros", ArgType::List, true}};
  static const std::vector<ArgSpec> julia{
      {"map", ArgType::MapRef, true},   {"center", ArgType::Complex, false}, {"width", ArgType::Real, false},
      {"res_w", ArgType::Int, false},   {"res_h", ArgType::Int, false},      {"max_iter", ArgType::Int, false},
      {"eps", ArgType::Real, false},    {"out", ArgType::String, false}};
  static const std::vector<ArgSpec> steiner{
      {"map", ArgType::MapRef, true},   {"meridians", ArgType::Int, false}, {"latitudes", ArgType::Int, false},
      {"out", ArgType::String, false},  {"res_w", ArgType::Int, false},     {"res_h", ArgType::Int, false},
      {"width", ArgType::Real, false},  {"center", ArgType::Complex, false}};
  static const std::vector<ArgSpec> orbit{{"map", ArgType::MapRef, true},
                                          {"start", ArgType::Complex, true},
                                          {"steps", ArgType::Int, false},
                                          {"out", ArgType::String, false}};
  if (kind == "moebius") return moebius;
  if (kind == "canonical") return canonical;
  if (kind == "blaschke") return blaschke;
  if (kind == "form1") return form1;
  if (kind == "finite_blaschke") return finite;
  if (kind == "julia") return julia;
  if (kind == "steiner") return steiner;
  return orbit;
}

bool accepts(ArgType t, Value::Kind k) {
  using K = Value::Kind;
  switch (t) {
    case ArgType::Real:
      return k == K::Int || k == K::Real;
    case ArgType::Complex:
      return k == K::Int || k == K::Real || k == K::Complex;
    case ArgType::Int:
      return k == K::Int;
    case ArgType::List:
      return k == K::List;
    case ArgType::String:
      return k == K::String;
    case ArgType::MapRef:
      return k == K::Ident;
  }
  return false;
}

const char* type_name(ArgType t) {
  switch (t) {
    case ArgType::Real:
      return "a real number";
    case ArgType::Complex:
      return "a complex number";
    case ArgType::Int:
      return "an integer";
    case ArgType::List:
      return "a list of complex numbers";
    case ArgType::String:
      return "a string";
    case ArgType::MapRef:
      return "a map name";
  }
  return "?";
}

double as_real(const Value& v) { return v.kind == Value::Kind::Int ? static_cast<double>(v.i) : v.x; }

complex as_complex(const Value& v) {
  if (v.kind == Value::Kind::Complex) return v.c;
  return {as_real(v), 0.0};
}

double real_or(const std::vector<Arg>& args, std::string_view name, double fallback) {
  const Arg* a = find_arg(args, name);
  return a ? as_real(a->value) : fallback;
}

std::int64_t int_or(const std::vector<Arg>& args, std::string_view name, std::int64_t fallback) {
  const Arg* a = find_arg(args, name);
  return a ? a->value.i : fallback;
}

complex complex_or(const std::vector<Arg>& args, std::string_view name, complex fallback) {
  const Arg* a = find_arg(args, name);
  return a ? as_complex(a->value) : fallback;
}

std::vector<complex> list_or(const std::vector<Arg>& args, std::string_view name) {
  const Arg* a = find_arg(args, name);
  return a ? a->value.list : std::vector<complex>{};
}

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

class Validator {
 public:
  std::vector<Diagnostic> run(const Spec& s) {
    std::set<std::string> names;
    auto claim = [&](const std::string& name, SourcePos pos) {
      if (!names.insert(name).second) error(pos, "duplicate declaration name '" + name + "'");
    };
    for (const MapDecl& m : s.maps) claim(m.name, m.pos);
    for (const JobDecl& j : s.jobs) claim(j.name, j.pos);
    for (const MapDecl& m : s.maps) map(m);
    for (const JobDecl& j : s.jobs) job(s, j);
    std::stable_sort(diags_.begin(), diags_.end(), [](const Diagnostic& a, const Diagnostic& b) {
      return a.pos.line != b.pos.line ? a.pos.line < b.pos.line : a.pos.col < b.pos.col;
    });
    return diags_;
  }

 private:
  std::vector<Diagnostic> diags_;

  void error(SourcePos pos, std::string msg) {
    diags_.push_back({Diagnostic::Kind::Semantic, pos, std::move(msg)});
  }

  // Returns false when any argument is unknown, duplicated, missing or ill-typed.
  bool check_args(const std::string& kind, const std::vector<Arg>& args, SourcePos decl_pos) {
    const auto before = diags_.size();
    const auto& sch = schema(kind);
    std::set<std::string> seen;
    for (const Arg& a : args) {
      const auto it = std::find_if(sch.begin(), sch.end(), [&](const ArgSpec& s) { return a.name == s.name; });
      if (it == sch.end()) {
        error(a.pos, "unknown argument '" + a.name + "' for " + kind);
        continue;
      }
      if (!seen.insert(a.name).second) {
        error(a.pos, "duplicate argument '" + a.name + "'");
        continue;
      }
      if (!accepts(it->type, a.value.kind)) {
        error(a.value.pos, "argument '" + a.name + "' must be " + type_name(it->type));
      }
    }
    for (const ArgSpec& s : sch) {
      if (s.required && !seen.count(s.name)) error(decl_pos, kind + " requires argument '" + s.name + "'");
    }
    return diags_.size() == before;
  }

  void zeros_inside(const Arg& a, bool allow_origin) {
    for (std::size_t k = 0; k < a.value.list.size(); ++k) {
      const double r = std::abs(a.value.list[k]);
      if (r >= 1.0 || (!allow_origin && r == 0.0)) {
        error(a.value.item_pos[k], "zero " + std::to_string(k + 1) + " has modulus " + fmt_num(r) + ", outside " +
                                       (allow_origin ? "[0, 1)" : "(0, 1)"));
      }
    }
  }

  void map(const MapDecl& m) {
    if (!check_args(m.kind, m.args, m.pos)) return;
    const auto before = diags_.size();
    const Arg* zeros = find_arg(m.args, "zeros");
    if (m.kind == "moebius") {
      if (complex_or(m.args, "a", 0.0) == 0.0 && complex_or(m.args, "b", 0.0) == 0.0) {
        error(m.pos, "moebius needs |a|^2 + |b|^2 > 0");
      }
    } else if (m.kind == "canonical") {
      const Arg* inf = find_arg(m.args, "infinite_zeros");
      const std::int64_t n_inf = inf ? inf->value.i : 0;
      if (n_inf < 0) error(inf->value.pos, "infinite_zeros must be >= 0");
      const auto total = static_cast<std::int64_t>(zeros->value.list.size()) + std::max<std::int64_t>(n_inf, 0);
      if (total % 2 == 0) {
        error(zeros->value.pos, "canonical needs an odd number of zeros, got " + std::to_string(total));
      }
    } else if (m.kind == "blaschke") {
      const Arg* p = find_arg(m.args, "p");
      if (p && (p->value.i < 0 || p->value.i > 10000)) error(p->value.pos, "p must lie in [0, 10000]");
      if (zeros) zeros_inside(*zeros, false);
    } else if (m.kind == "finite_blaschke") {
      if (zeros->value.list.empty()) error(zeros->value.pos, "finite_blaschke needs at least one zero");
      zeros_inside(*zeros, true);
    } else if (m.kind == "form1") {
      const Arg* coeffs = find_arg(m.args, "coeffs");
      const auto& c = coeffs->value.list;
      if (c.size() < 2 || c.size() % 2 != 0) {
        error(coeffs->value.pos, "form1 needs an odd degree: an even number (>= 2) of coefficients, got " +
                                     std::to_string(c.size()));
      } else if (std::all_of(c.begin(), c.end(), [](complex z) { return z == 0.0; })) {
        error(coeffs->value.pos, "form1 coefficients must not all vanish");
      } else if (const Arg* den = find_arg(m.args, "den")) {
        if (den->value.list.size() != c.size()) {
          error(den->value.pos, "den must have as many coefficients as coeffs");
        } else if (!validate_form1(c, den->value.list, 1e-12)) {
          error(den->value.pos, "den is not the h-transform of coeffs; the map would not be h-invariant");
        }
      }
    }
    if (diags_.size() != before) return;
    try {
      (void)build_map(m);
    } catch (const std::exception& e) {
      error(m.pos, e.what());
    }
  }

  void job(const Spec& s, const JobDecl& j) {
    if (!check_args(j.kind, j.args, j.pos)) return;
    const Arg* ref = find_arg(j.args, "map");
    const MapDecl* target = s.find_map(ref->value.text);
    if (!target) {
      error(ref->value.pos, "unknown map '" + ref->value.text + "'");
    } else if (j.kind == "julia" && target->kind != "blaschke") {
      error(ref->value.pos, "julia needs a blaschke map, '" + target->name + "' is " + target->kind);
    } else if (j.kind == "julia" && 2 * int_or(target->args, "p", 0) + 1 +
                                            2 * static_cast<std::int64_t>(list_or(target->args, "zeros").size()) <
                                        3) {
      error(ref->value.pos, "julia needs degree >= 3, '" + target->name + "' has degree 1");
    } else if (j.kind == "steiner" && target->kind != "moebius") {
      error(ref->value.pos, "steiner needs a moebius map, '" + target->name + "' is " + target->kind);
    }
    auto in_range = [&](const char* name, std::int64_t lo, std::int64_t hi) {
      if (const Arg* a = find_arg(j.args, name); a && (a->value.i < lo || a->value.i > hi)) {
        error(a->value.pos, std::string(name) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      }
    };
    if (const Arg* w = find_arg(j.args, "width"); w && !(as_real(w->value) > 0.0)) {
      error(w->value.pos, "width must be positive");
    }
    if (const Arg* e = find_arg(j.args, "eps"); e && !(as_real(e->value) > 0.0 && as_real(e->value) < 1.0)) {
      error(e->value.pos, "eps must lie in (0, 1)");
    }
    if (const Arg* o = find_arg(j.args, "out"); o && o->value.text.empty()) error(o->value.pos, "out must not be empty");
    in_range("res_w", 1, kMaxResolution);
    in_range("res_h", 1, kMaxResolution);
    in_range("max_iter", 0, 1000000);
    in_range("meridians", 0, 1000);
    in_range("latitudes", 0, 1000);
    in_range("steps", 0, 10000000);
  }
};

Window window_of(const JobDecl& job, const Resolution& res) {
  const double width = real_or(job.args, "width", 4.0);
  return {complex_or(job.args, "center", 0.0), width, width * res.h / res.w};
}

Resolution resolution_of(const JobDecl& job) {
  return {static_cast<int>(int_or(job.args, "res_w", 512)), static_cast<int>(int_or(job.args, "res_h", 512))};
}

void require_kind(const JobDecl& job, const char* kind) {
  if (job.kind != kind) throw std::invalid_argument("job '" + job.name + "' is " + job.kind + ", not " + kind);
}

}  // namespace

Spec parse(std::string_view text) {
  Spec s = Parser(detail::lex(text)).file();
  std::vector<Diagnostic> diags = Validator().run(s);
  if (!diags.empty()) throw SpecError(std::move(diags));
  return s;
}

DianalyticMap build_map(const MapDecl& d) {
  const auto& a = d.args;
  if (d.kind == "moebius") {
    return MoebiusRotation(real_or(a, "theta", 0.0), complex_or(a, "a", 0.0), complex_or(a, "b", 0.0), d.conj);
  }
  if (d.kind == "canonical") {
    return CanonicalMap(real_or(a, "alpha", 0.0), list_or(a, "zeros"),
                        static_cast<int>(int_or(a, "infinite_zeros", 0)), d.conj);
  }
  if (d.kind == "blaschke") {
    return HInvariantBlaschke(real_or(a, "theta", 0.0), static_cast<int>(int_or(a, "p", 0)), list_or(a, "zeros"),
                              d.conj);
  }
  if (d.kind == "form1") return RationalForm1(real_or(a, "theta", 0.0), list_or(a, "coeffs"), d.conj);
  if (d.kind == "finite_blaschke") return FiniteBlaschke(real_or(a, "theta", 0.0), list_or(a, "zeros"), d.conj);
  throw std::invalid_argument("unknown map kind '" + d.kind + "'");
}

JuliaJob julia_job(const JobDecl& job) {
  require_kind(job, "julia");
  JuliaJob j;
  j.map = find_arg(job.args, "map")->value.text;
  j.res = resolution_of(job);
  j.window = window_of(job, j.res);
  j.max_iter = static_cast<int>(int_or(job.args, "max_iter", kDefaultMaxIter));
  j.eps = real_or(job.args, "eps", kDefaultEps);
  const Arg* out = find_arg(job.args, "out");
  j.out = out ? out->value.text : job.name + ".ppm";
  return j;
}

SteinerJob steiner_job(const JobDecl& job) {
  require_kind(job, "steiner");
  SteinerJob j;
  j.map = find_arg(job.args, "map")->value.text;
  j.res = resolution_of(job);
  j.window = window_of(job, j.res);
  j.meridians = static_cast<int>(int_or(job.args, "meridians", 12));
  j.latitudes = static_cast<int>(int_or(job.args, "latitudes", 9));
  const Arg* out = find_arg(job.args, "out");
  j.out = out ? out->value.text : job.name + ".ppm";
  return j;
}

OrbitJob orbit_job(const JobDecl& job) {
  require_kind(job, "orbit");
  OrbitJob j;
  j.map = find_arg(job.args, "map")->value.text;
  j.start = ExtComplex(complex_or(job.args, "start", 0.0));
  j.steps = static_cast<int>(int_or(job.args, "steps", 10));
  if (const Arg* out = find_arg(job.args, "out")) j.out = out->value.text;
  return j;
}

}  // namespace p2dyn
