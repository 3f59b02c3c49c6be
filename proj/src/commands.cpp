#include "p2dyn/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "p2dyn/iteration.hpp"
#include "p2dyn/mapspec.hpp"
#include "p2dyn/render.hpp"
#include "p2dyn/rotation.hpp"
#include "p2dyn/steiner.hpp"

namespace p2dyn {

namespace {

using json = nlohmann::ordered_json;

constexpr int kInvarianceSamples = 200;
constexpr double kInvarianceTol = 1e-9;

/// Carries an exit code plus a one-line message up to the command wrapper.
struct Failure {
  int code;
  std::string message;
  json errors = json::array();
};

// Negative zero prints as "-0"; show it as plain 0.
double tidy(double x) { return x == 0.0 ? 0.0 : x; }

json point_json(const ExtComplex& z) {
  if (z.is_infinite()) return nullptr;
  return json::array({tidy(z.re()), tidy(z.im())});
}

std::string point_text(const ExtComplex& z) {
  if (z.is_infinite()) return "inf";
  std::ostringstream os;
  os << std::setprecision(12) << tidy(z.re()) << (std::signbit(tidy(z.im())) ? " - " : " + ") << std::abs(z.im()) << "i";
  return os.str();
}

Spec load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Failure{kExitIo, "cannot read " + path};
  std::ostringstream buf;
  buf << is.rdbuf();
  if (is.bad()) throw Failure{kExitIo, "read error on " + path};
  try {
    return parse(buf.str());
  } catch (const SpecError& e) {
    Failure f{e.is_parse_error() ? kExitParse : kExitValidation, "", json::array()};
    for (const Diagnostic& d : e.diagnostics()) {
      f.message += (f.message.empty() ? "" : "\n") + path + ":" + d.str();
      f.errors.push_back({{"line", d.pos.line},
                          {"col", d.pos.col},
                          {"kind", d.kind == Diagnostic::Kind::Lexical  ? "lexical"
                                   : d.kind == Diagnostic::Kind::Syntax ? "syntax"
                                                                        : "semantic"},
                          {"message", d.message}});
    }
    throw f;
  }
}

const MapDecl& pick_map(const Spec& s, const std::string& name) {
  if (name.empty()) {
    if (s.maps.size() == 1) return s.maps.front();
    throw Failure{kExitValidation, "--map is required when the file declares " + std::to_string(s.maps.size()) + " maps"};
  }
  const MapDecl* m = s.find_map(name);
  if (!m) throw Failure{kExitValidation, "no map named '" + name + "'"};
  return *m;
}

const JobDecl& pick_job(const Spec& s, const std::string& name, const char* kind) {
  const JobDecl* j = nullptr;
  if (name.empty()) {
    for (const JobDecl& c : s.jobs) {
      if (c.kind != kind) continue;
      if (j) throw Failure{kExitValidation, std::string("--job is required: several ") + kind + " jobs are declared"};
      j = &c;
    }
    if (!j) throw Failure{kExitValidation, std::string("the file declares no ") + kind + " job"};
    return *j;
  }
  j = s.find_job(name);
  if (!j) throw Failure{kExitValidation, "no job named '" + name + "'"};
  if (j->kind != kind) throw Failure{kExitValidation, "job '" + name + "' is " + j->kind + ", not " + kind};
  return *j;
}

/// Runs body; turns Failure and stray exceptions into exit codes.
int run(const CommandOptions& opts, std::ostream& out, std::ostream& err, const std::function<int(json&)>& body) {
  json report;
  int code = kExitOk;
  try {
    code = body(report);
  } catch (const Failure& f) {
    code = f.code;
    report = json{{"ok", false}, {"exit_code", f.code}, {"message", f.message}};
    if (!f.errors.empty()) report["errors"] = f.errors;
    if (!opts.json) err << f.message << '\n';
  } catch (const NonConvergence& e) {
    code = kExitNonConvergence;
    report = json{{"ok", false}, {"exit_code", code}, {"message", e.what()}, {"residual", e.residual()}};
    if (!opts.json) err << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    code = kExitValidation;
    report = json{{"ok", false}, {"exit_code", code}, {"message", e.what()}};
    if (!opts.json) err << e.what() << '\n';
  }
  if (opts.json) out << report.dump() << '\n';
  return code;
}

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

// The literal that re-parses to x with the least noise.
Value number_value(double x) {
  if (x == std::trunc(x) && std::abs(x) < 1e15) return Value::integer(static_cast<std::int64_t>(x));
  return Value::real(x);
}

}  // namespace

int cmd_validate(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return run(opts, out, err, [&](json& report) {
    const Spec spec = load(opts.spec_path);
    bool all = true;
    json maps = json::array();
    for (const MapDecl& d : spec.maps) {
      const DianalyticMap m = build_map(d);
      const InvarianceReport inv = is_h_invariant(m, kInvarianceSamples, kInvarianceTol);
      std::string pairing = "n/a";
      bool pairing_ok = true;
      if (const auto* fb = std::get_if<FiniteBlaschke>(&m)) {
        const PairingResult pr = pair_zeros(fb->zeros(), 1e-12);
        pairing_ok = pr.ok();
        pairing = pr.ok() ? "ok" : pr.message();
      } else if (std::holds_alternative<HInvariantBlaschke>(m)) {
        pairing = "ok";
      }
      const bool pass = inv.pass && pairing_ok;
      all = all && pass;
      json entry{{"name", d.name},
                 {"kind", d.kind},
                 {"degree", degree(m)},
                 {"h_invariant", inv.pass},
                 {"max_defect", inv.max_defect},
                 {"worst_point", point_json(inv.worst_point)},
                 {"pairing", pairing},
                 {"pass", pass}};
      maps.push_back(entry);
      if (!opts.json) {
        out << "map " << d.name << " (" << d.kind << "): degree " << degree(m) << ", h-invariance "
            << (inv.pass ? "pass" : "FAIL") << " (max defect " << fmt(inv.max_defect);
        if (!inv.pass) out << " at z = " << point_text(inv.worst_point);
        out << "), pairing " << pairing << (pass ? "" : "  [FAIL]") << '\n';
      }
    }
    if (!opts.json) out << (all ? "all maps pass" : "validation failed") << '\n';
    report = json{{"ok", all}, {"exit_code", all ? 0 : 1}, {"maps", maps}, {"jobs", spec.jobs.size()}};
    return all ? kExitOk : kExitValidation;
  });
}

int cmd_canonicalize(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return run(opts, out, err, [&](json& report) {
    const Spec spec = load(opts.spec_path);
    const MapDecl& d = pick_map(spec, opts.map);
    if (d.kind != "form1") throw Failure{kExitValidation, "map '" + d.name + "' is " + d.kind + ", not form1"};
    const CanonicalizeResult r = canonicalize(std::get<RationalForm1>(build_map(d)));

    MapDecl c{d.name, "canonical", {}, r.map.conj(), {}};
    c.args.push_back({"alpha", number_value(r.map.alpha()), {}});
    c.args.push_back({"zeros", Value::of_list(r.map.zeros()), {}});
    if (r.map.zeros_at_infinity() > 0) c.args.push_back({"infinite_zeros", Value::integer(r.map.zeros_at_infinity()), {}});
    std::string text = format_spec(Spec{{c}, {}});
    text.pop_back();  // trailing newline

    json zeros = json::array();
    for (complex z : r.map.zeros()) zeros.push_back(json::array({z.real(), z.imag()}));
    report = json{{"ok", true},
                  {"exit_code", 0},
                  {"decl", text},
                  {"alpha", r.map.alpha()},
                  {"zeros", zeros},
                  {"zeros_at_infinity", r.map.zeros_at_infinity()},
                  {"branch", r.branch == CanonicalBranch::Numerator ? "numerator" : "denominator"},
                  {"sweeps", r.sweeps},
                  {"residual", r.residual}};
    if (!opts.json) {
      out << "# round-trip residual " << fmt(r.residual, 3) << " (max chordal, 100 points), " << r.sweeps
          << " root sweeps\n"
          << text << '\n';
    }
    return kExitOk;
  });
}

int cmd_classify(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return run(opts, out, err, [&](json& report) {
    const Spec spec = load(opts.spec_path);
    const MapDecl& d = pick_map(spec, opts.map);
    if (d.kind != "moebius") throw Failure{kExitValidation, "map '" + d.name + "' is " + d.kind + ", not moebius"};
    const auto g = std::get<MoebiusRotation>(build_map(d));
    if (g.conj()) throw Failure{kExitValidation, "map '" + d.name + "' is conj-flagged, so it is not a rotation"};
    if (is_identity(g)) {
      report = json{{"ok", true}, {"exit_code", 0}, {"map", d.name}, {"verdict", "identity"}};
      if (!opts.json) out << "map " << d.name << ": identity\n";
      return kExitOk;
    }
    const auto [fp1, fp2] = fixed_points(g);
    const RotationDescriptor desc = rotation_descriptor(g);
    const RotationClass cls = classify_rotation(desc.angle, opts.q_max, opts.tol);

    // Sample on the rotation's equator, where the P2 orbit can close early.
    const Vec3 v = desc.axis;
    Vec3 u = std::abs(v.z) < 0.9 ? Vec3{-v.y, v.x, 0.0} : Vec3{0.0, -v.z, v.y};
    u = u * (1.0 / u.norm());
    const ExtComplex z0 = inverse_stereographic(u);
    const int n_max = static_cast<int>(opts.q_max);
    const auto sphere = period_on_sphere(g, z0, n_max, opts.tol);
    const auto p2 = period_on_p2(g, z0, n_max, opts.tol);

    report = json{{"ok", true},
                  {"exit_code", 0},
                  {"map", d.name},
                  {"fixed_points", json::array({point_json(fp1), point_json(fp2)})},
                  {"axis", json::array({tidy(v.x), tidy(v.y), tidy(v.z)})},
                  {"angle", desc.angle}};
    if (const auto* q = std::get_if<Rational>(&cls)) {
      report["verdict"] = "rational";
      report["p"] = q->p;
      report["q"] = q->q;
    } else {
      report["verdict"] = "irrational";
    }
    report["sample_point"] = point_json(z0);
    report["sphere_period"] = sphere ? json(*sphere) : json(nullptr);
    report["p2_period"] = p2 ? json(p2->period) : json(nullptr);
    report["p2_halved"] = p2 ? json(p2->halved) : json(nullptr);

    if (!opts.json) {
      out << "map " << d.name << ": elliptic rotation\n"
          << "  fixed points: " << point_text(fp1) << ", " << point_text(fp2) << '\n'
          << "  axis: (" << fmt(tidy(v.x), 12) << ", " << fmt(tidy(v.y), 12) << ", " << fmt(tidy(v.z), 12) << ")\n"
          << "  angle: " << fmt(desc.angle, 17) << " rad (" << fmt(desc.angle / (2.0 * std::numbers::pi), 12)
          << " turns)\n";
      if (const auto* q = std::get_if<Rational>(&cls)) {
        out << "  class: Rational{" << q->p << "," << q->q << "}\n";
      } else {
        out << "  class: Irrational (no p/q with q <= " << opts.q_max << " within " << opts.tol << ")\n";
      }
      out << "  sample point: " << point_text(z0) << '\n'
          << "  sphere period: " << (sphere ? std::to_string(*sphere) : "none up to " + std::to_string(n_max)) << '\n'
          << "  P2 period: "
          << (p2 ? std::to_string(p2->period) + (p2->halved ? " (closes through the antipode)" : "")
                 : "none up to " + std::to_string(n_max))
          << '\n';
    }
    return kExitOk;
  });
}

int cmd_julia(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return run(opts, out, err, [&](json& report) {
    const Spec spec = load(opts.spec_path);
    JuliaJob job = julia_job(pick_job(spec, opts.job, "julia"));
    if (opts.eps) job.eps = *opts.eps;
    if (opts.max_iter) job.max_iter = *opts.max_iter;
    if (opts.out) job.out = *opts.out;
    const auto f = std::get<HInvariantBlaschke>(build_map(*spec.find_map(job.map)));

    const BasinField field = basin_field(f, job.window, job.res, job.max_iter, job.eps, opts.threads);
    JuliaEstimate est;
    try {
      est = julia_boundary(field);
    } catch (const std::domain_error& e) {
      throw Failure{kExitValidation, e.what()};
    }
    try {
      write_ppm(render_basin(field), job.out);
    } catch (const std::runtime_error& e) {
      throw Failure{kExitIo, e.what()};
    }
    std::size_t undecided = 0;
    for (const PointClass& c : field.cells) undecided += c.basin == Basin::Undecided;

    report = json{{"ok", true},
                  {"exit_code", 0},
                  {"out", job.out},
                  {"width", job.res.w},
                  {"height", job.res.h},
                  {"pixel_width", field.pixel_width()},
                  {"boundary_pixels", est.boundary_pixels.size()},
                  {"undecided_pixels", undecided},
                  {"mean_radius", est.mean_radius},
                  {"max_abs_dev", est.max_abs_dev}};
    if (!opts.json) {
      out << "wrote " << job.out << " (" << job.res.w << "x" << job.res.h << ")\n"
          << "boundary pixels: " << est.boundary_pixels.size() << '\n'
          << "mean_radius: " << fmt(est.mean_radius, 10) << '\n'
          << "max_abs_dev: " << fmt(est.max_abs_dev, 10) << " (pixel width " << fmt(field.pixel_width(), 6) << ")\n";
    }
    return kExitOk;
  });
}

int cmd_steiner(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return run(opts, out, err, [&](json& report) {
    const Spec spec = load(opts.spec_path);
    SteinerJob job = steiner_job(pick_job(spec, opts.job, "steiner"));
    if (opts.out) job.out = *opts.out;
    const auto g = std::get<MoebiusRotation>(build_map(*spec.find_map(job.map)));
    if (g.conj()) throw Failure{kExitValidation, "map '" + job.map + "' is conj-flagged, so it has no Steiner net"};
    if (is_identity(g)) throw Failure{kExitValidation, "map '" + job.map + "' is the identity; no Steiner net"};

    const auto [p1, p2] = fixed_points(g);
    const SteinerNet net = steiner_net(p1, p2, job.meridians, job.latitudes);
    const Image img = overlay_net(Image(job.res.w, job.res.h, kNeutralBackground), net, job.window);
    try {
      write_ppm(img, job.out);
    } catch (const std::runtime_error& e) {
      throw Failure{kExitIo, e.what()};
    }
    report = json{{"ok", true},
                  {"exit_code", 0},
                  {"out", job.out},
                  {"fixed_points", json::array({point_json(p1), point_json(p2)})},
                  {"meridians", net.meridians.size()},
                  {"latitudes", net.latitudes.size()}};
    if (!opts.json) {
      out << "wrote " << job.out << " (" << job.res.w << "x" << job.res.h << ")\n"
          << "net anchored at " << point_text(p1) << " and " << point_text(p2) << ": " << net.meridians.size()
          << " meridians, " << net.latitudes.size() << " latitudes\n";
    }
    return kExitOk;
  });
}

int cmd_orbit(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return run(opts, out, err, [&](json& report) {
    const Spec spec = load(opts.spec_path);
    OrbitJob job = orbit_job(pick_job(spec, opts.job, "orbit"));
    if (opts.out) job.out = *opts.out;
    const std::vector<ExtComplex> pts = orbit(build_map(*spec.find_map(job.map)), job.start, job.steps);
    if (job.out) {
      std::ofstream os(*job.out, std::ios::trunc);
      if (!os) throw Failure{kExitIo, "cannot write " + *job.out};
      write_orbit_jsonl(os, pts);
      os.close();
      if (!os) throw Failure{kExitIo, "write error on " + *job.out};
      if (!opts.json) out << "wrote " << pts.size() << " records to " << *job.out << '\n';
      report = json{{"ok", true}, {"exit_code", 0}, {"out", *job.out}, {"records", pts.size()}};
    } else if (opts.json) {
      json records = json::array();
      for (std::size_t k = 0; k < pts.size(); ++k) {
        records.push_back(pts[k].is_infinite() ? json{{"step", k}, {"infinite", true}}
                                               : json{{"step", k}, {"re", pts[k].re()}, {"im", pts[k].im()},
                                                      {"abs", pts[k].abs()}});
      }
      report = json{{"ok", true}, {"exit_code", 0}, {"records", records}};
    } else {
      write_orbit_jsonl(out, pts);
    }
    return kExitOk;
  });
}

int cmd_selftest(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return run(opts, out, err, [&](json& report) {
    json checks = json::array();
    bool all = true;
    auto check = [&](const std::string& name, const std::function<bool()>& fn) {
      bool ok = false;
      try {
        ok = fn();
      } catch (const std::exception&) {
        ok = false;
      }
      all = all && ok;
      checks.push_back({{"name", name}, {"pass", ok}});
      if (!opts.json) out << (ok ? "PASS " : "FAIL ") << name << '\n';
    };

    const HInvariantBlaschke cube(0.0, 1, {});
    check("z^3 commutes with the antipodal map",
          [&] { return is_h_invariant(cube, 100, 1e-12).max_defect < 1e-12; });
    check("canonicalize(z - 1) has its zero at 1", [&] {
      const CanonicalizeResult r = canonicalize(RationalForm1(0.0, {1.0, -1.0}));
      return r.map.zeros().size() == 1 && std::abs(r.map.zeros()[0] - 1.0) < 1e-12;
    });
    check("iz has period 4 on the sphere and 2 on P2 at z = 1", [&] {
      const MoebiusRotation g(std::numbers::pi / 2, 1.0, 0.0);
      const auto p2 = period_on_p2(g, 1.0, 64);
      return period_on_sphere(g, 1.0, 64) == 4 && p2 && p2->period == 2 && p2->halved;
    });
    check("z^3 Julia boundary sits on the unit circle", [&] {
      const BasinField field = basin_field(cube, Window{}, Resolution{96, 96}, kDefaultMaxIter, kDefaultEps, 1);
      return julia_boundary(field).max_abs_dev <= 2.0 * std::hypot(field.pixel_width(), field.pixel_height());
    });
    check(".kmap text round-trips", [&] {
      const Spec s = parse("map f = blaschke(theta=0.25, p=1, zeros=[0.3+0.2i])\njob j = orbit(map=f, start=0.5)\n");
      return parse(format_spec(s)) == s;
    });

    report = json{{"ok", all}, {"exit_code", all ? 0 : 1}, {"checks", checks}};
    return all ? kExitOk : kExitValidation;
  });
}

}  // namespace p2dyn
