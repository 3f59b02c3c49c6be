// p2dyn: dianalytic self-maps of the sphere and the real projective plane.

#include <iostream>

#include "CLI11.hpp"
#include "p2dyn/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dynamics of h-invariant maps on the Riemann sphere and P2"};
  app.require_subcommand(1);

  p2dyn::CommandOptions opts;
  double eps = 0.0;
  int max_iter = 0;
  std::string out;

  auto add_spec = [&](CLI::App* sub) {
    sub->add_option("spec", opts.spec_path, "map spec file (.kmap)")->required();
    sub->add_flag("--json", opts.json, "emit one JSON object instead of text");
  };

  auto* validate = app.add_subcommand("validate", "check every declared map for h-invariance");
  add_spec(validate);

  auto* canon = app.add_subcommand("canonicalize", "factor a form1 map into canonical form");
  add_spec(canon);
  canon->add_option("--map", opts.map, "map name");

  auto* classify = app.add_subcommand("classify", "axis, angle and periods of a moebius rotation");
  add_spec(classify);
  classify->add_option("--map", opts.map, "map name");
  classify->add_option("--q-max", opts.q_max, "largest denominator tried")->capture_default_str()->check(
      CLI::PositiveNumber);
  classify->add_option("--tol", opts.tol, "rationality tolerance")->capture_default_str()->check(CLI::PositiveNumber);

  auto* julia = app.add_subcommand("julia", "render basins and estimate the Julia set");
  add_spec(julia);
  julia->add_option("--job", opts.job, "job name");
  auto* eps_opt = julia->add_option("--eps", eps, "escape threshold (default 1e-6)")->check(CLI::Range(0.0, 1.0));
  auto* iter_opt = julia->add_option("--max-iter", max_iter, "iteration cap (default 200)")->check(CLI::NonNegativeNumber);
  auto* julia_out = julia->add_option("--out", out, "output PPM path");
  julia->add_option("--threads", opts.threads, "worker threads (0 = all cores)");

  auto* steiner = app.add_subcommand("steiner", "draw the Steiner net of a rotation");
  add_spec(steiner);
  steiner->add_option("--job", opts.job, "job name");
  auto* steiner_out = steiner->add_option("--out", out, "output PPM path");

  auto* orbit = app.add_subcommand("orbit", "write an orbit as JSON lines");
  add_spec(orbit);
  orbit->add_option("--job", opts.job, "job name");
  auto* orbit_out = orbit->add_option("--out", out, "output path (default: standard output)");

  auto* selftest = app.add_subcommand("selftest", "run built-in smoke checks");
  selftest->add_flag("--json", opts.json, "emit one JSON object instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : p2dyn::kExitParse;
  }

  if (eps_opt->count()) opts.eps = eps;
  if (iter_opt->count()) opts.max_iter = max_iter;
  if (julia_out->count() || steiner_out->count() || orbit_out->count()) opts.out = out;

  if (validate->parsed()) return p2dyn::cmd_validate(opts, std::cout, std::cerr);
  if (canon->parsed()) return p2dyn::cmd_canonicalize(opts, std::cout, std::cerr);
  if (classify->parsed()) return p2dyn::cmd_classify(opts, std::cout, std::cerr);
  if (julia->parsed()) return p2dyn::cmd_julia(opts, std::cout, std::cerr);
  if (steiner->parsed()) return p2dyn::cmd_steiner(opts, std::cout, std::cerr);
  if (orbit->parsed()) return p2dyn::cmd_orbit(opts, std::cout, std::cerr);
  return p2dyn::cmd_selftest(opts, std::cout, std::cerr);
}
