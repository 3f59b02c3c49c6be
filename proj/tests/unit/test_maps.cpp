#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "p2dyn/maps.hpp"
#include "p2dyn/sampling.hpp"

using namespace p2dyn;
using std::numbers::pi;

namespace {

const complex I(0.0, 1.0);

complex finite(const ExtComplex& z) { return z.value(); }

// Phase distance on the circle.
double phase_gap(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * pi);
  return std::min(d, 2.0 * pi - d);
}

CanonicalMap random_canonical(Sampler& s, int degree, bool conj = false) {
  std::vector<complex> zeros;
  for (int k = 0; k < degree; ++k) zeros.push_back(s.disk_point(0.0, 2.0));
  return CanonicalMap(s.uniform(0.0, 2.0 * pi), zeros, 0, conj);
}

HInvariantBlaschke random_blaschke(Sampler& s, int p, int m) {
  std::vector<complex> zeros;
  for (int k = 0; k < m; ++k) zeros.push_back(s.disk_point(0.05, 0.95));
  return HInvariantBlaschke(s.uniform(0.0, 2.0 * pi), p, zeros);
}

}  // namespace

TEST_SUITE("maps") {
  TEST_CASE("constructors enforce invariants") {
    CHECK_THROWS_AS(MoebiusRotation(0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(RationalForm1(0.0, {1.0, 2.0, 3.0}), std::invalid_argument);  // even degree
    CHECK_THROWS_AS(RationalForm1(0.0, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(CanonicalMap(0.0, {1.0, 2.0}), std::invalid_argument);  // even zero count
    CHECK_THROWS_AS(HInvariantBlaschke(0.0, 0, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS(HInvariantBlaschke(0.0, 0, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(HInvariantBlaschke(0.0, -1, {}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteBlaschke(0.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteBlaschke(0.0, {1.0}), std::invalid_argument);
    // phases are reduced to [0, 2pi)
    CHECK(MoebiusRotation(-pi / 2, 1.0, 0.0).theta() == doctest::Approx(1.5 * pi));
    CHECK(CanonicalMap(5.0 * pi, {0.0}).alpha() == doctest::Approx(pi));
  }

  TEST_CASE("evaluate examples") {
    CHECK(finite(evaluate(HInvariantBlaschke(0.0, 1, {}), 0.5)) == complex(0.125));
    Sampler s(301);
    const MoebiusRotation id(0.0, 1.0, 0.0);
    for (int k = 0; k < 100; ++k) {
      const ExtComplex z = s.sphere_point();
      CHECK(chordal_distance(evaluate(id, z), z) < 1e-15);
    }
    CHECK(evaluate(id, ExtComplex::infinity()).is_infinite());
    // (i - 1)/(1 + i) = i
    CHECK(std::abs(finite(evaluate(CanonicalMap(0.0, {1.0}), I)) - I) < 1e-15);
  }

  TEST_CASE("evaluate: poles, infinity and conj") {
    // (z - 1)/(1 + z) has its pole at -1 and sends infinity to 1
    const CanonicalMap c(0.0, {1.0});
    CHECK(evaluate(c, -1.0).is_infinite());
    CHECK(std::abs(finite(evaluate(c, ExtComplex::infinity())) - 1.0) < 1e-15);
    // z^3 at infinity
    CHECK(evaluate(HInvariantBlaschke(0.0, 1, {}), ExtComplex::infinity()).is_infinite());
    // conj variant evaluates at conj(z)
    const CanonicalMap cc(0.0, {1.0}, 0, true);
    const complex z(0.3, 0.7);
    CHECK(std::abs(finite(evaluate(cc, z)) - finite(evaluate(c, std::conj(z)))) < 1e-15);
    // indeterminate point of a degenerate canonical map: zero and pole coincide
    const CanonicalMap degenerate(0.0, {I, I, I});
    CHECK_NOTHROW(evaluate(degenerate, I));
  }

  TEST_CASE("evaluate matches direct formulas") {
    Sampler s(302);
    for (int k = 0; k < 200; ++k) {
      const double theta = s.uniform(0, 2 * pi);
      const complex a = s.disk_point(0, 2), b = s.disk_point(0, 2), z = s.disk_point(0, 3);
      const complex direct = std::polar(1.0, theta) * (a * z + b) / (-std::conj(b) * z + std::conj(a));
      const ExtComplex got = evaluate(MoebiusRotation(theta, a, b), z);
      const complex g = got.is_infinite() ? complex(1e300) : got.value();
      CHECK(oracle::chord(&g, &direct) < 1e-12);

      const complex z1 = s.disk_point(0.05, 0.95);
      complex hb = std::polar(1.0, theta) * z * z * z * (z * z - z1 * z1) / (1.0 - std::conj(z1 * z1) * z * z);
      const ExtComplex got_hb = evaluate(HInvariantBlaschke(theta, 1, {z1}), z);
      const complex gh = got_hb.is_infinite() ? complex(1e300) : got_hb.value();
      CHECK(oracle::chord(&gh, &hb) < 1e-12);
    }
  }

  TEST_CASE("degree examples") {
    CHECK(degree(CanonicalMap(0.0, {1.0, 2.0, 3.0})) == 3);
    CHECK(degree(HInvariantBlaschke(0.0, 1, {0.5})) == 5);
    CHECK(degree(MoebiusRotation(0.0, 1.0, 0.0)) == 1);
    CHECK(degree(RationalForm1(0.0, {1.0, 0.0, 0.0, 2.0})) == 3);
    CHECK(degree(FiniteBlaschke(0.0, {0.5, -0.5})) == 2);
    CHECK_THROWS_AS(degree(InfiniteBlaschke({0.0}, true)), std::invalid_argument);
  }

  TEST_CASE("is_h_invariant examples") {
    const auto id = is_h_invariant(CanonicalMap(0.0, {0.0}), 1000, 1e-12);
    CHECK(id.pass);
    CHECK(id.max_defect < 1e-14);

    const FiniteBlaschke even(0.0, {0.5, complex(0.0, 0.5)});
    const auto r = is_h_invariant(even, 1000, 1e-9);
    CHECK_FALSE(r.pass);
    // one explicit point by hand: z = 0.3
    auto B = [](complex z) {
      return (z - 0.5) / (1.0 - 0.5 * z) * (z - complex(0, 0.5)) / (1.0 - std::conj(complex(0, 0.5)) * z);
    };
    auto h = [](complex z) { return -1.0 / std::conj(z); };
    const complex z(0.3);
    const complex lhs = B(h(z)), rhs = h(B(z));
    CHECK(oracle::chord(&lhs, &rhs) > 0.1);

    CHECK(is_h_invariant(HInvariantBlaschke(0.3, 0, {complex(0.4, 0.1)}), 1000, 1e-9).pass);
  }

  TEST_CASE("validate_form1 examples") {
    const std::vector<complex> n1{1.0, -1.0}, d1{1.0, 1.0}, n2{1.0, 0.0}, d2{0.0, 1.0};
    CHECK(validate_form1(n1, d1, 1e-12));
    CHECK(validate_form1(n2, d2, 1e-12));
    CHECK_FALSE(validate_form1(n1, n1, 1e-12));
    const std::vector<complex> three{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(validate_form1(n1, three, 1e-12), std::invalid_argument);
    // the stored denominator is the h-transform of the numerator
    const RationalForm1 f(0.0, {complex(1, 2), 0.5, complex(0, -1), 3.0});
    CHECK(validate_form1(f.coeffs(), f.denominator(), 1e-15));
  }

  TEST_CASE("canonicalize examples") {
    auto r = canonicalize(RationalForm1(0.0, {1.0, -1.0}));
    CHECK(r.map.alpha() == 0.0);
    REQUIRE(r.map.zeros().size() == 1);
    CHECK(std::abs(r.map.zeros()[0] - 1.0) < 1e-14);

    r = canonicalize(RationalForm1(0.0, {1.0, 0.0}));
    CHECK(r.map.zeros() == std::vector<complex>{0.0});

    const RationalForm1 f(pi / 2, {complex(0, 2), 0.0, 0.0, 0.0});
    r = canonicalize(f);
    CHECK(r.map.alpha() == doctest::Approx(1.5 * pi).epsilon(1e-15));
    CHECK(r.map.zeros() == std::vector<complex>{0.0, 0.0, 0.0});
    CHECK(chordal_distance(evaluate(f, 1.0), evaluate(r.map, 1.0)) < 1e-15);
    CHECK(r.branch == CanonicalBranch::Numerator);
  }

  TEST_CASE("canonicalize: numerator of dropped degree") {
    // a0 = 0: one zero sits at infinity
    const RationalForm1 f(0.4, {0.0, 1.0, complex(0.0, 2.0), -0.5});
    const auto r = canonicalize(f);
    CHECK(r.branch == CanonicalBranch::Denominator);
    CHECK(r.map.zeros_at_infinity() == 1);
    CHECK(r.map.zeros().size() == 2);
    CHECK(r.residual < 1e-12);
    CHECK(degree(r.map) == 3);
    CHECK(is_h_invariant(r.map, 500, 1e-9).pass);
    // expand puts it back
    const RationalForm1 back = expand(r.map);
    Sampler s(303);
    for (int k = 0; k < 100; ++k) {
      const ExtComplex z = s.sphere_point();
      CHECK(chordal_distance(evaluate(back, z), evaluate(f, z)) < 1e-9);
    }
  }

  TEST_CASE("expand examples") {
    auto f = expand(CanonicalMap(0.0, {1.0}));
    CHECK(f.theta() == 0.0);
    CHECK(f.coeffs() == std::vector<complex>{1.0, -1.0});
    f = expand(CanonicalMap(0.0, {0.0}));
    CHECK(f.coeffs() == std::vector<complex>{1.0, 0.0});
    f = expand(CanonicalMap(0.0, {1.0, -1.0, 0.0}));
    const std::vector<complex> want{1.0, 0.0, -1.0, 0.0};
    REQUIRE(f.coeffs().size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(f.coeffs()[k] - want[k]) < 1e-15);
  }

  TEST_CASE("pair_zeros examples") {
    const std::vector<complex> a{0.5, -0.5, 0.0};
    auto r = pair_zeros(a, 1e-12);
    CHECK(r.ok());
    CHECK(r.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
    CHECK(r.zeros_at_origin == 1);

    const std::vector<complex> b{0.5, 0.0};
    r = pair_zeros(b, 1e-12);
    CHECK_FALSE(r.ok());
    CHECK(r.unpaired == std::vector<std::size_t>{0});
    CHECK(r.message() == "unpaired zero at index 0");

    const std::vector<complex> c{0.0, 0.0};
    r = pair_zeros(c, 1e-12);
    CHECK_FALSE(r.ok());
    CHECK(r.unpaired.empty());
    CHECK(r.zeros_at_origin == 2);
  }

  TEST_CASE("property: h-invariance of odd products, failure of even ones") {
    Sampler s(304);
    for (int trial = 0; trial < 60; ++trial) {
      const int deg = 1 + 2 * (trial % 3);
      const CanonicalMap c = random_canonical(s, deg, trial % 4 == 0);
      CHECK(is_h_invariant(c, 1000, 1e-9, 500 + trial).pass);
      const HInvariantBlaschke b = random_blaschke(s, trial % 2, trial % 3);
      CHECK(is_h_invariant(b, 1000, 1e-9, 700 + trial).pass);
      // a plain Blaschke product with an even number of factors
      std::vector<complex> zeros;
      const int factors = 2 + 2 * (trial % 2);
      for (int k = 0; k < factors; ++k) zeros.push_back(s.disk_point(0.0, 0.9));
      const auto bad = is_h_invariant(FiniteBlaschke(s.uniform(0, 2 * pi), zeros), 1000, 1e-9, 900 + trial);
      CHECK_FALSE(bad.pass);
      CHECK(bad.max_defect > 0.1);
    }
  }

  TEST_CASE("property: canonicalize inverts expand") {
    Sampler s(305);
    for (int trial = 0; trial < 100; ++trial) {
      const int deg = 1 + 2 * (trial % 3);
      const CanonicalMap c = random_canonical(s, deg);
      const RationalForm1 f = expand(c);
      const CanonicalizeResult r = canonicalize(f);
      CHECK(phase_gap(r.map.alpha(), c.alpha()) < 1e-8);
      CHECK(oracle::multiset_distance(r.map.zeros(), c.zeros()) < 1e-8);
      for (int k = 0; k < 100; ++k) {
        const ExtComplex z = s.sphere_point();
        CHECK(chordal_distance(evaluate(f, z), evaluate(c, z)) < 1e-9);
      }
    }
  }

  TEST_CASE("property: degree counts preimages") {
    Sampler s(306);
    for (int trial = 0; trial < 30; ++trial) {
      const int deg = 1 + 2 * (trial % 3);
      const CanonicalMap c = random_canonical(s, deg);
      const RationalForm1 f = expand(c);
      const complex w = s.disk_point(0.1, 3.0);
      // e^{i theta} P(z) - w Q(z) = 0, built from the coefficient pattern directly
      const std::size_t n = f.coeffs().size();
      std::vector<complex> q(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double sign = (i % 2 == 0) ? -1.0 : 1.0;
        q[i] = sign * std::conj(f.coeffs()[n - 1 - i]);
      }
      std::vector<complex> eq(n);
      for (std::size_t i = 0; i < n; ++i) eq[i] = std::polar(1.0, f.theta()) * f.coeffs()[i] - w * q[i];
      const auto roots = oracle::companion_roots(eq);
      CHECK(static_cast<int>(roots.size()) == degree(c));
      for (complex z : roots) {
        const ExtComplex v = evaluate(c, z);
        CHECK(chordal_distance(v, w) < 1e-7);
      }
    }
  }

  TEST_CASE("property: Blaschke maps are inner") {
    Sampler s(307);
    for (int trial = 0; trial < 10; ++trial) {
      const HInvariantBlaschke b = random_blaschke(s, trial % 3, 1 + trial % 3);
      for (int k = 0; k < 1000; ++k) {
        CHECK(std::abs(evaluate(b, s.circle_point()).abs() - 1.0) < 1e-10);
      }
    }
  }
}
