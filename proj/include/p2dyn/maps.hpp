#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "p2dyn/sphere.hpp"

namespace p2dyn {

/// Raised when the root finder cannot reach its tolerance.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// All map types validate their invariants on construction (throwing
// std::invalid_argument) and store phases reduced to [0, 2pi). The `conj`
// flag selects the variant z~ -> F(conj z)~.

/// G(z) = e^{i theta} (a z + b) / (-conj(b) z + conj(a)).
class MoebiusRotation {
 public:
  MoebiusRotation(double theta, complex a, complex b, bool conj = false);

  static MoebiusRotation identity() { return {0.0, 1.0, 0.0}; }

  double theta() const { return theta_; }
  complex a() const { return a_; }
  complex b() const { return b_; }
  bool conj() const { return conj_; }

  friend bool operator==(const MoebiusRotation&, const MoebiusRotation&) = default;

 private:
  double theta_;
  complex a_, b_;
  bool conj_;
};

/// F(z) = e^{i theta} P(z) / Q(z) with P = sum a_k z^{N-k}, N = 2n+1 odd, and
/// Q the h-transform of P: the coefficient of z^j in Q is
/// (-1)^{N-j+1} conj(a_j). Q is derived, never stored.
class RationalForm1 {
 public:
  RationalForm1(double theta, std::vector<complex> coeffs, bool conj = false);

  double theta() const { return theta_; }
  const std::vector<complex>& coeffs() const { return coeffs_; }
  bool conj() const { return conj_; }
  int odd_degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  /// Denominator coefficients, descending powers like coeffs().
  std::vector<complex> denominator() const;

  friend bool operator==(const RationalForm1&, const RationalForm1&) = default;

 private:
  double theta_;
  std::vector<complex> coeffs_;
  bool conj_;
};

/// F(z) = e^{i alpha} prod (z - z_k) / (1 + conj(z_k) z). A zero at infinity
/// contributes the factor -1/z; it arises when the numerator of a form-1 map
/// has dropped degree. Zeros are kept sorted by (|z|, arg).
class CanonicalMap {
 public:
  CanonicalMap(double alpha, std::vector<complex> zeros, int zeros_at_infinity = 0, bool conj = false);

  double alpha() const { return alpha_; }
  const std::vector<complex>& zeros() const { return zeros_; }
  int zeros_at_infinity() const { return zeros_at_infinity_; }
  bool conj() const { return conj_; }

  friend bool operator==(const CanonicalMap&, const CanonicalMap&) = default;

 private:
  double alpha_;
  std::vector<complex> zeros_;
  int zeros_at_infinity_;
  bool conj_;
};

/// F(z) = e^{i theta} z^{2p+1} prod_k (z^2 - z_k^2) / (1 - conj(z_k)^2 z^2),
/// 0 < |z_k| < 1. The z_k are pair generators: each stands for the zeros +-z_k.
class HInvariantBlaschke {
 public:
  HInvariantBlaschke(double theta, int p, std::vector<complex> zeros, bool conj = false);

  double theta() const { return theta_; }
  int p() const { return p_; }
  const std::vector<complex>& zeros() const { return zeros_; }
  bool conj() const { return conj_; }

  friend bool operator==(const HInvariantBlaschke&, const HInvariantBlaschke&) = default;

 private:
  double theta_;
  int p_;
  std::vector<complex> zeros_;
  bool conj_;
};

/// Plain finite Blaschke product F(z) = e^{i theta} prod (z - z_k) / (1 - conj(z_k) z),
/// |z_k| < 1. h-invariant only when the zeros pair up as +-z and the count
/// at the origin is odd.
class FiniteBlaschke {
 public:
  FiniteBlaschke(double theta, std::vector<complex> zeros, bool conj = false);

  double theta() const { return theta_; }
  const std::vector<complex>& zeros() const { return zeros_; }
  bool conj() const { return conj_; }

  friend bool operator==(const FiniteBlaschke&, const FiniteBlaschke&) = default;

 private:
  double theta_;
  std::vector<complex> zeros_;
  bool conj_;
};

/// Modulus law k -> |z_k| for k = 1, 2, ...
using ModulusLaw = std::function<double(std::int64_t)>;

/// Finite prefix of an infinite Blaschke product in the normalized form
/// B(z) = prod (conj(z_k)/|z_k|) (z_k - z) / (1 - conj(z_k) z); a zero at the
/// origin contributes the factor z. `tail_mass` bounds sum (1 - |z_k|) over
/// the zeros beyond the prefix (0 when the prefix is the whole product).
class InfiniteBlaschke {
 public:
  InfiniteBlaschke(std::vector<complex> zeros, bool pair_symmetric, double tail_mass = 0.0, bool conj = false);

  /// Zeros generated from a real modulus law: k = 1..count, each r_k = law(k)
  /// placed at +r_k (and at -r_k too when pair_symmetric and r_k > 0). The
  /// tail mass beyond the prefix is estimated from `law` up to `horizon`.
  static InfiniteBlaschke from_modulus_law(const ModulusLaw& law, std::int64_t count, bool pair_symmetric,
                                           std::int64_t horizon);

  const std::vector<complex>& zeros() const { return zeros_; }
  bool pair_symmetric() const { return pair_symmetric_; }
  double tail_mass() const { return tail_mass_; }
  bool conj() const { return conj_; }

 private:
  std::vector<complex> zeros_;
  bool pair_symmetric_;
  double tail_mass_;
  bool conj_;
};

using DianalyticMap =
    std::variant<MoebiusRotation, CanonicalMap, HInvariantBlaschke, RationalForm1, FiniteBlaschke, InfiniteBlaschke>;

bool is_conj(const DianalyticMap& map);

/// Value of the map on the whole sphere. Poles give infinity; points with
/// |z| > 1 are evaluated in the chart w = 1/z.
ExtComplex evaluate(const DianalyticMap& map, const ExtComplex& z);

/// Algebraic degree; throws std::invalid_argument for InfiniteBlaschke.
int degree(const DianalyticMap& map);

struct InvarianceReport {
  bool pass = false;
  double max_defect = 0.0;
  ExtComplex worst_point;
};

/// Samples sphere points and measures chordal(F(h(z)), h(F(z))).
InvarianceReport is_h_invariant(const DianalyticMap& map, int sample_count, double tol, std::uint64_t seed = 1);

/// True iff `den` is the h-transform of `num` (both descending, equal length).
bool validate_form1(std::span<const complex> num, std::span<const complex> den, double tol);

enum class CanonicalBranch { Numerator, Denominator };

struct CanonicalizeResult {
  CanonicalMap map;
  CanonicalBranch branch;
  int sweeps;
  /// Max chordal disagreement between the input and output at 100 sample points.
  double residual;
};

/// Factor the numerator and fold its leading phase into alpha = theta + 2 arg(a0).
/// When the numerator has dropped degree the missing zeros sit at infinity.
CanonicalizeResult canonicalize(const RationalForm1& f, double root_tol = 1e-12);

/// Inverse of canonicalize: monic numerator, theta = alpha.
RationalForm1 expand(const CanonicalMap& c);

struct PairingResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t zeros_at_origin = 0;
  std::vector<std::size_t> unpaired;

  bool ok() const { return unpaired.empty() && zeros_at_origin % 2 == 1; }
  std::string message() const;
};

/// Greedily matches each zero with its negative.
PairingResult pair_zeros(std::span<const complex> zeros, double tol);

struct ConvergenceReport {
  bool converges = false;
  double partial_sum = 0.0;
  /// Estimated sum (1 - |z_k|) beyond the horizon; +inf when divergent.
  double tail_estimate = 0.0;
  /// Fitted decay exponent s of 1 - |z_k| ~ k^-s over the last decade.
  double decay_exponent = 0.0;
};

ConvergenceReport check_convergence(std::span<const complex> prefix, std::int64_t horizon);
ConvergenceReport check_convergence(const ModulusLaw& law, std::int64_t horizon);

struct TruncatedValue {
  complex value;
  double bound;
  std::size_t factors_used;
};

/// Multiplies factors in order until 2 sum_{k>N} (1 - |z_k|) / (1 - r) is
/// below tail_bound. Requires |z| <= r < 1. Throws std::domain_error when the
/// stored prefix cannot reach the bound.
TruncatedValue eval_truncated(const InfiniteBlaschke& b, complex z, double r, double tail_bound);

}  // namespace p2dyn
