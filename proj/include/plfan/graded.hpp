#pragma once

// Monomial ideals on affine n-space, finitely generated graded systems given
// by generator data, their weight and asymptotic valuations, and the
// verifier for the closure identity a_{dm} ~ prod a_{de_i}^{p_i} on the
// cones of a fan.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plfan/exact.hpp"
#include "plfan/fans.hpp"
#include "plfan/polyhedra.hpp"

namespace plfan {

using Exponent = std::vector<std::int64_t>;

/// Monomial ideal stored by its minimal generators, sorted lexicographically.
/// No generators = zero ideal; the single generator 0 = unit ideal.
class MonomialIdeal {
 public:
  MonomialIdeal() = default;
  /// Throws InvalidInput on negative exponents or a length other than n.
  MonomialIdeal(std::size_t n, std::vector<Exponent> generators);
  static MonomialIdeal zero(std::size_t n) { return MonomialIdeal(n, {}); }
  static MonomialIdeal unit(std::size_t n) { return MonomialIdeal(n, {Exponent(n, 0)}); }

  std::size_t ambient_dim() const { return n_; }
  const std::vector<Exponent>& generators() const { return gens_; }
  bool is_zero() const { return gens_.empty(); }
  bool is_unit() const;
  /// x^u lies in the ideal.
  bool contains_monomial(const Exponent& u) const;
  /// other is a subset of this ideal.
  bool contains(const MonomialIdeal& other) const;

  friend bool operator==(const MonomialIdeal&, const MonomialIdeal&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Exponent> gens_;
};

MonomialIdeal product(const MonomialIdeal& a, const MonomialIdeal& b);
MonomialIdeal power(const MonomialIdeal& a, std::uint64_t k);
MonomialIdeal sum(const MonomialIdeal& a, const MonomialIdeal& b);

std::string to_string(const MonomialIdeal& ideal);
QVector to_qvector(const Exponent& u);

/// conv(generator exponents) + orthant, canonical. Throws InvalidInput on the zero ideal.
VRepresentation newton_polyhedron(const MonomialIdeal& ideal);

/// Equal integral closures, i.e. equal Newton polyhedra. zero ~ zero only.
bool closure_equal(const MonomialIdeal& a, const MonomialIdeal& b);

/// Monomial valuation x^u -> <w, u> for a primitive nonnegative integer weight.
class WeightValuation {
 public:
  /// Throws InvalidInput unless w is a nonzero, nonnegative, primitive integer vector.
  explicit WeightValuation(QVector w);
  const QVector& weights() const { return w_; }
  friend bool operator==(const WeightValuation&, const WeightValuation&) = default;
  friend auto operator<=>(const WeightValuation& a, const WeightValuation& b) { return a.w_ <=> b.w_; }

 private:
  QVector w_;
};

/// min over generators of <w, u>; +infinity on the zero ideal.
ValuationValue weight_valuation(const WeightValuation& w, const MonomialIdeal& ideal);

inline constexpr std::size_t kExpansionBudget = 1000000;

/// Graded system a_m = sum over l >= 0 with sum l_i m_i = m of prod a_{m_i}^{l_i},
/// determined by the generator degrees m_i in Z^s and ideals a_{m_i}.
class GradedSystem {
 public:
  /// Validates that every degree is a nonzero integer vector of length s, that
  /// every ideal lives in n variables, and that cone(degrees) is pointed
  /// (NotPointed otherwise). Repeated degrees are merged by ideal sum.
  GradedSystem(std::size_t grading_rank, std::size_t ambient_dim, std::vector<QVector> degrees,
               std::vector<MonomialIdeal> ideals);

  std::size_t grading_rank() const { return s_; }
  std::size_t ambient_dim() const { return n_; }
  const std::vector<QVector>& degrees() const { return degrees_; }
  const std::vector<MonomialIdeal>& ideals() const { return ideals_; }
  const Cone& cone() const { return cone_; }
  /// Integer functional strictly positive on every degree.
  const QVector& positive_functional() const { return positive_; }

 private:
  std::size_t s_ = 0;
  std::size_t n_ = 0;
  std::vector<QVector> degrees_;
  std::vector<MonomialIdeal> ideals_;
  Cone cone_;
  QVector positive_;
};

/// a_m. Zero ideal when m has no representation, unit ideal for m = 0.
/// Throws BudgetExceeded after `budget` search nodes.
MonomialIdeal expand_degree(const GradedSystem& sys, const QVector& m, std::size_t budget = kExpansionBudget);

/// min sum lambda_i v(a_{m_i}) over lambda >= 0 with sum lambda_i m_i = m,
/// skipping generators whose ideal is zero. +infinity when m has no such
/// representation. m may be rational.
ValuationValue asymptotic_valuation(const GradedSystem& sys, const WeightValuation& w, const QVector& m);

struct LimitCheck {
  ValuationValue lp_value;
  std::vector<ValuationValue> sequence;  ///< v(a_{lm}) / l for l = 1..L
  bool consistent = false;
};

/// Every finite term is >= lp_value, and the smallest finite term equals it
/// whenever some a_{lm}, l <= L, is nonzero.
LimitCheck asymptotic_limit_check(const GradedSystem& sys, const WeightValuation& w, const QVector& m,
                                  std::size_t max_multiple);

/// The polyhedron whose support function is w -> asymptotic_valuation(sys, w, m):
/// the x-projection of { sum_i sum_k mu_ik m_i = m, mu >= 0, x >= sum mu_ik u_ik }
/// with u_ik running over the vertices of NP(a_{m_i}). Throws NotInCone if m
/// has no representation through nonzero ideals.
HPolyhedron asymptotic_newton(const GradedSystem& sys, const QVector& m);

struct RayExponent {
  QVector ray;
  std::uint64_t d = 0;
  /// a_{d l e} == a_{d e}^l as ideals for every l <= L.
  bool ideal_level_to_L = false;
};

struct ExponentSearch {
  std::uint64_t d = 1;  ///< lcm of the per-ray values
  std::vector<RayExponent> per_ray;
};

/// For each ray e of the fan, the smallest d <= d_cap with NP(a_{de}) = d * asymptotic_newton(e),
/// confirmed by closure_equal(a_{dle}, a_{de}^l) for l <= L. Throws BudgetExceeded
/// naming the ray when no such d exists.
ExponentSearch find_d(const GradedSystem& sys, const Fan& fan, std::uint64_t d_cap, std::size_t max_multiple);

struct VerifyOptions {
  std::size_t p_bound = 4;
  std::uint64_t d_cap = 64;
  std::size_t max_multiple = 4;  ///< L
  bool refine_smooth = true;
  bool single_cone = false;  ///< use cone(degrees) itself instead of the linearity fan
  std::uint64_t seed = 0;
  std::size_t random_weights = 20;
};

struct TupleCheck {
  std::vector<std::uint64_t> p;
  bool passed = false;
  std::optional<QVector> witness_weight;
  std::string failed_link;  ///< empty on success
};

struct ConeCheck {
  std::vector<QVector> rays;
  std::vector<TupleCheck> tuples;
  bool passed = false;
};

struct VerificationReport {
  VerifyOptions options;
  Fan fan;
  ExponentSearch exponent;
  std::vector<ConeCheck> cones;
  std::size_t weights_tested = 0;
  bool verified = false;
};

/// Weights used by the valuation chain: deterministic pseudo-random primitive
/// weights with entries in 0..9.
std::vector<WeightValuation> random_weights(std::size_t n, std::size_t count, std::uint64_t seed);

/// Builds the fan, optionally refines it to a smooth one, finds d, then checks
/// closure_equal(a_{d sum p_i e_i}, prod a_{d e_i}^{p_i}) for all tuples with
/// sum p_i <= p_bound on every maximal cone, together with the chain
/// v(a_{dm}) <= sum p_i v(a_{de_i}) = sum p_i v^a(de_i) = v^a(dm) <= v(a_{dm})
/// for NP facet weights and the random battery.
VerificationReport verify_proposition(const GradedSystem& sys, const VerifyOptions& options = {});

}  // namespace plfan
