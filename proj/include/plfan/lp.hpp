#pragma once

// Exact two-phase simplex with Bland's rule and checked certificates, and
// the minimum-cost representation function of a generator set built on it.

#include <span>
#include <vector>

#include "plfan/exact.hpp"
#include "plfan/polyhedra.hpp"

namespace plfan {

/// min <cost, x>  s.t.  constraint_matrix * x = rhs,  x >= 0.
struct LpInstance {
  QVector cost;
  QMatrix constraint_matrix;
  QVector rhs;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Certificates, all checked exactly before the outcome is returned:
///  - Optimal:    primal is feasible, dual y satisfies A^T y <= cost, and
///                <cost, primal> == <rhs, y> == value.
///  - Infeasible: dual y satisfies A^T y <= 0 and <rhs, y> > 0 (Farkas).
///  - Unbounded:  primal is a ray d >= 0 with A d = 0 and <cost, d> < 0.
struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Rat value;
  QVector primal;
  QVector dual;
};

LpOutcome simplex_solve(const LpInstance& inst);

/// Exact re-check of the certificate attached to an outcome.
bool certificate_holds(const LpInstance& inst, const LpOutcome& out);

struct PhiValue {
  Rat value;
  QVector witness;  ///< lambda >= 0 with sum lambda_i v_i = v attaining the minimum
  QVector dual;     ///< maximizer of <v, gamma> over Q(alpha) from the final basis
};

/// min { <alpha, lambda> : lambda >= 0, sum lambda_i generators[i] = v }.
/// Throws NotInCone if v is not a nonnegative combination, InvalidInput if
/// alpha has a negative entry or the dimensions disagree.
PhiValue phi_alpha(std::span<const QVector> generators, const QVector& alpha, const QVector& v);

/// Q(alpha) = { gamma : <generators[i], gamma> <= alpha[i] for all i }, one
/// inequality per generator, not canonicalized.
HPolyhedron build_q(std::span<const QVector> generators, const QVector& alpha, std::size_t dim);

struct DualityCheck {
  Rat primal_value;
  Rat dual_value;
  bool gap_zero = false;
  QVector witness;     ///< primal minimizer
  QVector maximizer;   ///< vertex of Q(alpha) maximizing <v, .>
};

/// Primal value from phi_alpha against max <v, gamma> over build_q computed
/// separately through minimize_linear. Propagates NotInCone.
DualityCheck verify_duality(std::span<const QVector> generators, const QVector& alpha, const QVector& v);

}  // namespace plfan
