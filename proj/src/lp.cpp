#include "plfan/lp.hpp"

#include <limits>
#include <stdexcept>

#include "plfan/errors.hpp"

namespace plfan {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Dense tableau [B^-1 A' | B^-1 | B^-1 b'] where A', b' are the constraint
/// rows sign-flipped so that b' >= 0. Columns 0..vars-1 are structural,
/// vars..vars+rows-1 artificial.
class Tableau {
 public:
  Tableau(const LpInstance& inst) : m_(inst.constraint_matrix.rows()), vars_(inst.constraint_matrix.cols()) {
    width_ = vars_ + m_ + 1;
    t_.assign(m_, QVector(width_, Rat(0)));
    sign_.assign(m_, 1);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (sgn(inst.rhs[i]) < 0) sign_[i] = -1;
      for (std::size_t j = 0; j < vars_; ++j) t_[i][j] = sign_[i] * inst.constraint_matrix(i, j);
      t_[i][vars_ + i] = 1;
      t_[i][width_ - 1] = sign_[i] * inst.rhs[i];
      basis_[i] = vars_ + i;
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t vars() const { return vars_; }
  const Rat& rhs(std::size_t i) const { return t_[i][width_ - 1]; }
  const Rat& at(std::size_t i, std::size_t j) const { return t_[i][j]; }
  std::size_t basic(std::size_t i) const { return basis_[i]; }
  bool is_artificial(std::size_t j) const { return j >= vars_; }

  void pivot(std::size_t r, std::size_t c) {
    const Rat inv = 1 / t_[r][c];
    for (auto& x : t_[r]) x *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || sgn(t_[i][c]) == 0) continue;
      const Rat f = t_[i][c];
      for (std::size_t k = 0; k < width_; ++k)
        if (sgn(t_[r][k]) != 0) t_[i][k] -= f * t_[r][k];
    }
    basis_[r] = c;
  }

  Rat reduced_cost(const QVector& cost, std::size_t j) const {
    Rat d = cost[j];
    for (std::size_t i = 0; i < m_; ++i)
      if (sgn(t_[i][j]) != 0) d -= cost[basis_[i]] * t_[i][j];
    return d;
  }

  /// Runs Bland's rule on the given cost vector (length vars + rows).
  /// Returns kNone at optimality, otherwise the entering column of an unbounded direction.
  std::size_t optimize(const QVector& cost, bool allow_artificial) {
    while (true) {
      std::size_t enter = kNone;
      const std::size_t limit = allow_artificial ? vars_ + m_ : vars_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (is_basic(j)) continue;
        if (sgn(reduced_cost(cost, j)) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == kNone) return kNone;
      std::size_t leave = kNone;
      Rat best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (sgn(t_[i][enter]) <= 0) continue;
        const Rat ratio = rhs(i) / t_[i][enter];
        if (leave == kNone || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == kNone) return enter;
      pivot(leave, enter);
    }
  }

  /// y^T = cost_B^T B^-1, mapped back through the row sign flips.
  QVector duals(const QVector& cost) const {
    QVector y(m_, Rat(0));
    for (std::size_t k = 0; k < m_; ++k) {
      Rat s = 0;
      for (std::size_t i = 0; i < m_; ++i)
        if (sgn(t_[i][vars_ + k]) != 0) s += cost[basis_[i]] * t_[i][vars_ + k];
      y[k] = sign_[k] * s;
    }
    return y;
  }

  bool is_basic(std::size_t j) const {
    for (auto b : basis_)
      if (b == j) return true;
    return false;
  }

 private:
  std::size_t m_;
  std::size_t vars_;
  std::size_t width_ = 0;
  std::vector<QVector> t_;
  std::vector<int> sign_;
  std::vector<std::size_t> basis_;
};

void validate(const LpInstance& inst) {
  if (inst.cost.size() != inst.constraint_matrix.cols())
    throw InvalidInput("LpInstance: cost length differs from the number of variables");
  if (inst.rhs.size() != inst.constraint_matrix.rows())
    throw InvalidInput("LpInstance: rhs length differs from the number of constraints");
}

}  // namespace

bool certificate_holds(const LpInstance& inst, const LpOutcome& out) {
  const QMatrix& a = inst.constraint_matrix;
  const QMatrix at = a.transposed();
  switch (out.status) {
    case LpStatus::Optimal: {
      if (out.primal.size() != a.cols() || out.dual.size() != a.rows()) return false;
      if (!is_nonnegative(out.primal) || a * out.primal != inst.rhs) return false;
      const QVector aty = at * out.dual;
      for (std::size_t j = 0; j < aty.size(); ++j)
        if (aty[j] > inst.cost[j]) return false;
      return dot(inst.cost, out.primal) == out.value && dot(inst.rhs, out.dual) == out.value;
    }
    case LpStatus::Infeasible: {
      if (out.dual.size() != a.rows()) return false;
      for (const auto& x : at * out.dual)
        if (sgn(x) > 0) return false;
      return sgn(dot(inst.rhs, out.dual)) > 0;
    }
    case LpStatus::Unbounded: {
      if (out.primal.size() != a.cols() || !is_nonnegative(out.primal)) return false;
      return is_zero(a * out.primal) && sgn(dot(inst.cost, out.primal)) < 0;
    }
  }
  return false;
}

LpOutcome simplex_solve(const LpInstance& inst) {
  validate(inst);
  Tableau tab(inst);
  const std::size_t m = tab.rows();
  const std::size_t n = tab.vars();

  // phase 1: minimize the sum of artificials
  QVector phase1(n + m, Rat(0));
  for (std::size_t k = 0; k < m; ++k) phase1[n + k] = 1;
  tab.optimize(phase1, true);
  Rat infeasibility = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (tab.is_artificial(tab.basic(i))) infeasibility += tab.rhs(i);

  LpOutcome out;
  if (sgn(infeasibility) > 0) {
    out.status = LpStatus::Infeasible;
    out.dual = tab.duals(phase1);
    if (!certificate_holds(inst, out)) throw std::logic_error("simplex_solve: Farkas certificate failed verification");
    return out;
  }

  // drive zero-level artificials out of the basis where possible; rows where
  // that fails are redundant and keep their artificial at level zero
  for (std::size_t i = 0; i < m; ++i) {
    if (!tab.is_artificial(tab.basic(i))) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(tab.at(i, j)) != 0 && !tab.is_basic(j)) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  QVector phase2(n + m, Rat(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = inst.cost[j];
  const std::size_t ray_col = tab.optimize(phase2, false);
  if (ray_col != kNone) {
    out.status = LpStatus::Unbounded;
    out.primal = zero_vector(n);
    out.primal[ray_col] = 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t b = tab.basic(i);
      if (!tab.is_artificial(b)) out.primal[b] = -tab.at(i, ray_col);
    }
    if (!certificate_holds(inst, out)) throw std::logic_error("simplex_solve: unbounded ray failed verification");
    return out;
  }

  out.status = LpStatus::Optimal;
  out.primal = zero_vector(n);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t b = tab.basic(i);
    if (!tab.is_artificial(b)) out.primal[b] = tab.rhs(i);
  }
  out.value = dot(inst.cost, out.primal);
  out.dual = tab.duals(phase2);
  if (!certificate_holds(inst, out)) throw std::logic_error("simplex_solve: duality certificate failed verification");
  return out;
}

PhiValue phi_alpha(std::span<const QVector> generators, const QVector& alpha, const QVector& v) {
  if (alpha.size() != generators.size()) throw InvalidInput("phi_alpha: alpha needs one entry per generator");
  if (!is_nonnegative(alpha)) throw InvalidInput("phi_alpha: alpha must be nonnegative");
  for (const auto& g : generators)
    if (g.size() != v.size()) throw InvalidInput("phi_alpha: generator dimension differs from v");
  const LpInstance inst{alpha, QMatrix::from_columns(generators, v.size()), v};
  const LpOutcome out = simplex_solve(inst);
  if (out.status == LpStatus::Infeasible) throw NotInCone("v = " + to_string(v) + " is not in the cone of the generators");
  if (out.status == LpStatus::Unbounded) throw std::logic_error("phi_alpha: unbounded with nonnegative costs");
  return {out.value, out.primal, out.dual};
}

HPolyhedron build_q(std::span<const QVector> generators, const QVector& alpha, std::size_t dim) {
  if (alpha.size() != generators.size()) throw InvalidInput("build_q: alpha needs one entry per generator");
  HPolyhedron q(dim);
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].size() != dim) throw InvalidInput("build_q: generator has wrong dimension");
    q.add_inequality(generators[i], alpha[i]);
  }
  return q;
}

DualityCheck verify_duality(std::span<const QVector> generators, const QVector& alpha, const QVector& v) {
  const PhiValue phi = phi_alpha(generators, alpha, v);
  const LinearMinimum m = minimize_linear(build_q(generators, alpha, v.size()), -v);
  if (!m.bounded) throw std::logic_error("verify_duality: <v, .> unbounded above on Q(alpha) for v in the cone");
  DualityCheck out;
  out.primal_value = phi.value;
  out.dual_value = -m.value;
  out.gap_zero = out.primal_value == out.dual_value;
  out.witness = phi.witness;
  out.maximizer = m.argmin;
  return out;
}

}  // namespace plfan
