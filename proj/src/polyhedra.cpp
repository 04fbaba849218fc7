#include "plfan/polyhedra.hpp"

#include <algorithm>
#include <map>

#include "plfan/errors.hpp"

namespace plfan {

// ---- HPolyhedron ----------------------------------------------------------

HPolyhedron HPolyhedron::empty_set(std::size_t ambient_dim) {
  HPolyhedron p(ambient_dim);
  p.marked_empty_ = true;
  return p;
}

void HPolyhedron::add_inequality(QVector normal, Rat offset) {
  if (normal.size() != dim_) throw InvalidInput("add_inequality: normal has wrong dimension");
  if (is_zero(normal)) {
    if (sgn(offset) < 0) marked_empty_ = true;
    return;
  }
  inequalities_.push_back({std::move(normal), std::move(offset)});
}

void HPolyhedron::add_equality(QVector normal, Rat offset) {
  if (normal.size() != dim_) throw InvalidInput("add_equality: normal has wrong dimension");
  if (is_zero(normal)) {
    if (sgn(offset) != 0) marked_empty_ = true;
    return;
  }
  equalities_.push_back({std::move(normal), std::move(offset)});
}

namespace {

QVector head(const QVector& v, std::size_t n) { return QVector(v.begin(), v.begin() + static_cast<long>(n)); }

QVector with_last(const QVector& v, const Rat& last) {
  QVector out = v;
  out.push_back(last);
  return out;
}

/// Reduced echelon basis of a subspace with the pivot columns, kept so that
/// vectors can be reduced modulo it.
struct SubspaceBasis {
  RowEchelon echelon;

  explicit SubspaceBasis(std::span<const QVector> vectors, std::size_t dim)
      : echelon(row_echelon(QMatrix(dim, std::vector<QVector>(vectors.begin(), vectors.end())))) {}

  /// Zeroes the pivot coordinates by subtracting basis vectors.
  QVector reduce(QVector v) const {
    for (std::size_t i = 0; i < echelon.pivots.size(); ++i) {
      const Rat f = v[echelon.pivots[i]];
      if (sgn(f) == 0) continue;
      const QVector& row = echelon.reduced.row(i);
      for (std::size_t k = 0; k < v.size(); ++k) v[k] -= f * row[k];
    }
    return v;
  }

  std::vector<QVector> primitive_basis() const {
    std::vector<QVector> out;
    for (const auto& row : echelon.reduced.row_list()) out.push_back(primitive_direction(row));
    return out;
  }
};

void sort_unique(std::vector<QVector>& vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

void canonicalize_vrep(VRepresentation& v) {
  if (v.empty) {
    v.vertices.clear();
    v.rays.clear();
    v.lineality.clear();
    return;
  }
  const SubspaceBasis lin(v.lineality, v.ambient_dim);
  v.lineality = lin.primitive_basis();
  for (auto& x : v.vertices) x = lin.reduce(std::move(x));
  std::vector<QVector> rays;
  for (auto& r : v.rays) {
    QVector reduced = lin.reduce(std::move(r));
    if (!is_zero(reduced)) rays.push_back(primitive_direction(reduced));
  }
  v.rays = std::move(rays);
  sort_unique(v.vertices);
  sort_unique(v.rays);
}

struct DdRay {
  QVector v;
  std::vector<bool> tight;  // tight[k]: constraint k holds with equality
};

bool tight_superset(const std::vector<bool>& a, const std::vector<bool>& common) {
  for (std::size_t i = 0; i < common.size(); ++i)
    if (common[i] && !a[i]) return false;
  return true;
}

/// Scales to a primitive integer normal with a positive factor.
Halfspace normalized(Halfspace h) {
  Integer l = 1;
  for (const auto& x : h.normal) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  Integer g = 0;
  for (const auto& x : h.normal) {
    const Integer num = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
  }
  const Rat factor(l, g);
  for (auto& x : h.normal) x *= factor;
  h.offset *= factor;
  return h;
}

HPolyhedron canonical_h(std::size_t n, const std::vector<Hyperplane>& eqs, const std::vector<Halfspace>& ineqs) {
  std::vector<QVector> aug;
  for (const auto& e : eqs) aug.push_back(with_last(e.normal, e.offset));
  const SubspaceBasis eq_basis(aug, n + 1);
  HPolyhedron out(n);
  for (std::size_t i = 0; i < eq_basis.echelon.pivots.size(); ++i) {
    if (eq_basis.echelon.pivots[i] == n) return HPolyhedron::empty_set(n);
  }
  std::vector<Hyperplane> eq_out;
  for (const auto& row : eq_basis.echelon.reduced.row_list()) {
    Halfspace h = normalized({head(row, n), row[n]});
    eq_out.push_back({std::move(h.normal), std::move(h.offset)});
  }
  std::map<QVector, Rat> best;
  for (const auto& h : ineqs) {
    QVector reduced = eq_basis.reduce(with_last(h.normal, h.offset));
    QVector normal = head(reduced, n);
    if (is_zero(normal)) {
      if (sgn(reduced[n]) < 0) return HPolyhedron::empty_set(n);
      continue;
    }
    Halfspace hn = normalized({std::move(normal), reduced[n]});
    auto it = best.find(hn.normal);
    if (it == best.end())
      best.emplace(std::move(hn.normal), std::move(hn.offset));
    else if (hn.offset < it->second)
      it->second = hn.offset;
  }
  std::sort(eq_out.begin(), eq_out.end(),
            [](const Hyperplane& a, const Hyperplane& b) { return a.normal < b.normal; });
  for (auto& e : eq_out) out.add_equality(std::move(e.normal), std::move(e.offset));
  for (auto& [normal, offset] : best) out.add_inequality(normal, offset);
  return out;
}

void check_cap(std::size_t dim, std::size_t cap) {
  if (dim > cap)
    throw CapExceeded("ambient dimension " + std::to_string(dim) + " exceeds the cap of " + std::to_string(cap));
}

}  // namespace

// ---- double description ---------------------------------------------------

ConeGenerators double_description(std::size_t dim, std::span<const QVector> ge_rows,
                                  std::span<const QVector> eq_rows) {
  struct Constraint {
    const QVector* row;
    bool equality;
  };
  std::vector<Constraint> cons;
  for (const auto& e : eq_rows) cons.push_back({&e, true});
  for (const auto& g : ge_rows) cons.push_back({&g, false});
  const std::size_t total = cons.size();

  std::vector<QVector> lin;
  for (std::size_t i = 0; i < dim; ++i) lin.push_back(unit_vector(dim, i));
  std::vector<DdRay> rays;

  for (std::size_t k = 0; k < total; ++k) {
    const QVector& h = *cons[k].row;
    if (h.size() != dim) throw InvalidInput("double_description: constraint has wrong dimension");
    const bool equality = cons[k].equality;

    auto cut = std::find_if(lin.begin(), lin.end(), [&](const QVector& l) { return sgn(dot(h, l)) != 0; });
    if (cut != lin.end()) {
      QVector l = *cut;
      lin.erase(cut);
      Rat hl = dot(h, l);
      if (sgn(hl) < 0) {
        l = -l;
        hl = -hl;
      }
      for (auto& q : lin) {
        const Rat hq = dot(h, q);
        if (sgn(hq) != 0) q = primitive_direction(q - (hq / hl) * l);
      }
      for (auto& r : rays) {
        const Rat hr = dot(h, r.v);
        if (sgn(hr) != 0) r.v = primitive_direction(r.v - (hr / hl) * l);
        r.tight[k] = true;
      }
      if (!equality) {
        std::vector<bool> tight(total, false);
        for (std::size_t j = 0; j < k; ++j) tight[j] = true;
        rays.push_back({primitive_direction(l), std::move(tight)});
      }
      continue;
    }

    std::vector<Rat> val(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<DdRay> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(h, rays[i].v);
      const int s = sgn(val[i]);
      if (s > 0) {
        pos.push_back(i);
        if (!equality) next.push_back(rays[i]);
      } else if (s < 0) {
        neg.push_back(i);
      } else {
        next.push_back(rays[i]);
        next.back().tight[k] = true;
      }
    }
    for (auto p : pos) {
      for (auto q : neg) {
        std::vector<bool> common(total, false);
        for (std::size_t j = 0; j < k; ++j) common[j] = rays[p].tight[j] && rays[q].tight[j];
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o == p || o == q) continue;
          if (tight_superset(rays[o].tight, common)) adjacent = false;
        }
        if (!adjacent) continue;
        QVector v = val[p] * rays[q].v - val[q] * rays[p].v;
        common[k] = true;
        next.push_back({primitive_direction(v), std::move(common)});
      }
    }
    rays = std::move(next);
  }

  ConeGenerators out;
  const SubspaceBasis lin_basis(lin, dim);
  out.lineality = lin_basis.primitive_basis();
  for (auto& r : rays) {
    QVector reduced = lin_basis.reduce(std::move(r.v));
    if (!is_zero(reduced)) out.rays.push_back(primitive_direction(reduced));
  }
  sort_unique(out.rays);
  return out;
}

// ---- conversions ----------------------------------------------------------

VRepresentation dual_description(const HPolyhedron& p, std::size_t dim_cap) {
  const std::size_t n = p.ambient_dim();
  check_cap(n, dim_cap);
  VRepresentation out;
  out.ambient_dim = n;
  if (p.is_marked_empty()) {
    out.empty = true;
    return out;
  }
  // homogenize: y = (x, t), t >= 0, t*b - <a,x> >= 0, <a,x> - t*b = 0
  std::vector<QVector> ge{unit_vector(n + 1, n)};
  for (const auto& h : p.inequalities()) ge.push_back(with_last(-h.normal, h.offset));
  std::vector<QVector> eq;
  for (const auto& e : p.equalities()) eq.push_back(with_last(e.normal, -e.offset));
  const ConeGenerators cg = double_description(n + 1, ge, eq);

  for (const auto& r : cg.rays) {
    const Rat t = r[n];
    if (sgn(t) > 0)
      out.vertices.push_back((1 / t) * head(r, n));
    else
      out.rays.push_back(head(r, n));
  }
  for (const auto& l : cg.lineality) out.lineality.push_back(head(l, n));
  if (out.vertices.empty()) {
    out.empty = true;
  }
  canonicalize_vrep(out);
  return out;
}

HPolyhedron vrep_to_h(const VRepresentation& v, std::size_t dim_cap) {
  if (v.empty || v.vertices.empty()) throw InvalidInput("vrep_to_h: empty V-representation");
  const std::size_t n = v.ambient_dim;
  check_cap(n, dim_cap);
  std::vector<QVector> ge;
  for (const auto& x : v.vertices) ge.push_back(with_last(x, Rat(1)));
  for (const auto& r : v.rays) ge.push_back(with_last(r, Rat(0)));
  std::vector<QVector> eq;
  for (const auto& l : v.lineality) eq.push_back(with_last(l, Rat(0)));
  const ConeGenerators cg = double_description(n + 1, ge, eq);

  // (a, c) in the dual cone means <a, x> + c >= 0 on P
  std::vector<Hyperplane> eqs;
  for (const auto& l : cg.lineality) eqs.push_back({head(l, n), -l[n]});
  std::vector<Halfspace> ineqs;
  for (const auto& r : cg.rays) ineqs.push_back({-head(r, n), r[n]});
  return canonical_h(n, eqs, ineqs);
}

HPolyhedron canonical_form(const HPolyhedron& p, std::size_t dim_cap) {
  const VRepresentation v = dual_description(p, dim_cap);
  if (v.empty) return HPolyhedron::empty_set(p.ambient_dim());
  return vrep_to_h(v, dim_cap);
}

VRepresentation canonical_form(const VRepresentation& v, std::size_t dim_cap) {
  if (v.empty || v.vertices.empty()) {
    VRepresentation e;
    e.ambient_dim = v.ambient_dim;
    e.empty = true;
    return e;
  }
  return dual_description(vrep_to_h(v, dim_cap), dim_cap);
}

WeylDecomposition decompose_weyl(const HPolyhedron& p) {
  const VRepresentation v = dual_description(p);
  if (v.empty) throw EmptyPolyhedron("decompose_weyl: empty polyhedron");
  WeylDecomposition out;
  out.polytope_vertices = v.vertices;
  out.recession.ambient_dim = v.ambient_dim;
  out.recession.vertices = {zero_vector(v.ambient_dim)};
  out.recession.rays = v.rays;
  out.recession.lineality = v.lineality;
  return out;
}

LinearMinimum minimize_linear(const VRepresentation& v, const QVector& u) {
  if (v.empty || v.vertices.empty()) throw EmptyPolyhedron("minimize_linear: empty polyhedron");
  if (u.size() != v.ambient_dim) throw InvalidInput("minimize_linear: direction has wrong dimension");
  LinearMinimum out;
  for (const auto& l : v.lineality)
    if (sgn(dot(u, l)) != 0) return out;
  for (const auto& r : v.rays)
    if (sgn(dot(u, r)) < 0) return out;
  out.bounded = true;
  bool first = true;
  for (const auto& x : v.vertices) {
    const Rat val = dot(u, x);
    if (first || val < out.value || (val == out.value && out.argmin < x)) {
      out.value = val;
      out.argmin = x;
      first = false;
    }
  }
  return out;
}

LinearMinimum minimize_linear(const HPolyhedron& p, const QVector& u) {
  return minimize_linear(dual_description(p), u);
}

VRepresentation minkowski_sum(const VRepresentation& p, const VRepresentation& q) {
  if (p.ambient_dim != q.ambient_dim) throw InvalidInput("minkowski_sum: dimension mismatch");
  VRepresentation s;
  s.ambient_dim = p.ambient_dim;
  if (p.empty || q.empty || p.vertices.empty() || q.vertices.empty()) {
    s.empty = true;
    return s;
  }
  for (const auto& a : p.vertices)
    for (const auto& b : q.vertices) s.vertices.push_back(a + b);
  s.rays = p.rays;
  s.rays.insert(s.rays.end(), q.rays.begin(), q.rays.end());
  s.lineality = p.lineality;
  s.lineality.insert(s.lineality.end(), q.lineality.begin(), q.lineality.end());
  return canonical_form(s);
}

VRepresentation scaled(const VRepresentation& p, const Rat& t) {
  if (sgn(t) <= 0) throw InvalidInput("scaled: factor must be positive");
  VRepresentation out = p;
  for (auto& x : out.vertices) x = t * x;
  return out;
}

HPolyhedron scaled(const HPolyhedron& p, const Rat& t) {
  if (sgn(t) <= 0) throw InvalidInput("scaled: factor must be positive");
  if (p.is_marked_empty()) return p;
  HPolyhedron out(p.ambient_dim());
  for (const auto& e : p.equalities()) out.add_equality(e.normal, t * e.offset);
  for (const auto& h : p.inequalities()) out.add_inequality(h.normal, t * h.offset);
  return out;
}

// ---- projection -----------------------------------------------------------

namespace {

struct FmRow {
  QVector a;
  Rat b;
  std::vector<bool> history;  // original inequalities combined into this row
};

std::size_t popcount(const std::vector<bool>& h) { return static_cast<std::size_t>(std::count(h.begin(), h.end(), true)); }

}  // namespace

HPolyhedron project(const HPolyhedron& p, std::span<const std::size_t> keep) {
  const std::size_t n = p.ambient_dim();
  std::vector<bool> kept(n, false);
  for (auto k : keep) {
    if (k >= n) throw InvalidInput("project: coordinate index out of range");
    kept[k] = true;
  }
  if (p.is_marked_empty()) return HPolyhedron::empty_set(keep.size());

  std::vector<FmRow> eqs;
  for (const auto& e : p.equalities()) eqs.push_back({e.normal, e.offset, {}});
  std::vector<FmRow> rows;
  const std::size_t m = p.inequalities().size();
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<bool> h(m, false);
    h[i] = true;
    rows.push_back({p.inequalities()[i].normal, p.inequalities()[i].offset, std::move(h)});
  }

  auto eliminate_with = [](FmRow& target, const FmRow& pivot, std::size_t j) {
    const Rat f = target.a[j] / pivot.a[j];
    for (std::size_t k = 0; k < target.a.size(); ++k) target.a[k] -= f * pivot.a[k];
    target.b -= f * pivot.b;
  };

  std::vector<std::size_t> fm_vars;
  for (std::size_t j = 0; j < n; ++j) {
    if (kept[j]) continue;
    auto e = std::find_if(eqs.begin(), eqs.end(), [&](const FmRow& r) { return sgn(r.a[j]) != 0; });
    if (e == eqs.end()) {
      fm_vars.push_back(j);
      continue;
    }
    const FmRow pivot = *e;
    eqs.erase(e);
    for (auto& r : eqs)
      if (sgn(r.a[j]) != 0) eliminate_with(r, pivot, j);
    for (auto& r : rows)
      if (sgn(r.a[j]) != 0) eliminate_with(r, pivot, j);
  }

  std::size_t steps = 0;
  for (auto j : fm_vars) {
    ++steps;
    std::vector<FmRow> next;
    std::vector<const FmRow*> pos, neg;
    for (const auto& r : rows) {
      const int s = sgn(r.a[j]);
      if (s > 0)
        pos.push_back(&r);
      else if (s < 0)
        neg.push_back(&r);
      else
        next.push_back(r);
    }
    std::map<QVector, std::size_t> index;  // normal -> position in next
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (!is_zero(next[i].a)) index.emplace(next[i].a, i);
    }
    for (const auto* pr : pos) {
      for (const auto* nr : neg) {
        std::vector<bool> hist(m, false);
        for (std::size_t i = 0; i < m; ++i) hist[i] = pr->history[i] || nr->history[i];
        if (popcount(hist) > steps + 1) continue;  // Chernikov: redundant
        const Rat cp = -nr->a[j];
        const Rat cn = pr->a[j];
        FmRow c{cp * pr->a + cn * nr->a, cp * pr->b + cn * nr->b, std::move(hist)};
        c.a[j] = 0;
        if (is_zero(c.a)) {
          if (sgn(c.b) < 0) return HPolyhedron::empty_set(keep.size());
          continue;
        }
        Halfspace h = normalized({std::move(c.a), std::move(c.b)});
        c.a = std::move(h.normal);
        c.b = std::move(h.offset);
        auto it = index.find(c.a);
        if (it == index.end()) {
          index.emplace(c.a, next.size());
          next.push_back(std::move(c));
        } else if (c.b < next[it->second].b ||
                   (c.b == next[it->second].b && popcount(c.history) < popcount(next[it->second].history))) {
          next[it->second] = std::move(c);
        }
      }
    }
    rows = std::move(next);
  }

  HPolyhedron out(keep.size());
  auto restrict = [&](const QVector& a) {
    QVector r;
    for (auto k : keep) r.push_back(a[k]);
    return r;
  };
  for (const auto& e : eqs) out.add_equality(restrict(e.a), e.b);
  for (const auto& r : rows) out.add_inequality(restrict(r.a), r.b);
  if (keep.size() <= kDefaultDimCap) return canonical_form(out);
  return out;
}

// ---- membership -----------------------------------------------------------

bool contains(const HPolyhedron& p, const QVector& x) {
  if (x.size() != p.ambient_dim()) throw InvalidInput("contains: point has wrong dimension");
  if (p.is_marked_empty()) return false;
  for (const auto& e : p.equalities())
    if (dot(e.normal, x) != e.offset) return false;
  for (const auto& h : p.inequalities())
    if (dot(h.normal, x) > h.offset) return false;
  return true;
}

bool includes(const HPolyhedron& outer, const VRepresentation& inner) {
  if (inner.empty || inner.vertices.empty()) return true;
  if (outer.is_marked_empty()) return false;
  for (const auto& x : inner.vertices)
    if (!contains(outer, x)) return false;
  for (const auto& e : outer.equalities()) {
    for (const auto& r : inner.rays)
      if (sgn(dot(e.normal, r)) != 0) return false;
    for (const auto& l : inner.lineality)
      if (sgn(dot(e.normal, l)) != 0) return false;
  }
  for (const auto& h : outer.inequalities()) {
    for (const auto& r : inner.rays)
      if (sgn(dot(h.normal, r)) > 0) return false;
    for (const auto& l : inner.lineality)
      if (sgn(dot(h.normal, l)) != 0) return false;
  }
  return true;
}

bool equal_sets(const HPolyhedron& a, const HPolyhedron& b) {
  if (a.ambient_dim() != b.ambient_dim()) return false;
  return includes(a, dual_description(b)) && includes(b, dual_description(a));
}

}  // namespace plfan
