#include "plfan/fans.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "plfan/errors.hpp"
#include "plfan/lp.hpp"

namespace plfan {

namespace {

void check_dims(std::span<const QVector> vs, std::size_t dim, const char* where) {
  for (const auto& v : vs)
    if (v.size() != dim) throw InvalidInput(std::string(where) + ": vector has wrong dimension");
}

/// Cone facet data from a canonical H-description of a cone through the origin.
void split_h(const HPolyhedron& h, std::vector<QVector>& facets, std::vector<QVector>& equations) {
  for (const auto& ineq : h.inequalities()) facets.push_back(-ineq.normal);
  for (const auto& eq : h.equalities()) equations.push_back(eq.normal);
  std::sort(facets.begin(), facets.end());
}

/// Normal of the hyperplane spanned by `facet` inside span(`span_vectors`).
QVector normal_in_span(std::span<const QVector> facet, std::span<const QVector> span_vectors, std::size_t dim) {
  std::vector<QVector> rows(facet.begin(), facet.end());
  if (!span_vectors.empty()) {
    for (auto& k : kernel_basis(QMatrix(dim, std::vector<QVector>(span_vectors.begin(), span_vectors.end()))))
      rows.push_back(std::move(k));
  }
  const auto ker = kernel_basis(QMatrix(dim, std::move(rows)));
  if (ker.size() != 1) throw std::logic_error("normal_in_span: facet does not span a hyperplane");
  return primitive_direction(ker.front());
}

template <typename F>
void for_each_combination(std::size_t r, std::size_t k, F&& f) {
  if (k > r) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == r - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::pair<bool, bool> sign_pattern(const QVector& u, const std::vector<QVector>& rays) {
  bool pos = false, neg = false;
  for (const auto& r : rays) {
    const int s = sgn(dot(u, r));
    pos = pos || s > 0;
    neg = neg || s < 0;
  }
  return {pos, neg};
}

Cone with_halfspace(const Cone& c, const QVector& u) {
  std::vector<QVector> ge = c.facet_normals();
  ge.push_back(u);
  return Cone::from_inequalities(c.ambient_dim(), ge, c.equations());
}

/// Chambers of c cut by the hyperplanes u^perp, u in normals.
std::vector<Cone> chambers(const Cone& c, const std::vector<QVector>& normals) {
  std::vector<Cone> parts{c};
  for (const auto& u : normals) {
    std::vector<Cone> next;
    for (auto& p : parts) {
      const auto [pos, neg] = sign_pattern(u, p.rays());
      if (pos && neg) {
        next.push_back(with_halfspace(p, u));
        next.push_back(with_halfspace(p, -u));
      } else {
        next.push_back(std::move(p));
      }
    }
    parts = std::move(next);
  }
  return parts;
}

}  // namespace

// ---- Cone -----------------------------------------------------------------

Cone Cone::from_generators(std::span<const QVector> generators, std::size_t ambient_dim) {
  check_dims(generators, ambient_dim, "Cone::from_generators");
  VRepresentation v;
  v.ambient_dim = ambient_dim;
  v.vertices = {zero_vector(ambient_dim)};
  for (const auto& g : generators) {
    if (is_zero(g)) throw InvalidInput("Cone::from_generators: zero generator");
    v.rays.push_back(g);
  }
  const HPolyhedron h = vrep_to_h(v);
  const VRepresentation canon = dual_description(h);
  if (!canon.lineality.empty())
    throw NotPointed("cone contains the line spanned by " + to_string(canon.lineality.front()), canon.lineality.front());
  Cone c;
  c.ambient_dim_ = ambient_dim;
  c.rays_ = canon.rays;
  split_h(h, c.facet_normals_, c.equations_);
  c.dim_ = ambient_dim - c.equations_.size();
  return c;
}

Cone Cone::from_inequalities(std::size_t ambient_dim, std::span<const QVector> ge_normals,
                             std::span<const QVector> equations) {
  check_dims(ge_normals, ambient_dim, "Cone::from_inequalities");
  check_dims(equations, ambient_dim, "Cone::from_inequalities");
  HPolyhedron h(ambient_dim);
  for (const auto& u : ge_normals) h.add_inequality(-u, Rat(0));
  for (const auto& e : equations) h.add_equality(e, Rat(0));
  const VRepresentation v = dual_description(h);
  if (!v.lineality.empty())
    throw NotPointed("cone contains the line spanned by " + to_string(v.lineality.front()), v.lineality.front());
  Cone c;
  c.ambient_dim_ = ambient_dim;
  c.rays_ = v.rays;
  split_h(vrep_to_h(v), c.facet_normals_, c.equations_);
  c.dim_ = ambient_dim - c.equations_.size();
  return c;
}

Cone Cone::origin(std::size_t ambient_dim) { return from_generators({}, ambient_dim); }

bool Cone::contains(const QVector& x) const {
  if (x.size() != ambient_dim_) throw InvalidInput("Cone::contains: wrong dimension");
  for (const auto& e : equations_)
    if (sgn(dot(e, x)) != 0) return false;
  for (const auto& u : facet_normals_)
    if (sgn(dot(u, x)) < 0) return false;
  return true;
}

bool Cone::contains(const Cone& other) const {
  return std::all_of(other.rays_.begin(), other.rays_.end(), [&](const QVector& r) { return contains(r); });
}

QVector Cone::interior_point() const {
  QVector p = zero_vector(ambient_dim_);
  for (const auto& r : rays_) p = p + r;
  return p;
}

Cone Cone::minimal_face(const QVector& x) const {
  std::vector<const QVector*> tight;
  for (const auto& u : facet_normals_)
    if (sgn(dot(u, x)) == 0) tight.push_back(&u);
  std::vector<QVector> face_rays;
  for (const auto& r : rays_) {
    if (std::all_of(tight.begin(), tight.end(), [&](const QVector* u) { return sgn(dot(*u, r)) == 0; }))
      face_rays.push_back(r);
  }
  return from_generators(face_rays, ambient_dim_);
}

bool Cone::is_face_of(const Cone& other) const {
  if (!other.contains(*this)) return false;
  return other.minimal_face(interior_point()) == *this;
}

// ---- Fan ------------------------------------------------------------------

Fan::Fan(std::size_t ambient_dim, std::vector<Cone> cones) : ambient_dim_(ambient_dim) {
  for (const auto& c : cones)
    if (c.ambient_dim() != ambient_dim) throw InvalidInput("Fan: cone has wrong ambient dimension");
  std::sort(cones.begin(), cones.end());
  cones.erase(std::unique(cones.begin(), cones.end()), cones.end());
  for (std::size_t i = 0; i < cones.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < cones.size() && !dominated; ++j) {
      if (i != j && cones[j].dim() >= cones[i].dim() && cones[j].contains(cones[i])) dominated = true;
    }
    if (!dominated) cones_.push_back(cones[i]);
  }
}

std::vector<QVector> Fan::rays() const {
  std::set<QVector> all;
  for (const auto& c : cones_) all.insert(c.rays().begin(), c.rays().end());
  return {all.begin(), all.end()};
}

// ---- cone operations ------------------------------------------------------

Cone cone_from_generators(std::span<const QVector> generators, std::size_t ambient_dim) {
  return Cone::from_generators(generators, ambient_dim);
}

Cone intersect(const Cone& a, const Cone& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw InvalidInput("intersect: ambient dimension mismatch");
  std::vector<QVector> ge = a.facet_normals();
  ge.insert(ge.end(), b.facet_normals().begin(), b.facet_normals().end());
  std::vector<QVector> eq = a.equations();
  eq.insert(eq.end(), b.equations().begin(), b.equations().end());
  return Cone::from_inequalities(a.ambient_dim(), ge, eq);
}

Integer multiplicity(const Cone& c) { return hermite_basis_det(c.rays()).lattice_det; }

bool is_smooth(const Cone& c) { return c.is_simplicial() && multiplicity(c) == 1; }

QVector caratheodory_reduce(std::span<const QVector> generators, const QVector& alpha, const QVector& lambda) {
  const std::size_t r = generators.size();
  if (alpha.size() != r || lambda.size() != r)
    throw InvalidInput("caratheodory_reduce: alpha and lambda need one entry per generator");
  if (!is_nonnegative(alpha) || !is_nonnegative(lambda))
    throw InvalidInput("caratheodory_reduce: alpha and lambda must be nonnegative");
  if (r == 0) return lambda;
  const std::size_t n = generators.front().size();
  check_dims(generators, n, "caratheodory_reduce");

  QVector lam = lambda;
  while (true) {
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < r; ++i)
      if (sgn(lam[i]) != 0) support.push_back(i);
    std::vector<QVector> cols;
    for (auto i : support) cols.push_back(generators[i]);
    const auto relations = kernel_basis(QMatrix::from_columns(cols, n));
    if (relations.empty()) return lam;

    // among the basis relations and their negatives, take the step that lowers the cost most
    QVector b;
    std::size_t j = r;
    Rat best, best_drop;
    for (const auto& rel : relations) {
      for (int sign : {1, -1}) {
        QVector cand = zero_vector(r);
        for (std::size_t k = 0; k < support.size(); ++k) cand[support[k]] = sign * rel[k];
        const Rat cost = dot(cand, alpha);
        if (sgn(cost) < 0) continue;
        std::size_t cj = r;
        Rat ratio;
        for (auto i : support) {
          if (sgn(cand[i]) <= 0) continue;
          const Rat t = lam[i] / cand[i];
          if (cj == r || t < ratio) {
            cj = i;
            ratio = t;
          }
        }
        if (cj == r) continue;
        const Rat drop = ratio * cost;
        if (j == r || drop > best_drop) {
          b = std::move(cand);
          j = cj;
          best = ratio;
          best_drop = drop;
        }
      }
    }
    for (auto i : support) lam[i] -= best * b[i];
    lam[j] = 0;
  }
}

std::vector<std::vector<std::size_t>> independent_subsets(std::span<const QVector> generators, std::size_t cap) {
  const std::size_t r = generators.size();
  if (r > cap)
    throw CapExceeded(std::to_string(r) + " generators exceed the cap of " + std::to_string(cap));
  std::vector<std::vector<std::size_t>> out{{}};
  if (r == 0) return out;
  const std::size_t n = generators.front().size();
  for (std::size_t k = 1; k <= std::min(r, n); ++k) {
    for_each_combination(r, k, [&](const std::vector<std::size_t>& idx) {
      std::vector<QVector> vs;
      for (auto i : idx) vs.push_back(generators[i]);
      if (rank(vs) == k) out.push_back(idx);
    });
  }
  return out;
}

Fan linearity_fan(std::span<const QVector> generators, std::size_t ambient_dim, std::size_t cap) {
  if (generators.size() > cap)
    throw CapExceeded(std::to_string(generators.size()) + " generators exceed the cap of " + std::to_string(cap));
  const Cone c = Cone::from_generators(generators, ambient_dim);
  const std::size_t k = c.dim();
  if (k <= 1) return Fan::from_cone(c);

  std::set<QVector> hyperplanes;
  for_each_combination(generators.size(), k - 1, [&](const std::vector<std::size_t>& idx) {
    std::vector<QVector> span;
    for (auto i : idx) span.push_back(generators[i]);
    if (rank(span) != k - 1) return;
    std::vector<QVector> rows = span;
    rows.insert(rows.end(), c.equations().begin(), c.equations().end());
    const auto ker = kernel_basis(QMatrix(ambient_dim, std::move(rows)));
    hyperplanes.insert(sign_normalized(primitive_direction(ker.front())));
  });
  return Fan(ambient_dim, chambers(c, {hyperplanes.begin(), hyperplanes.end()}));
}

Fan normal_fan(const HPolyhedron& q) {
  const HPolyhedron h = canonical_form(q);
  if (h.is_marked_empty()) throw EmptyPolyhedron("normal_fan: empty polyhedron");
  if (!h.equalities().empty())
    throw NotPointed("normal_fan: polyhedron is not full-dimensional, normal cones contain the line spanned by " +
                         to_string(h.equalities().front().normal),
                     h.equalities().front().normal);
  const VRepresentation v = dual_description(h);
  std::vector<Cone> cones;
  for (const auto& p : v.vertices) {
    std::vector<QVector> tight;
    for (const auto& f : h.inequalities())
      if (dot(f.normal, p) == f.offset) tight.push_back(f.normal);
    cones.push_back(Cone::from_generators(tight, q.ambient_dim()));
  }
  return Fan(q.ambient_dim(), std::move(cones));
}

bool support_contains(const Fan& outer, const Fan& inner) {
  if (outer.ambient_dim() != inner.ambient_dim()) return false;
  std::set<QVector> normals;
  for (const auto& t : outer.maximal_cones()) {
    for (const auto& u : t.facet_normals()) normals.insert(sign_normalized(u));
    for (const auto& e : t.equations()) normals.insert(sign_normalized(e));
  }
  const std::vector<QVector> cut(normals.begin(), normals.end());
  for (const auto& sigma : inner.maximal_cones()) {
    for (const auto& piece : chambers(sigma, cut)) {
      const bool covered = std::any_of(outer.maximal_cones().begin(), outer.maximal_cones().end(),
                                       [&](const Cone& t) { return t.contains(piece); });
      if (!covered) return false;
    }
  }
  return true;
}

bool same_support(const Fan& a, const Fan& b) { return support_contains(a, b) && support_contains(b, a); }

bool refines(const Fan& fine, const Fan& coarse) {
  if (!same_support(fine, coarse)) return false;
  for (const auto& c : fine.maximal_cones()) {
    const bool inside = std::any_of(coarse.maximal_cones().begin(), coarse.maximal_cones().end(),
                                    [&](const Cone& t) { return t.contains(c); });
    if (!inside) return false;
  }
  return true;
}

Fan common_refinement(std::span<const Fan> fans) {
  if (fans.empty()) throw InvalidInput("common_refinement: no fans given");
  for (std::size_t i = 1; i < fans.size(); ++i)
    if (!same_support(fans[0], fans[i])) throw InvalidInput("common_refinement: fans have different supports");
  std::vector<Cone> current = fans[0].maximal_cones();
  for (std::size_t i = 1; i < fans.size(); ++i) {
    std::vector<Cone> next;
    for (const auto& a : current)
      for (const auto& b : fans[i].maximal_cones()) next.push_back(intersect(a, b));
    current = Fan(fans[0].ambient_dim(), std::move(next)).maximal_cones();
  }
  return Fan(fans[0].ambient_dim(), std::move(current));
}

bool is_valid_fan(const Fan& f) {
  const auto& cs = f.maximal_cones();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      const Cone meet = intersect(cs[i], cs[j]);
      if (!meet.is_face_of(cs[i]) || !meet.is_face_of(cs[j])) return false;
    }
  }
  return true;
}

// ---- smooth refinement ----------------------------------------------------

namespace {

/// Placing triangulation of a pointed cone, adding rays in the given order.
std::vector<Cone> placing_triangulation(const Cone& c) {
  const auto& rays = c.rays();
  const std::size_t dim = c.ambient_dim();
  std::vector<std::vector<std::size_t>> simplices;
  std::vector<QVector> placed;
  for (std::size_t idx = 0; idx < rays.size(); ++idx) {
    const QVector& r = rays[idx];
    if (placed.empty()) {
      simplices.push_back({idx});
      placed.push_back(r);
      continue;
    }
    std::vector<QVector> extended = placed;
    extended.push_back(r);
    if (rank(extended) > rank(placed)) {
      for (auto& s : simplices) s.push_back(idx);
    } else {
      // boundary facets appear in exactly one simplex
      std::map<std::vector<std::size_t>, std::pair<int, std::size_t>> facets;  // facet -> (count, opposite)
      for (const auto& s : simplices) {
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
          std::vector<std::size_t> f;
          for (std::size_t k = 0; k < s.size(); ++k)
            if (k != drop) f.push_back(s[k]);
          auto& entry = facets[f];
          entry.first += 1;
          entry.second = s[drop];
        }
      }
      std::vector<std::vector<std::size_t>> added;
      for (const auto& [f, entry] : facets) {
        if (entry.first != 1) continue;
        std::vector<QVector> fv;
        for (auto k : f) fv.push_back(rays[k]);
        QVector u = normal_in_span(fv, placed, dim);
        if (sgn(dot(u, rays[entry.second])) < 0) u = -u;
        if (sgn(dot(u, r)) < 0) {
          auto s = f;
          s.push_back(idx);
          added.push_back(std::move(s));
        }
      }
      simplices.insert(simplices.end(), added.begin(), added.end());
    }
    placed.push_back(r);
  }
  std::vector<Cone> out;
  for (const auto& s : simplices) {
    std::vector<QVector> gens;
    for (auto k : s) gens.push_back(rays[k]);
    out.push_back(Cone::from_generators(gens, dim));
  }
  return out;
}

struct StellarPoint {
  QVector point;
  Integer worst;  // largest multiplicity among the cones replacing the subdivided one
};

/// Nonzero primitive lattice points sum c_i g_i with c_i in [0, 1), scored by
/// the maximal multiplicity c_i * mult they leave behind.
StellarPoint best_stellar_point(const Cone& c, const Integer& mult) {
  const auto& rays = c.rays();
  const std::size_t k = rays.size();
  const unsigned long m = mult.get_ui();
  std::vector<unsigned long> a(k, 0);
  std::optional<StellarPoint> best;
  while (true) {
    std::size_t pos = 0;
    while (pos < k && ++a[pos] == m) a[pos++] = 0;
    if (pos == k) break;
    QVector x = zero_vector(c.ambient_dim());
    Integer worst = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (a[i] == 0) continue;
      Rat c(Integer(a[i]), mult);
      c.canonicalize();
      x = x + c * rays[i];
      worst = std::max(worst, Integer(a[i]));
    }
    if (!is_integral(x) || primitive(x) != x) continue;
    if (!best || worst < best->worst || (worst == best->worst && x < best->point)) best = StellarPoint{x, worst};
  }
  if (!best) throw std::logic_error("smooth_refine: no lattice point in the fundamental parallelepiped");
  return *best;
}

std::vector<Cone> stellar_subdivide(const std::vector<Cone>& cones, const QVector& p) {
  std::vector<Cone> out;
  for (const auto& t : cones) {
    if (!t.contains(p)) {
      out.push_back(t);
      continue;
    }
    const auto& rays = t.rays();
    const auto sol = linear_solve(QMatrix::from_columns(rays, t.ambient_dim()), p);
    if (!sol) throw std::logic_error("stellar_subdivide: point not in the span of a containing cone");
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (sgn(sol->particular[i]) <= 0) continue;
      std::vector<QVector> gens = rays;
      gens[i] = p;
      out.push_back(Cone::from_generators(gens, t.ambient_dim()));
    }
  }
  return out;
}

}  // namespace

Fan smooth_refine(const Fan& f, std::size_t dim_cap, std::size_t budget) {
  if (f.ambient_dim() > dim_cap)
    throw CapExceeded("smooth_refine: ambient dimension " + std::to_string(f.ambient_dim()) + " exceeds the cap of " +
                      std::to_string(dim_cap));
  std::vector<Cone> cones;
  for (const auto& c : f.maximal_cones()) {
    if (c.is_simplicial()) {
      cones.push_back(c);
    } else {
      for (auto& s : placing_triangulation(c)) cones.push_back(std::move(s));
    }
  }
  for (std::size_t step = 0; step < budget; ++step) {
    std::sort(cones.begin(), cones.end());
    auto bad = cones.end();
    Integer mult;
    for (auto it = cones.begin(); it != cones.end(); ++it) {
      mult = multiplicity(*it);
      if (mult > 1) {
        bad = it;
        break;
      }
    }
    if (bad == cones.end()) return Fan(f.ambient_dim(), std::move(cones));
    const StellarPoint p = best_stellar_point(*bad, mult);
    cones = stellar_subdivide(cones, p.point);
  }
  throw BudgetExceeded("smooth_refine: no smooth fan after " + std::to_string(budget) + " stellar subdivisions");
}

bool is_linear_on(std::span<const QVector> generators, const QVector& alpha, const Cone& c,
                  std::size_t sample_count, std::uint64_t seed) {
  const auto& rays = c.rays();
  if (rays.empty()) return true;
  std::vector<Rat> at_rays;
  for (const auto& g : rays) at_rays.push_back(phi_alpha(generators, alpha, g).value);

  auto check = [&](const std::vector<Rat>& t) {
    QVector v = zero_vector(c.ambient_dim());
    Rat expected = 0;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      v = v + t[i] * rays[i];
      expected += t[i] * at_rays[i];
    }
    return phi_alpha(generators, alpha, v).value == expected;
  };

  if (!check(std::vector<Rat>(rays.size(), Rat(1)))) return false;
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < sample_count; ++s) {
    std::vector<Rat> t;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      Rat x(static_cast<long>(rng() % 7), static_cast<long>(1 + rng() % 4));
      x.canonicalize();
      t.push_back(x);
    }
    if (!check(t)) return false;
  }
  return true;
}

}  // namespace plfan
