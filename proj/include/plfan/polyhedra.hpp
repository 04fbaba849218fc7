#pragma once

// Rational polyhedra in H- and V-description, converted into each other by
// an incremental double-description method.

#include <cstddef>
#include <span>
#include <vector>

#include "plfan/exact.hpp"

namespace plfan {

inline constexpr std::size_t kDefaultDimCap = 8;

/// <normal, x> <= offset
struct Halfspace {
  QVector normal;
  Rat offset;
  friend bool operator==(const Halfspace&, const Halfspace&) = default;
};

/// <normal, x> == offset
struct Hyperplane {
  QVector normal;
  Rat offset;
  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

class HPolyhedron {
 public:
  HPolyhedron() = default;
  /// The whole space R^ambient_dim.
  explicit HPolyhedron(std::size_t ambient_dim) : dim_(ambient_dim) {}
  static HPolyhedron empty_set(std::size_t ambient_dim);

  /// Adds <normal, x> <= offset. A zero normal is either dropped (offset >= 0)
  /// or marks the polyhedron empty.
  void add_inequality(QVector normal, Rat offset);
  void add_equality(QVector normal, Rat offset);

  std::size_t ambient_dim() const { return dim_; }
  const std::vector<Halfspace>& inequalities() const { return inequalities_; }
  const std::vector<Hyperplane>& equalities() const { return equalities_; }
  /// True only when emptiness is known syntactically; use dual_description for a full test.
  bool is_marked_empty() const { return marked_empty_; }

  friend bool operator==(const HPolyhedron&, const HPolyhedron&) = default;

 private:
  std::size_t dim_ = 0;
  bool marked_empty_ = false;
  std::vector<Halfspace> inequalities_;
  std::vector<Hyperplane> equalities_;
};

/// conv(vertices) + cone(rays) + span(lineality). In canonical form the
/// lineality basis is in reduced echelon form (scaled to primitive integers),
/// vertices and rays are reduced modulo the lineality space, rays are primitive
/// integer vectors, and every list is sorted.
struct VRepresentation {
  std::size_t ambient_dim = 0;
  bool empty = false;
  std::vector<QVector> vertices;
  std::vector<QVector> rays;
  std::vector<QVector> lineality;

  friend bool operator==(const VRepresentation&, const VRepresentation&) = default;
};

/// Generators of the cone {y : <a, y> >= 0 for a in ge_rows, <e, y> = 0 for e in eq_rows}.
struct ConeGenerators {
  std::vector<QVector> rays;       ///< extreme rays modulo lineality, primitive, sorted
  std::vector<QVector> lineality;  ///< canonical basis of the lineality space
};

ConeGenerators double_description(std::size_t dim, std::span<const QVector> ge_rows,
                                  std::span<const QVector> eq_rows);

/// H -> V. Throws CapExceeded when ambient_dim > dim_cap.
VRepresentation dual_description(const HPolyhedron& p, std::size_t dim_cap = kDefaultDimCap);

/// V -> H, irredundant and canonical: equalities in reduced echelon form,
/// inequality normals reduced modulo the equalities and scaled to primitive
/// integer vectors, everything sorted. Throws InvalidInput on an empty V.
HPolyhedron vrep_to_h(const VRepresentation& v, std::size_t dim_cap = kDefaultDimCap);

/// Canonical H-form of the same point set; an empty set gives empty_set(dim).
HPolyhedron canonical_form(const HPolyhedron& p, std::size_t dim_cap = kDefaultDimCap);

/// Canonical V-form of the same point set (removes redundant generators).
VRepresentation canonical_form(const VRepresentation& v, std::size_t dim_cap = kDefaultDimCap);

struct WeylDecomposition {
  std::vector<QVector> polytope_vertices;
  VRepresentation recession;  ///< vertex set {0} plus rays and lineality
};

/// P = conv(polytope_vertices) + recession cone. Throws EmptyPolyhedron.
WeylDecomposition decompose_weyl(const HPolyhedron& p);

struct LinearMinimum {
  bool bounded = false;
  Rat value;
  /// Among minimizing vertices, the lexicographically greatest one.
  QVector argmin;
};

/// Minimum of <u, x> over P. Throws EmptyPolyhedron.
LinearMinimum minimize_linear(const HPolyhedron& p, const QVector& u);
LinearMinimum minimize_linear(const VRepresentation& v, const QVector& u);

VRepresentation minkowski_sum(const VRepresentation& p, const VRepresentation& q);

/// t * P for t > 0.
VRepresentation scaled(const VRepresentation& p, const Rat& t);
HPolyhedron scaled(const HPolyhedron& p, const Rat& t);

/// Image of P under the coordinate projection onto `keep` (in the given order),
/// by Fourier-Motzkin elimination with equality substitution and Chernikov
/// pruning, followed by exact redundancy removal.
HPolyhedron project(const HPolyhedron& p, std::span<const std::size_t> keep);

bool contains(const HPolyhedron& p, const QVector& x);

/// outer contains inner, checked on the generators of inner.
bool includes(const HPolyhedron& outer, const VRepresentation& inner);

/// Same point set, by mutual containment.
bool equal_sets(const HPolyhedron& a, const HPolyhedron& b);

}  // namespace plfan
