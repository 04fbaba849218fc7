#pragma once

// Strongly convex rational cones, fans, and the fan constructions that make
// minimum-cost representation functions piecewise linear.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "plfan/exact.hpp"
#include "plfan/polyhedra.hpp"

namespace plfan {

/// A pointed rational polyhedral cone. Rays are the primitive integer extreme
/// ray generators; the H-description is { x : <u, x> >= 0 for u in
/// facet_normals, <e, x> = 0 for e in equations }. All lists are canonical,
/// so two cones are equal iff their ray lists are.
class Cone {
 public:
  Cone() = default;

  /// Throws NotPointed (with a line in the cone) if the generated cone contains a line.
  static Cone from_generators(std::span<const QVector> generators, std::size_t ambient_dim);
  static Cone from_inequalities(std::size_t ambient_dim, std::span<const QVector> ge_normals,
                                std::span<const QVector> equations);
  static Cone origin(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return dim_; }
  const std::vector<QVector>& rays() const { return rays_; }
  const std::vector<QVector>& facet_normals() const { return facet_normals_; }
  const std::vector<QVector>& equations() const { return equations_; }

  bool is_simplicial() const { return rays_.size() == dim_; }
  bool contains(const QVector& x) const;
  bool contains(const Cone& other) const;
  /// Sum of the rays; lies in the relative interior.
  QVector interior_point() const;
  /// The smallest face of this cone containing x (x must lie in the cone).
  Cone minimal_face(const QVector& x) const;
  bool is_face_of(const Cone& other) const;

  friend bool operator==(const Cone& a, const Cone& b) {
    return a.ambient_dim_ == b.ambient_dim_ && a.rays_ == b.rays_;
  }
  friend bool operator<(const Cone& a, const Cone& b) {
    if (a.ambient_dim_ != b.ambient_dim_) return a.ambient_dim_ < b.ambient_dim_;
    return a.rays_ < b.rays_;
  }

 private:
  std::size_t ambient_dim_ = 0;
  std::size_t dim_ = 0;
  std::vector<QVector> rays_;
  std::vector<QVector> facet_normals_;
  std::vector<QVector> equations_;
};

/// A fan given by its maximal cones (sorted, deduplicated, none contained in another).
class Fan {
 public:
  Fan() = default;
  Fan(std::size_t ambient_dim, std::vector<Cone> cones);
  static Fan from_cone(const Cone& c) { return Fan(c.ambient_dim(), {c}); }

  std::size_t ambient_dim() const { return ambient_dim_; }
  const std::vector<Cone>& maximal_cones() const { return cones_; }
  /// Distinct rays of all maximal cones, sorted.
  std::vector<QVector> rays() const;

  friend bool operator==(const Fan&, const Fan&) = default;

 private:
  std::size_t ambient_dim_ = 0;
  std::vector<Cone> cones_;
};

// ---- cone operations ------------------------------------------------------

Cone cone_from_generators(std::span<const QVector> generators, std::size_t ambient_dim);
Cone intersect(const Cone& a, const Cone& b);

/// Lattice index of the ray generators (1 for smooth simplicial cones).
Integer multiplicity(const Cone& c);
bool is_smooth(const Cone& c);

/// Pivots a conic representation lambda of v = sum lambda_i generators[i] to
/// one with linearly independent support without increasing <alpha, lambda>.
/// Each step takes a relation b on the support with <alpha, b> >= 0 and some
/// b_i > 0, and moves to lambda - (lambda_j / b_j) b for the index j
/// minimizing lambda_i / b_i over b_i > 0 (smallest index on ties). Among the
/// kernel basis vectors and their negatives, b is the one lowering the cost
/// most. Generators outside the support of lambda are never brought in, so the
/// result need not attain phi_alpha.
QVector caratheodory_reduce(std::span<const QVector> generators, const QVector& alpha, const QVector& lambda);

inline constexpr std::size_t kDefaultGeneratorCap = 12;

/// All J subset of {0..r-1} (including the empty set) whose generators are
/// linearly independent, ordered by size and then lexicographically.
std::vector<std::vector<std::size_t>> independent_subsets(std::span<const QVector> generators,
                                                          std::size_t cap = kDefaultGeneratorCap);

/// Chambers cut out of cone(generators) by every hyperplane spanned by
/// dim(C) - 1 independent generators. Refines every sigma_J.
Fan linearity_fan(std::span<const QVector> generators, std::size_t ambient_dim,
                  std::size_t cap = kDefaultGeneratorCap);

/// Outer normal fan: one maximal cone per minimal face F of Q, generated by
/// the outer normals of the facets through F. Throws EmptyPolyhedron, and
/// NotPointed when Q is not full-dimensional (its normal cones contain lines).
Fan normal_fan(const HPolyhedron& q);

/// Pairwise intersections, keeping the inclusion-maximal ones.
/// Throws InvalidInput if the supports differ.
Fan common_refinement(std::span<const Fan> fans);

bool support_contains(const Fan& outer, const Fan& inner);
bool same_support(const Fan& a, const Fan& b);
bool refines(const Fan& fine, const Fan& coarse);

/// Every pairwise intersection of maximal cones is a face of both.
bool is_valid_fan(const Fan& f);

inline constexpr std::size_t kSmoothDimCap = 4;
inline constexpr std::size_t kDefaultSubdivisionBudget = 10000;

/// Placing triangulation (global lexicographic ray order), then repeated
/// stellar subdivision at fundamental-parallelepiped lattice points.
Fan smooth_refine(const Fan& f, std::size_t dim_cap = kSmoothDimCap,
                  std::size_t budget = kDefaultSubdivisionBudget);

/// Checks phi_alpha(sum t_i g_i) == sum t_i phi_alpha(g_i) over the rays g_i
/// of c for `sample_count` seeded pseudo-random t >= 0. Exact equality.
bool is_linear_on(std::span<const QVector> generators, const QVector& alpha, const Cone& c,
                  std::size_t sample_count, std::uint64_t seed);

}  // namespace plfan
