#include <doctest.h>

#include "plfan/errors.hpp"
#include "plfan/fans.hpp"
#include "plfan/lp.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace plfan;
using plfan::testing::Gen;

namespace {

const std::vector<QVector> kWorked{from_ints({1, 0}), from_ints({0, 1}), from_ints({1, 1})};

Cone cone2(std::initializer_list<std::initializer_list<long>> rays) {
  std::vector<QVector> gens;
  for (auto r : rays) gens.push_back(from_ints(r));
  return Cone::from_generators(gens, gens.front().size());
}

Fan quadrant() { return Fan::from_cone(cone2({{1, 0}, {0, 1}})); }

Fan split_at(std::initializer_list<long> ray) {
  const QVector r = from_ints(ray);
  return Fan(2, {Cone::from_generators(std::vector<QVector>{from_ints({1, 0}), r}, 2),
                 Cone::from_generators(std::vector<QVector>{r, from_ints({0, 1})}, 2)});
}

}  // namespace

TEST_CASE("cones from generators") {
  const Cone c = Cone::from_generators(kWorked, 2);
  CHECK(c.rays() == std::vector<QVector>{from_ints({0, 1}), from_ints({1, 0})});
  CHECK(c.facet_normals() == std::vector<QVector>{from_ints({0, 1}), from_ints({1, 0})});
  CHECK(c.dim() == 2);
  CHECK(cone2({{2, 0}}).rays() == std::vector<QVector>{from_ints({1, 0})});
  try {
    cone2({{1, 0}, {-1, 0}});
    FAIL("expected NotPointed");
  } catch (const NotPointed& e) {
    CHECK(e.line() == from_ints({1, 0}));
  }
  const Cone o = Cone::origin(3);
  CHECK(o.dim() == 0);
  CHECK(o.contains(zero_vector(3)));
  CHECK_FALSE(o.contains(from_ints({0, 0, 1})));
}

TEST_CASE("cone intersection") {
  const Cone quad = cone2({{1, 0}, {0, 1}});
  CHECK(intersect(quad, cone2({{1, 1}, {-1, 1}})) == cone2({{1, 1}, {0, 1}}));
  CHECK(intersect(quad, quad) == quad);
  CHECK(intersect(quad, cone2({{-1, 0}, {0, -1}})) == Cone::origin(2));
}

TEST_CASE("faces") {
  const Cone quad = cone2({{1, 0}, {0, 1}});
  CHECK(cone2({{1, 0}}).is_face_of(quad));
  CHECK(Cone::origin(2).is_face_of(quad));
  CHECK_FALSE(cone2({{1, 1}}).is_face_of(quad));
  CHECK_FALSE(cone2({{1, 0}, {1, 1}}).is_face_of(quad));
  CHECK(quad.minimal_face(from_ints({0, 3})) == cone2({{0, 1}}));
}

TEST_CASE("Caratheodory pivot") {
  const QVector alpha = from_ints({1, 1, 1});
  CHECK(caratheodory_reduce(kWorked, alpha, from_ints({1, 1, 1})) == from_ints({0, 0, 2}));
  CHECK(caratheodory_reduce(kWorked, alpha, from_ints({1, 0, 3})) == from_ints({1, 0, 3}));
  CHECK(caratheodory_reduce(kWorked, alpha, from_ints({0, 0, 0})) == from_ints({0, 0, 0}));
  CHECK_THROWS_AS(caratheodory_reduce(kWorked, alpha, from_ints({1, -1, 0})), InvalidInput);
}

TEST_CASE("independent subsets") {
  CHECK(independent_subsets(kWorked).size() == 7);
  const std::vector<QVector> dependent{from_ints({1, 0}), from_ints({2, 0})};
  CHECK(independent_subsets(dependent) == std::vector<std::vector<std::size_t>>{{}, {0}, {1}});
  CHECK(independent_subsets({}) == std::vector<std::vector<std::size_t>>{{}});
  CHECK_THROWS_AS(independent_subsets(std::vector<QVector>(13, from_ints({1})), 12), CapExceeded);
}

TEST_CASE("linearity fans") {
  CHECK(linearity_fan(kWorked, 2) == split_at({1, 1}));
  const std::vector<QVector> basis{from_ints({1, 0}), from_ints({0, 1})};
  CHECK(linearity_fan(basis, 2) == quadrant());
  const std::vector<QVector> ray{from_ints({1, 2})};
  CHECK(linearity_fan(ray, 2).maximal_cones().size() == 1);
}

TEST_CASE("normal fans") {
  const auto nf = normal_fan(build_q(kWorked, from_ints({1, 1, 1}), 2));
  CHECK(nf == split_at({1, 1}));
  CHECK(normal_fan(HPolyhedron(3)) == Fan::from_cone(Cone::origin(3)));
  HPolyhedron point(2);
  point.add_equality(from_ints({1, 0}), Rat(0));
  point.add_equality(from_ints({0, 1}), Rat(0));
  CHECK_THROWS_AS(normal_fan(point), NotPointed);
  CHECK_THROWS_AS(normal_fan(HPolyhedron::empty_set(2)), EmptyPolyhedron);
}

TEST_CASE("common refinement and refinement order") {
  const std::vector<Fan> pair{quadrant(), split_at({1, 1})};
  CHECK(common_refinement(pair) == split_at({1, 1}));
  const std::vector<Fan> single{split_at({1, 1})};
  CHECK(common_refinement(single) == split_at({1, 1}));
  const std::vector<Fan> two{split_at({1, 2}), split_at({2, 1})};
  const Fan three = common_refinement(two);
  CHECK(three.maximal_cones().size() == 3);
  CHECK(is_valid_fan(three));
  const std::vector<Fan> mismatch{quadrant(), Fan::from_cone(cone2({{1, 0}, {1, 1}}))};
  CHECK_THROWS_AS(common_refinement(mismatch), InvalidInput);

  CHECK(refines(split_at({1, 1}), quadrant()));
  CHECK_FALSE(refines(quadrant(), split_at({1, 1})));
  CHECK(refines(quadrant(), quadrant()));
}

TEST_CASE("overlapping cones are not a fan") {
  CHECK_FALSE(is_valid_fan(Fan(2, {cone2({{1, 0}, {1, 2}}), cone2({{1, 1}, {0, 1}})})));
  CHECK(is_valid_fan(split_at({1, 1})));
}

TEST_CASE("smoothness and smooth refinement") {
  CHECK(is_smooth(cone2({{1, 0}, {0, 1}})));
  CHECK_FALSE(is_smooth(cone2({{1, 0}, {1, 2}})));
  CHECK(is_smooth(Cone::from_generators(kWorked, 2)));
  CHECK(smooth_refine(Fan::from_cone(cone2({{1, 0}, {1, 2}}))) ==
        Fan(2, {cone2({{1, 0}, {1, 1}}), cone2({{1, 1}, {1, 2}})}));
  CHECK(smooth_refine(quadrant()) == quadrant());
  const Fan f = smooth_refine(Fan::from_cone(cone2({{1, 0}, {1, 3}})));
  CHECK(f.rays() == std::vector<QVector>{from_ints({1, 0}), from_ints({1, 1}), from_ints({1, 2}), from_ints({1, 3})});
  CHECK(f.maximal_cones().size() == 3);
  CHECK_THROWS_AS(smooth_refine(Fan::from_cone(Cone::origin(5))), CapExceeded);
}

TEST_CASE("non-simplicial cones are triangulated before subdivision") {
  const std::vector<QVector> square{from_ints({1, 0, 1}), from_ints({0, 1, 1}), from_ints({-1, 0, 1}),
                                    from_ints({0, -1, 1})};
  const Fan in = Fan::from_cone(Cone::from_generators(square, 3));
  const Fan out = smooth_refine(in);
  CHECK(refines(out, in));
  CHECK(is_valid_fan(out));
  for (const auto& c : out.maximal_cones()) CHECK(is_smooth(c));
}

TEST_CASE("linearity on cones") {
  const QVector alpha = from_ints({1, 1, 1});
  CHECK(is_linear_on(kWorked, alpha, cone2({{1, 0}, {1, 1}}), 10, 0));
  CHECK_FALSE(is_linear_on(kWorked, alpha, cone2({{1, 0}, {0, 1}}), 10, 0));
  CHECK(is_linear_on(kWorked, from_ints({0, 0, 0}), cone2({{1, 0}, {0, 1}}), 10, 0));
}

TEST_CASE("property: linearity fans are fans refining the normal fan") {
  Gen gen(41);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + gen.index(2);
    const auto gens = gen.pointed_generators(2 + gen.index(3), n);
    const Fan lf = linearity_fan(gens, n);
    const Cone c = Cone::from_generators(gens, n);
    CHECK(is_valid_fan(lf));
    CHECK(same_support(lf, Fan::from_cone(c)));
    QVector alpha(gens.size());
    for (auto& a : alpha) a = gen.rational(1, 4, 3);
    const Fan nf = normal_fan(build_q(gens, alpha, n));
    CHECK(refines(lf, nf));
    for (const auto& cone : lf.maximal_cones()) CHECK(is_linear_on(gens, alpha, cone, 3, trial));
  }
}

TEST_CASE("property: Caratheodory pivot keeps the vector and never raises the cost") {
  Gen gen(42);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + gen.index(3);
    const std::size_t r = 1 + gen.index(6);
    std::vector<QVector> gens;
    for (std::size_t i = 0; i < r; ++i) gens.push_back(gen.nonzero_vec(n, -3, 3));
    QVector alpha(r), lambda(r);
    for (auto& a : alpha) a = gen.integer(0, 5);
    for (auto& l : lambda) l = gen.rational(0, 3, 2);
    const QVector out = caratheodory_reduce(gens, alpha, lambda);
    auto image = [&](const QVector& l) {
      QVector s = zero_vector(n);
      for (std::size_t i = 0; i < r; ++i) s = s + l[i] * gens[i];
      return s;
    };
    CHECK(is_nonnegative(out));
    CHECK(image(out) == image(lambda));
    CHECK(dot(alpha, out) <= dot(alpha, lambda));
    std::vector<QVector> support;
    for (std::size_t i = 0; i < r; ++i)
      if (sgn(out[i]) != 0) support.push_back(gens[i]);
    CHECK(rank(support) == support.size());
    CHECK(dot(alpha, out) >= *plfan::testing::phi_by_bases(gens, alpha, image(lambda)));
  }
}

TEST_CASE("property: 2-D smooth refinement is smooth, valid and refining") {
  for (long a = 1; a <= 5; ++a) {
    for (long b = 1; b <= 5; ++b) {
      const Fan in = Fan::from_cone(cone2({{1, 0}, {a, b}}));
      const Fan out = smooth_refine(in);
      CHECK(refines(out, in));
      CHECK(is_valid_fan(out));
      for (const auto& c : out.maximal_cones()) CHECK(plfan::testing::abs_det(c.rays()) == 1);
    }
  }
}
