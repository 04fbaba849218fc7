#include <doctest.h>

#include "plfan/errors.hpp"
#include "plfan/graded.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace plfan;
using plfan::testing::Gen;

namespace {

MonomialIdeal ideal2(std::vector<Exponent> gens) { return MonomialIdeal(2, std::move(gens)); }

GradedSystem worked_system() {
  return GradedSystem(2, 2, {from_ints({1, 0}), from_ints({0, 1}), from_ints({1, 1})},
                      {ideal2({{1, 0}}), ideal2({{0, 1}}), ideal2({{1, 1}, {2, 0}})});
}

/// Degrees (1,0) and (1,2): the ray (1,1) of the smooth refinement is only reached at even multiples.
GradedSystem parity_system() {
  return GradedSystem(2, 2, {from_ints({1, 0}), from_ints({1, 2})}, {ideal2({{1, 0}}), ideal2({{0, 1}})});
}

GradedSystem single_generator(MonomialIdeal ideal) {
  const std::size_t n = ideal.ambient_dim();
  return GradedSystem(1, n, {from_ints({1})}, {std::move(ideal)});
}

WeightValuation weight(std::initializer_list<long> w) { return WeightValuation(from_ints(w)); }

}  // namespace

TEST_CASE("ideal arithmetic") {
  CHECK(product(ideal2({{1, 0}}), ideal2({{0, 1}})) == ideal2({{1, 1}}));
  CHECK(power(ideal2({{2, 0}, {0, 3}}), 2).generators() == std::vector<Exponent>{{0, 6}, {2, 3}, {4, 0}});
  CHECK(sum(ideal2({{2, 0}}), ideal2({{3, 0}})) == ideal2({{2, 0}}));
  CHECK(power(ideal2({{1, 1}}), 0).is_unit());
  CHECK(MonomialIdeal::zero(2).is_zero());
  CHECK(product(MonomialIdeal::zero(2), ideal2({{1, 0}})).is_zero());
  CHECK_THROWS_AS(ideal2({{-1, 0}}), InvalidInput);
  CHECK_THROWS_AS(ideal2({{1}}), InvalidInput);
  CHECK(ideal2({{1, 0}}).contains(ideal2({{2, 1}})));
  CHECK_FALSE(ideal2({{1, 0}}).contains(ideal2({{0, 1}})));
}

TEST_CASE("Newton polyhedra") {
  const auto np = newton_polyhedron(ideal2({{2, 0}, {0, 2}}));
  CHECK(np.vertices == std::vector<QVector>{from_ints({0, 2}), from_ints({2, 0})});
  CHECK(np.rays == std::vector<QVector>{from_ints({0, 1}), from_ints({1, 0})});
  CHECK(newton_polyhedron(MonomialIdeal::unit(2)).vertices == std::vector<QVector>{from_ints({0, 0})});
  CHECK(newton_polyhedron(ideal2({{1, 0}})).vertices == std::vector<QVector>{from_ints({1, 0})});
  CHECK_THROWS_AS(newton_polyhedron(MonomialIdeal::zero(2)), InvalidInput);
}

TEST_CASE("closure equality") {
  CHECK(closure_equal(ideal2({{2, 0}, {0, 2}, {1, 1}}), ideal2({{2, 0}, {0, 2}})));
  CHECK_FALSE(closure_equal(ideal2({{1, 0}}), ideal2({{2, 0}})));
  CHECK(closure_equal(ideal2({{3, 1}, {0, 2}}), ideal2({{3, 1}, {0, 2}})));
  CHECK(closure_equal(MonomialIdeal::zero(2), MonomialIdeal::zero(2)));
  CHECK_FALSE(closure_equal(MonomialIdeal::zero(2), MonomialIdeal::unit(2)));
}

TEST_CASE("weight valuations") {
  const auto i = ideal2({{1, 1}, {2, 0}});
  CHECK(weight_valuation(weight({1, 1}), i) == ValuationValue(Rat(2)));
  CHECK(weight_valuation(weight({1, 2}), i) == ValuationValue(Rat(2)));
  CHECK(weight_valuation(weight({3, 1}), MonomialIdeal::unit(2)) == ValuationValue(Rat(0)));
  CHECK(weight_valuation(weight({1, 1}), MonomialIdeal::zero(2)).is_infinite());
  CHECK_THROWS_AS(weight({2, 2}), InvalidInput);
  CHECK_THROWS_AS(weight({-1, 1}), InvalidInput);
  CHECK_THROWS_AS(weight({0, 0}), InvalidInput);
}

TEST_CASE("graded system validation") {
  CHECK_THROWS_AS(GradedSystem(2, 2, {from_ints({0, 0})}, {ideal2({{1, 0}})}), InvalidInput);
  CHECK_THROWS_AS(GradedSystem(1, 2, {from_ints({1}), from_ints({-1})}, {ideal2({{1, 0}}), ideal2({{0, 1}})}),
                  NotPointed);
  CHECK_THROWS_AS(GradedSystem(1, 2, {QVector{Rat(1, 2)}}, {ideal2({{1, 0}})}), InvalidInput);
  const GradedSystem merged(1, 2, {from_ints({1}), from_ints({1})}, {ideal2({{2, 0}}), ideal2({{0, 1}})});
  REQUIRE(merged.degrees().size() == 1);
  CHECK(merged.ideals()[0] == ideal2({{2, 0}, {0, 1}}));
}

TEST_CASE("degree expansion") {
  const auto sys = worked_system();
  CHECK(expand_degree(sys, from_ints({1, 1})) == ideal2({{1, 1}, {2, 0}}));
  CHECK(expand_degree(sys, from_ints({0, 0})).is_unit());
  CHECK(expand_degree(sys, from_ints({-1, 0})).is_zero());
  CHECK(expand_degree(parity_system(), from_ints({1, 1})).is_zero());
  CHECK(expand_degree(parity_system(), from_ints({2, 2})) == ideal2({{1, 1}}));
  CHECK_THROWS_AS(expand_degree(sys, from_ints({40, 40}), 100), BudgetExceeded);
}

TEST_CASE("asymptotic valuations") {
  const auto sys = worked_system();
  CHECK(asymptotic_valuation(sys, weight({1, 1}), from_ints({1, 1})) == ValuationValue(Rat(2)));
  CHECK(asymptotic_valuation(sys, weight({1, 2}), from_ints({3, 0})) == ValuationValue(Rat(3)));
  CHECK(asymptotic_valuation(sys, weight({1, 1}), from_ints({-1, 0})).is_infinite());
  const auto flat = GradedSystem(2, 2, {from_ints({1, 0}), from_ints({0, 1})},
                                 {MonomialIdeal::unit(2), ideal2({{1, 0}})});
  CHECK(asymptotic_valuation(flat, weight({0, 1}), from_ints({2, 3})) == ValuationValue(Rat(0)));
}

TEST_CASE("limit check") {
  const auto sys = worked_system();
  auto lc = asymptotic_limit_check(sys, weight({1, 1}), from_ints({1, 1}), 4);
  CHECK(lc.consistent);
  for (const auto& t : lc.sequence) CHECK(t == ValuationValue(Rat(2)));
  lc = asymptotic_limit_check(sys, weight({1, 1}), from_ints({0, 0}), 3);
  CHECK(lc.lp_value == ValuationValue(Rat(0)));
  for (const auto& t : lc.sequence) CHECK(t == ValuationValue(Rat(0)));

  const auto single = single_generator(ideal2({{2, 0}, {0, 3}}));
  lc = asymptotic_limit_check(single, weight({3, 2}), from_ints({1}), 6);
  CHECK(lc.lp_value == ValuationValue(Rat(6)));
  CHECK(lc.consistent);
}

TEST_CASE("asymptotic Newton polyhedra") {
  const auto sys = worked_system();
  const auto h = asymptotic_newton(sys, from_ints({1, 1}));
  CHECK(equal_sets(h, vrep_to_h(newton_polyhedron(ideal2({{1, 1}, {2, 0}})))));
  for (auto w : {weight({1, 1}), weight({1, 2}), weight({2, 1})})
    CHECK(ValuationValue(minimize_linear(h, w.weights()).value) == asymptotic_valuation(sys, w, from_ints({1, 1})));
  const auto single = single_generator(ideal2({{2, 0}, {0, 3}}));
  CHECK(equal_sets(asymptotic_newton(single, from_ints({1})), vrep_to_h(newton_polyhedron(ideal2({{2, 0}, {0, 3}})))));
  CHECK(equal_sets(asymptotic_newton(single, from_ints({2})),
                   scaled(vrep_to_h(newton_polyhedron(ideal2({{2, 0}, {0, 3}}))), Rat(2))));
  CHECK_THROWS_AS(asymptotic_newton(sys, from_ints({-1, 1})), NotInCone);
  const auto half = asymptotic_newton(parity_system(), from_ints({1, 1}));
  CHECK(contains(half, QVector{Rat(1, 2), Rat(1, 2)}));
  CHECK_FALSE(contains(half, QVector{Rat(1, 2), Rat(1, 3)}));
}

TEST_CASE("exponent search") {
  const auto sys = worked_system();
  const auto found = find_d(sys, linearity_fan(sys.degrees(), 2), 64, 4);
  CHECK(found.d == 1);
  CHECK(found.per_ray.size() == 3);
  for (const auto& r : found.per_ray) CHECK(r.ideal_level_to_L);

  const auto single = single_generator(MonomialIdeal(1, {{1}}));
  CHECK(find_d(single, Fan::from_cone(single.cone()), 64, 4).d == 1);
  const auto mixed = single_generator(ideal2({{2, 0}, {0, 3}}));
  CHECK(find_d(mixed, Fan::from_cone(mixed.cone()), 64, 4).d == 1);

  const auto parity = parity_system();
  const Fan smooth = smooth_refine(Fan::from_cone(parity.cone()));
  const auto pd = find_d(parity, smooth, 64, 4);
  CHECK(pd.d == 2);
  for (const auto& r : pd.per_ray) CHECK(r.d == (r.ray == from_ints({1, 1}) ? 2u : 1u));
  CHECK_THROWS_AS(find_d(parity, smooth, 1, 4), BudgetExceeded);
}

TEST_CASE("verifier") {
  const auto sys = worked_system();
  const auto rep = verify_proposition(sys);
  CHECK(rep.verified);
  CHECK(rep.exponent.d == 1);
  CHECK(rep.cones.size() == 2);
  for (const auto& c : rep.cones) CHECK(c.tuples.size() == 15);

  VerifyOptions single;
  single.single_cone = true;
  single.refine_smooth = false;
  const auto bad = verify_proposition(sys, single);
  CHECK_FALSE(bad.verified);
  bool witnessed = false;
  for (const auto& c : bad.cones)
    for (const auto& t : c.tuples)
      if (!t.passed) witnessed = witnessed || (t.witness_weight.has_value() && !t.failed_link.empty());
  CHECK(witnessed);

  const auto trivial = single_generator(MonomialIdeal(1, {{1}}));
  const auto tr = verify_proposition(trivial);
  CHECK(tr.verified);
  CHECK(tr.fan.rays().size() == 1);

  const auto parity = verify_proposition(parity_system());
  CHECK(parity.verified);
  CHECK(parity.exponent.d == 2);
}

TEST_CASE("property: expansion agrees with box enumeration and is graded") {
  const auto sys = worked_system();
  for (long a = 0; a <= 3; ++a) {
    for (long b = 0; b <= 3; ++b) {
      const QVector m = from_ints({a, b});
      CHECK(expand_degree(sys, m) == plfan::testing::box_expand(sys.degrees(), sys.ideals(), m, 6));
      for (long c = 0; c <= 2; ++c) {
        const QVector m2 = from_ints({c, 2 - c});
        CHECK(expand_degree(sys, m + m2).contains(product(expand_degree(sys, m), expand_degree(sys, m2))));
      }
    }
  }
}

TEST_CASE("property: closure equality matches lattice points") {
  Gen gen(51);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + gen.index(3);
    const auto a = gen.ideal(n, 4, 5);
    auto b = gen.coin() ? gen.ideal(n, 4, 5) : sum(a, product(a, gen.ideal(n, 2, 2)));
    const bool brute =
        plfan::testing::newton_lattice_points(a, 20) == plfan::testing::newton_lattice_points(b, 20);
    CHECK(closure_equal(a, b) == brute);
  }
}

TEST_CASE("property: support function of the asymptotic polyhedron") {
  const auto sys = worked_system();
  Gen gen(52);
  for (int trial = 0; trial < 30; ++trial) {
    const QVector m = from_ints({gen.integer(0, 3), gen.integer(0, 3)});
    const HPolyhedron h = asymptotic_newton(sys, m);
    QVector w = gen.nonzero_vec(2, 0, 6);
    const WeightValuation wv(primitive(w));
    CHECK(ValuationValue(minimize_linear(h, wv.weights()).value) == asymptotic_valuation(sys, wv, m));
  }
}

TEST_CASE("property: asymptotic valuation is additive inside fan cones only") {
  const auto sys = worked_system();
  const Fan lf = linearity_fan(sys.degrees(), 2);
  const auto w = weight({1, 3});
  for (const auto& c : lf.maximal_cones()) {
    const QVector& m = c.rays()[0];
    const QVector& m2 = c.rays()[1];
    CHECK(asymptotic_valuation(sys, w, m + m2) == asymptotic_valuation(sys, w, m) + asymptotic_valuation(sys, w, m2));
  }
  CHECK(asymptotic_valuation(sys, w, from_ints({1, 1})) !=
        asymptotic_valuation(sys, w, from_ints({1, 0})) + asymptotic_valuation(sys, w, from_ints({0, 1})));
}
