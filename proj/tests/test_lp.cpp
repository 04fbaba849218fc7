#include <doctest.h>

#include "plfan/errors.hpp"
#include "plfan/lp.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace plfan;
using plfan::testing::Gen;

namespace {

const std::vector<QVector> kWorked{from_ints({1, 0}), from_ints({0, 1}), from_ints({1, 1})};

}  // namespace

TEST_CASE("simplex on small instances") {
  const LpInstance inst{from_ints({1, 1, 1}), QMatrix::from_columns(kWorked, 2), from_ints({1, 1})};
  const auto out = simplex_solve(inst);
  CHECK(out.status == LpStatus::Optimal);
  CHECK(out.value == 1);
  CHECK(out.primal == from_ints({0, 0, 1}));
  CHECK(certificate_holds(inst, out));

  const auto zero = simplex_solve({from_ints({1, 1, 1}), QMatrix::from_columns(kWorked, 2), from_ints({0, 0})});
  CHECK(zero.status == LpStatus::Optimal);
  CHECK(zero.value == 0);
  CHECK(zero.primal == from_ints({0, 0, 0}));

  const std::vector<QVector> one{from_ints({1, 0})};
  const LpInstance bad{from_ints({1}), QMatrix::from_columns(one, 2), from_ints({0, 1})};
  const auto inf = simplex_solve(bad);
  CHECK(inf.status == LpStatus::Infeasible);
  CHECK(certificate_holds(bad, inf));

  const LpInstance unb{from_ints({-1, 0}), QMatrix(2, {from_ints({1, -1})}), from_ints({0})};
  const auto u = simplex_solve(unb);
  CHECK(u.status == LpStatus::Unbounded);
  CHECK(certificate_holds(unb, u));
}

TEST_CASE("phi on the worked generators") {
  const QVector alpha = from_ints({1, 1, 1});
  auto p = phi_alpha(kWorked, alpha, from_ints({1, 1}));
  CHECK(p.value == 1);
  CHECK(p.witness == from_ints({0, 0, 1}));
  p = phi_alpha(kWorked, alpha, from_ints({2, 1}));
  CHECK(p.value == 2);
  CHECK(p.witness == from_ints({1, 0, 1}));
  CHECK(phi_alpha(kWorked, from_ints({0, 0, 0}), from_ints({3, 5})).value == 0);
  CHECK_THROWS_AS(phi_alpha(kWorked, alpha, from_ints({-1, 0})), NotInCone);
  CHECK_THROWS_AS(phi_alpha(kWorked, from_ints({1, -1, 1}), from_ints({1, 1})), InvalidInput);
  CHECK_THROWS_AS(phi_alpha(kWorked, from_ints({1, 1}), from_ints({1, 1})), InvalidInput);
}

TEST_CASE("Q(alpha)") {
  const auto q = build_q(kWorked, from_ints({1, 1, 1}), 2);
  REQUIRE(q.inequalities().size() == 3);
  CHECK(q.inequalities()[2].normal == from_ints({1, 1}));
  CHECK(q.inequalities()[2].offset == 1);
  const auto homogeneous = dual_description(build_q(kWorked, from_ints({0, 0, 0}), 2));
  CHECK(homogeneous.vertices == std::vector<QVector>{from_ints({0, 0})});
  CHECK(homogeneous.rays == std::vector<QVector>{from_ints({-1, 0}), from_ints({0, -1})});
  CHECK(build_q({}, {}, 3).inequalities().empty());
}

TEST_CASE("duality on the worked generators") {
  const QVector alpha = from_ints({1, 1, 1});
  auto d = verify_duality(kWorked, alpha, from_ints({1, 1}));
  CHECK(d.gap_zero);
  CHECK(d.primal_value == 1);
  CHECK(d.maximizer == from_ints({1, 0}));
  d = verify_duality(kWorked, alpha, from_ints({1, 0}));
  CHECK(d.dual_value == 1);
  CHECK(d.maximizer == from_ints({1, 0}));
  d = verify_duality(kWorked, alpha, from_ints({0, 0}));
  CHECK(d.primal_value == 0);
  CHECK(d.dual_value == 0);
}

TEST_CASE("property: phi agrees with basic feasible solutions and its dual") {
  Gen gen(31);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + gen.index(3);
    const std::size_t r = 1 + gen.index(5);
    std::vector<QVector> gens;
    for (std::size_t i = 0; i < r; ++i) gens.push_back(gen.nonzero_vec(n, -3, 3));
    QVector alpha(r);
    for (auto& a : alpha) a = gen.rational(0, 5, 3);
    const QVector v = gen.coin() ? gen.vec(n, -3, 3) : [&] {
      QVector s = zero_vector(n);
      for (const auto& g : gens) s = s + Rat(gen.integer(0, 3)) * g;
      return s;
    }();
    const auto brute = plfan::testing::phi_by_bases(gens, alpha, v);
    if (!brute) {
      CHECK_THROWS_AS(phi_alpha(gens, alpha, v), NotInCone);
      continue;
    }
    const auto got = phi_alpha(gens, alpha, v);
    CHECK(got.value == *brute);
    const auto d = verify_duality(gens, alpha, v);
    CHECK(d.gap_zero);
    CHECK(d.dual_value == *brute);
  }
}

TEST_CASE("property: random LPs carry valid certificates") {
  Gen gen(32);
  int seen[3] = {0, 0, 0};
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + gen.index(3);
    const std::size_t n = 1 + gen.index(5);
    std::vector<QVector> rows;
    for (std::size_t i = 0; i < m; ++i) rows.push_back(gen.vec(n, -4, 4));
    const LpInstance inst{gen.vec(n, -3, 5), QMatrix(n, rows), gen.vec(m, -4, 4)};
    const auto out = simplex_solve(inst);
    CHECK(certificate_holds(inst, out));
    ++seen[static_cast<int>(out.status)];
  }
  CHECK(seen[0] > 0);
  CHECK(seen[1] > 0);
  CHECK(seen[2] > 0);
}
