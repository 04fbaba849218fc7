#include <doctest.h>

#include "plfan/errors.hpp"
#include "plfan/exact.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace plfan;
using plfan::testing::Gen;

TEST_CASE("rationals print as p/q and parse back") {
  CHECK(to_string(Rat(Rat(3) / 6)) == "1/2");
  CHECK(to_string(Rat(Rat(-4) / 2)) == "-2");
  CHECK(to_string(from_ints({1, 0, -3})) == "(1,0,-3)");
  CHECK(parse_rat("7/14") == Rat(1, 2));
  CHECK(parse_rat("-3") == Rat(-3));
  CHECK(parse_rat("+5") == Rat(5));
  CHECK_THROWS_AS(parse_rat("1/0"), InvalidInput);
  CHECK_THROWS_AS(parse_rat("abc"), InvalidInput);
  CHECK_THROWS_AS(parse_rat(""), InvalidInput);
}

TEST_CASE("ragged matrices are rejected") {
  CHECK_THROWS_AS(QMatrix(2, {from_ints({1, 2}), from_ints({1})}), InvalidInput);
}

TEST_CASE("kernel, rank and solve on a small example") {
  const QMatrix a(3, {from_ints({1, 1, 0}), from_ints({0, 1, 1})});
  CHECK(rank(a) == 2);
  const auto ker = kernel_basis(a);
  REQUIRE(ker.size() == 1);
  CHECK(ker[0] == from_ints({1, -1, 1}));
  const auto sol = linear_solve(a, from_ints({2, 3}));
  REQUIRE(sol);
  CHECK(a * sol->particular == from_ints({2, 3}));
  CHECK_FALSE(linear_solve(QMatrix(1, {from_ints({1}), from_ints({1})}), from_ints({0, 1})));
}

TEST_CASE("kernel of a single row is sign normalized") {
  const auto ker = kernel_basis(QMatrix(2, {from_ints({1, 1})}));
  REQUIRE(ker.size() == 1);
  CHECK(ker[0] == from_ints({1, -1}));
}

TEST_CASE("lattice index") {
  const std::vector<QVector> smooth{from_ints({1, 0}), from_ints({1, 1})};
  CHECK(hermite_basis_det(smooth).lattice_det == 1);
  const std::vector<QVector> index3{from_ints({1, 0}), from_ints({1, 3})};
  CHECK(hermite_basis_det(index3).lattice_det == 3);
  const std::vector<QVector> plane{from_ints({1, 1, 0}), from_ints({1, -1, 0})};
  CHECK(hermite_basis_det(plane).rank == 2);
  CHECK(hermite_basis_det(plane).lattice_det == 2);
  const std::vector<QVector> line{from_ints({2, 4})};
  CHECK(hermite_basis_det(line).lattice_det == 2);
  CHECK(hermite_basis_det(std::vector<QVector>{}).lattice_det == 1);
}

TEST_CASE("primitive vectors") {
  CHECK(primitive(from_ints({2, -4, 6})) == from_ints({1, -2, 3}));
  CHECK(primitive_direction(QVector{Rat(1, 2), Rat(1, 3)}) == from_ints({3, 2}));
  CHECK(sign_normalized(from_ints({0, -2, 1})) == from_ints({0, 2, -1}));
  CHECK_THROWS_AS(primitive(zero_vector(2)), InvalidInput);
}

TEST_CASE("valuation values order +infinity last and absorb it") {
  const ValuationValue inf = ValuationValue::infinity();
  CHECK(ValuationValue(Rat(5)) < inf);
  CHECK(inf == inf);
  CHECK((inf + ValuationValue(Rat(1))).is_infinite());
  CHECK((Rat(0) * inf) == ValuationValue(Rat(0)));
  CHECK((Rat(2) * ValuationValue(Rat(3))) == ValuationValue(Rat(6)));
  CHECK_THROWS_AS(inf.value(), InvalidInput);
}

TEST_CASE("property: kernel vectors are annihilated and rank-nullity holds") {
  Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + gen.index(4), cols = 1 + gen.index(5);
    std::vector<QVector> rs;
    for (std::size_t i = 0; i < rows; ++i) rs.push_back(gen.vec(cols, -3, 3));
    const QMatrix a(cols, rs);
    const auto ker = kernel_basis(a);
    CHECK(rank(a) + ker.size() == cols);
    CHECK(rank(a) == rank(a.transposed()));
    for (const auto& k : ker) CHECK(is_zero(a * k));
    const QVector x = gen.vec(cols, -5, 5);
    const auto sol = linear_solve(a, a * x);
    REQUIRE(sol);
    CHECK(a * sol->particular == a * x);
  }
}

TEST_CASE("property: lattice index of a square basis is |det|") {
  Gen gen(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + gen.index(4);
    std::vector<QVector> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back(gen.vec(n, -4, 4));
    const Integer d = plfan::testing::abs_det(rows);
    if (d == 0) continue;
    CHECK(hermite_basis_det(rows).lattice_det == d);
    CHECK(abs(determinant(QMatrix(n, rows)).get_num()) == d);
  }
}
