#pragma once

// Exact scalars, vectors and matrices over Q, plus the integer-lattice
// helpers used for primitive ray generators and smoothness tests.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace plfan {

using Integer = mpz_class;

/// Arbitrary-precision rational. GMP keeps every value canonical
/// (coprime numerator/denominator, positive denominator) after each
/// arithmetic operation, so equality is structural.
using Rat = mpq_class;

using QVector = std::vector<Rat>;

/// Rectangular matrix of rationals stored as rows. The column count is kept
/// explicitly so that matrices with zero rows still know their width.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);
  /// Throws InvalidInput if the rows are ragged or a row disagrees with `cols`.
  QMatrix(std::size_t cols, std::vector<QVector> rows);

  static QMatrix identity(std::size_t n);
  /// Matrix whose j-th column is `columns[j]`; every column must have `rows` entries.
  static QMatrix from_columns(std::span<const QVector> columns, std::size_t rows);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  Rat& operator()(std::size_t i, std::size_t j) { return rows_[i][j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }

  const QVector& row(std::size_t i) const { return rows_[i]; }
  const std::vector<QVector>& row_list() const { return rows_; }
  void append_row(QVector row);

  QVector column(std::size_t j) const;
  QMatrix transposed() const;
  QVector operator*(const QVector& x) const;

  friend bool operator==(const QMatrix&, const QMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<QVector> rows_;
};

/// Value of a valuation: a finite rational or +infinity (the valuation of
/// the zero ideal). Addition is absorbing in +infinity; +infinity compares
/// greater than every finite value.
class ValuationValue {
 public:
  ValuationValue() = default;
  ValuationValue(Rat value) : finite_(std::move(value)) {}  // NOLINT: implicit by design of the value type
  static ValuationValue infinity() {
    ValuationValue v;
    v.finite_.reset();
    return v;
  }

  bool is_infinite() const { return !finite_.has_value(); }
  /// Throws InvalidInput on +infinity.
  const Rat& value() const;

  friend ValuationValue operator+(const ValuationValue& a, const ValuationValue& b);
  /// Scaling by a nonnegative rational; 0 * +infinity is 0 (empty product).
  friend ValuationValue operator*(const Rat& t, const ValuationValue& a);
  friend bool operator==(const ValuationValue& a, const ValuationValue& b);
  friend std::strong_ordering operator<=>(const ValuationValue& a, const ValuationValue& b);

 private:
  std::optional<Rat> finite_ = Rat(0);
};

// ---- vector helpers -------------------------------------------------------

QVector zero_vector(std::size_t n);
QVector unit_vector(std::size_t n, std::size_t i);
Rat dot(const QVector& a, const QVector& b);
QVector operator+(const QVector& a, const QVector& b);
QVector operator-(const QVector& a, const QVector& b);
QVector operator-(const QVector& a);
QVector operator*(const Rat& t, const QVector& a);
bool is_zero(const QVector& v);
bool is_integral(const QVector& v);
bool is_nonnegative(const QVector& v);

/// "p/q" for non-integers, "p" for integers.
std::string to_string(const Rat& x);
/// "(a,b,c)" with each entry rendered by to_string(Rat).
std::string to_string(const QVector& v);
/// Parses "p", "-p" or "p/q". Throws InvalidInput on malformed text or q = 0.
Rat parse_rat(const std::string& text);

QVector from_ints(std::initializer_list<long> values);

// ---- linear algebra -------------------------------------------------------

struct RowEchelon {
  QMatrix reduced;                  ///< reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;  ///< pivot column of each row
};

RowEchelon row_echelon(const QMatrix& a);
std::size_t rank(const QMatrix& a);
std::size_t rank(std::span<const QVector> vectors);

/// Basis of {x : A x = 0}. One vector per free column of the reduced echelon
/// form, with the sign chosen so that the first nonzero entry is positive.
std::vector<QVector> kernel_basis(const QMatrix& a);

struct LinearSolution {
  QVector particular;           ///< free variables set to zero
  std::vector<QVector> kernel;  ///< same convention as kernel_basis
};

/// Solves A x = b exactly. std::nullopt means the system is inconsistent.
std::optional<LinearSolution> linear_solve(const QMatrix& a, const QVector& b);

Rat determinant(QMatrix a);

// ---- lattice helpers ------------------------------------------------------

struct LatticeIndex {
  std::size_t rank = 0;
  /// Index of the integer span of the input inside the full lattice of the
  /// rational subspace it spans; 1 iff the vectors generate a saturated lattice.
  Integer lattice_det = 1;
};

/// Row-style Hermite reduction of the integer vectors followed by the gcd of
/// the maximal minors of the resulting basis.
LatticeIndex hermite_basis_det(std::span<const QVector> vectors);

/// Integer row basis of the lattice spanned by `vectors` (upper echelon,
/// positive pivots), obtained by unimodular row operations.
std::vector<std::vector<Integer>> hermite_rows(std::span<const QVector> vectors);

/// v / gcd(v) for a nonzero integral vector. Throws InvalidInput otherwise.
QVector primitive(const QVector& v);

/// The primitive integer vector on the ray R_{>=0} v, for any nonzero rational v.
QVector primitive_direction(const QVector& v);

/// Scales so the first nonzero entry is positive (for lines / hyperplanes).
QVector sign_normalized(QVector v);

}  // namespace plfan
