#include "plfan/exact.hpp"

#include <algorithm>
#include <numeric>

#include "plfan/errors.hpp"

namespace plfan {

// ---- QMatrix --------------------------------------------------------------

QMatrix::QMatrix(std::size_t rows, std::size_t cols)
    : cols_(cols), rows_(rows, QVector(cols, Rat(0))) {}

QMatrix::QMatrix(std::size_t cols, std::vector<QVector> rows) : cols_(cols), rows_(std::move(rows)) {
  for (const auto& r : rows_) {
    if (r.size() != cols_) throw InvalidInput("QMatrix: ragged rows");
  }
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_columns(std::span<const QVector> columns, std::size_t rows) {
  QMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw InvalidInput("QMatrix::from_columns: column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

void QMatrix::append_row(QVector row) {
  if (row.size() != cols_) throw InvalidInput("QMatrix::append_row: wrong row length");
  rows_.push_back(std::move(row));
}

QVector QMatrix::column(std::size_t j) const {
  QVector c;
  c.reserve(rows_.size());
  for (const auto& r : rows_) c.push_back(r[j]);
  return c;
}

QMatrix QMatrix::transposed() const {
  QMatrix t(cols_, rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = rows_[i][j];
  return t;
}

QVector QMatrix::operator*(const QVector& x) const {
  if (x.size() != cols_) throw InvalidInput("QMatrix * QVector: dimension mismatch");
  QVector y(rows_.size(), Rat(0));
  for (std::size_t i = 0; i < rows_.size(); ++i) y[i] = dot(rows_[i], x);
  return y;
}

// ---- ValuationValue -------------------------------------------------------

const Rat& ValuationValue::value() const {
  if (!finite_) throw InvalidInput("valuation value is +infinity");
  return *finite_;
}

ValuationValue operator+(const ValuationValue& a, const ValuationValue& b) {
  if (a.is_infinite() || b.is_infinite()) return ValuationValue::infinity();
  return ValuationValue(Rat(*a.finite_ + *b.finite_));
}

ValuationValue operator*(const Rat& t, const ValuationValue& a) {
  if (sgn(t) < 0) throw InvalidInput("valuation values may only be scaled by t >= 0");
  if (sgn(t) == 0) return ValuationValue(Rat(0));
  if (a.is_infinite()) return ValuationValue::infinity();
  return ValuationValue(Rat(t * *a.finite_));
}

bool operator==(const ValuationValue& a, const ValuationValue& b) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
  return *a.finite_ == *b.finite_;
}

std::strong_ordering operator<=>(const ValuationValue& a, const ValuationValue& b) {
  if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
  if (a.is_infinite()) return std::strong_ordering::greater;
  if (b.is_infinite()) return std::strong_ordering::less;
  const int c = cmp(*a.finite_, *b.finite_);
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

// ---- vectors --------------------------------------------------------------

QVector zero_vector(std::size_t n) { return QVector(n, Rat(0)); }

QVector unit_vector(std::size_t n, std::size_t i) {
  QVector v(n, Rat(0));
  v[i] = 1;
  return v;
}

Rat dot(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw InvalidInput("dot: dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  }
  return s;
}

QVector operator+(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw InvalidInput("vector sum: dimension mismatch");
  QVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

QVector operator-(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw InvalidInput("vector difference: dimension mismatch");
  QVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

QVector operator-(const QVector& a) {
  QVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = -a[i];
  return c;
}

QVector operator*(const Rat& t, const QVector& a) {
  QVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = t * a[i];
  return c;
}

bool is_zero(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return sgn(x) == 0; });
}

bool is_integral(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x.get_den() == 1; });
}

bool is_nonnegative(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return sgn(x) >= 0; });
}

std::string to_string(const Rat& x) { return x.get_str(); }

std::string to_string(const QVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_string(v[i]);
  }
  return s + ")";
}

Rat parse_rat(const std::string& text) {
  auto valid_int = [](const std::string& s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  const std::string num = text.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false)) throw InvalidInput("malformed rational: '" + text + "'");
  Integer n(num[0] == '+' ? num.substr(1) : num, 10);
  Integer d(den, 10);
  if (d == 0) throw InvalidInput("zero denominator in '" + text + "'");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

QVector from_ints(std::initializer_list<long> values) {
  QVector v;
  v.reserve(values.size());
  for (long x : values) v.emplace_back(x);
  return v;
}

// ---- linear algebra -------------------------------------------------------

RowEchelon row_echelon(const QMatrix& a) {
  std::vector<QVector> m = a.row_list();
  const std::size_t cols = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && sgn(m[p][c]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[r], m[p]);
    const Rat inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      const Rat f = m[i][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return {QMatrix(cols, std::move(m)), std::move(pivots)};
}

std::size_t rank(const QMatrix& a) { return row_echelon(a).pivots.size(); }

std::size_t rank(std::span<const QVector> vectors) {
  if (vectors.empty()) return 0;
  return rank(QMatrix(vectors.front().size(), std::vector<QVector>(vectors.begin(), vectors.end())));
}

std::vector<QVector> kernel_basis(const QMatrix& a) {
  const RowEchelon e = row_echelon(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    QVector k(a.cols(), Rat(0));
    k[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) k[e.pivots[i]] = -e.reduced(i, f);
    basis.push_back(sign_normalized(std::move(k)));
  }
  return basis;
}

std::optional<LinearSolution> linear_solve(const QMatrix& a, const QVector& b) {
  if (b.size() != a.rows()) throw InvalidInput("linear_solve: rhs length differs from row count");
  QMatrix aug(a.cols() + 1, std::vector<QVector>{});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    QVector r = a.row(i);
    r.push_back(b[i]);
    aug.append_row(std::move(r));
  }
  const RowEchelon e = row_echelon(aug);
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
  LinearSolution sol;
  sol.particular = zero_vector(a.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) sol.particular[e.pivots[i]] = e.reduced(i, a.cols());
  sol.kernel = kernel_basis(a);
  return sol;
}

Rat determinant(QMatrix a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw InvalidInput("determinant: matrix is not square");
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a(p, c)) == 0) ++p;
    if (p == n) return Rat(0);
    if (p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(p, k), a(c, k));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(a(i, c)) == 0) continue;
      const Rat f = a(i, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(i, k) -= f * a(c, k);
    }
  }
  return det;
}

// ---- lattice --------------------------------------------------------------

std::vector<std::vector<Integer>> hermite_rows(std::span<const QVector> vectors) {
  if (vectors.empty()) return {};
  const std::size_t n = vectors.front().size();
  std::vector<std::vector<Integer>> m;
  for (const auto& v : vectors) {
    if (v.size() != n) throw InvalidInput("hermite_rows: dimension mismatch");
    if (!is_integral(v)) throw InvalidInput("hermite_rows: non-integral entry in " + to_string(v));
    std::vector<Integer> row;
    for (const auto& x : v) row.push_back(x.get_num());
    m.push_back(std::move(row));
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m.size(); ++c) {
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m[r][c].get_mpz_t(), m[i][c].get_mpz_t());
      const Integer a = m[r][c] / g;
      const Integer b = m[i][c] / g;
      for (std::size_t k = c; k < n; ++k) {
        const Integer top = s * m[r][k] + t * m[i][k];
        const Integer bottom = a * m[i][k] - b * m[r][k];
        m[r][k] = top;
        m[i][k] = bottom;
      }
    }
    if (m[r][c] == 0) continue;
    if (m[r][c] < 0)
      for (auto& x : m[r]) x = -x;
    ++r;
  }
  m.resize(r);
  return m;
}

LatticeIndex hermite_basis_det(std::span<const QVector> vectors) {
  const auto basis = hermite_rows(vectors);
  LatticeIndex out;
  out.rank = basis.size();
  if (basis.empty()) return out;
  const std::size_t n = basis.front().size();
  const std::size_t k = basis.size();
  // gcd over all k x k minors; the basis rows are independent so some minor is nonzero
  Integer g = 0;
  std::vector<std::size_t> cols(k);
  std::iota(cols.begin(), cols.end(), 0);
  while (true) {
    QMatrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = Rat(basis[i][cols[j]]);
    const Integer minor = determinant(std::move(sub)).get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), minor.get_mpz_t());
    if (g == 1) break;
    // next combination
    std::size_t i = k;
    while (i > 0 && cols[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cols[i - 1];
    for (std::size_t j = i; j < k; ++j) cols[j] = cols[j - 1] + 1;
  }
  out.lattice_det = g;
  return out;
}

QVector primitive(const QVector& v) {
  if (!is_integral(v)) throw InvalidInput("primitive: non-integral vector " + to_string(v));
  if (is_zero(v)) throw InvalidInput("primitive: zero vector has no primitive generator");
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
  QVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i].get_num() / g);
  return out;
}

QVector primitive_direction(const QVector& v) {
  if (is_zero(v)) throw InvalidInput("primitive_direction: zero vector");
  Integer l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  QVector scaled(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = v[i] * l;
  return primitive(scaled);
}

QVector sign_normalized(QVector v) {
  for (const auto& x : v) {
    if (sgn(x) == 0) continue;
    if (sgn(x) < 0)
      for (auto& y : v) y = -y;
    break;
  }
  return v;
}

}  // namespace plfan
