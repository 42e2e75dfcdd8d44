#include "orbitlab/linalg.hpp"

#include <stdexcept>

namespace orbitlab {

Echelon row_reduce(RMatrix a) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  std::vector<int> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index p = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (sign(a(i, c)) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    if (p != r) a.row(p).swap(a.row(r));
    const Rational inv = 1 / a(r, c);
    for (Eigen::Index j = c; j < cols; ++j) a(r, j) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || sign(a(i, c)) == 0) continue;
      const Rational f = a(i, c);
      for (Eigen::Index j = c; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return Echelon{std::move(a), std::move(pivots)};
}

int rational_rank(const RMatrix& a) { return row_reduce(a).rank(); }

RMatrix kernel_basis(const RMatrix& a) {
  const Eigen::Index cols = a.cols();
  Echelon e = row_reduce(a);
  std::vector<bool> is_pivot(cols, false);
  for (int c : e.pivot_cols) is_pivot[c] = true;

  RMatrix basis(cols, cols - e.rank());
  basis.setConstant(Rational(0));
  Eigen::Index out = 0;
  for (Eigen::Index free_c = 0; free_c < cols; ++free_c) {
    if (is_pivot[free_c]) continue;
    basis(free_c, out) = 1;
    for (int row = 0; row < e.rank(); ++row)
      basis(e.pivot_cols[row], out) = -e.mat(row, free_c);
    ++out;
  }
  return basis;
}

std::optional<RVector> solve_linear(const RMatrix& a, const RVector& b) {
  RMatrix aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  Echelon e = row_reduce(std::move(aug));
  for (int c : e.pivot_cols)
    if (c == a.cols()) return std::nullopt;  // 0 = 1 row
  RVector x(a.cols());
  x.setConstant(Rational(0));
  for (int row = 0; row < e.rank(); ++row)
    x[e.pivot_cols[row]] = e.mat(row, a.cols());
  return x;
}

RMatrix invert(const RMatrix& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::domain_error("invert: matrix not square");
  RMatrix aug(n, 2 * n);
  aug.leftCols(n) = a;
  aug.rightCols(n).setConstant(Rational(0));
  for (Eigen::Index i = 0; i < n; ++i) aug(i, n + i) = 1;
  Echelon e = row_reduce(std::move(aug));
  if (e.rank() != n || e.pivot_cols.back() >= n)
    throw std::domain_error("invert: singular matrix");
  return e.mat.rightCols(n);
}

Rational determinant(RMatrix a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::domain_error("determinant: matrix not square");
  Rational det(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = -1;
    for (Eigen::Index i = c; i < n; ++i) {
      if (sign(a(i, c)) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) return Rational(0);
    if (p != c) {
      a.row(p).swap(a.row(c));
      det = -det;
    }
    det *= a(c, c);
    const Rational inv = 1 / a(c, c);
    for (Eigen::Index i = c + 1; i < n; ++i) {
      if (sign(a(i, c)) == 0) continue;
      const Rational f = a(i, c) * inv;
      for (Eigen::Index j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

RVector primitive(const RVector& v) {
  Integer lcm_den(1);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Integer den = v[i].get_den();
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), den.get_mpz_t());
  }
  std::vector<Integer> scaled(v.size());
  Integer content(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Rational r = v[i] * Rational(lcm_den);
    scaled[i] = r.get_num();  // denominator is 1 by construction
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), scaled[i].get_mpz_t());
  }
  if (sgn(content) == 0) return v;  // zero vector
  int lead = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (sgn(scaled[i]) != 0) {
      lead = sgn(scaled[i]);
      break;
    }
  }
  if (lead < 0) content = -content;
  RVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[i] = Rational(scaled[i] / content);
  return out;
}

}  // namespace orbitlab
