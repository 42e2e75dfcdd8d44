#include "orbitlab/polytope.hpp"

#include "orbitlab/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace orbitlab {

namespace {

Rational dot(const RVector& a, const RVector& b) {
  assert(a.size() == b.size());
  Rational s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

std::string rational_key(const RVector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out += v(i).get_str();
    out += ',';
  }
  return out;
}

// Scale (a, c) by a positive rational making every entry an integer with
// overall content 1. Positive scale only: inequality direction survives.
void positive_primitive(RVector& a, Rational& c) {
  mpz_class den = 1, num = 0;
  auto absorb = [&](const Rational& x) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), x.get_num().get_mpz_t());
  };
  for (Eigen::Index i = 0; i < a.size(); ++i) absorb(a(i));
  absorb(c);
  if (num == 0) return;
  Rational scale = Rational(den) / Rational(num);
  if (scale < 0) scale = -scale;
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) *= scale;
  c *= scale;
}

// Affine rank of the selected columns (rank of their differences).
int affine_rank(const RMatrix& cols, const std::vector<int>& idx) {
  if (idx.size() <= 1) return 0;
  RMatrix d(cols.rows(), static_cast<Eigen::Index>(idx.size()) - 1);
  for (std::size_t j = 1; j < idx.size(); ++j)
    for (Eigen::Index i = 0; i < cols.rows(); ++i)
      d(i, static_cast<Eigen::Index>(j) - 1) = cols(i, idx[j]) - cols(i, idx[0]);
  return rational_rank(d);
}

int affine_rank_all(const RMatrix& cols) {
  std::vector<int> idx(static_cast<std::size_t>(cols.cols()));
  std::iota(idx.begin(), idx.end(), 0);
  return affine_rank(cols, idx);
}

// Chart volumes are measured against the chart basis. For full-dimensional
// polytopes rescale to honest ambient volume; lower-dimensional volumes
// stay chart-relative (comparisons always share a chart).
Rational chart_scale(const AffineChart& chart) {
  if (chart.dim() != chart.ambient) return 1;
  Rational d = determinant(chart.basis);
  return d < 0 ? -d : d;
}

bool lex_less(const RMatrix& m, int a, int b) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    int c = cmp(m(i, a), m(i, b));
    if (c != 0) return c < 0;
  }
  return false;
}

}  // namespace

RVector AffineChart::to_chart(const RVector& x) const {
  const int r = dim();
  RVector w(r);
  for (int l = 0; l < r; ++l) w(l) = x(pivot_rows[l]) - base(pivot_rows[l]);
  RVector t(r);
  for (int i = 0; i < r; ++i) {
    Rational s = 0;
    for (int j = 0; j < r; ++j) s += inv(i, j) * w(j);
    t(i) = s;
  }
  return t;
}

RVector AffineChart::to_ambient(const RVector& t) const {
  RVector x = base;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (int j = 0; j < dim(); ++j) x(i) += basis(i, j) * t(j);
  return x;
}

RationalPolytope RationalPolytope::empty(int ambient_dim) {
  RationalPolytope p;
  p.ambient_ = ambient_dim;
  p.dim_ = -1;
  p.verts_ = RMatrix(ambient_dim, 0);
  p.key_ = "empty:" + std::to_string(ambient_dim);
  return p;
}

RationalPolytope::Mask RationalPolytope::full_mask() const {
  const int m = vertex_count();
  return m == 64 ? ~Mask{0} : ((Mask{1} << m) - 1);
}

std::vector<RationalPolytope::Mask> RationalPolytope::faces_of_dim(int d) const {
  std::vector<Mask> out;
  for (const Face& f : faces_)
    if (f.dim == d) out.push_back(f.mask);
  return out;
}

bool RationalPolytope::has_face(Mask m) const {
  for (const Face& f : faces_)
    if (f.mask == m) return true;
  return false;
}

std::optional<int> RationalPolytope::facet_index(
    const std::vector<int>& vertex_ids) const {
  Mask m = 0;
  for (int v : vertex_ids) {
    if (v < 0 || v >= vertex_count()) return std::nullopt;
    m |= Mask{1} << v;
  }
  for (std::size_t i = 0; i < facet_masks_.size(); ++i)
    if (facet_masks_[i] == m) return static_cast<int>(i);
  return std::nullopt;
}

bool RationalPolytope::contains(const RVector& u) const {
  if (is_empty()) return false;
  assert(u.size() == ambient_);
  for (const Hyperplane& e : affine_eqs_)
    if (dot(e.a, u) != e.c) return false;
  for (const Halfspace& f : facets_)
    if (dot(f.a, u) > f.c) return false;
  return true;
}

bool RationalPolytope::contains_relint(const RVector& u) const {
  if (is_empty()) return false;
  for (const Hyperplane& e : affine_eqs_)
    if (dot(e.a, u) != e.c) return false;
  for (const Halfspace& f : facets_)
    if (dot(f.a, u) >= f.c) return false;
  return true;
}

bool RationalPolytope::contains(const Eigen::VectorXd& u, double tol) const {
  if (is_empty()) return false;
  const int d = ambient_;
  for (Eigen::Index i = 0; i < eq_rows_d_.rows(); ++i) {
    double r = eq_rows_d_.row(i).head(d).dot(u) - eq_rows_d_(i, d);
    if (std::abs(r) > tol) return false;
  }
  for (Eigen::Index i = 0; i < facet_rows_d_.rows(); ++i) {
    double s = facet_rows_d_.row(i).head(d).dot(u) - facet_rows_d_(i, d);
    if (s > tol) return false;
  }
  return true;
}

bool RationalPolytope::contains_relint(const Eigen::VectorXd& u, double tol) const {
  if (is_empty()) return false;
  const int d = ambient_;
  for (Eigen::Index i = 0; i < eq_rows_d_.rows(); ++i) {
    double r = eq_rows_d_.row(i).head(d).dot(u) - eq_rows_d_(i, d);
    if (std::abs(r) > tol) return false;
  }
  for (Eigen::Index i = 0; i < facet_rows_d_.rows(); ++i) {
    double s = facet_rows_d_.row(i).head(d).dot(u) - facet_rows_d_(i, d);
    if (s > -tol) return false;
  }
  return true;
}

bool RationalPolytope::contains_polytope(const RationalPolytope& q) const {
  if (q.is_empty()) return true;
  if (is_empty()) return false;
  assert(ambient_ == q.ambient_);
  // Double prefilter: exact-check only the most violated (facet, vertex)
  // pair; a confirmed violation is a fast exact "no".
  if (facet_rows_d_.rows() > 0 && q.vertex_count() > 0) {
    double worst = -1.0;
    int wf = -1, wv = -1;
    for (Eigen::Index i = 0; i < facet_rows_d_.rows(); ++i)
      for (int j = 0; j < q.vertex_count(); ++j) {
        double s = facet_rows_d_.row(i).head(ambient_).dot(q.verts_d_.col(j)) -
                   facet_rows_d_(i, ambient_);
        if (s > worst) {
          worst = s;
          wf = static_cast<int>(i);
          wv = j;
        }
      }
    if (worst > 1e-9 && dot(facets_[wf].a, q.vertex(wv)) > facets_[wf].c)
      return false;
  }
  for (int j = 0; j < q.vertex_count(); ++j)
    if (!contains(q.vertex(j))) return false;
  return true;
}

RVector RationalPolytope::barycenter() const {
  assert(!is_empty());
  return barycenter(full_mask());
}

RVector RationalPolytope::barycenter(Mask face) const {
  RVector s = RVector::Constant(ambient_, Rational(0));
  int n = 0;
  for (int j = 0; j < vertex_count(); ++j) {
    if (!(face >> j & 1)) continue;
    ++n;
    for (Eigen::Index i = 0; i < ambient_; ++i) s(i) += verts_(i, j);
  }
  assert(n > 0);
  Rational inv_n = Rational(1) / Rational(n);
  for (Eigen::Index i = 0; i < ambient_; ++i) s(i) *= inv_n;
  return s;
}

bool RationalPolytope::bbox_disjoint(const RationalPolytope& q) const {
  if (is_empty() || q.is_empty()) return true;
  for (Eigen::Index i = 0; i < ambient_; ++i)
    if (bb_max_(i) < q.bb_min_(i) || q.bb_max_(i) < bb_min_(i)) return true;
  return false;
}

// Pulling triangulation at the lowest vertex of every face: simplex count
// is small and the pieces overlap only in measure zero, which is all the
// volume computation needs.
std::vector<std::vector<int>> RationalPolytope::triangulate() const {
  assert(dim_ >= 1);
  std::map<Mask, std::vector<std::vector<int>>> memo;
  std::function<const std::vector<std::vector<int>>&(Mask, int)> rec =
      [&](Mask mask, int d) -> const std::vector<std::vector<int>>& {
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    std::vector<std::vector<int>> out;
    int v0 = 0;
    while (!(mask >> v0 & 1)) ++v0;
    if (d == 0) {
      out.push_back({v0});
    } else {
      for (const Face& f : faces_) {
        if (f.dim != d - 1 || (f.mask & mask) != f.mask) continue;
        if (f.mask >> v0 & 1) continue;
        for (std::vector<int> s : rec(f.mask, d - 1)) {
          s.push_back(v0);
          out.push_back(std::move(s));
        }
      }
    }
    return memo.emplace(mask, std::move(out)).first->second;
  };
  return rec(full_mask(), dim_);
}

Rational RationalPolytope::volume() const {
  if (is_empty()) return 0;
  if (dim_ == 0) return 1;
  Rational total = 0;
  const int r = dim_;
  for (const std::vector<int>& s : triangulate()) {
    assert(static_cast<int>(s.size()) == r + 1);
    RMatrix m(r, r);
    for (int j = 1; j <= r; ++j)
      for (int i = 0; i < r; ++i)
        m(i, j - 1) = chart_coords_(i, s[j]) - chart_coords_(i, s[0]);
    Rational d = determinant(m);
    total += d < 0 ? -d : d;
  }
  mpz_class fact = 1;
  for (int i = 2; i <= r; ++i) fact *= i;
  return total * chart_scale(chart_) / Rational(fact);
}

Rational volume_in_chart(const AffineChart& chart, const RationalPolytope& cell) {
  assert(cell.dim() == chart.dim());
  if (cell.dim() == 0) return 1;
  const int r = chart.dim();
  RMatrix t(r, cell.vertex_count());
  for (int j = 0; j < cell.vertex_count(); ++j) {
    RVector tc = chart.to_chart(cell.vertex(j));
    for (int i = 0; i < r; ++i) t(i, j) = tc(i);
  }
  Rational total = 0;
  for (const std::vector<int>& s : cell.triangulate()) {
    RMatrix m(r, r);
    for (int j = 1; j <= r; ++j)
      for (int i = 0; i < r; ++i) m(i, j - 1) = t(i, s[j]) - t(i, s[0]);
    Rational d = determinant(m);
    total += d < 0 ? -d : d;
  }
  mpz_class fact = 1;
  for (int i = 2; i <= r; ++i) fact *= i;
  return total * chart_scale(chart) / Rational(fact);
}

// Shared tail for both construction paths: canonical vertex order, face
// lattice from the facet tight-sets, identity key, shadows for prefilters.
void RationalPolytope::finish(bool) {
  const int m = vertex_count();
  assert(m >= 1 && m <= 64);

  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](int a, int b) { return lex_less(verts_, a, b); });
  RMatrix nv(ambient_, m);
  for (int j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < ambient_; ++i) nv(i, j) = verts_(i, perm[j]);
  verts_ = std::move(nv);
  for (Mask& mask : facet_masks_) {
    Mask nm = 0;
    for (int j = 0; j < m; ++j)
      if (mask >> perm[j] & 1) nm |= Mask{1} << j;
    mask = nm;
  }
  {
    std::vector<int> order(facet_masks_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return facet_masks_[a] < facet_masks_[b];
    });
    std::vector<Halfspace> nf;
    std::vector<Mask> nm;
    for (int i : order) {
      nf.push_back(std::move(facets_[i]));
      nm.push_back(facet_masks_[i]);
    }
    facets_ = std::move(nf);
    facet_masks_ = std::move(nm);
  }

  chart_coords_ = RMatrix(dim_, m);
  for (int j = 0; j < m; ++j) {
    RVector t = chart_.to_chart(verts_.col(j));
    for (int i = 0; i < dim_; ++i) chart_coords_(i, j) = t(i);
  }

  // Proper faces: closure of the facet masks under intersection.
  std::vector<Mask> all = facet_masks_;
  std::set<Mask> seen(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      Mask c = all[i] & all[j];
      if (c != 0 && seen.insert(c).second) all.push_back(c);
    }
  faces_.clear();
  for (Mask mask : seen) {
    std::vector<int> idx;
    for (int j = 0; j < m; ++j)
      if (mask >> j & 1) idx.push_back(j);
    faces_.push_back({mask, affine_rank(chart_coords_, idx)});
  }
  std::sort(faces_.begin(), faces_.end(), [](const Face& a, const Face& b) {
    return a.dim != b.dim ? a.dim < b.dim : a.mask < b.mask;
  });

  key_.clear();
  for (int j = 0; j < m; ++j) {
    key_ += rational_key(verts_.col(j));
    key_ += ';';
  }

  bb_min_ = verts_.col(0);
  bb_max_ = verts_.col(0);
  for (int j = 1; j < m; ++j)
    for (Eigen::Index i = 0; i < ambient_; ++i) {
      if (verts_(i, j) < bb_min_(i)) bb_min_(i) = verts_(i, j);
      if (verts_(i, j) > bb_max_(i)) bb_max_(i) = verts_(i, j);
    }

  verts_d_.resize(ambient_, m);
  for (int j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < ambient_; ++i)
      verts_d_(i, j) = to_double(verts_(i, j));
  facet_rows_d_.resize(facets_.size(), ambient_ + 1);
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    for (Eigen::Index i = 0; i < ambient_; ++i)
      facet_rows_d_(f, i) = to_double(facets_[f].a(i));
    facet_rows_d_(f, ambient_) = to_double(facets_[f].c);
    facet_rows_d_.row(f) /= facet_rows_d_.row(f).head(ambient_).norm();
  }
  eq_rows_d_.resize(affine_eqs_.size(), ambient_ + 1);
  for (std::size_t e = 0; e < affine_eqs_.size(); ++e) {
    for (Eigen::Index i = 0; i < ambient_; ++i)
      eq_rows_d_(e, i) = to_double(affine_eqs_[e].a(i));
    eq_rows_d_(e, ambient_) = to_double(affine_eqs_[e].c);
    eq_rows_d_.row(e) /= eq_rows_d_.row(e).head(ambient_).norm();
  }
}

RationalPolytope convex_hull(const std::vector<RVector>& points) {
  if (points.empty()) return RationalPolytope::empty(0);
  RMatrix m(points[0].size(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = points[j](i);
  return convex_hull(m);
}

RationalPolytope convex_hull(const RMatrix& points) {
  const int d_amb = static_cast<int>(points.rows());
  using Mask = RationalPolytope::Mask;

  // Dedupe input points.
  std::vector<int> uniq;
  {
    std::set<std::string> seen;
    for (int j = 0; j < points.cols(); ++j)
      if (seen.insert(rational_key(points.col(j))).second) uniq.push_back(j);
  }
  const int m0 = static_cast<int>(uniq.size());
  if (m0 == 0) return RationalPolytope::empty(d_amb);
  if (m0 > 64) throw std::domain_error("convex_hull: more than 64 distinct points");
  RMatrix pts(d_amb, m0);
  for (int j = 0; j < m0; ++j)
    for (int i = 0; i < d_amb; ++i) pts(i, j) = points(i, uniq[j]);

  // Affine chart on the hull.
  AffineChart chart;
  chart.ambient = d_amb;
  chart.base = pts.col(0);
  RMatrix diffs(d_amb, m0 - 1);
  for (int j = 1; j < m0; ++j)
    for (int i = 0; i < d_amb; ++i) diffs(i, j - 1) = pts(i, j) - pts(i, 0);
  Echelon ed = row_reduce(diffs);
  const int r = ed.rank();
  RMatrix basis(d_amb, r);
  for (int l = 0; l < r; ++l)
    for (int i = 0; i < d_amb; ++i) basis(i, l) = diffs(i, ed.pivot_cols[l]);
  RMatrix bt(r, d_amb);
  for (int i = 0; i < d_amb; ++i)
    for (int l = 0; l < r; ++l) bt(l, i) = basis(i, l);
  Echelon eb = row_reduce(bt);
  chart.pivot_rows = eb.pivot_cols;
  chart.basis = basis;
  if (r > 0) {
    RMatrix bi(r, r);
    for (int i = 0; i < r; ++i)
      for (int l = 0; l < r; ++l) bi(i, l) = basis(chart.pivot_rows[i], l);
    chart.inv = invert(bi);
  } else {
    chart.inv = RMatrix(0, 0);
  }

  std::vector<Hyperplane> eqs;
  {
    RMatrix k = kernel_basis(bt);  // normals orthogonal to the hull directions
    for (int l = 0; l < k.cols(); ++l) {
      RVector a = primitive(k.col(l));
      eqs.push_back({a, dot(a, chart.base)});
    }
  }

  RMatrix t(r, m0);
  for (int j = 0; j < m0; ++j) {
    RVector tj = chart.to_chart(pts.col(j));
    for (int i = 0; i < r; ++i) t(i, j) = tj(i);
  }

  // Supporting hyperplanes: enumerate r-subsets in chart coordinates,
  // skipping subsets already inside a found facet's tight set.
  struct RawFacet {
    RVector h;
    Rational beta;
    Mask tight;
    std::vector<int> tight_idx;
  };
  std::vector<RawFacet> raw;
  if (r >= 1) {
    std::vector<int> c(r);
    std::iota(c.begin(), c.end(), 0);
    bool more = m0 >= r;
    while (more) {
      Mask ms = 0;
      for (int i : c) ms |= Mask{1} << i;
      bool skip = false;
      for (const RawFacet& f : raw)
        if ((f.tight & ms) == ms) {
          skip = true;
          break;
        }
      if (!skip) {
        RMatrix rows(r - 1, r);
        for (int j = 1; j < r; ++j)
          for (int i = 0; i < r; ++i)
            rows(j - 1, i) = t(i, c[j]) - t(i, c[0]);
        RMatrix ker = kernel_basis(rows);
        if (ker.cols() == 1) {
          RVector h = ker.col(0);
          Rational beta = dot(h, t.col(c[0]));
          bool pos = false, neg = false;
          std::vector<Rational> slack(m0);
          for (int j = 0; j < m0; ++j) {
            slack[j] = dot(h, t.col(j)) - beta;
            if (slack[j] > 0) pos = true;
            if (slack[j] < 0) neg = true;
          }
          if (!(pos && neg)) {
            if (pos) {
              for (int i = 0; i < r; ++i) h(i) = -h(i);
              beta = -beta;
              for (Rational& s : slack) s = -s;
            }
            RawFacet f;
            f.h = h;
            f.beta = beta;
            f.tight = 0;
            for (int j = 0; j < m0; ++j)
              if (slack[j] == 0) {
                f.tight |= Mask{1} << j;
                f.tight_idx.push_back(j);
              }
            raw.push_back(std::move(f));
          }
        }
      }
      // next r-combination of [0, m0)
      int i = r - 1;
      while (i >= 0 && c[i] == m0 - r + i) --i;
      if (i < 0) break;
      ++c[i];
      for (int j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
    }
  }

  // Extreme points: tight facet normals must span the chart.
  std::vector<int> keep;
  if (r == 0) {
    keep.push_back(0);
  } else {
    for (int j = 0; j < m0; ++j) {
      std::vector<const RVector*> rows;
      for (const RawFacet& f : raw)
        if (f.tight >> j & 1) rows.push_back(&f.h);
      if (static_cast<int>(rows.size()) < r) continue;
      RMatrix mt(static_cast<Eigen::Index>(rows.size()), r);
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (int l = 0; l < r; ++l) mt(static_cast<Eigen::Index>(i), l) = (*rows[i])(l);
      if (rational_rank(mt) == r) keep.push_back(j);
    }
  }
  assert(!keep.empty());
  std::vector<int> new_id(m0, -1);
  for (std::size_t j = 0; j < keep.size(); ++j) new_id[keep[j]] = static_cast<int>(j);

  RationalPolytope p;
  p.ambient_ = d_amb;
  p.dim_ = r;
  p.chart_ = chart;
  p.affine_eqs_ = std::move(eqs);
  p.verts_ = RMatrix(d_amb, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    for (int i = 0; i < d_amb; ++i) p.verts_(i, static_cast<Eigen::Index>(j)) = pts(i, keep[j]);
  for (const RawFacet& f : raw) {
    // Ambient lift: entries of inv^T h land on the pivot rows.
    RVector g(r);
    for (int l = 0; l < r; ++l) {
      Rational s = 0;
      for (int i = 0; i < r; ++i) s += chart.inv(i, l) * f.h(i);
      g(l) = s;
    }
    RVector a_amb = RVector::Constant(d_amb, Rational(0));
    Rational c_amb = f.beta;
    for (int l = 0; l < r; ++l) {
      a_amb(chart.pivot_rows[l]) = g(l);
      c_amb += g(l) * chart.base(chart.pivot_rows[l]);
    }
    positive_primitive(a_amb, c_amb);
    Mask mask = 0;
    for (int j : f.tight_idx)
      if (new_id[j] >= 0) mask |= Mask{1} << new_id[j];
    p.facets_.push_back({std::move(a_amb), std::move(c_amb)});
    p.facet_masks_.push_back(mask);
  }
  p.finish(true);
  return p;
}

RationalPolytope cross_polytope(int k) {
  if (k < 1) throw std::invalid_argument("cross_polytope: k must be positive");
  RMatrix pts = RMatrix::Constant(k, 2 * k, Rational(0));
  for (int i = 0; i < k; ++i) {
    pts(i, 2 * i) = 1;
    pts(i, 2 * i + 1) = -1;
  }
  return convex_hull(pts);
}

RationalPolytope cut(const RationalPolytope& p, const RVector& a,
                     const Rational& c, bool equality) {
  using Mask = RationalPolytope::Mask;
  if (p.is_empty()) return p;
  const int d_amb = p.ambient_;
  assert(a.size() == d_amb);
  const int m = p.vertex_count();

  std::vector<Rational> s(m);
  bool any_pos = false, any_nonpos = false, all_zero = true;
  for (int j = 0; j < m; ++j) {
    s[j] = dot(a, p.vertex(j)) - c;
    if (s[j] > 0) any_pos = true;
    else any_nonpos = true;
    if (s[j] != 0) all_zero = false;
  }
  if (!equality) {
    if (!any_pos) return p;
    if (!any_nonpos) return RationalPolytope::empty(d_amb);
  } else if (all_zero) {
    return p;
  }

  std::vector<RVector> cands;
  std::vector<int> old_of;  // original vertex index, or -1 for a crossing
  for (int j = 0; j < m; ++j) {
    bool kept = equality ? s[j] == 0 : s[j] <= 0;
    if (kept) {
      cands.push_back(p.vertex(j));
      old_of.push_back(j);
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (Mask em : p.faces_of_dim(1)) {
    int i = -1, j = -1;
    for (int b = 0; b < m; ++b)
      if (em >> b & 1) (i < 0 ? i : j) = b;
    edges.emplace_back(i, j);
  }
  if (p.dim_ == 1) edges.emplace_back(0, 1);
  for (auto [i, j] : edges) {
    if (!((s[i] > 0 && s[j] < 0) || (s[i] < 0 && s[j] > 0))) continue;
    Rational w = s[i] / (s[i] - s[j]);
    RVector x(d_amb);
    for (int l = 0; l < d_amb; ++l)
      x(l) = p.verts_(l, i) + w * (p.verts_(l, j) - p.verts_(l, i));
    cands.push_back(std::move(x));
    old_of.push_back(-1);
  }
  if (cands.empty()) return RationalPolytope::empty(d_amb);

  RMatrix cm(d_amb, static_cast<Eigen::Index>(cands.size()));
  for (std::size_t j = 0; j < cands.size(); ++j)
    for (int i = 0; i < d_amb; ++i) cm(i, static_cast<Eigen::Index>(j)) = cands[j](i);

  const int r = p.dim_;
  RMatrix tc(r, static_cast<Eigen::Index>(cands.size()));
  for (std::size_t j = 0; j < cands.size(); ++j) {
    RVector tj = p.chart_.to_chart(cands[j]);
    for (int i = 0; i < r; ++i) tc(i, static_cast<Eigen::Index>(j)) = tj(i);
  }
  if (equality || affine_rank_all(tc) < r)
    return convex_hull(cm);

  // Dimension preserved: the result's H-representation is a subset of the
  // old facets plus the cut, and every candidate is a vertex (kept
  // vertices stay extreme; each crossing is cut out on an edge whose
  // tight normals together with the cut plane span the chart).
  const int nc = static_cast<int>(cands.size());
  struct PoolEntry {
    RVector h;
    Rational beta;
    int src;  // facet index in p, or -1 for the cut
  };
  std::vector<PoolEntry> pool;
  for (std::size_t f = 0; f < p.facets_.size(); ++f) {
    RVector h(r);
    for (int l = 0; l < r; ++l) {
      Rational v = 0;
      for (int i = 0; i < d_amb; ++i) v += p.chart_.basis(i, l) * p.facets_[f].a(i);
      h(l) = v;
    }
    pool.push_back({std::move(h), p.facets_[f].c - dot(p.facets_[f].a, p.chart_.base),
                    static_cast<int>(f)});
  }
  {
    RVector h(r);
    for (int l = 0; l < r; ++l) {
      Rational v = 0;
      for (int i = 0; i < d_amb; ++i) v += p.chart_.basis(i, l) * a(i);
      h(l) = v;
    }
    pool.push_back({std::move(h), c - dot(a, p.chart_.base), -1});
  }

  RationalPolytope out;
  out.ambient_ = d_amb;
  out.dim_ = r;
  out.chart_ = p.chart_;
  out.affine_eqs_ = p.affine_eqs_;
  out.verts_ = std::move(cm);
  std::set<Mask> seen_masks;
  for (const PoolEntry& pe : pool) {
    Mask tight = 0;
    std::vector<int> tight_idx;
    for (int j = 0; j < nc; ++j) {
      Rational v = dot(pe.h, tc.col(j)) - pe.beta;
      if (v == 0) {
        tight |= Mask{1} << j;
        tight_idx.push_back(j);
      }
    }
    if (static_cast<int>(tight_idx.size()) < r) continue;
    if (affine_rank(tc, tight_idx) != r - 1) continue;
    if (!seen_masks.insert(tight).second) continue;
    if (pe.src >= 0) {
      out.facets_.push_back(p.facets_[pe.src]);
    } else {
      RVector aa = a;
      Rational cc = c;
      positive_primitive(aa, cc);
      out.facets_.push_back({std::move(aa), std::move(cc)});
    }
    out.facet_masks_.push_back(tight);
  }
  out.finish(true);
  return out;
}

RationalPolytope intersect(const RationalPolytope& p, const RationalPolytope& q) {
  if (p.is_empty()) return p;
  if (q.is_empty()) return q;
  assert(p.ambient_dim() == q.ambient_dim());
  RationalPolytope r = p;
  for (const Hyperplane& e : q.affine_hull()) {
    r = cut(r, e.a, e.c, true);
    if (r.is_empty()) return r;
  }
  for (const Halfspace& f : q.facets()) {
    r = cut(r, f.a, f.c, false);
    if (r.is_empty()) return r;
  }
  return r;
}

std::pair<RationalPolytope, RationalPolytope> join_decompose(
    const RMatrix& points, const std::vector<int>& k_indices) {
  const int d_amb = static_cast<int>(points.rows());
  std::vector<bool> in_k(static_cast<std::size_t>(points.cols()), false);
  for (int i : k_indices) {
    if (i < 0 || i >= points.cols())
      throw std::out_of_range("join_decompose: index out of range");
    in_k[static_cast<std::size_t>(i)] = true;
  }
  std::vector<RVector> q_pts, d_pts;
  for (int j = 0; j < points.cols(); ++j)
    (in_k[static_cast<std::size_t>(j)] ? q_pts : d_pts).push_back(points.col(j));
  RationalPolytope q =
      q_pts.empty() ? RationalPolytope::empty(d_amb) : convex_hull(q_pts);
  RationalPolytope d =
      d_pts.empty() ? RationalPolytope::empty(d_amb) : convex_hull(d_pts);
  return {std::move(q), std::move(d)};
}

namespace {

void sort_cells(std::vector<RationalPolytope>& cells) {
  std::sort(cells.begin(), cells.end(),
            [](const RationalPolytope& a, const RationalPolytope& b) {
              if (a.dim() != b.dim()) return a.dim() < b.dim();
              return a.key() < b.key();
            });
}

RationalPolytope face_polytope(const RationalPolytope& p, RationalPolytope::Mask mask) {
  std::vector<RVector> pts;
  for (int j = 0; j < p.vertex_count(); ++j)
    if (mask >> j & 1) pts.push_back(p.vertex(j));
  return convex_hull(pts);
}

}  // namespace

Subdivision stellar_subdivision(const RationalPolytope& p, const RVector& center) {
  if (!p.contains_relint(center))
    throw std::domain_error("stellar center must lie in the relative interior");
  std::vector<RationalPolytope> cells;
  if (p.dim() <= 0) {
    cells.push_back(p);
    return {p, std::move(cells)};
  }
  for (const RationalPolytope::Face& f : p.proper_faces()) {
    std::vector<RVector> pts{center};
    for (int j = 0; j < p.vertex_count(); ++j)
      if (f.mask >> j & 1) pts.push_back(p.vertex(j));
    cells.push_back(convex_hull(pts));       // cone over the face
    cells.push_back(face_polytope(p, f.mask));  // the face itself
  }
  cells.push_back(convex_hull(std::vector<RVector>{center}));
  sort_cells(cells);
  return {p, std::move(cells)};
}

Subdivision trivial_subdivision(const RationalPolytope& p) {
  std::vector<RationalPolytope> cells;
  for (const RationalPolytope::Face& f : p.proper_faces())
    cells.push_back(face_polytope(p, f.mask));
  cells.push_back(p);
  sort_cells(cells);
  return {p, std::move(cells)};
}

bool subdivision_equal(const Subdivision& a, const Subdivision& b) {
  if (!a.parent.same_as(b.parent)) return false;
  if (a.cells.size() != b.cells.size()) return false;
  for (std::size_t i = 0; i < a.cells.size(); ++i)
    if (!a.cells[i].same_as(b.cells[i])) return false;
  return true;
}

void validate_subdivision(const Subdivision& s) {
  if (s.parent.is_empty()) {
    if (!s.cells.empty())
      throw std::logic_error("subdivision of an empty parent has cells");
    return;
  }
  for (const RationalPolytope& c : s.cells) {
    if (c.is_empty()) throw std::logic_error("subdivision contains an empty cell");
    if (c.ambient_dim() != s.parent.ambient_dim())
      throw std::logic_error("subdivision cell in wrong ambient space");
    if (!s.parent.contains_polytope(c))
      throw std::logic_error("subdivision cell leaves the parent");
  }
  Rational vol = 0;
  for (const RationalPolytope& c : s.cells)
    if (c.dim() == s.parent.dim()) vol += volume_in_chart(s.parent.chart(), c);
  if (vol != s.parent.volume())
    throw std::logic_error("subdivision cells do not fill the parent volume");
  for (std::size_t i = 0; i < s.cells.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const RationalPolytope& x = s.cells[i];
      const RationalPolytope& y = s.cells[j];
      if (x.bbox_disjoint(y)) continue;
      RationalPolytope z = intersect(x, y);
      if (z.is_empty()) continue;
      RVector b = z.barycenter();
      // Relative interiors meet iff they share the barycenter of the
      // intersection.
      if (x.contains_relint(b) && y.contains_relint(b))
        throw std::logic_error("subdivision cells overlap in the interior");
    }
}

namespace {

struct RefineEngine {
  const RationalPolytope& parent;
  std::vector<RationalPolytope> family;
  std::map<std::string, std::size_t> index_of;
  std::vector<RationalPolytope> cells;
  std::map<std::pair<std::string, std::string>, RationalPolytope> isect_memo;
  long steps = 0;

  const RationalPolytope& memo_intersect(const RationalPolytope& x,
                                         const RationalPolytope& y) {
    std::pair<std::string, std::string> k = std::minmax(x.key(), y.key());
    auto it = isect_memo.find(k);
    if (it == isect_memo.end())
      it = isect_memo.emplace(std::move(k), intersect(x, y)).first;
    return it->second;
  }

  // The cell of u: intersection of every family member containing u.
  RationalPolytope locate(const RVector& u) {
    const RationalPolytope* l = nullptr;
    for (const RationalPolytope& d : family) {
      if (!d.contains(u)) continue;
      if (!l) {
        l = &d;
        continue;
      }
      if (d.contains_polytope(*l)) continue;
      if (l->contains_polytope(d)) {
        l = &d;
        continue;
      }
      const RationalPolytope& next = memo_intersect(*l, d);
      assert(!next.is_empty());
      l = &next;
    }
    if (!l) throw CoverageError("refinement family does not cover the parent");
    return *l;
  }

  void intern(RationalPolytope&& c) {
    if (index_of.emplace(c.key(), cells.size()).second)
      cells.push_back(std::move(c));
  }

  // Split regions until each sits inside a single cell; every region
  // either certifies its located cell or is divided along one of that
  // cell's violated constraints, with both halves full-dimensional.
  void split_phase() {
    std::vector<RationalPolytope> stack{parent};
    while (!stack.empty()) {
      if (++steps > 100000)
        throw std::logic_error("cell refinement did not terminate");
      RationalPolytope region = std::move(stack.back());
      stack.pop_back();
      RationalPolytope located = locate(region.barycenter());
      if (located.contains_polytope(region)) {
        intern(std::move(located));
        continue;
      }
      const RVector* sa = nullptr;
      const Rational* sc = nullptr;
      for (const Hyperplane& e : located.affine_hull()) {
        for (int j = 0; j < region.vertex_count() && !sa; ++j)
          if (dot(e.a, region.vertex(j)) != e.c) {
            sa = &e.a;
            sc = &e.c;
          }
        if (sa) break;
      }
      if (!sa) {
        for (const Halfspace& f : located.facets()) {
          for (int j = 0; j < region.vertex_count() && !sa; ++j)
            if (dot(f.a, region.vertex(j)) > f.c) {
              sa = &f.a;
              sc = &f.c;
            }
          if (sa) break;
        }
      }
      if (!sa) throw std::logic_error("refinement found no separating constraint");
      RVector na(sa->size());
      for (Eigen::Index i = 0; i < sa->size(); ++i) na(i) = -(*sa)(i);
      RationalPolytope lo = cut(region, *sa, *sc, false);
      RationalPolytope hi = cut(region, na, -*sc, false);
      if (lo.dim() != parent.dim() || hi.dim() != parent.dim())
        throw std::logic_error("refinement split lost a dimension");
      stack.push_back(std::move(lo));
      stack.push_back(std::move(hi));
    }
  }

  // Probe every face barycenter of every known cell; cells of lower
  // dimension are located there.
  void probe_phase() {
    std::set<std::string> probed;
    for (std::size_t qi = 0; qi < cells.size(); ++qi) {
      RationalPolytope cell = cells[qi];  // copy: cells may grow below
      for (const RationalPolytope::Face& f : cell.proper_faces()) {
        RVector u = cell.barycenter(f.mask);
        if (!probed.insert(rational_key(u)).second) continue;
        intern(locate(u));
      }
    }
  }
};

}  // namespace

std::vector<RationalPolytope> refine_into_cells(
    const RationalPolytope& parent, const std::vector<RationalPolytope>& family) {
  if (parent.is_empty()) return {};
  std::map<std::string, const RationalPolytope*> dedup;
  for (const RationalPolytope& d : family)
    if (!d.is_empty()) dedup.emplace(d.key(), &d);
  RefineEngine eng{parent, {}, {}, {}, {}, 0};
  for (auto& [k, d] : dedup) eng.family.push_back(*d);
  std::sort(eng.family.begin(), eng.family.end(),
            [](const RationalPolytope& a, const RationalPolytope& b) {
              if (a.dim() != b.dim()) return a.dim() < b.dim();
              return a.key() < b.key();
            });
  eng.split_phase();
  eng.probe_phase();
  sort_cells(eng.cells);
  return std::move(eng.cells);
}

Subdivision project_subdivision(const RationalPolytope& q, const RMatrix& f) {
  if (q.is_empty()) throw std::invalid_argument("project_subdivision: empty polytope");
  if (f.cols() != q.ambient_dim())
    throw std::invalid_argument("project_subdivision: shape mismatch");
  if (rational_rank(f) != f.rows())
    throw std::invalid_argument("project_subdivision: map must be surjective");

  const int rows = static_cast<int>(f.rows());
  RMatrix img(rows, q.vertex_count());
  for (int j = 0; j < q.vertex_count(); ++j)
    for (int i = 0; i < rows; ++i) {
      Rational s = 0;
      for (int l = 0; l < q.ambient_dim(); ++l) s += f(i, l) * q.vertices()(l, j);
      img(i, j) = s;
    }

  auto image_of = [&](RationalPolytope::Mask mask) {
    std::vector<RVector> pts;
    for (int j = 0; j < q.vertex_count(); ++j)
      if (mask >> j & 1) pts.push_back(img.col(j));
    return convex_hull(pts);
  };

  std::vector<RationalPolytope> family;
  for (const RationalPolytope::Face& face : q.proper_faces())
    family.push_back(image_of(face.mask));
  RationalPolytope parent = image_of(q.full_mask());
  family.push_back(parent);

  Subdivision s{parent, refine_into_cells(parent, family)};
  validate_subdivision(s);
  return s;
}

}  // namespace orbitlab
