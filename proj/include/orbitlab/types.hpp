#pragma once

// Scalar and dense-container conventions used across the library.
//
// Two arithmetic lanes coexist:
//   * exact:    mpq_class rationals inside Eigen dense types; every
//               combinatorial decision (hulls, faces, cells) lives here.
//   * floating: double / complex<double> for sampled points, moment values
//               and torus elements; never used to decide incidence.

#include <gmpxx.h>

#include <Eigen/Core>

#include <complex>
#include <cstdint>

namespace Eigen {

// mpq_class as an Eigen scalar. Only coefficient access, assignment and
// comparisons are exercised; matrix decompositions stay hand-rolled.
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Literal = mpq_class;
  using Nested = mpq_class;

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 100,
    MulCost = 100,
  };
};

}  // namespace Eigen

namespace orbitlab {

using Rational = mpq_class;
using Integer = mpz_class;

using RVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

using IVector = Eigen::VectorXi;
using IMatrix = Eigen::MatrixXi;

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

inline int sign(const Rational& x) { return sgn(x); }

inline double to_double(const Rational& x) { return x.get_d(); }

inline Rational rational_of(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Exact rational from a double (doubles are dyadic rationals).
inline Rational rational_of(double x) { return Rational(x); }

inline Eigen::VectorXd to_double(const RVector& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

inline RVector rational_of(const Eigen::VectorXd& v) {
  RVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = Rational(v[i]);
  return out;
}

inline RVector rational_of(const IVector& v) {
  RVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = Rational(v[i]);
  return out;
}

}  // namespace orbitlab
