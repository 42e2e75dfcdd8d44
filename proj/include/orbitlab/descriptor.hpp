#pragma once

// Symbolic description of the GIT quotient sitting over a stratification
// cell. Only three shapes occur in this toolkit: a point (single closed
// orbit), a projective space, or an abstract curve known only by a label.

#include <string>

namespace orbitlab {

struct QuotientDescriptor {
  enum class Kind { Point, ProjectiveSpace, Curve };

  Kind kind = Kind::Point;
  int dim = 0;      // ProjectiveSpace dimension m
  std::string tag;  // Curve label
  // Whether the quotient over this cell is a collapse of the quotient over
  // adjacent finer cells (true for single-orbit boundary strata).
  bool contracts = false;

  static QuotientDescriptor point(bool contracts = true) {
    QuotientDescriptor d;
    d.kind = Kind::Point;
    d.contracts = contracts;
    return d;
  }
  static QuotientDescriptor projective_space(int m) {
    QuotientDescriptor d;
    d.kind = Kind::ProjectiveSpace;
    d.dim = m;
    return d;
  }
  static QuotientDescriptor curve(std::string label) {
    QuotientDescriptor d;
    d.kind = Kind::Curve;
    d.dim = 1;
    d.tag = std::move(label);
    return d;
  }

  // P^0 is a point; rewriting it makes descriptor comparison canonical.
  QuotientDescriptor normalized() const {
    if (kind == Kind::ProjectiveSpace && dim == 0) return point(contracts);
    return *this;
  }

  bool same_as(const QuotientDescriptor& o) const {
    const QuotientDescriptor a = normalized(), b = o.normalized();
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::Point:
        return true;
      case Kind::ProjectiveSpace:
        return a.dim == b.dim;
      case Kind::Curve:
        return a.tag == b.tag;
    }
    return false;
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Point:
        return "Point";
      case Kind::ProjectiveSpace:
        return "P^" + std::to_string(dim);
      case Kind::Curve:
        return "Curve(" + tag + ")";
    }
    return "?";
  }
};

}  // namespace orbitlab
