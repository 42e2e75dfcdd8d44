#pragma once

// Library-wide default tolerances. Exact rational paths ignore these; they
// only govern floating-point sampling and the equivalence solver.

namespace orbitlab::defaults {

inline constexpr double eps_orth = 1e-9;   // frame orthonormality
inline constexpr double eps_quad = 1e-9;   // quadric residual
inline constexpr double eps_supp = 1e-9;   // support detection threshold
inline constexpr double eps_memb = 1e-9;   // polytope membership (floating)
inline constexpr double orbit_tol = 1e-7;  // torus-orbit equivalence solver

}  // namespace orbitlab::defaults
