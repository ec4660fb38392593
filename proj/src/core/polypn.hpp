#pragma once

#include <vector>

#include "dualspace.hpp"
#include "linalg.hpp"

namespace pnsurf {

// Polynomial normal field N of degree k whose squared length is the square
// of the polynomial sigma.
struct PythagoreanField {
    PolyVec3 field;
    BivariatePoly sigma; // dot(field, field) == sigma^2 exactly
    int degree = 0;
};

// Attempts a polynomial square root of ||N||^2; throws
// ErrorCode::not_pythagorean (carrying the residual leading term) on failure.
PythagoreanField check_pythagorean(const PolyVec3& n);

// Homogeneous linear system for polynomial vector fields P, Q of total
// degree <= ell with P.N = 0, Q.N = 0 and dP/dv - dQ/du = 0.
struct PnSystem {
    int k = 0, ell = 0;
    size_t rows = 0, cols = 0;
    QMatrix matrix;
    // column layout: variable block (0..5 for p1,p2,p3,q1,q2,q3), then
    // monomials u^i v^j with i+j <= ell in graded-lex order
    std::vector<std::pair<int, Mono>> columns;
};

PnSystem build_pn_system(const PolyVec3& n, int ell);

struct PnSolutionSurface {
    PolyVec3 x;      // x_u = P and x_v = Q exactly
    PolyVec3 p, q;   // the generating pair
    BivariatePoly f; // cross(x_u, x_v) = f * N
};

struct PnSolveResult {
    PnSystem system;
    size_t nullspace_dim = 0;
    std::vector<PnSolutionSurface> surfaces;
    size_t degenerate_pairs = 0; // basis pairs with cross(P,Q) identically zero
};

// Solves the system exactly, integrates each non-degenerate basis pair to a
// surface and verifies x_u = P, x_v = Q and cross(P,Q) = f N symbolically.
// Throws ErrorCode::empty_solution when no basis pair has cross(P,Q) != 0.
PnSolveResult solve_pn_system(const PolyVec3& n, int ell);

// Integration step alone: x = int P du + c(v) with
// c(v) = [int Q dv - int P du]_{u=0}.
PolyVec3 integrate_pair(const PolyVec3& p, const PolyVec3& q);

// Wraps a polynomial PN surface as a primal patch (exact rational unit
// normal field sigma^-1 * cross direction), for reuse of the PN verifier.
PnPatch patch_from_polynomial_surface(const PnSolutionSurface& s, const PythagoreanField& nf);

} // namespace pnsurf
