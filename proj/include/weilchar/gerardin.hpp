#pragma once

// Closed-form characters of Weil representations: the semisimple torus
// formula, the fixed-point and fixed-line formulas, and the polarized case.

#include <vector>

#include "weilchar/symplectic.hpp"
#include "weilchar/weil.hpp"

namespace wc {

struct SemisimpleTerms {
    int l = 0;        // Galois orbits with nontrivial value
    int dim_fixed = 0;  // dim V^t
    int chi = 1;      // value of chi^T
    cplx value = 0;
};

// t given by torus coordinates.
SemisimpleTerms char_semisimple(const Torus& T, const std::vector<FieldElem>& coords);
// t given as a matrix; ElementNotInTorus when it is not a point of T.
SemisimpleTerms char_semisimple(const Torus& T, const FpMat& t);

// Legendre symbol of a nonzero residue.
int legendre_symbol(long long a, int p);

// Every maximal g-invariant totally isotropic subspace (reduced column bases).
std::vector<FpMat> maximal_invariant_isotropics(const SympSpace& V, const FpMat& g, size_t cap = 20000);
// One such subspace, found greedily.
FpMat some_maximal_invariant_isotropic(const SympSpace& V, const FpMat& g);

// sgn((-1)^{dim V_0 / 2} det(g | V') det(g - 1 | V_0)), V_0 = V'^perp / V'.
int char_no_fixed_point(const SympSpace& V, const FpMat& g, const FpMat& Vprime);

// Theta_{V_0}(g) * sum over V_0^perp / L of theta(<gv, v>).
cplx char_fixed_line(const SympSpace& V, const FpMat& g, const Vec& L, const FpMat& V0);
// The Gauss-sum factor alone.
cplx fixed_line_gauss_factor(const SympSpace& V, const FpMat& g, const Vec& L, const FpMat& V0);

// Character by repeated use of the fixed-line formula down to the
// fixed-point-free case; g semisimple or without fixed points.
cplx char_recursive(const SympSpace& V, const FpMat& g);

// sgn(det(g | V+)) |V^g|^{1/2} for semisimple g preserving V = V+ + V-.
cplx char_polarized(const SympSpace& V, const FpMat& g, const FpMat& Vplus, const FpMat& Vminus);

// Integers (a, b) with z = a + b sqrt(p*), p* = (-1/p) p, when z has that
// shape to within tol.
bool snap_quadratic(cplx z, int p, long long& a, long long& b, double tol = 1e-6);

}  // namespace wc
