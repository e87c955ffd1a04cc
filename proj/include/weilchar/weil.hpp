#pragma once

// Explicit Schrödinger models of the Heisenberg-Weil representation, Weil
// operators, intertwiners and twisted traces over tensor products of blocks.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "weilchar/symplectic.hpp"

namespace wc {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

// exp(2 pi i z / p) with z lifted to {0, ..., p-1}.
cplx theta(int p, long long z);

// Functions on X = F_p^n are indexed by t = sum t_i p^i.
struct WeilModel {
    SympSpace space;
    FpMat basis;      // columns e_1..e_n, f_1..f_n adapted to (X, Y)
    FpMat basis_inv;  // space coordinates -> canonical (x, y)
    int p = 3;
    int n = 0;
    int dim = 1;  // p^n

    // Canonical coordinates (x, y) of a vector of the space.
    Vec canonical(const Vec& v) const;
    // Matrix of g in canonical coordinates.
    FpMat canonical(const FpMat& g) const;
    CMat rho(const HeisElem& h) const;
};

WeilModel schrodinger_model(const SympSpace& V);
WeilModel schrodinger_model(const SympSpace& V, const FpMat& X, const FpMat& Y);

// Canonical symplectic space of dimension 2n: <(x,y),(x',y')> = x.y' - y.x'.
SympSpace canonical_space(int p, int n);

// rho on canonical coordinates, directly.
CMat rho_canonical(int p, int n, const Vec& xy, int z);

// Some nonzero M with M rho(h) = rho(g h) M, scaled to be unitary; the phase is
// arbitrary.  g is given in canonical coordinates.
CMat omega_projective(int p, int n, const FpMat& g, std::uint64_t seed = 0);

// The Weil operator: the projective one with its scalar fixed so that
// g -> omega(g) is a homomorphism on Sp(V).
CMat omega_canonical(int p, int n, const FpMat& g);
CMat weil_operator(const WeilModel& model, const FpMat& g);

// Generator model on canonical coordinates.
//   Levi:      (x, y) -> (A x, A^{-T} y),   f(t) -> (det A / p) f(A^{-1} t)
//   unipotent: (x, y) -> (x, y - S x),      f(t) -> theta(t^T S t / 2) f(t)
//   Fourier:   (x, y) -> (y, -x),           f(t) -> sum_s theta(sign t.s) f(s)  (unnormalized)
CMat gen_levi(int p, const FpMat& A);
CMat gen_unipotent(int p, const FpMat& S);
CMat gen_fourier(int p, int n, int sign);
FpMat levi_element(const FpMat& A);
FpMat unipotent_element(const FpMat& S);
FpMat weyl_element(int p, int n);

// Character of SL_2(F_3) onto mu_3 sending [[1,0],[1,1]] to theta(1) and the
// Weyl element to 1, as an exponent of theta; canonical coordinates.
int sl2f3_psi(const FpMat& g);

// T with T rhoA(h) = rhoB(phi h) T for h in the Heisenberg group of A.
CMat schur_intertwiner(const WeilModel& A, const WeilModel& B, const FpMat& phi, std::uint64_t seed = 0);

// Trace of the cyclic tensor automorphism built from I'_j : W'_j -> W'_{j+1}
// (indices mod l+1), computed on the full tensor product and as the trace of
// the composite on W'_0.
std::pair<cplx, cplx> cyclic_tensor_trace(const std::vector<CMat>& maps);

struct BlockTwist {
    SympSpace space;                      // blocks listed in space.blocks
    FpMat iota;                           // permutes the blocks inside each group
    std::vector<std::vector<int>> groups; // block indices in cycle order
};

void validate(const BlockTwist& bt);

enum class ScalarSplit { Even, First };

struct TwistedTrace {
    cplx product = 0;  // per-group product formula
    cplx direct = 0;   // trace on the full tensor product
    double normalization_residual = 0;  // max over groups of |composite - target|
};

TwistedTrace twisted_trace(const BlockTwist& bt, const FpMat& g, ScalarSplit split = ScalarSplit::Even,
                           bool compute_direct = true);

// Kronecker product helper.
CMat kron(const CMat& a, const CMat& b);

}  // namespace wc
