#pragma once

// Integer lattices, Smith normal form and root data with a finite-order
// automorphism: restricted roots, their types, norm sums and descended roots.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "weilchar/errors.hpp"

namespace wc {

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>;  // row-major

IMat imat_identity(int n);
IMat imat_mul(const IMat& a, const IMat& b);
IVec imat_apply(const IMat& a, const IVec& v);
IMat imat_sub(const IMat& a, const IMat& b);
IMat imat_transpose(const IMat& a);
long long imat_det(const IMat& a);  // Bareiss, exact for small sizes
// Inverse of a unimodular matrix; throws InvalidDatum otherwise.
IMat imat_unimodular_inverse(const IMat& a);
long long idot(const IVec& a, const IVec& b);

// Arbitrary-precision matrices; unimodular transforms of Smith normal form
// routinely outgrow 64 bits.
using BigMat = std::vector<std::vector<mpz_class>>;
BigMat to_big(const IMat& m);
IMat to_imat(const BigMat& m);  // CapExceeded if an entry does not fit
BigMat big_mul(const BigMat& a, const BigMat& b);
mpz_class big_det(const BigMat& a);

struct SNF {
    BigMat U, D, V;  // U * M * V = D
};

SNF smith_normal_form(const IMat& M);

// Smallest l >= 1 with theta^l = 1; NotFiniteOrder if none up to limit.
int int_matrix_order(const IMat& theta, int limit = 720);

// Torsion invariant factors (> 1) of Z^n / (1 - theta) Z^n.
std::vector<long long> pi0_torsion(const IMat& theta);

struct RootDatum {
    std::string name;
    int rank = 0;
    std::vector<IVec> roots;    // coordinates in a basis of X*
    std::vector<IVec> coroots;  // coroots[i] pairs with roots via idot
    IMat theta;                 // action on X*
};

// Checks every structural invariant; throws InvalidDatum with a reason.
void validate(const RootDatum& d);

// Root index of a vector, or -1.
int root_index(const RootDatum& d, const IVec& v);

struct RestrictedRoot {
    IVec vec;               // coordinates in Y* = X* / saturation
    int type = 1;           // 1, 2 or 3
    std::vector<int> orbit; // indices of the Theta-orbit of preimages
};

struct Restriction {
    int rank_sat = 0;     // rank of the saturated sublattice
    IMat sat_basis;       // columns span X* n (1 - theta) X*_Q, stored as rows
    IMat projection;      // (n - r) x n integer matrix realising p*
    std::vector<RestrictedRoot> res;
    std::vector<int> root_to_res;  // root index -> restricted index
};

IVec project(const Restriction& r, const IVec& w);
Restriction restrict_roots(const RootDatum& d);

struct NormSum {
    IVec N;
    int l = 1;
    int rho = 1;
    int sigma = 1;
};

NormSum norm_sum(const IVec& alpha, const RootDatum& d);

// Element of Q/Z; the distinguished signs are +1 = 0 and -1 = 1/2.
struct QZ {
    long long num = 0, den = 1;
    static QZ plus_one() { return {0, 1}; }
    static QZ minus_one() { return {1, 2}; }
    QZ normalized() const;
    bool operator==(const QZ& o) const;
};

// Restricted-root indices p*(alpha) with N(alpha)(nu) = sigma_alpha.  nu_eval
// maps every root index to the value N(alpha)(nu).
std::vector<int> descended_roots(const RootDatum& d, const std::map<int, QZ>& nu_eval);

// Built-in catalogue of adjoint root data with diagram automorphisms.
std::vector<std::string> catalogue_names();
RootDatum catalogue(const std::string& name);

// Connected components of the Dynkin-type graph of Phi: rank and root count.
struct Component {
    std::vector<int> roots;
    int rank = 0;
    bool type_A_even = false;  // type A_{2n}
};
std::vector<Component> components(const RootDatum& d);

// Random unimodular matrix built from elementary operations.
IMat random_unimodular(std::mt19937_64& rng, int n, int steps = 12);
// Random integer matrix of exact order l in {2, 3, 4, 6} and rank at most
// max_rank: a block sum of permutation cycles, signs and cyclotomic companion
// matrices, conjugated by a random unimodular matrix.
IMat random_finite_order(std::mt19937_64& rng, int l, int max_rank);

// True when some power of theta stabilises an A_{2n} component and acts on it
// nontrivially.
bool has_moved_A_even(const RootDatum& d);

}  // namespace wc
