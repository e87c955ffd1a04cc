#pragma once

// Symplectic spaces over F_p, the Heisenberg group, symplectic matrices,
// maximal tori with their weights, eigenvalues and conjugacy witnesses.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "weilchar/ffield.hpp"
#include "weilchar/fpmat.hpp"

namespace wc {

using Vec = std::vector<int>;

struct SympSpace {
    int p = 3;
    int dim = 0;
    FpMat gram;                 // <u, v> = u^T gram v
    std::vector<FpMat> blocks;  // optional orthogonal decomposition, basis columns

    int form(const Vec& u, const Vec& v) const;
    int half_dim() const { return dim / 2; }
};

// gram = [[0, J], [-J, 0]] with J the n x n antidiagonal of ones.
SympSpace standard_space(int p, int n);
SympSpace make_space(const FpMat& gram, std::vector<FpMat> blocks = {});
void validate(const SympSpace& V);

struct HeisElem {
    Vec v;
    int z = 0;
    bool operator==(const HeisElem& o) const { return v == o.v && z == o.z; }
};

HeisElem heis_mul(const SympSpace& V, const HeisElem& a, const HeisElem& b);
HeisElem heis_inv(const SympSpace& V, const HeisElem& a);

bool is_symplectic(const SympSpace& V, const FpMat& g);
void require_symplectic(const SympSpace& V, const FpMat& g);
bool is_semisimple(const FpMat& g);  // order coprime to p

// Columns e_1..e_n, f_1..f_n with <e_i, f_j> = delta_ij and the e's and f's
// isotropic.
FpMat symplectic_basis(const SympSpace& V);
// Same, with e spanning X and f spanning Y; throws NotAPolarization.
FpMat polarization_basis(const SympSpace& V, const FpMat& X, const FpMat& Y);

// v -> v + a <v, u> u
FpMat transvection(const SympSpace& V, const Vec& u, int a);
// All of Sp(V) by closure; CapExceeded above cap elements.
std::vector<FpMat> enumerate_sp(const SympSpace& V, size_t cap = 60000);
FpMat random_sp(const SympSpace& V, std::mt19937_64& rng);

// Subspace helpers; subspaces are stored as matrices of basis columns.
FpMat orth_complement(const SympSpace& V, const FpMat& U);
bool is_isotropic(const SympSpace& V, const FpMat& U);
bool is_invariant(const FpMat& g, const FpMat& U);
// Matrix of g restricted to the invariant subspace U, in the basis of U.
FpMat restrict_map(const FpMat& g, const FpMat& U);
// Space U (nondegenerate) with the restricted form, in the basis of U.
SympSpace subspace(const SympSpace& V, const FpMat& U);
FpMat fixed_space(const FpMat& g);  // kernel of g - 1

// ---------------------------------------------------------------------------
// Maximal tori

struct TorusFactor {
    bool split = false;  // split: (k°)^x on k° + k°; else norm-one group of k / k°
    int degree = 1;      // [k° : F_p]
};

struct TorusDesc {
    std::vector<TorusFactor> factors;
    std::string str() const;
};

struct Torus {
    TorusDesc desc;
    SympSpace space;
    FpMat transport;            // canonical coordinates -> space coordinates
    std::vector<int> offsets;   // coordinate offset of each factor (canonical)
    std::vector<FieldDesc> big; // k_i (norm-one) or k°_i (split)
    std::vector<FieldDesc> small;  // k°_i
    std::vector<FieldElem> form_const;  // c_i with tau(c_i) = -c_i (norm-one)

    // Element with the given coordinates (norm-one elements or units).
    FpMat element(const std::vector<FieldElem>& coords) const;
    // All coordinate tuples of T(F_p).
    std::vector<std::vector<FieldElem>> points() const;
    long long order() const;
};

Torus build_torus(const TorusDesc& desc, int p);
// Same torus transported into V through symplectic bases.
Torus build_torus(const TorusDesc& desc, const SympSpace& V);

struct Weight {
    int factor = 0;
    int j = 0;     // Frobenius exponent
    int sign = 1;  // +1 or -1 (inverse)
    int gamma_orbit = 0;  // index of the Galois orbit
    int sigma_orbit = 0;  // index of the Galois x {+-1} orbit
};

struct WeightData {
    std::vector<Weight> weights;
    int n_gamma_orbits = 0;
    int n_sigma_orbits = 0;
    std::vector<bool> gamma_symmetric;   // per Galois orbit
    std::vector<int> sigma_size;         // per Sigma orbit
    std::vector<int> sigma_rep;          // a weight index in each Sigma orbit
};

WeightData weights(const Torus& T);
// Value of a weight at a torus point, in the field of its factor.
FieldElem eval_weight(const Torus& T, const Weight& w, const std::vector<FieldElem>& coords);

// Eigenvalues over the closure, with multiplicity, in a common field.
// CapExceeded when the splitting field is beyond the field cap.
std::vector<FieldElem> eigen_multiset(const FpMat& g);
// Canonical comparison key of a multiset (sorted codes in a common field).
bool same_eigen_multiset(const FpMat& a, const FpMat& b);

// Symplectic x with x t x^{-1} = g, found by searching the solution space of
// X t = g X; NotSemisimple unless both have order prime to p.
std::optional<FpMat> conjugate_in_sp(const SympSpace& V, const FpMat& g, const FpMat& t, size_t cap = 3000000);

}  // namespace wc
