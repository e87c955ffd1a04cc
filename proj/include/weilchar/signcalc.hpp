#pragma once

// Orbit combinatorics of abstract root sets under Galois, negation and a
// twisting automorphism, the symplectic blocks attached to a root with its
// twisted automorphism, the sign formulas for their Weil characters, and the
// assembled product over all blocks.

#include <map>
#include <string>
#include <vector>

#include "weilchar/gerardin.hpp"
#include "weilchar/symplectic.hpp"
#include "weilchar/weil.hpp"

namespace wc {

// ---------------------------------------------------------------------------
// Orbits

using Perm = std::vector<int>;

struct OrbitAction {
    int size = 0;                 // roots are 0..size-1
    std::vector<Perm> gamma_gens; // generators of the finite Galois quotient
    Perm neg;                     // alpha -> -alpha
    Perm theta;                   // the twisting automorphism
};

// Throws InvalidAction unless the permutations are valid, commute pairwise,
// neg is a fixed-point-free involution and theta preserves symmetry.
void validate(const OrbitAction& a);

struct RootInfo {
    int m = 1;                  // smallest m with theta^m(alpha) in Sigma alpha
    int l = 1;                  // size of the Theta-orbit
    bool symmetric = false;     // -alpha in Gamma alpha
    bool res_symmetric = false; // the Theta-orbit is sent to its negative by Gamma
    int sign = 1;               // theta^m(alpha) = sign * sigma(alpha)
    int gamma_orbit = 0;
    int sigma_orbit = 0;
    int block = 0;              // index of the (Sigma x Theta)-orbit
};

struct OrbitClassification {
    std::vector<RootInfo> roots;
    std::vector<Perm> gamma;            // all elements of the Galois quotient
    std::vector<int> block_reps;        // smallest root of each (Sigma x Theta)-orbit
    int n_gamma_orbits = 0;
    int n_sigma_orbits = 0;
};

OrbitClassification classify_orbits(const OrbitAction& a);

// ---------------------------------------------------------------------------
// Scenarios for one block

enum class Branch { AsymAsym, AsymSymUr, AsymSymRam, SymUrSymUr, SymUrSymRam };

const char* branch_name(Branch b);
Branch parse_branch(const std::string& s);  // ValidationError on unknown names
bool is_symmetric(Branch b);
bool is_ramified(Branch b);

struct OrbitScenario {
    int p = 3;
    int alpha = -1;            // root in an OrbitAction, or -1 when standalone
    int deg_alpha = 1;         // [k_alpha : F_p]
    int deg_pm_alpha = 1;      // [k_{+-alpha} : F_p]
    int deg_res = 1;           // [k_{alpha_res} : F_p]
    int deg_pm_res = 1;        // [k_{+-alpha_res} : F_p]
    int sigma_exp = 1;         // sigma_alpha acts on k_alpha as x -> x^(p^sigma_exp)
    FieldElem C;               // in k_alpha
    FieldElem eta_alpha;       // in k_alpha
    FieldElem eta_minus_alpha; // in k_alpha; unused for symmetric alpha
    int m = 1;
    int l = 1;
    Branch classification = Branch::AsymAsym;

    int f() const { return deg_alpha / deg_res; }
    int g() const { return deg_pm_res; }
    FieldDesc k_alpha() const { return gf(p, deg_alpha); }
    FieldDesc k_res() const { return gf(p, deg_res); }
    FieldDesc k_pm_res() const { return gf(p, deg_pm_res); }
    // Exponent of varsigma = sigma^{-1} on k_alpha.
    int varsigma_exp() const;
    // Exponent of tau_alpha on k_alpha (symmetric alpha).
    int tau_exp() const { return deg_pm_alpha % deg_alpha; }
};

enum class RestrictedType { Asymmetric, SymUnramified, SymRamified };

// Type of alpha_res from the symmetry data of the classification and the
// field degrees; InconsistentDegrees when the degrees contradict it.
RestrictedType classify_restricted(const OrbitScenario& sc);

// Checks degrees, the classification, C and the eta constraint.
void validate(const OrbitScenario& sc);

// The element eta_alpha forced by the form for a given C and eta_{-alpha}
// (asymmetric alpha): varsigma(C)/C or -varsigma(C)/C divided by eta_{-alpha}.
FieldElem forced_eta_alpha(const OrbitScenario& sc);
// Right side of the symmetric constraint eta * tau(eta) = varsigma(C) / C.
FieldElem symmetric_constraint_target(const OrbitScenario& sc);

struct BuiltBlock {
    SympSpace space;
    FpMat g;  // [eta]^{m_alpha} on the block
};

// Symplectic block and its automorphism.  FormDegenerate when no admissible
// form exists for C; ConstraintViolated when the automorphism does not
// preserve the form.
BuiltBlock build_block(const OrbitScenario& sc);
// Same space and map, without the constraint check.
BuiltBlock build_block_unchecked(const OrbitScenario& sc);

// ---------------------------------------------------------------------------
// Maximal tori for the unramified symmetric restricted cases

struct TorusPiece {
    FieldDesc field;  // k_i
    FieldElem x;      // image of X in k_i
    bool split = false;  // k_i^x (split) or k_i^1 (norm-one)
};

struct TorusCover {
    std::vector<TorusPiece> pieces;
    std::vector<std::string> trace;  // case labels visited
    TorusDesc desc() const;
    std::vector<FieldElem> coords() const;
    // (-1)^l times the product of the quadratic characters.
    int sign() const;
};

enum class TorusBranch { AsymSym, SymSym };

// Fields k_i and images x_i of X in k_res[X]/(X^f - beta).
std::vector<TorusPiece> factor_binomial(const FieldElem& beta, int f, bool split);

// Pieces covering Gal(k_res/F_p)(beta^{1/f}) together with its partner set
// (-beta for the asymmetric branch).  beta lies in k_res; k_pm_res is the
// index-2 subfield.  NormConditionViolated when beta is off the norm locus.
TorusCover torus_algorithm(const FieldElem& beta, int f, FieldDesc k_pm_res, TorusBranch branch);

// ---------------------------------------------------------------------------
// Sign formulas

enum class SignSource { ClosedForm, TorusAlgorithm, OracleConstant };
const char* sign_source_name(SignSource s);

struct BlockSign {
    int sign = 1;
    int dim_fixed = 0;
    double fixed_factor = 1;  // |V^{eta^m}|^{1/2}
    SignSource source = SignSource::ClosedForm;
    TorusCover cover;         // filled by the torus algorithm
    cplx value() const { return cplx(sign * fixed_factor, 0.0); }
};

// The closed-form value of the Weil character of the block at [eta]^{m}.
BlockSign block_sign_formula(const OrbitScenario& sc);
// The torus-algorithm value for the unramified symmetric restricted
// branches, whatever f is.
BlockSign block_sign_torus(const OrbitScenario& sc);
// The oracle trace of the built block.
cplx block_oracle(const OrbitScenario& sc);

// Ramified constants computed by the oracle and cached once per key.
struct RamifiedKey {
    int p, deg_alpha, deg_pm_alpha, deg_res, deg_pm_res, sigma_exp, c_code;
    Branch branch;
    auto operator<=>(const RamifiedKey&) const = default;
};
int ramified_constant(const OrbitScenario& sc);
std::map<RamifiedKey, int> ramified_cache_snapshot();
void clear_ramified_cache();

// Quadratic character of k_alpha^x, or of the norm-one group for symmetric
// alpha, at x.
int epsilon_root(bool symmetric, const FieldElem& x);

// ---------------------------------------------------------------------------
// Assembly

struct RootValue {
    int root = 0;
    FieldElem value;  // alpha(s) in k_alpha
};

struct AssembleInput {
    OrbitAction action;
    std::vector<OrbitScenario> scenarios;  // base-point data, one per block
    std::vector<RootValue> s_values;
};

struct BlockReport {
    int alpha = 0;
    Branch branch = Branch::AsymAsym;
    OrbitScenario twisted;  // eta = s * eta_base
    BlockSign sign;
    int base_constant = 1;  // epsilon_{Sigma alpha}
    int eps_s = 1;          // product of epsilon_{theta^i alpha}(s)
};

struct Assembled {
    std::vector<BlockReport> blocks;
    cplx unfactored = 0;  // product of block values
    bool factored_available = false;
    int c_eta = 1;                   // C_{eta base}
    int n_ur = 0;                    // |Xi_{eta, ur}|
    double v_eta_half = 1;           // |V_eta|^{1/2}
    int eps_tilde = 1;               // epsilon tilde of s
    cplx factored = 0;
};

// Product over blocks; with factored = true also the decomposition, which
// needs f = 1 everywhere (FRegimeViolated) and must agree with the product.
Assembled assemble_product(const AssembleInput& in, bool factored);

// C * |V_{eta_0}|^{1/2} * (-1)^{n_ur} * eps(s) * vartheta(s).
cplx theta_rho(const Assembled& a, cplx vartheta_s);

// The full space: m copies of each block, the twisting map cycling them and
// [s] acting diagonally.  The twisted trace of [s] on it is the direct
// evaluation of the assembled product.
struct FullTwist {
    BlockTwist twist;
    FpMat s_action;
};
FullTwist full_twist(const AssembleInput& in);

// ---------------------------------------------------------------------------
// Test matrix: every admissible scenario for the given primes and degree
// bound, enumerated exhaustively up to cap scenarios per configuration and
// by a deterministic stride above it.

struct ScenarioConfig {
    int p;
    Branch branch;
    int deg_alpha, deg_pm_alpha, deg_res, deg_pm_res, sigma_exp;
    std::string str() const;
};

std::vector<ScenarioConfig> scenario_configs(const std::vector<int>& primes, int max_degree);
// Admissible values of C for a configuration.
std::vector<FieldElem> admissible_C(const ScenarioConfig& c);
// All admissible scenarios for one C.
std::vector<OrbitScenario> scenarios_for(const ScenarioConfig& c, const FieldElem& C);
std::vector<OrbitScenario> scenario_matrix(const ScenarioConfig& c, size_t cap);

}  // namespace wc
