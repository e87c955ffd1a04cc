#pragma once

// Finite fields GF(p^k) of odd characteristic inside a compatible tower.
//
// Elements are encoded as integers c0 + c1 p + ... + c_{k-1} p^{k-1}, where
// c_i are the coefficients in the polynomial basis 1, t, ..., t^{k-1} and t is
// a root of the defining polynomial.  Multiplication goes through discrete-log
// tables, which is cheap because every field is capped at 6561 elements.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "weilchar/errors.hpp"

namespace wc {

constexpr int kMaxFieldOrder = 6561;

// Dense polynomials over F_p, coefficient i multiplies X^i.
using Poly = std::vector<int>;

namespace poly {
Poly trim(Poly a);
int degree(const Poly& a);
Poly add(const Poly& a, const Poly& b, int p);
Poly sub(const Poly& a, const Poly& b, int p);
Poly mul(const Poly& a, const Poly& b, int p);
// Quotient and remainder of a by b (b nonzero).
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, int p);
Poly mod(const Poly& a, const Poly& b, int p);
Poly gcd(Poly a, Poly b, int p);  // monic result
Poly powmod(const Poly& a, std::uint64_t e, const Poly& m, int p);
bool is_irreducible(const Poly& f, int p);
// Lexicographically smallest monic irreducible polynomial of degree k, where
// candidates are ordered by the integer code sum c_i p^i of the lower coefficients.
Poly smallest_irreducible(int p, int k);
}  // namespace poly

bool is_prime(long long n);
long long ipow(long long b, int e);
int mod_p(long long a, int p);
int inv_mod(int a, int p);

class Field;
using FieldDesc = const Field*;

// Returns the cached field GF(p^k).  Throws NotPrime for even or composite p and
// FieldTooLarge when p^k exceeds the cap.
FieldDesc gf(int p, int k);

class Field {
public:
    int p() const { return p_; }
    int degree() const { return k_; }
    int order() const { return q_; }
    const Poly& modulus() const { return modulus_; }
    std::string name() const;

    int add(int a, int b) const;
    int sub(int a, int b) const;
    int neg(int a) const;
    int mul(int a, int b) const;
    int inv(int a) const;
    int pow(int a, long long e) const;
    int frob(int a, int j) const;  // a^(p^j)
    int log(int a) const { return log_[a]; }
    int exp(long long e) const;
    int primitive() const { return exp_[1]; }

    int from_coeffs(const std::vector<int>& c) const;
    std::vector<int> coeffs(int a) const;
    int from_int(long long n) const { return mod_p(n, p_); }

    // Canonical embedding of the subfield of degree d (d | k) into this field.
    bool has_subfield_degree(int d) const { return k_ % d == 0; }
    int embed_from(int d, int a) const;        // a is a code in GF(p^d)
    int restrict_to(int d, int a) const;       // -1 if a is not in the subfield

    // Root of the subfield generator chosen for the embedding of degree d.
    int embedding_root(int d) const;

private:
    friend FieldDesc gf(int p, int k);
    Field(int p, int k);
    int slow_mul(int a, int b) const;
    void build_embeddings();

    int p_, k_, q_;
    Poly modulus_;
    std::vector<int> log_, exp_;
    std::vector<int> pw_;  // p^i
    std::map<int, std::vector<int>> emb_;   // d -> table GF(p^d) code -> code here
    std::map<int, std::vector<int>> back_;  // d -> table code here -> GF(p^d) code or -1
    std::map<int, int> emb_root_;
};

struct FieldElem {
    FieldDesc F = nullptr;
    int v = 0;

    FieldElem() = default;
    FieldElem(FieldDesc f, int code) : F(f), v(code) {}

    static FieldElem zero(FieldDesc f) { return {f, 0}; }
    static FieldElem one(FieldDesc f) { return {f, 1}; }
    static FieldElem from_int(FieldDesc f, long long n) { return {f, f->from_int(n)}; }

    bool is_zero() const { return v == 0; }
    bool is_one() const { return v == 1; }
    int p() const { return F->p(); }

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator-() const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator/(const FieldElem& o) const;
    FieldElem inv() const;
    FieldElem pow(long long e) const;
    FieldElem frob(int j) const;  // x^(p^j)
    bool operator==(const FieldElem& o) const { return F == o.F && v == o.v; }
    bool operator!=(const FieldElem& o) const { return !(*this == o); }
    bool operator<(const FieldElem& o) const {
        return F->order() != o.F->order() ? F->order() < o.F->order() : v < o.v;
    }

    // Multiplicative order (x nonzero).
    long long order() const;
    std::string str() const;
};

FieldElem parse_field_elem(const std::string& s);
std::vector<FieldElem> elements(FieldDesc f);
std::vector<FieldElem> nonzero_elements(FieldDesc f);

// Image of x under the canonical embedding into the larger field big.
FieldElem embed(const FieldElem& x, FieldDesc big);
// Restriction of x to the subfield sub; NotInSubfield when x does not lie there.
FieldElem restrict_to(const FieldElem& x, FieldDesc sub);
bool lies_in(const FieldElem& x, FieldDesc sub);

FieldElem trace_to(const FieldElem& x, FieldDesc sub);
FieldElem norm_to(const FieldElem& x, FieldDesc sub);
int sgn_mult(const FieldElem& x);
int sgn_norm_one(const FieldElem& x, FieldDesc sub);
std::vector<FieldElem> nth_roots(const FieldElem& x, int n);

// Norm-one subgroup of F relative to its index-2 subfield.
std::vector<FieldElem> norm_one_group(FieldDesc f);
// Index-2 subfield of f (f of even degree).
FieldDesc half_field(FieldDesc f);

}  // namespace wc
