#pragma once

// Dense matrices over F_p used by the symplectic layer.

#include <cstdint>
#include <string>
#include <vector>

#include "weilchar/ffield.hpp"

namespace wc {

struct FpMat {
    int p = 3;
    int rows = 0, cols = 0;
    std::vector<int> a;  // row-major residues in [0, p)

    FpMat() = default;
    FpMat(int p_, int r, int c) : p(p_), rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    static FpMat identity(int p, int n);
    static FpMat from_rows(int p, const std::vector<std::vector<long long>>& r);

    int& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    int operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool operator==(const FpMat& o) const { return p == o.p && rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const FpMat& o) const { return !(*this == o); }
    bool operator<(const FpMat& o) const { return a < o.a; }

    FpMat operator*(const FpMat& o) const;
    FpMat operator+(const FpMat& o) const;
    FpMat operator-(const FpMat& o) const;
    FpMat scaled(int c) const;
    FpMat transpose() const;
    std::vector<int> apply(const std::vector<int>& v) const;
    std::vector<int> col(int j) const;
    std::vector<int> row(int i) const;
    bool is_identity() const;
    bool is_zero() const;

    std::string str() const;
};

FpMat hcat(const FpMat& a, const FpMat& b);
FpMat from_columns(int p, int n, const std::vector<std::vector<int>>& cols);

int det(const FpMat& m);
int rank(const FpMat& m);
FpMat inverse(const FpMat& m);  // throws if singular
// Basis of the right kernel, as columns of the returned matrix (n x d).
FpMat kernel(const FpMat& m);
// Column basis of the span of the columns of m (reduced).
FpMat column_space(const FpMat& m);
// Solve m x = b; returns false when inconsistent.
bool solve(const FpMat& m, const std::vector<int>& b, std::vector<int>& x);
FpMat mat_pow(const FpMat& m, long long e);
// Smallest n >= 1 with m^n = 1; throws NotFiniteOrder above the limit.
long long mat_order(const FpMat& m, long long limit = 10000000);
// Coefficients of det(X - m), low degree first, monic.
Poly charpoly(const FpMat& m);

// Column vectors helpers
int dot(const std::vector<int>& u, const std::vector<int>& v, int p);

// Matrix of multiplication by a on F as an F_p-space in the polynomial basis.
FpMat mult_matrix(const FieldElem& a);
// Matrix of x -> x^(p^j) on F.
FpMat frob_matrix(FieldDesc f, int j);
// Matrix of the F_p-linear map x -> c * frob_j(x).
FpMat semilinear_matrix(const FieldElem& c, int j);

}  // namespace wc
