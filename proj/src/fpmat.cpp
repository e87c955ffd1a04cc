#include "weilchar/fpmat.hpp"

#include <sstream>

namespace wc {

FpMat FpMat::identity(int p, int n) {
    FpMat m(p, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

FpMat FpMat::from_rows(int p, const std::vector<std::vector<long long>>& r) {
    int rr = static_cast<int>(r.size());
    int cc = rr ? static_cast<int>(r[0].size()) : 0;
    FpMat m(p, rr, cc);
    for (int i = 0; i < rr; ++i) {
        if (static_cast<int>(r[i].size()) != cc) throw Error(Errc::DimensionMismatch, "ragged matrix rows");
        for (int j = 0; j < cc; ++j) m(i, j) = mod_p(r[i][j], p);
    }
    return m;
}

FpMat FpMat::operator*(const FpMat& o) const {
    if (cols != o.rows || p != o.p) throw Error(Errc::DimensionMismatch, "matrix product shape mismatch");
    FpMat r(p, rows, o.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            int x = (*this)(i, k);
            if (!x) continue;
            for (int j = 0; j < o.cols; ++j) r(i, j) = (r(i, j) + x * o(k, j)) % p;
        }
    return r;
}

FpMat FpMat::operator+(const FpMat& o) const {
    if (rows != o.rows || cols != o.cols) throw Error(Errc::DimensionMismatch, "matrix sum shape mismatch");
    FpMat r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = (a[i] + o.a[i]) % p;
    return r;
}

FpMat FpMat::operator-(const FpMat& o) const {
    if (rows != o.rows || cols != o.cols) throw Error(Errc::DimensionMismatch, "matrix difference shape mismatch");
    FpMat r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = mod_p(a[i] - o.a[i], p);
    return r;
}

FpMat FpMat::scaled(int c) const {
    FpMat r = *this;
    c = mod_p(c, p);
    for (int& x : r.a) x = x * c % p;
    return r;
}

FpMat FpMat::transpose() const {
    FpMat r(p, cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
    return r;
}

std::vector<int> FpMat::apply(const std::vector<int>& v) const {
    if (static_cast<int>(v.size()) != cols) throw Error(Errc::DimensionMismatch, "vector length mismatch");
    std::vector<int> r(rows, 0);
    for (int i = 0; i < rows; ++i) {
        long long s = 0;
        for (int j = 0; j < cols; ++j) s += (*this)(i, j) * v[j];
        r[i] = mod_p(s, p);
    }
    return r;
}

std::vector<int> FpMat::col(int j) const {
    std::vector<int> r(rows);
    for (int i = 0; i < rows; ++i) r[i] = (*this)(i, j);
    return r;
}

std::vector<int> FpMat::row(int i) const {
    return std::vector<int>(a.begin() + static_cast<long>(i) * cols, a.begin() + static_cast<long>(i + 1) * cols);
}

bool FpMat::is_identity() const {
    if (rows != cols) return false;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

bool FpMat::is_zero() const {
    for (int x : a)
        if (x) return false;
    return true;
}

std::string FpMat::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows; ++i) {
        os << (i ? ";" : "");
        for (int j = 0; j < cols; ++j) os << (j ? "," : "") << (*this)(i, j);
    }
    os << "]";
    return os.str();
}

FpMat hcat(const FpMat& a, const FpMat& b) {
    if (a.rows != b.rows) throw Error(Errc::DimensionMismatch, "hcat row mismatch");
    FpMat r(a.p, a.rows, a.cols + b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) r(i, j) = a(i, j);
        for (int j = 0; j < b.cols; ++j) r(i, a.cols + j) = b(i, j);
    }
    return r;
}

FpMat from_columns(int p, int n, const std::vector<std::vector<int>>& cols) {
    FpMat r(p, n, static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < n; ++i) r(i, static_cast<int>(j)) = mod_p(cols[j][i], p);
    return r;
}

// In-place reduced row echelon form; returns pivot columns.
static std::vector<int> rref(FpMat& m) {
    const int p = m.p;
    std::vector<int> piv;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int sel = -1;
        for (int i = r; i < m.rows; ++i)
            if (m(i, c)) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m(sel, j), m(r, j));
        int iv = inv_mod(m(r, c), p);
        for (int j = 0; j < m.cols; ++j) m(r, j) = m(r, j) * iv % p;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || !m(i, c)) continue;
            int f = m(i, c);
            for (int j = 0; j < m.cols; ++j) m(i, j) = mod_p(m(i, j) - f * m(r, j), p);
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

int det(const FpMat& m0) {
    if (m0.rows != m0.cols) throw Error(Errc::DimensionMismatch, "det of non-square matrix");
    FpMat m = m0;
    const int p = m.p, n = m.rows;
    long long d = 1;
    for (int c = 0; c < n; ++c) {
        int sel = -1;
        for (int i = c; i < n; ++i)
            if (m(i, c)) {
                sel = i;
                break;
            }
        if (sel < 0) return 0;
        if (sel != c) {
            for (int j = 0; j < n; ++j) std::swap(m(sel, j), m(c, j));
            d = mod_p(-d, p);
        }
        d = d * m(c, c) % p;
        int iv = inv_mod(m(c, c), p);
        for (int i = c + 1; i < n; ++i) {
            if (!m(i, c)) continue;
            int f = m(i, c) * iv % p;
            for (int j = c; j < n; ++j) m(i, j) = mod_p(m(i, j) - f * m(c, j), p);
        }
    }
    return static_cast<int>(d);
}

int rank(const FpMat& m0) {
    FpMat m = m0;
    return static_cast<int>(rref(m).size());
}

FpMat inverse(const FpMat& m) {
    if (m.rows != m.cols) throw Error(Errc::DimensionMismatch, "inverse of non-square matrix");
    const int n = m.rows;
    FpMat aug = hcat(m, FpMat::identity(m.p, n));
    auto piv = rref(aug);
    if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) throw Error(Errc::ZeroElement, "singular matrix");
    FpMat r(m.p, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
    return r;
}

FpMat kernel(const FpMat& m0) {
    FpMat m = m0;
    auto piv = rref(m);
    std::vector<bool> is_piv(m.cols, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<std::vector<int>> basis;
    for (int f = 0; f < m.cols; ++f) {
        if (is_piv[f]) continue;
        std::vector<int> v(m.cols, 0);
        v[f] = 1;
        for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = mod_p(-m(static_cast<int>(r), f), m.p);
        basis.push_back(v);
    }
    return from_columns(m.p, m.cols, basis);
}

FpMat column_space(const FpMat& m) {
    FpMat t = m.transpose();
    auto piv = rref(t);
    std::vector<std::vector<int>> cols;
    for (size_t r = 0; r < piv.size(); ++r) cols.push_back(t.row(static_cast<int>(r)));
    return from_columns(m.p, m.rows, cols);
}

bool solve(const FpMat& m, const std::vector<int>& b, std::vector<int>& x) {
    FpMat bb(m.p, m.rows, 1);
    for (int i = 0; i < m.rows; ++i) bb(i, 0) = mod_p(b[i], m.p);
    FpMat aug = hcat(m, bb);
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == m.cols) return false;
    x.assign(m.cols, 0);
    for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(static_cast<int>(r), m.cols);
    return true;
}

FpMat mat_pow(const FpMat& m, long long e) {
    if (e < 0) return mat_pow(inverse(m), -e);
    FpMat r = FpMat::identity(m.p, m.rows), b = m;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

long long mat_order(const FpMat& m, long long limit) {
    if (det(m) == 0) throw Error(Errc::NotFiniteOrder, "singular matrix has no finite order");
    FpMat cur = m;
    for (long long n = 1; n <= limit; ++n) {
        if (cur.is_identity()) return n;
        cur = cur * m;
    }
    throw Error(Errc::NotFiniteOrder, "order exceeds limit");
}

Poly charpoly(const FpMat& m) {
    // Faddeev-free approach valid in any characteristic: Hessenberg reduction
    if (m.rows != m.cols) throw Error(Errc::DimensionMismatch, "charpoly of non-square matrix");
    const int n = m.rows, p = m.p;
    FpMat h = m;
    for (int c = 0; c + 2 <= n; ++c) {
        int sel = -1;
        for (int i = c + 1; i < n; ++i)
            if (h(i, c)) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != c + 1) {
            for (int j = 0; j < n; ++j) std::swap(h(sel, j), h(c + 1, j));
            for (int i = 0; i < n; ++i) std::swap(h(i, sel), h(i, c + 1));
        }
        int iv = inv_mod(h(c + 1, c), p);
        for (int i = c + 2; i < n; ++i) {
            if (!h(i, c)) continue;
            int f = h(i, c) * iv % p;
            for (int j = 0; j < n; ++j) h(i, j) = mod_p(h(i, j) - f * h(c + 1, j), p);
            for (int k = 0; k < n; ++k) h(k, c + 1) = (h(k, c + 1) + f * h(k, i)) % p;
        }
    }
    // recurrence for characteristic polynomials of leading principal blocks
    std::vector<Poly> P(n + 1);
    P[0] = Poly{1};
    for (int k = 1; k <= n; ++k) {
        Poly xm{mod_p(-h(k - 1, k - 1), p), 1};
        P[k] = poly::mul(xm, P[k - 1], p);
        long long prod = 1;
        for (int i = 1; i < k; ++i) {
            prod = prod * h(k - i, k - i - 1) % p;
            if (prod == 0) break;
            int coef = static_cast<int>(prod * h(k - i - 1, k - 1) % p);
            P[k] = poly::sub(P[k], poly::mul(Poly{coef}, P[k - i - 1], p), p);
        }
    }
    Poly r = P[n];
    r.resize(n + 1, 0);
    return r;
}

int dot(const std::vector<int>& u, const std::vector<int>& v, int p) {
    long long s = 0;
    for (size_t i = 0; i < u.size(); ++i) s += static_cast<long long>(u[i]) * v[i];
    return mod_p(s, p);
}

FpMat semilinear_matrix(const FieldElem& c, int j) {
    FieldDesc f = c.F;
    const int k = f->degree();
    FpMat m(f->p(), k, k);
    int basis = 1;
    for (int col = 0; col < k; ++col) {
        int img = f->mul(c.v, f->frob(basis, j));
        auto co = f->coeffs(img);
        for (int i = 0; i < k; ++i) m(i, col) = co[i];
        basis *= f->p();
    }
    return m;
}

FpMat mult_matrix(const FieldElem& a) { return semilinear_matrix(a, 0); }

FpMat frob_matrix(FieldDesc f, int j) { return semilinear_matrix(FieldElem::one(f), j); }

}  // namespace wc
