#include "weilchar/ffield.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace wc {

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

int mod_p(long long a, int p) {
    long long r = a % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

int inv_mod(int a, int p) {
    a = mod_p(a, p);
    if (a == 0) throw Error(Errc::ZeroElement, "inverse of 0 mod p");
    int r = 1, e = p - 2, b = a;
    while (e > 0) {
        if (e & 1) r = static_cast<int>(1LL * r * b % p);
        b = static_cast<int>(1LL * b * b % p);
        e >>= 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Polynomials over F_p

namespace poly {

Poly trim(Poly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

int degree(const Poly& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (a[i] != 0) return i;
    return -1;
}

Poly add(const Poly& a, const Poly& b, int p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % p;
    return trim(r);
}

Poly sub(const Poly& a, const Poly& b, int p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = mod_p(r[i] - b[i], p);
    return trim(r);
}

Poly mul(const Poly& a, const Poly& b, int p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    return trim(r);
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, int p) {
    Poly r = trim(a);
    Poly bb = trim(b);
    int db = degree(bb);
    if (db < 0) throw Error(Errc::ZeroElement, "polynomial division by zero");
    int lead_inv = inv_mod(bb[db], p);
    int da = degree(r);
    if (da < db) return {Poly{}, r};
    Poly q(da - db + 1, 0);
    for (int i = da; i >= db; --i) {
        int c = static_cast<int>(1LL * r[i] * lead_inv % p);
        if (c == 0) continue;
        q[i - db] = c;
        for (int j = 0; j <= db; ++j) r[i - db + j] = mod_p(r[i - db + j] - 1LL * c * bb[j], p);
    }
    return {trim(q), trim(r)};
}

Poly mod(const Poly& a, const Poly& b, int p) { return divmod(a, b, p).second; }

Poly gcd(Poly a, Poly b, int p) {
    a = trim(a);
    b = trim(b);
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = b;
        b = r;
    }
    if (a.empty()) return a;
    int li = inv_mod(a.back(), p);
    for (int& c : a) c = static_cast<int>(1LL * c * li % p);
    return a;
}

Poly powmod(const Poly& a, std::uint64_t e, const Poly& m, int p) {
    Poly result{1};
    Poly base = mod(a, m, p);
    while (e > 0) {
        if (e & 1) result = mod(mul(result, base, p), m, p);
        base = mod(mul(base, base, p), m, p);
        e >>= 1;
    }
    return result;
}

static Poly x_pow_p_iter(int j, const Poly& f, int p) {
    // X^(p^j) mod f by repeated p-th powers
    Poly x{0, 1};
    Poly r = mod(x, f, p);
    for (int i = 0; i < j; ++i) r = powmod(r, static_cast<std::uint64_t>(p), f, p);
    return r;
}

bool is_irreducible(const Poly& f_in, int p) {
    Poly f = trim(f_in);
    int k = degree(f);
    if (k <= 0) return false;
    if (k == 1) return true;
    Poly x{0, 1};
    if (!sub(x_pow_p_iter(k, f, p), x, p).empty()) return false;
    for (int r = 2; r <= k; ++r) {
        if (k % r != 0 || !is_prime(r)) continue;
        Poly h = sub(x_pow_p_iter(k / r, f, p), x, p);
        Poly g = gcd(f, h, p);
        if (degree(g) != 0) return false;
    }
    return true;
}

Poly smallest_irreducible(int p, int k) {
    long long n = ipow(p, k);
    for (long long code = 0; code < n; ++code) {
        Poly f(k + 1, 0);
        long long c = code;
        for (int i = 0; i < k; ++i) {
            f[i] = static_cast<int>(c % p);
            c /= p;
        }
        f[k] = 1;
        if (is_irreducible(f, p)) return f;
    }
    throw Error(Errc::InvalidDatum, "no irreducible polynomial found");
}

}  // namespace poly

// ---------------------------------------------------------------------------
// Field

Field::Field(int p, int k) : p_(p), k_(k), q_(static_cast<int>(ipow(p, k))) {
    pw_.resize(k + 1);
    pw_[0] = 1;
    for (int i = 1; i <= k; ++i) pw_[i] = pw_[i - 1] * p;
    modulus_ = poly::smallest_irreducible(p, k);

    // find the smallest primitive element and fill log/exp tables
    const int n = q_ - 1;
    std::vector<int> primes;
    for (int d = 2; d <= n; ++d)
        if (n % d == 0 && is_prime(d)) primes.push_back(d);
    auto slow_pow = [&](int a, long long e) {
        int r = 1;
        while (e > 0) {
            if (e & 1) r = slow_mul(r, a);
            a = slow_mul(a, a);
            e >>= 1;
        }
        return r;
    };
    int gen = -1;
    for (int a = 1; a < q_ && gen < 0; ++a) {
        bool prim = true;
        for (int r : primes)
            if (slow_pow(a, n / r) == 1) {
                prim = false;
                break;
            }
        if (prim) gen = a;
    }
    if (q_ == 2) gen = 1;
    exp_.assign(n, 0);
    log_.assign(q_, -1);
    int cur = 1;
    for (int i = 0; i < n; ++i) {
        exp_[i] = cur;
        log_[cur] = i;
        cur = slow_mul(cur, gen);
    }
}

std::string Field::name() const { return "GF(" + std::to_string(p_) + "^" + std::to_string(k_) + ")"; }

int Field::slow_mul(int a, int b) const {
    Poly pa(k_), pb(k_);
    for (int i = 0; i < k_; ++i) {
        pa[i] = (a / pw_[i]) % p_;
        pb[i] = (b / pw_[i]) % p_;
    }
    Poly r = poly::mod(poly::mul(poly::trim(pa), poly::trim(pb), p_), modulus_, p_);
    int code = 0;
    for (size_t i = 0; i < r.size(); ++i) code += r[i] * pw_[i];
    return code;
}

int Field::add(int a, int b) const {
    int r = 0;
    for (int i = 0; i < k_; ++i) {
        int d = (a % p_ + b % p_) % p_;
        r += d * pw_[i];
        a /= p_;
        b /= p_;
    }
    return r;
}

int Field::neg(int a) const {
    int r = 0;
    for (int i = 0; i < k_; ++i) {
        int d = (p_ - a % p_) % p_;
        r += d * pw_[i];
        a /= p_;
    }
    return r;
}

int Field::sub(int a, int b) const { return add(a, neg(b)); }

int Field::mul(int a, int b) const {
    if (a == 0 || b == 0) return 0;
    int e = log_[a] + log_[b];
    const int n = q_ - 1;
    if (e >= n) e -= n;
    return exp_[e];
}

int Field::exp(long long e) const {
    const long long n = q_ - 1;
    long long r = e % n;
    if (r < 0) r += n;
    return exp_[r];
}

int Field::inv(int a) const {
    if (a == 0) throw Error(Errc::ZeroElement, "inverse of zero in " + name());
    return exp(-static_cast<long long>(log_[a]));
}

int Field::pow(int a, long long e) const {
    if (a == 0) {
        if (e == 0) return 1;
        if (e < 0) throw Error(Errc::ZeroElement, "negative power of zero");
        return 0;
    }
    const long long n = q_ - 1;
    long long ee = e % n;
    if (ee < 0) ee += n;
    return exp(static_cast<long long>(log_[a]) * ee % n);
}

int Field::frob(int a, int j) const {
    j %= k_;
    if (j < 0) j += k_;
    return pow(a, ipow(p_, j));
}

int Field::from_coeffs(const std::vector<int>& c) const {
    int r = 0;
    for (int i = 0; i < k_ && i < static_cast<int>(c.size()); ++i) r += mod_p(c[i], p_) * pw_[i];
    return r;
}

std::vector<int> Field::coeffs(int a) const {
    std::vector<int> c(k_);
    for (int i = 0; i < k_; ++i) {
        c[i] = a % p_;
        a /= p_;
    }
    return c;
}

int Field::embed_from(int d, int a) const {
    auto it = emb_.find(d);
    if (it == emb_.end()) throw Error(Errc::NotASubfield, "degree " + std::to_string(d) + " does not divide " + std::to_string(k_));
    return it->second.at(a);
}

int Field::restrict_to(int d, int a) const {
    auto it = back_.find(d);
    if (it == back_.end()) throw Error(Errc::NotASubfield, "degree " + std::to_string(d) + " does not divide " + std::to_string(k_));
    return it->second.at(a);
}

int Field::embedding_root(int d) const { return emb_root_.at(d); }

void Field::build_embeddings() {
    for (int d = 1; d <= k_; ++d) {
        if (k_ % d != 0) continue;
        FieldDesc sub = (d == k_) ? this : gf(p_, d);
        std::vector<int> table(sub->order());
        int root = -1;
        if (d == k_) {
            for (int a = 0; a < q_; ++a) table[a] = a;
            root = (k_ > 1) ? p_ : 0;
        } else if (d == 1) {
            for (int a = 0; a < p_; ++a) table[a] = a;
            root = 0;
        } else {
            // candidate images of the generator t of the subfield: roots of its modulus
            const Poly& m = sub->modulus();
            auto eval = [&](int x) {
                int r = 0;
                for (int i = static_cast<int>(m.size()) - 1; i >= 0; --i) r = add(mul(r, x), m[i]);
                return r;
            };
            for (int x = 0; x < q_ && root < 0; ++x) {
                if (eval(x) != 0) continue;
                std::vector<int> cand(sub->order());
                for (int a = 0; a < sub->order(); ++a) {
                    std::vector<int> c = sub->coeffs(a);
                    int r = 0, xp = 1;
                    for (int i = 0; i < d; ++i) {
                        r = add(r, mul(from_int(c[i]), xp));
                        xp = mul(xp, x);
                    }
                    cand[a] = r;
                }
                // compatibility with every intermediate subfield already embedded
                bool ok = true;
                for (auto& [dd, tab] : emb_) {
                    if (dd == 1 || d % dd != 0) continue;
                    int t_small = p_;  // generator t of GF(p^dd)
                    int via_sub = cand[sub->embed_from(dd, t_small)];
                    if (via_sub != tab[t_small]) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    root = x;
                    table = cand;
                }
            }
            if (root < 0) throw Error(Errc::NotASubfield, "no compatible embedding found");
        }
        std::vector<int> back(q_, -1);
        for (int a = 0; a < sub->order(); ++a) back[table[a]] = a;
        emb_[d] = table;
        back_[d] = back;
        emb_root_[d] = root;
    }
}

FieldDesc gf(int p, int k) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<Field>> registry;
    if (p < 3 || !is_prime(p)) throw Error(Errc::NotPrime, "p=" + std::to_string(p) + " must be an odd prime");
    if (k < 1) throw Error(Errc::DegreeMismatch, "degree must be positive");
    if (ipow(p, k) > kMaxFieldOrder)
        throw Error(Errc::FieldTooLarge, std::to_string(p) + "^" + std::to_string(k) + " exceeds the cap of " + std::to_string(kMaxFieldOrder));
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = registry.find({p, k});
        if (it != registry.end()) return it->second.get();
    }
    for (int d = 1; d < k; ++d)
        if (k % d == 0) gf(p, d);
    std::unique_ptr<Field> f(new Field(p, k));
    f->build_embeddings();
    std::lock_guard<std::mutex> lock(mu);
    auto it = registry.find({p, k});
    if (it != registry.end()) return it->second.get();
    FieldDesc out = f.get();
    registry.emplace(std::make_pair(p, k), std::move(f));
    return out;
}

// ---------------------------------------------------------------------------
// FieldElem

static void same_field(const FieldElem& a, const FieldElem& b) {
    if (a.F != b.F) throw Error(Errc::SpaceMismatch, "field elements from different fields");
}

FieldElem FieldElem::operator+(const FieldElem& o) const { same_field(*this, o); return {F, F->add(v, o.v)}; }
FieldElem FieldElem::operator-(const FieldElem& o) const { same_field(*this, o); return {F, F->sub(v, o.v)}; }
FieldElem FieldElem::operator-() const { return {F, F->neg(v)}; }
FieldElem FieldElem::operator*(const FieldElem& o) const { same_field(*this, o); return {F, F->mul(v, o.v)}; }
FieldElem FieldElem::operator/(const FieldElem& o) const { same_field(*this, o); return {F, F->mul(v, F->inv(o.v))}; }
FieldElem FieldElem::inv() const { return {F, F->inv(v)}; }
FieldElem FieldElem::pow(long long e) const { return {F, F->pow(v, e)}; }
FieldElem FieldElem::frob(int j) const { return {F, F->frob(v, j)}; }

long long FieldElem::order() const {
    if (v == 0) throw Error(Errc::ZeroElement, "order of zero");
    long long n = F->order() - 1;
    return n / std::gcd(n, static_cast<long long>(F->log(v)));
}

std::string FieldElem::str() const {
    std::ostringstream os;
    os << F->p() << "^" << F->degree() << ":";
    auto c = F->coeffs(v);
    for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    return os.str();
}

FieldElem parse_field_elem(const std::string& s) {
    auto caret = s.find('^');
    auto colon = s.find(':');
    if (caret == std::string::npos || colon == std::string::npos || colon < caret)
        throw Error(Errc::ParseError, "bad field element '" + s + "'");
    int p, k;
    try {
        p = std::stoi(s.substr(0, caret));
        k = std::stoi(s.substr(caret + 1, colon - caret - 1));
    } catch (...) {
        throw Error(Errc::ParseError, "bad field element '" + s + "'");
    }
    FieldDesc f = gf(p, k);
    std::vector<int> c;
    std::stringstream ss(s.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            c.push_back(std::stoi(tok));
        } catch (...) {
            throw Error(Errc::ParseError, "bad coefficient in '" + s + "'");
        }
    }
    if (static_cast<int>(c.size()) != k) throw Error(Errc::ParseError, "expected " + std::to_string(k) + " coefficients in '" + s + "'");
    return {f, f->from_coeffs(c)};
}

std::vector<FieldElem> elements(FieldDesc f) {
    std::vector<FieldElem> r;
    r.reserve(f->order());
    for (int a = 0; a < f->order(); ++a) r.emplace_back(f, a);
    return r;
}

std::vector<FieldElem> nonzero_elements(FieldDesc f) {
    std::vector<FieldElem> r;
    for (int a = 1; a < f->order(); ++a) r.emplace_back(f, a);
    return r;
}

FieldElem embed(const FieldElem& x, FieldDesc big) {
    if (x.F == big) return x;
    if (big->p() != x.F->p() || big->degree() % x.F->degree() != 0)
        throw Error(Errc::NotASubfield, x.F->name() + " is not a subfield of " + big->name());
    return {big, big->embed_from(x.F->degree(), x.v)};
}

FieldElem restrict_to(const FieldElem& x, FieldDesc sub) {
    if (x.F == sub) return x;
    if (sub->p() != x.F->p() || x.F->degree() % sub->degree() != 0)
        throw Error(Errc::NotASubfield, sub->name() + " is not a subfield of " + x.F->name());
    int c = x.F->restrict_to(sub->degree(), x.v);
    if (c < 0) throw Error(Errc::NotInSubfield, x.str() + " does not lie in " + sub->name());
    return {sub, c};
}

bool lies_in(const FieldElem& x, FieldDesc sub) {
    if (sub->p() != x.F->p() || x.F->degree() % sub->degree() != 0) return false;
    return x.F->restrict_to(sub->degree(), x.v) >= 0;
}

static int rel_index(FieldDesc big, FieldDesc sub) {
    if (sub->p() != big->p() || big->degree() % sub->degree() != 0)
        throw Error(Errc::NotASubfield, sub->name() + " is not a subfield of " + big->name());
    return big->degree() / sub->degree();
}

FieldElem trace_to(const FieldElem& x, FieldDesc sub) {
    int n = rel_index(x.F, sub);
    int d = sub->degree();
    int acc = 0;
    for (int i = 0; i < n; ++i) acc = x.F->add(acc, x.F->frob(x.v, d * i));
    return restrict_to(FieldElem(x.F, acc), sub);
}

FieldElem norm_to(const FieldElem& x, FieldDesc sub) {
    int n = rel_index(x.F, sub);
    int d = sub->degree();
    int acc = 1;
    for (int i = 0; i < n; ++i) acc = x.F->mul(acc, x.F->frob(x.v, d * i));
    return restrict_to(FieldElem(x.F, acc), sub);
}

int sgn_mult(const FieldElem& x) {
    if (x.is_zero()) throw Error(Errc::ZeroElement, "sgn of zero");
    FieldElem r = x.pow((x.F->order() - 1) / 2);
    return r.is_one() ? 1 : -1;
}

int sgn_norm_one(const FieldElem& x, FieldDesc sub) {
    if (rel_index(x.F, sub) != 2) throw Error(Errc::WrongIndex, "sgn on k^1 needs a quadratic extension");
    if (!norm_to(x, sub).is_one()) throw Error(Errc::NotNormOne, x.str() + " has norm different from 1");
    FieldElem r = x.pow((sub->order() + 1) / 2);
    if (r.is_one()) return 1;
    if (r == -FieldElem::one(x.F)) return -1;
    throw Error(Errc::NotNormOne, "quadratic character value not +-1");
}

std::vector<FieldElem> nth_roots(const FieldElem& x, int n) {
    if (n <= 0 || n % x.F->p() == 0) throw Error(Errc::NotCoprimeToP, "n=" + std::to_string(n) + " is not coprime to p");
    std::vector<FieldElem> r;
    if (x.is_zero()) return {x};
    for (int a = 1; a < x.F->order(); ++a)
        if (x.F->pow(a, n) == x.v) r.emplace_back(x.F, a);
    return r;
}

FieldDesc half_field(FieldDesc f) {
    if (f->degree() % 2 != 0) throw Error(Errc::WrongIndex, f->name() + " has odd degree");
    return gf(f->p(), f->degree() / 2);
}

std::vector<FieldElem> norm_one_group(FieldDesc f) {
    FieldDesc h = half_field(f);
    std::vector<FieldElem> r;
    for (auto& x : nonzero_elements(f))
        if (norm_to(x, h).is_one()) r.push_back(x);
    return r;
}

}  // namespace wc
