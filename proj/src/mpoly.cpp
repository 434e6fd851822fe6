#include "cms2/mpoly.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <sstream>

namespace cms2 {

namespace {
constexpr unsigned kFieldBits = 21;
constexpr std::uint64_t kFieldMask = (std::uint64_t(1) << kFieldBits) - 1;
} // namespace

MPoly::MPoly(long c) {
    if (c != 0) terms_.push_back({0, mpz_class(c)});
}

MPoly::MPoly(const mpz_class& c) {
    if (c != 0) terms_.push_back({0, c});
}

std::uint64_t MPoly::pack(unsigned ea, unsigned e2, unsigned e3) {
    assert(ea <= kFieldMask && e2 <= kFieldMask && e3 <= kFieldMask);
    return (std::uint64_t(ea) << (2 * kFieldBits)) | (std::uint64_t(e2) << kFieldBits) |
           std::uint64_t(e3);
}

unsigned MPoly::exponent(std::uint64_t key, Var v) {
    return unsigned((key >> ((2 - int(v)) * kFieldBits)) & kFieldMask);
}

MPoly MPoly::variable(Var v, unsigned exp) {
    MPoly p;
    if (exp > 0) {
        unsigned e[3] = {0, 0, 0};
        e[int(v)] = exp;
        p.terms_.push_back({pack(e[0], e[1], e[2]), mpz_class(1)});
    } else {
        p.terms_.push_back({0, mpz_class(1)});
    }
    return p;
}

MPoly MPoly::monomial(const mpz_class& c, unsigned ea, unsigned e2, unsigned e3) {
    MPoly p;
    if (c != 0) p.terms_.push_back({pack(ea, e2, e3), c});
    return p;
}

bool MPoly::is_one() const {
    return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == 1;
}

bool MPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0);
}

unsigned MPoly::degree(Var v) const {
    unsigned d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, exponent(k, v));
    return d;
}

const mpz_class& MPoly::leading_coeff() const {
    static const mpz_class zero(0);
    return terms_.empty() ? zero : terms_.front().second;
}

void MPoly::normalize_sorted() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& x, const Term& y) { return x.first > y.first; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms_.size();) {
        std::uint64_t k = terms_[i].first;
        mpz_class sum = std::move(terms_[i].second);
        std::size_t j = i + 1;
        while (j < terms_.size() && terms_[j].first == k) {
            sum += terms_[j].second;
            ++j;
        }
        if (sum != 0) terms_[out++] = {k, std::move(sum)};
        i = j;
    }
    terms_.resize(out);
}

void MPolyBuilder::add(std::uint64_t key, const mpz_class& c) {
    if (c != 0) acc_.push_back({key, c});
}

MPoly MPolyBuilder::finish() {
    MPoly p;
    p.terms_ = std::move(acc_);
    p.normalize_sorted();
    acc_.clear();
    return p;
}

MPoly MPoly::operator-() const {
    MPoly r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

MPoly MPoly::operator+(const MPoly& o) const {
    MPoly r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        if (terms_[i].first > o.terms_[j].first) {
            r.terms_.push_back(terms_[i++]);
        } else if (terms_[i].first < o.terms_[j].first) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            mpz_class s = terms_[i].second + o.terms_[j].second;
            if (s != 0) r.terms_.push_back({terms_[i].first, std::move(s)});
            ++i;
            ++j;
        }
    }
    for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
    for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
    return r;
}

MPoly MPoly::operator-(const MPoly& o) const { return *this + (-o); }

MPoly MPoly::operator*(const MPoly& o) const {
    if (is_zero() || o.is_zero()) return MPoly();
    MPolyBuilder b;
    for (const auto& [k1, c1] : terms_)
        for (const auto& [k2, c2] : o.terms_) b.add(k1 + k2, c1 * c2);
    return b.finish();
}

MPoly MPoly::mul_mpz(const mpz_class& c) const {
    if (c == 0) return MPoly();
    MPoly r = *this;
    for (auto& [k, v] : r.terms_) v *= c;
    return r;
}

MPoly MPoly::pow(unsigned n) const {
    MPoly r(1);
    MPoly base = *this;
    while (n) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

bool MPoly::div_exact(const MPoly& d, MPoly& q) const {
    assert(!d.is_zero());
    MPoly rem = *this;
    MPolyBuilder qb;
    const std::uint64_t dk = d.terms_.front().first;
    const mpz_class& dc = d.terms_.front().second;
    while (!rem.is_zero()) {
        const std::uint64_t rk = rem.terms_.front().first;
        const mpz_class& rc = rem.terms_.front().second;
        // per-variable exponent subtraction must not underflow
        for (int v = 0; v < 3; ++v)
            if (exponent(rk, Var(v)) < exponent(dk, Var(v))) return false;
        if (rc % dc != 0) return false;
        std::uint64_t mk = rk - dk;
        mpz_class mc = rc / dc;
        qb.add(mk, mc);
        MPoly t;
        t.terms_.push_back({mk, std::move(mc)});
        rem = rem - d * t;
    }
    q = qb.finish();
    return true;
}

mpz_class MPoly::content() const {
    mpz_class g(0);
    for (const auto& [k, c] : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

MPoly MPoly::divide_content(const mpz_class& c) const {
    assert(c != 0);
    MPoly r = *this;
    for (auto& [k, v] : r.terms_) {
        assert(v % c == 0);
        v /= c;
    }
    return r;
}

namespace {

// univariate view of p in variable v: degree -> coefficient poly in the others
std::map<unsigned, MPoly> uni_view(const MPoly& p, MPoly::Var v) {
    std::map<unsigned, MPoly> out;
    unsigned shift = (2 - int(v)) * 21;
    std::uint64_t mask = ~(std::uint64_t((1 << 21) - 1) << shift);
    std::map<unsigned, MPolyBuilder> bs;
    for (const auto& [k, c] : p.terms())
        bs[MPoly::exponent(k, v)].add(k & mask, c);
    for (auto& [d, b] : bs) out[d] = b.finish();
    return out;
}

MPoly from_uni_view(const std::map<unsigned, MPoly>& view, MPoly::Var v) {
    MPolyBuilder b;
    unsigned e[3];
    for (const auto& [d, coef] : view) {
        for (const auto& [k, c] : coef.terms()) {
            e[0] = MPoly::exponent(k, MPoly::VarA);
            e[1] = MPoly::exponent(k, MPoly::VarG2);
            e[2] = MPoly::exponent(k, MPoly::VarG3);
            e[int(v)] += d;
            b.add(MPoly::pack(e[0], e[1], e[2]), c);
            e[int(v)] = 0; // reset; exponent() recomputed next iteration
        }
    }
    return b.finish();
}

// multivariate content of p wrt variable v (gcd of univariate-view coefficients)
MPoly poly_content(const std::map<unsigned, MPoly>& view) {
    MPoly g;
    for (const auto& [d, c] : view) {
        g = MPoly::gcd(g, c);
        if (g.is_one()) break;
    }
    return g;
}

// pseudo-remainder of u by w (both primitive univariate views)
std::map<unsigned, MPoly> pseudo_rem(std::map<unsigned, MPoly> u,
                                     const std::map<unsigned, MPoly>& w) {
    const unsigned dw = w.rbegin()->first;
    const MPoly& lw = w.rbegin()->second;
    while (!u.empty() && u.rbegin()->first >= dw) {
        unsigned du = u.rbegin()->first;
        MPoly lu = u.rbegin()->second;
        // u := lw * u - lu * x^(du-dw) * w
        std::map<unsigned, MPoly> nu;
        for (auto& [d, c] : u) {
            MPoly t = c * lw;
            if (!t.is_zero()) nu[d] = std::move(t);
        }
        for (const auto& [d, c] : w) {
            unsigned dd = d + du - dw;
            MPoly t = c * lu;
            auto it = nu.find(dd);
            if (it == nu.end()) {
                t = -t;
                if (!t.is_zero()) nu[dd] = std::move(t);
            } else {
                it->second = it->second - t;
                if (it->second.is_zero()) nu.erase(it);
            }
        }
        nu.erase(du);
        u = std::move(nu);
    }
    return u;
}

} // namespace

MPoly MPoly::gcd(const MPoly& x, const MPoly& y) {
    if (x.is_zero()) {
        // normalize sign so gcd is canonical
        if (y.is_zero()) return MPoly();
        return y.leading_coeff() < 0 ? -y : y;
    }
    if (y.is_zero()) return gcd(y, x);

    // integer content and monomial factor
    mpz_class cx = x.content(), cy = y.content();
    mpz_class cg;
    mpz_gcd(cg.get_mpz_t(), cx.get_mpz_t(), cy.get_mpz_t());
    MPoly px = x.divide_content(cx), py = y.divide_content(cy);

    // per-variable minimum exponents
    unsigned minx[3] = {~0u, ~0u, ~0u}, miny[3] = {~0u, ~0u, ~0u};
    for (const auto& [k, c] : px.terms_)
        for (int v = 0; v < 3; ++v) minx[v] = std::min(minx[v], exponent(k, Var(v)));
    for (const auto& [k, c] : py.terms_)
        for (int v = 0; v < 3; ++v) miny[v] = std::min(miny[v], exponent(k, Var(v)));
    unsigned shared[3];
    for (int v = 0; v < 3; ++v) shared[v] = std::min(minx[v], miny[v]);
    std::uint64_t sharedKey = pack(shared[0], shared[1], shared[2]);
    auto strip = [](MPoly& p, const unsigned m[3]) {
        if (m[0] == 0 && m[1] == 0 && m[2] == 0) return;
        std::uint64_t k0 = pack(m[0], m[1], m[2]);
        for (auto& [k, c] : p.terms_) k -= k0;
    };
    strip(px, minx);
    strip(py, miny);

    // quick paths on the monomial-stripped primitive parts
    MPoly result;
    if (px.is_constant() || py.is_constant()) {
        result = MPoly(1);
    } else if (px == py) {
        result = px.leading_coeff() < 0 ? -px : px;
    } else {
        // pick the lex-highest variable present in both
        Var main = VarA;
        bool found = false;
        for (int v = 0; v < 3 && !found; ++v)
            if (px.degree(Var(v)) > 0 && py.degree(Var(v)) > 0) {
                main = Var(v);
                found = true;
            }
        if (!found) {
            // disjoint variable sets: gcd of primitive parts is 1
            result = MPoly(1);
        } else {
            auto u = uni_view(px, main);
            auto w = uni_view(py, main);
            MPoly contU = poly_content(u), contW = poly_content(w);
            MPoly contG = gcd(contU, contW);
            auto divAll = [](std::map<unsigned, MPoly>& m, const MPoly& d) {
                for (auto& [deg, c] : m) {
                    MPoly q;
                    bool ok = c.div_exact(d, q);
                    assert(ok);
                    (void)ok;
                    c = std::move(q);
                }
            };
            divAll(u, contU);
            divAll(w, contW);
            if (u.rbegin()->first < w.rbegin()->first) std::swap(u, w);
            // primitive PRS
            while (true) {
                auto r = pseudo_rem(u, w);
                if (r.empty()) break;
                MPoly c = poly_content(r);
                divAll(r, c);
                u = std::move(w);
                w = std::move(r);
                if (w.rbegin()->first == 0) {
                    // gcd of primitive parts is constant
                    w.clear();
                    w[0] = MPoly(1);
                    break;
                }
            }
            MPoly g = from_uni_view(w, main);
            mpz_class gc = g.content();
            g = g.divide_content(gc);
            result = g * contG;
            if (result.leading_coeff() < 0) result = -result;
        }
    }

    // reattach shared monomial and integer content
    MPoly mono;
    mono.terms_.push_back({sharedKey, cg});
    return result * mono;
}

void MPoly::substitute(const bool bound[3], const mpq_class vals[3], MPoly& out,
                       mpz_class& den) const {
    // common denominator: den = prod over bound v of den(v)^maxdeg(v)
    den = 1;
    mpz_class dpow[3] = {1, 1, 1};
    unsigned maxdeg[3] = {0, 0, 0};
    for (int v = 0; v < 3; ++v)
        if (bound[v]) {
            maxdeg[v] = degree(Var(v));
            mpz_class d = vals[v].get_den();
            mpz_class p;
            mpz_pow_ui(p.get_mpz_t(), d.get_mpz_t(), maxdeg[v]);
            den *= p;
        }
    MPolyBuilder b;
    for (const auto& [k, c] : terms_) {
        mpz_class coef = c;
        unsigned e[3] = {exponent(k, VarA), exponent(k, VarG2), exponent(k, VarG3)};
        unsigned ne[3] = {e[0], e[1], e[2]};
        for (int v = 0; v < 3; ++v) {
            if (!bound[v]) continue;
            mpz_class np, dp;
            mpz_pow_ui(np.get_mpz_t(), vals[v].get_num().get_mpz_t(), e[v]);
            mpz_pow_ui(dp.get_mpz_t(), vals[v].get_den().get_mpz_t(), maxdeg[v] - e[v]);
            coef *= np * dp;
            ne[v] = 0;
        }
        b.add(pack(ne[0], ne[1], ne[2]), coef);
    }
    out = b.finish();
}

std::string MPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        mpz_class ac = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? "-" : "+");
        }
        unsigned e[3] = {exponent(k, VarA), exponent(k, VarG2), exponent(k, VarG3)};
        bool needCoef = (ac != 1) || (e[0] == 0 && e[1] == 0 && e[2] == 0);
        if (needCoef) os << ac.get_str();
        static const char* names[3] = {"a", "g2", "g3"};
        bool firstVar = !needCoef;
        for (int v = 0; v < 3; ++v) {
            if (e[v] == 0) continue;
            if (!firstVar || needCoef) os << "*";
            os << names[v];
            if (e[v] > 1) os << "^" << e[v];
            firstVar = false;
        }
    }
    return os.str();
}

std::size_t MPoly::hash() const {
    std::size_t h = 1469598103934665603ull;
    for (const auto& [k, c] : terms_) {
        h ^= std::hash<std::uint64_t>()(k);
        h *= 1099511628211ull;
        h ^= std::hash<long>()(mpz_get_si(c.get_mpz_t()));
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace cms2
