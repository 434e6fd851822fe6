#include "cms2/xipoly.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

#include "cms2/errors.hpp"

namespace cms2 {

XiPoly XiPoly::monomial(unsigned d1, unsigned d2, CoefElem c) {
    XiPoly p;
    if (!c.is_zero()) p.terms_.push_back({key(d1, d2), std::move(c)});
    return p;
}

XiPoly XiPoly::monomial(unsigned d1, unsigned d2, Scalar c) {
    return monomial(d1, d2, CoefElem(std::move(c)));
}

XiPoly XiPoly::xi_form(const Covector& alpha) {
    XiPoly p;
    if (!alpha.c1.is_zero()) p.terms_.push_back({key(1, 0), CoefElem(alpha.c1)});
    if (!alpha.c2.is_zero()) p.terms_.push_back({key(0, 1), CoefElem(alpha.c2)});
    std::sort(p.terms_.begin(), p.terms_.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    return p;
}

unsigned XiPoly::degree() const {
    unsigned d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, e1(k) + e2(k));
    return d;
}

bool XiPoly::is_homogeneous() const {
    if (terms_.empty()) return true;
    unsigned d = e1(terms_[0].first) + e2(terms_[0].first);
    for (const auto& [k, c] : terms_)
        if (e1(k) + e2(k) != d) return false;
    return true;
}

const CoefElem* XiPoly::coeff(unsigned d1, unsigned d2) const {
    Key k = key(d1, d2);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const Term& t, Key kk) { return t.first < kk; });
    if (it != terms_.end() && it->first == k) return &it->second;
    return nullptr;
}

void XiPoly::prune() {
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                [](const Term& t) { return t.second.is_zero(); }),
                 terms_.end());
}

XiPoly XiPoly::operator-() const {
    XiPoly r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

XiPoly XiPoly::operator+(const XiPoly& o) const {
    XiPoly r;
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        if (terms_[i].first < o.terms_[j].first) r.terms_.push_back(terms_[i++]);
        else if (terms_[i].first > o.terms_[j].first) r.terms_.push_back(o.terms_[j++]);
        else {
            CoefElem s = terms_[i].second + o.terms_[j].second;
            if (!s.is_zero()) r.terms_.push_back({terms_[i].first, std::move(s)});
            ++i;
            ++j;
        }
    }
    for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
    for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
    return r;
}

XiPoly XiPoly::operator-(const XiPoly& o) const { return *this + (-o); }

XiPoly XiPoly::operator*(const XiPoly& o) const {
    std::map<Key, CoefElem> acc;
    for (const auto& [k1, c1] : terms_)
        for (const auto& [k2, c2] : o.terms_) {
            Key k = Key(k1 + k2);
            CoefElem prod = c1 * c2;
            auto [it, fresh] = acc.emplace(k, prod);
            if (!fresh) it->second += prod;
        }
    XiPoly r;
    for (auto& [k, c] : acc)
        if (!c.is_zero()) r.terms_.push_back({k, std::move(c)});
    return r;
}

XiPoly XiPoly::scaled(const Scalar& s) const {
    XiPoly r;
    if (s.is_zero()) return r;
    r = *this;
    for (auto& [k, c] : r.terms_) c = c.scaled(s);
    return r;
}

XiPoly XiPoly::coef_mul(const CoefElem& c) const {
    XiPoly r;
    if (c.is_zero()) return r;
    for (const auto& [k, v] : terms_) {
        CoefElem prod = v * c;
        if (!prod.is_zero()) r.terms_.push_back({k, std::move(prod)});
    }
    return r;
}

XiPoly XiPoly::dxi(int d) const {
    XiPoly r;
    std::map<Key, CoefElem> acc;
    for (const auto& [k, c] : terms_) {
        unsigned a = e1(k), b = e2(k);
        if (d == 0 && a > 0) acc[key(a - 1, b)] = c.scaled(Scalar(long(a)));
        if (d == 1 && b > 0) acc[key(a, b - 1)] = c.scaled(Scalar(long(b)));
    }
    for (auto& [k, c] : acc)
        if (!c.is_zero()) r.terms_.push_back({k, std::move(c)});
    return r;
}

XiPoly XiPoly::d_xi_dir(const Covector& alpha) const {
    return dxi(0).scaled(alpha.c1) + dxi(1).scaled(alpha.c2);
}

XiPoly XiPoly::d_theta() const {
    // xi2 d/dxi1 - xi1 d/dxi2
    XiPoly a = dxi(0);
    XiPoly b = dxi(1);
    std::map<Key, CoefElem> acc;
    for (auto& [k, c] : a.terms_) {
        Key kk = key(e1(k), e2(k) + 1);
        auto [it, fresh] = acc.emplace(kk, c);
        if (!fresh) it->second += c;
    }
    for (auto& [k, c] : b.terms_) {
        Key kk = key(e1(k) + 1, e2(k));
        CoefElem nc = -c;
        auto [it, fresh] = acc.emplace(kk, nc);
        if (!fresh) it->second += nc;
    }
    XiPoly r;
    for (auto& [k, c] : acc)
        if (!c.is_zero()) r.terms_.push_back({k, std::move(c)});
    return r;
}

XiPoly XiPoly::mul_xi(const Covector& alpha) const {
    return *this * xi_form(alpha);
}

std::optional<XiPoly> XiPoly::div_xi(const Covector& alpha) const {
    // synthetic division by alpha1 xi1 + alpha2 xi2
    bool useXi2 = !alpha.c2.is_zero();
    const Scalar& lead = useXi2 ? alpha.c2 : alpha.c1;
    std::map<Key, CoefElem> rem;
    for (const auto& [k, c] : terms_) rem.emplace(k, c);
    std::map<Key, CoefElem> q;
    auto ordkey = [&](Key k) {
        return useXi2 ? (unsigned(e2(k)) << 8) | e1(k) : unsigned(k);
    };
    while (!rem.empty()) {
        auto it = std::max_element(rem.begin(), rem.end(), [&](const auto& x, const auto& y) {
            return ordkey(x.first) < ordkey(y.first);
        });
        Key k = it->first;
        unsigned a = e1(k), b = e2(k);
        unsigned le = useXi2 ? b : a;
        if (le == 0) return std::nullopt;
        CoefElem qc = it->second.scaled(lead.inverse());
        Key qk = useXi2 ? key(a, b - 1) : key(a - 1, b);
        auto [qit, fresh] = q.emplace(qk, qc);
        if (!fresh) qit->second += qc;
        unsigned q1 = e1(qk), q2 = e2(qk);
        auto sub = [&](Key kk, const Scalar& c) {
            if (c.is_zero()) return;
            CoefElem delta = qc.scaled(c);
            auto jt = rem.find(kk);
            if (jt == rem.end()) {
                CoefElem nv = -delta;
                if (!nv.is_zero()) rem.emplace(kk, std::move(nv));
            } else {
                jt->second -= delta;
                if (jt->second.is_zero()) rem.erase(jt);
            }
        };
        sub(key(q1 + 1, q2), alpha.c1);
        sub(key(q1, q2 + 1), alpha.c2);
    }
    XiPoly r;
    for (auto& [k, c] : q)
        if (!c.is_zero()) r.terms_.push_back({k, std::move(c)});
    return r;
}

XiPoly XiPoly::div_xi_exact(const Covector& alpha) const {
    auto q = div_xi(alpha);
    if (!q) {
        // recompute the remainder for the error message: restrict to xi_alpha = 0
        throw NotDivisible("of " + to_string() + " by xi_" + alpha.to_string());
    }
    return *q;
}

XiPoly XiPoly::xi_dot_dx() const {
    std::map<Key, CoefElem> acc;
    for (const auto& [k, c] : terms_) {
        for (int d = 0; d < 2; ++d) {
            CoefElem dc = c.dx(d);
            if (dc.is_zero()) continue;
            Key kk = d == 0 ? key(e1(k) + 1, e2(k)) : key(e1(k), e2(k) + 1);
            auto [it, fresh] = acc.emplace(kk, dc);
            if (!fresh) it->second += dc;
        }
    }
    XiPoly r;
    for (auto& [k, c] : acc)
        if (!c.is_zero()) r.terms_.push_back({k, std::move(c)});
    return r;
}

XiPoly XiPoly::dx_dot_dxi() const {
    std::map<Key, CoefElem> acc;
    for (const auto& [k, c] : terms_) {
        unsigned a = e1(k), b = e2(k);
        if (a > 0) {
            CoefElem dc = c.dx(0).scaled(Scalar(long(a)));
            if (!dc.is_zero()) {
                auto [it, fresh] = acc.emplace(key(a - 1, b), dc);
                if (!fresh) it->second += dc;
            }
        }
        if (b > 0) {
            CoefElem dc = c.dx(1).scaled(Scalar(long(b)));
            if (!dc.is_zero()) {
                auto [it, fresh] = acc.emplace(key(a, b - 1), dc);
                if (!fresh) it->second += dc;
            }
        }
    }
    XiPoly r;
    for (auto& [k, c] : acc)
        if (!c.is_zero()) r.terms_.push_back({k, std::move(c)});
    return r;
}

XiPoly XiPoly::laplace_coef() const {
    XiPoly r;
    for (const auto& [k, c] : terms_) {
        CoefElem lc = c.dx(0).dx(0) + c.dx(1).dx(1);
        if (!lc.is_zero()) r.terms_.push_back({k, std::move(lc)});
    }
    return r;
}

std::vector<Scalar> XiPoly::expand_in_dir(const Covector& alpha) const {
    // xi1 = (a1 s - a2 t)/|alpha|^2, xi2 = (a2 s + a1 t)/|alpha|^2 with
    // s = xi_alpha, t = xi_alphaperp; returns c_k = coefficient of s^k t^(m-k)
    assert(is_homogeneous());
    unsigned m = degree();
    Scalar n2i = norm2(alpha).inverse();
    std::vector<Scalar> out(m + 1, Scalar(0));
    // expand each monomial xi1^i xi2^j by binomials
    for (const auto& [k, c] : terms_) {
        assert(c.is_scalar());
        Scalar base = c.scalar_value();
        unsigned i = e1(k), j = e2(k);
        // (a1 s - a2 t)^i = sum_u C(i,u) a1^u s^u (-a2)^(i-u) t^(i-u)
        for (unsigned u = 0; u <= i; ++u) {
            mpz_class bu;
            mpz_bin_uiui(bu.get_mpz_t(), i, u);
            Scalar cu = Scalar(MPoly(bu), MPoly(1)) * alpha.c1.pow(long(u)) *
                        (-alpha.c2).pow(long(i - u));
            for (unsigned v = 0; v <= j; ++v) {
                mpz_class bv;
                mpz_bin_uiui(bv.get_mpz_t(), j, v);
                Scalar cv = Scalar(MPoly(bv), MPoly(1)) * alpha.c2.pow(long(v)) *
                            alpha.c1.pow(long(j - v));
                unsigned spow = u + v;
                out[spow] += base * cu * cv * n2i.pow(long(i + j));
            }
        }
    }
    return out;
}

std::string XiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [k, c] = *it;
        if (!first) os << " + ";
        first = false;
        os << "[" << c.to_string() << "]";
        if (e1(k)) os << "*xi1^" << e1(k);
        if (e2(k)) os << "*xi2^" << e2(k);
    }
    return os.str();
}

} // namespace cms2
