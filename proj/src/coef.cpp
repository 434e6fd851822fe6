#include "cms2/coef.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

#include "cms2/errors.hpp"

namespace cms2 {

CoefRing::CoefRing(Locus locus, Scalar g2, Scalar g3)
    : locus_(std::move(locus)), g2_(std::move(g2)), g3_(std::move(g3)) {
    if (locus_.size() > CoefKey::kMax)
        throw LocusError("coefficient ring supports at most " +
                         std::to_string(CoefKey::kMax) + " locus entries");
}

CoefElem::CoefElem(Scalar s) {
    if (!s.is_zero()) terms_.push_back({CoefKey{}, std::move(s)});
}

CoefElem::CoefElem(RingPtr ring, Scalar s) : ring_(std::move(ring)) {
    if (!s.is_zero()) terms_.push_back({CoefKey{}, std::move(s)});
}

CoefElem CoefElem::p_gen(const RingPtr& ring, unsigned i, unsigned exp) {
    CoefElem e;
    e.ring_ = ring;
    CoefKey k;
    k.set_p(i, exp);
    e.terms_.push_back({k, Scalar(1)});
    return e;
}

CoefElem CoefElem::q_gen(const RingPtr& ring, unsigned i) {
    CoefElem e;
    e.ring_ = ring;
    CoefKey k;
    k.set_q(i, 1);
    e.terms_.push_back({k, Scalar(1)});
    return e;
}

CoefElem CoefElem::x_mono(const RingPtr& ring, unsigned e1, unsigned e2) {
    CoefElem e;
    e.ring_ = ring;
    CoefKey k;
    k.set_x(0, e1);
    k.set_x(1, e2);
    e.terms_.push_back({k, Scalar(1)});
    return e;
}

CoefElem CoefElem::pole(const RingPtr& ring, Scalar num, const std::vector<unsigned>& denExp) {
    CoefElem e;
    e.ring_ = ring;
    if (!num.is_zero()) e.terms_.push_back({CoefKey{}, std::move(num)});
    for (std::size_t i = 0; i < denExp.size() && i < CoefKey::kMax; ++i)
        e.den_[i] = std::uint16_t(denExp[i]);
    e.canon();
    return e;
}

CoefElem CoefElem::from_terms(RingPtr ring, std::vector<Term> terms,
                              std::array<std::uint16_t, CoefKey::kMax> den) {
    CoefElem e;
    e.ring_ = std::move(ring);
    e.terms_ = std::move(terms);
    e.den_ = den;
    std::sort(e.terms_.begin(), e.terms_.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    e.canon();
    return e;
}

bool CoefElem::is_scalar() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1 || terms_[0].first.v != 0) return false;
    for (auto d : den_)
        if (d) return false;
    return true;
}

Scalar CoefElem::scalar_value() const {
    assert(is_scalar());
    return terms_.empty() ? Scalar() : terms_[0].second;
}

RingPtr CoefElem::merge_rings(const RingPtr& x, const RingPtr& y) {
    if (!x) return y;
    if (!y) return x;
    assert(x == y && "coefficient elements from different rings");
    return x;
}

CoefElem CoefElem::operator-() const {
    CoefElem r = *this;
    for (auto& [k, s] : r.terms_) s = -s;
    return r;
}

CoefElem CoefElem::operator+(const CoefElem& o) const {
    if (is_zero()) {
        CoefElem r = o;
        r.ring_ = merge_rings(ring_, o.ring_);
        return r;
    }
    if (o.is_zero()) {
        CoefElem r = *this;
        r.ring_ = merge_rings(ring_, o.ring_);
        return r;
    }
    CoefElem r;
    r.ring_ = merge_rings(ring_, o.ring_);
    // common denominator: per-form maximum
    std::array<std::uint16_t, CoefKey::kMax> nd{};
    for (unsigned i = 0; i < CoefKey::kMax; ++i) nd[i] = std::max(den_[i], o.den_[i]);

    auto lift = [&](const CoefElem& e) {
        // multiply numerator by prod form_i^(nd_i - den_i)
        std::map<CoefKey, Scalar> acc;
        for (const auto& [k, s] : e.terms_) acc.emplace(k, s);
        for (unsigned i = 0; i < CoefKey::kMax; ++i) {
            unsigned diff = nd[i] - e.den_[i];
            for (unsigned rep = 0; rep < diff; ++rep) {
                std::map<CoefKey, Scalar> nxt;
                const Scalar& c1 = r.ring_->form(i, 0);
                const Scalar& c2 = r.ring_->form(i, 1);
                for (const auto& [k, s] : acc) {
                    if (!c1.is_zero()) {
                        CoefKey kk = k;
                        kk.set_x(0, kk.x(0) + 1);
                        auto& slot = nxt[kk];
                        slot += s * c1;
                    }
                    if (!c2.is_zero()) {
                        CoefKey kk = k;
                        kk.set_x(1, kk.x(1) + 1);
                        auto& slot = nxt[kk];
                        slot += s * c2;
                    }
                }
                acc = std::move(nxt);
            }
        }
        return acc;
    };

    std::map<CoefKey, Scalar> sum = lift(*this);
    for (auto& [k, s] : lift(o)) {
        auto [it, fresh] = sum.emplace(k, s);
        if (!fresh) it->second += s;
    }
    for (auto& [k, s] : sum)
        if (!s.is_zero()) r.terms_.push_back({k, s});
    r.den_ = nd;
    r.canon();
    return r;
}

CoefElem CoefElem::operator-(const CoefElem& o) const { return *this + (-o); }

CoefElem CoefElem::operator*(const CoefElem& o) const {
    CoefElem r;
    r.ring_ = merge_rings(ring_, o.ring_);
    if (is_zero() || o.is_zero()) return r;
    std::map<CoefKey, Scalar> acc;
    for (const auto& [k1, s1] : terms_)
        for (const auto& [k2, s2] : o.terms_) {
            CoefKey k;
            k.v = k1.v + k2.v; // disjoint fields, exponents add
            auto [it, fresh] = acc.emplace(k, s1 * s2);
            if (!fresh) it->second += s1 * s2;
        }
    for (auto& [k, s] : acc)
        if (!s.is_zero()) r.terms_.push_back({k, s});
    for (unsigned i = 0; i < CoefKey::kMax; ++i) r.den_[i] = den_[i] + o.den_[i];
    r.canon();
    return r;
}

CoefElem CoefElem::scaled(const Scalar& s) const {
    if (s.is_zero()) {
        CoefElem r;
        r.ring_ = ring_;
        return r;
    }
    CoefElem r = *this;
    for (auto& [k, c] : r.terms_) c *= s;
    return r;
}

bool CoefElem::operator==(const CoefElem& o) const {
    return den_ == o.den_ && terms_ == o.terms_;
}

void CoefElem::rewrite_q() {
    if (!ring_) return;
    const Scalar& g2 = ring_->g2();
    const Scalar& g3 = ring_->g3();
    bool any = true;
    while (any) {
        any = false;
        std::map<CoefKey, Scalar> acc;
        for (const auto& [k, s] : terms_) {
            int hit = -1;
            for (unsigned i = 0; i < ring_->size(); ++i)
                if (k.q(i) >= 2) {
                    hit = int(i);
                    break;
                }
            if (hit < 0) {
                auto [it, fresh] = acc.emplace(k, s);
                if (!fresh) it->second += s;
                continue;
            }
            any = true;
            unsigned i = unsigned(hit);
            CoefKey base = k;
            base.set_q(i, k.q(i) - 2);
            // q^2 = 4 p^3 - g2 p - g3
            CoefKey k3 = base;
            k3.set_p(i, base.p(i) + 3);
            auto [i3, f3] = acc.emplace(k3, s * Scalar(4));
            if (!f3) i3->second += s * Scalar(4);
            if (!g2.is_zero()) {
                CoefKey k1 = base;
                k1.set_p(i, base.p(i) + 1);
                auto [i1, f1] = acc.emplace(k1, -(s * g2));
                if (!f1) i1->second -= s * g2;
            }
            if (!g3.is_zero()) {
                auto [i0, f0] = acc.emplace(base, -(s * g3));
                if (!f0) i0->second -= s * g3;
            }
        }
        terms_.clear();
        for (auto& [k, s] : acc)
            if (!s.is_zero()) terms_.push_back({k, s});
    }
}

namespace {

// exact division of a grouped x-polynomial by the linear form c1 x1 + c2 x2;
// poly maps (x1,x2) exponents packed as (e1<<16)|e2 to Scalars
bool divide_xpoly(std::map<std::uint32_t, Scalar>& poly, const Scalar& c1, const Scalar& c2) {
    if (poly.empty()) return true;
    std::map<std::uint32_t, Scalar> q;
    // divide in x2 when c2 != 0, else in x1
    bool useX2 = !c2.is_zero();
    const Scalar& lead = useX2 ? c2 : c1;
    std::map<std::uint32_t, Scalar> rem = poly;
    auto degkey = [&](std::uint32_t k) {
        unsigned e1 = k >> 16, e2 = k & 0xffff;
        return useX2 ? (std::uint64_t(e2) << 16) | e1 : (std::uint64_t(e1) << 16) | e2;
    };
    while (!rem.empty()) {
        auto it = std::max_element(rem.begin(), rem.end(),
                                   [&](const auto& a, const auto& b) {
                                       return degkey(a.first) < degkey(b.first);
                                   });
        std::uint32_t k = it->first;
        unsigned e1 = k >> 16, e2 = k & 0xffff;
        unsigned lead_e = useX2 ? e2 : e1;
        if (lead_e == 0) return false; // nonzero remainder
        Scalar qc = it->second / lead;
        std::uint32_t qk = useX2 ? ((e1 << 16) | (e2 - 1)) : (((e1 - 1) << 16) | e2);
        q[qk] += qc;
        // subtract qc * (c1 x1 + c2 x2) * x^qk
        unsigned q1 = qk >> 16, q2 = qk & 0xffff;
        if (!c1.is_zero()) {
            std::uint32_t kk = ((q1 + 1) << 16) | q2;
            auto jt = rem.find(kk);
            Scalar nv = (jt == rem.end() ? Scalar() : jt->second) - qc * c1;
            if (nv.is_zero()) {
                if (jt != rem.end()) rem.erase(jt);
            } else {
                rem[kk] = nv;
            }
        }
        if (!c2.is_zero()) {
            std::uint32_t kk = (q1 << 16) | (q2 + 1);
            auto jt = rem.find(kk);
            Scalar nv = (jt == rem.end() ? Scalar() : jt->second) - qc * c2;
            if (nv.is_zero()) {
                if (jt != rem.end()) rem.erase(jt);
            } else {
                rem[kk] = nv;
            }
        }
    }
    poly = std::move(q);
    return true;
}

} // namespace

void CoefElem::cancel_poles() {
    if (!ring_) return;
    bool anyDen = false;
    for (auto d : den_) anyDen |= (d != 0);
    if (!anyDen) return;
    if (terms_.empty()) {
        den_.fill(0);
        return;
    }
    // group terms by generator part; each group's x-polynomial must divide
    using GenKey = std::uint64_t;
    for (unsigned i = 0; i < ring_->size(); ++i) {
        while (den_[i] > 0) {
            std::map<GenKey, std::map<std::uint32_t, Scalar>> groups;
            for (const auto& [k, s] : terms_) {
                GenKey g = k.v & ((std::uint64_t(1) << 48) - 1); // p,q fields
                std::uint32_t xk = (k.x(0) << 16) | k.x(1);
                groups[g][xk] = s;
            }
            bool ok = true;
            for (auto& [g, poly] : groups)
                if (!divide_xpoly(poly, ring_->form(i, 0), ring_->form(i, 1))) {
                    ok = false;
                    break;
                }
            if (!ok) break;
            std::vector<Term> nt;
            for (auto& [g, poly] : groups)
                for (auto& [xk, s] : poly) {
                    CoefKey k;
                    k.v = g;
                    k.set_x(0, xk >> 16);
                    k.set_x(1, xk & 0xffff);
                    nt.push_back({k, s});
                }
            std::sort(nt.begin(), nt.end(),
                      [](const Term& a, const Term& b) { return a.first < b.first; });
            terms_ = std::move(nt);
            --den_[i];
            if (terms_.empty()) {
                den_.fill(0);
                return;
            }
        }
    }
}

void CoefElem::canon() {
    // remove zero coefficients first
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                [](const Term& t) { return t.second.is_zero(); }),
                 terms_.end());
    rewrite_q();
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    cancel_poles();
    if (terms_.empty()) den_.fill(0);
}

CoefElem CoefElem::dx(int d) const {
    CoefElem out;
    out.ring_ = ring_;
    if (is_zero()) return out;
    // numerator derivative over the same denominator
    std::vector<Term> dnum;
    for (const auto& [k, s] : terms_) {
        unsigned e1 = k.x(0), e2 = k.x(1);
        if (d == 0 && e1 > 0) {
            CoefKey kk = k;
            kk.set_x(0, e1 - 1);
            dnum.push_back({kk, s * Scalar(long(e1))});
        }
        if (d == 1 && e2 > 0) {
            CoefKey kk = k;
            kk.set_x(1, e2 - 1);
            dnum.push_back({kk, s * Scalar(long(e2))});
        }
        if (!ring_) continue;
        for (unsigned i = 0; i < ring_->size(); ++i) {
            const auto& entry = ring_->locus()[i];
            Scalar chain = entry.scale * ring_->form(i, int(d));
            if (chain.is_zero()) continue;
            if (entry.kind != PotentialKind::Elliptic) continue;
            unsigned pe = k.p(i), qe = k.q(i);
            if (pe > 0) {
                // d p = chain * q
                CoefKey kk = k;
                kk.set_p(i, pe - 1);
                kk.set_q(i, qe + 1);
                dnum.push_back({kk, s * chain * Scalar(long(pe))});
            }
            if (qe > 0) {
                // d q = chain * (6 p^2 - g2/2)
                CoefKey kk = k;
                kk.set_q(i, qe - 1);
                CoefKey k6 = kk;
                k6.set_p(i, kk.p(i) + 2);
                dnum.push_back({k6, s * chain * Scalar(6) * Scalar(long(qe))});
                if (!ring_->g2().is_zero())
                    dnum.push_back(
                        {kk, -(s * chain * ring_->g2() * Scalar(1, 2) * Scalar(long(qe)))});
            }
        }
    }
    out = from_terms(ring_, std::move(dnum), den_);

    // denominator contributions: -den_i * form_{i,d} * num / (den * form_i)
    for (unsigned i = 0; ring_ && i < ring_->size(); ++i) {
        if (den_[i] == 0) continue;
        const Scalar& fd = ring_->form(i, d);
        if (fd.is_zero()) continue;
        std::vector<Term> nt = terms_;
        Scalar fac = -(Scalar(long(den_[i])) * fd);
        for (auto& [k, s] : nt) s *= fac;
        auto nd = den_;
        nd[i] += 1;
        out += from_terms(ring_, std::move(nt), nd);
    }
    return out;
}

CoefElem CoefElem::dx_dir(const Covector& alpha) const {
    return dx(0).scaled(alpha.c1) + dx(1).scaled(alpha.c2);
}

CoefElem CoefElem::u_deriv(const RingPtr& ring, unsigned i, unsigned j) {
    const auto& entry = ring->locus()[i];
    if (entry.kind == PotentialKind::Rational) {
        // u = C / t^2 : u^(j) = C (-1)^j (j+1)! / t^(j+2)
        mpz_class fct(1);
        for (unsigned m = 2; m <= j + 1; ++m) fct *= m;
        Scalar c = entry.coupling * Scalar(MPoly(fct), MPoly(1));
        if (j % 2) c = -c;
        std::vector<unsigned> dexp(ring->size(), 0);
        dexp[i] = j + 2;
        return pole(ring, c, dexp);
    }
    // u = c wp(k t), c = C k^2 : u^(j) = c k^j wp^(j)
    Scalar c = entry.coupling * entry.scale * entry.scale;
    // wp^(j) via dp = q, dq = 6p^2 - g2/2 in the argument
    CoefElem w = p_gen(ring, i);
    for (unsigned step = 0; step < j; ++step) {
        std::vector<Term> dnum;
        for (const auto& [k, s] : w.terms_) {
            unsigned pe = k.p(i), qe = k.q(i);
            if (pe > 0) {
                CoefKey kk = k;
                kk.set_p(i, pe - 1);
                kk.set_q(i, qe + 1);
                dnum.push_back({kk, s * Scalar(long(pe))});
            }
            if (qe > 0) {
                CoefKey kk = k;
                kk.set_q(i, qe - 1);
                CoefKey k6 = kk;
                k6.set_p(i, kk.p(i) + 2);
                dnum.push_back({k6, s * Scalar(6) * Scalar(long(qe))});
                if (!ring->g2().is_zero())
                    dnum.push_back({kk, -(s * ring->g2() * Scalar(1, 2) * Scalar(long(qe)))});
            }
        }
        w = from_terms(ring, std::move(dnum), w.den_);
    }
    return w.scaled(c * entry.scale.pow(long(j)));
}

std::string CoefElem::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, s] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << s.to_string() << ")";
        if (k.x(0)) os << "*x1^" << k.x(0);
        if (k.x(1)) os << "*x2^" << k.x(1);
        for (unsigned i = 0; ring_ && i < ring_->size(); ++i) {
            if (k.p(i)) os << "*wp[" << i << "]^" << k.p(i);
            if (k.q(i)) os << "*wp1[" << i << "]^" << k.q(i);
        }
    }
    bool anyDen = false;
    for (auto d : den_) anyDen |= (d != 0);
    if (anyDen) {
        os << " / (";
        bool f2 = true;
        for (unsigned i = 0; ring_ && i < ring_->size(); ++i)
            if (den_[i]) {
                if (!f2) os << "*";
                f2 = false;
                os << "lin[" << i << "]^" << den_[i];
            }
        os << ")";
    }
    return os.str();
}

} // namespace cms2
