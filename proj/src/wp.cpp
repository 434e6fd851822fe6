#include "cms2/wp.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cms2/errors.hpp"

namespace cms2 {

WpContext::WpContext(mpq_class g2, mpq_class g3, unsigned digits, unsigned max_terms)
    : g2_(std::move(g2)), g3_(std::move(g3)), digits_(digits), max_terms_(max_terms) {
    c_.resize(4);
    c_[2] = g2_ / 20;
    c_[3] = g3_ / 28;
}

void WpContext::ensure_terms(unsigned kmax) const {
    for (unsigned k = unsigned(c_.size()); k <= kmax; ++k) {
        mpq_class s(0);
        for (unsigned m = 2; m + 2 <= k; ++m) s += c_[m] * c_[k - m];
        c_.push_back(mpq_class(3) * s / ((2 * k + 1) * (k - 3)));
    }
}

namespace {

mpq_class abs_q(const mpq_class& q) { return q < 0 ? mpq_class(-q) : q; }

mpq_class pow10_neg(unsigned digits) {
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), 10, digits);
    return mpq_class(1, d);
}

} // namespace

WpContext::Value WpContext::eval(const mpq_class& z) const {
    if (z == 0) throw OutOfConvergenceRegion();
    Value v;
    mpq_class z2 = z * z;
    v.wp = 1 / z2;
    v.wp1 = -2 / (z2 * z);

    if (g2_ == 0 && g3_ == 0) {
        v.bound = 0;
        return v;
    }

    mpq_class target = pow10_neg(digits_);
    mpq_class zpow = z2; // z^(2k-2) at k = 2
    mpq_class prev_t(0);
    unsigned k = 2;
    std::vector<mpq_class> recent; // last few consecutive nonzero term ratios
    while (true) {
        ensure_terms(k);
        mpq_class term = c_[k] * zpow;
        v.wp += term;
        v.wp1 += mpq_class(2 * k - 2) * c_[k] * zpow / z;
        mpq_class t = abs_q(term);
        if (prev_t != 0 && t != 0) {
            recent.push_back(t / prev_t);
            if (recent.size() > 4) recent.erase(recent.begin());
        }
        if (t != 0) prev_t = t;
        // stop once a nonzero term and the geometric tail estimate are small
        // enough (zero terms carry no tail information: for g3 = 0 every
        // second coefficient vanishes); the tail ratio is estimated from a
        // window of recent ratios, since early terms are irregular
        if (k >= 10 && t != 0 && t < target && recent.size() >= 3) {
            mpq_class r(0);
            for (const auto& q : recent) r = std::max(r, q);
            r *= mpq_class(3, 2); // slack
            if (r < 1) {
                // crude derivative weight: wp' picks up a factor (2k)/|z|
                mpq_class weight = mpq_class(2 * (k + 1)) / abs_q(z) + 1;
                v.bound = t * r / (1 - r) * weight;
                if (v.bound < target) return v;
            }
        }
        ++k;
        if (k > max_terms_) {
            mpq_class r(0);
            for (const auto& q : recent) r = std::max(r, q);
            if (r >= 1) throw OutOfConvergenceRegion();
            throw PrecisionUnachievable();
        }
        zpow *= z2;
    }
}

std::string decimal_string(const mpq_class& q, unsigned digits) {
    if (q == 0) return "0";
    mpq_class a = abs_q(q);
    // exponent = floor(log10(a))
    long exp10 = 0;
    mpq_class t = a;
    while (t >= 10) {
        t /= 10;
        ++exp10;
    }
    while (t < 1) {
        t *= 10;
        --exp10;
    }
    // mantissa digits
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits - 1);
    mpq_class scaled = t * mpq_class(scale);
    mpz_class m = scaled.get_num() / scaled.get_den(); // trunc
    // round to nearest
    mpq_class frac = scaled - mpq_class(m);
    if (frac * 2 >= 1) m += 1;
    std::string ms = m.get_str();
    if (long(ms.size()) > long(digits)) {
        ms.pop_back();
        ++exp10;
    }
    std::ostringstream os;
    if (q < 0) os << "-";
    os << ms[0];
    if (ms.size() > 1) os << "." << ms.substr(1);
    os << "e" << exp10;
    return os.str();
}

ZeroTestReport numeric_zero_test(const CoefElem& expr, const Scalar::Bindings& bind,
                                 unsigned trials, const mpq_class& tol, std::uint64_t seed,
                                 unsigned digits) {
    ZeroTestReport rep;
    rep.trials = trials;
    rep.tolerance = tol;
    if (expr.is_zero()) {
        rep.numerically_zero = true;
        rep.note = "expression is structurally zero";
        return rep;
    }
    const RingPtr& ring = expr.ring();
    if (!ring) {
        // plain scalar: evaluate directly
        mpq_class v = expr.scalar_value().evaluate(bind);
        rep.max_abs = abs_q(v);
        rep.max_scale = rep.max_abs;
        rep.numerically_zero = (v == 0);
        return rep;
    }

    std::mt19937_64 rng(seed);
    const std::size_t n = ring->size();

    // numeric locus data
    std::vector<mpq_class> a1(n), a2(n), kk(n);
    for (std::size_t i = 0; i < n; ++i) {
        a1[i] = ring->locus()[i].alpha.c1.evaluate(bind);
        a2[i] = ring->locus()[i].alpha.c2.evaluate(bind);
        kk[i] = ring->locus()[i].scale.evaluate(bind);
    }
    mpq_class g2 = ring->g2().evaluate(bind);
    mpq_class g3 = ring->g3().evaluate(bind);

    rep.numerically_zero = true;
    // draw the sample points up front so the parallel evaluation is
    // deterministic regardless of scheduling
    std::vector<std::pair<mpq_class, mpq_class>> points;
    for (unsigned trial = 0; trial < trials; ++trial) {
        std::uniform_int_distribution<long> num(7, 97);
        std::uniform_int_distribution<int> sgn(0, 1);
        mpq_class x1(num(rng) * (sgn(rng) ? 1 : -1), 389);
        mpq_class x2(num(rng) * (sgn(rng) ? 1 : -1), 397);
        bool ok = false;
        for (int shrink = 0; shrink < 12 && !ok; ++shrink) {
            ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                mpq_class w = kk[i] * (a1[i] * x1 + a2[i] * x2);
                if (w == 0 || abs_q(w) > mpq_class(3, 5)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                x1 /= 2;
                x2 /= 2;
                if (x1 == 0) break;
            }
        }
        if (ok) points.push_back({x1, x2});
    }

    std::vector<mpq_class> abs_out(points.size()), scale_out(points.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long pi = 0; pi < long(points.size()); ++pi) {
        const mpq_class& x1 = points[std::size_t(pi)].first;
        const mpq_class& x2 = points[std::size_t(pi)].second;
        WpContext wcx(g2, g3, digits + 15); // per-point context: the series
                                            // cache is not shared across threads

        std::vector<mpq_class> pv(n), qv(n), formv(n);
        for (std::size_t i = 0; i < n; ++i) {
            formv[i] = a1[i] * x1 + a2[i] * x2;
            if (ring->locus()[i].kind == PotentialKind::Elliptic) {
                auto val = wcx.eval(kk[i] * formv[i]);
                pv[i] = val.wp;
                qv[i] = val.wp1;
            }
        }
        mpq_class sum(0), scale(0);
        for (const auto& [key, s] : expr.terms()) {
            mpq_class term = s.evaluate(bind);
            for (unsigned e = 0; e < key.x(0); ++e) term *= x1;
            for (unsigned e = 0; e < key.x(1); ++e) term *= x2;
            for (std::size_t i = 0; i < n; ++i) {
                for (unsigned e = 0; e < key.p(unsigned(i)); ++e) term *= pv[i];
                for (unsigned e = 0; e < key.q(unsigned(i)); ++e) term *= qv[i];
            }
            sum += term;
            scale = std::max(scale, abs_q(term));
        }
        for (std::size_t i = 0; i < n; ++i)
            for (unsigned e = 0; e < expr.den()[i]; ++e) sum /= formv[i];
        // the scale of the denominator applies uniformly; compare against the
        // numerator scale divided the same way
        mpq_class denq(1);
        for (std::size_t i = 0; i < n; ++i)
            for (unsigned e = 0; e < expr.den()[i]; ++e) denq *= formv[i];
        scale /= abs_q(denq);

        abs_out[std::size_t(pi)] = abs_q(sum);
        scale_out[std::size_t(pi)] = scale;
    }
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        rep.max_abs = std::max(rep.max_abs, abs_out[pi]);
        rep.max_scale = std::max(rep.max_scale, scale_out[pi]);
        if (abs_out[pi] >= tol * std::max(mpq_class(1), scale_out[pi]))
            rep.numerically_zero = false;
    }
    return rep;
}

} // namespace cms2
