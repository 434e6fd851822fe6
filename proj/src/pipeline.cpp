#include "cms2/pipeline.hpp"

#include <cassert>

#include "cms2/errors.hpp"

namespace cms2 {

SymbolPipeline::SymbolPipeline(Locus locus, XiPoly p0)
    : locus_(std::move(locus)), p0_(std::move(p0)) {
    assert(p0_.is_homogeneous());
    for (const auto& [k, c] : p0_.terms()) assert(c.is_scalar());
    m0_ = p0_.degree();
    ring_ = std::make_shared<CoefRing>(locus_, Scalar::sym_g2(), Scalar::sym_g3());
    p2a_.resize(locus_.size());
    p4a_.resize(locus_.size());
}

namespace {

// C = m(m+1)|alpha|^2 for some integer m in 1..limit?
unsigned coupling_class(const Scalar& coupling, const Scalar& n2, unsigned limit) {
    Scalar rho = coupling / n2;
    for (unsigned m = 1; m <= limit; ++m)
        if (rho == Scalar(long(m) * long(m + 1))) return m;
    return 0;
}

} // namespace

AdmissibilityReport SymbolPipeline::check_admissible() const {
    AdmissibilityReport rep;
    for (std::size_t i = 0; i < locus_.size(); ++i) {
        const auto& e = locus_[i];
        AdmissibilityEntry entry;
        entry.coefficients = p0_.expand_in_dir(e.alpha);
        entry.coupling_class = coupling_class(e.coupling, norm2(e.alpha), (m0_ + 1) / 2 + 1);
        unsigned lastOdd = entry.coupling_class == 0 ? m0_ : 2 * entry.coupling_class - 1;
        for (unsigned k = 1; k <= m0_ && k <= lastOdd; k += 2)
            if (!entry.coefficients[k].is_zero()) {
                entry.pass = false;
                entry.offending_k.push_back(k);
            }
        rep.all_pass = rep.all_pass && entry.pass;
        rep.entries.push_back(std::move(entry));
    }
    return rep;
}

OrderBoundResult SymbolPipeline::order_bound_check() const {
    OrderBoundResult res;
    XiPoly q = p0_.d_theta();
    for (std::size_t i = 0; i < locus_.size(); ++i) {
        auto next = q.div_xi(locus_[i].alpha);
        if (!next) {
            res.failed_at = i;
            return res;
        }
        q = std::move(*next);
    }
    res.divisible = true;
    res.quotient = std::move(q);
    return res;
}

const XiPoly& SymbolPipeline::p2_alpha(std::size_t i) const {
    if (!p2a_[i]) {
        const Covector& a = locus_[i].alpha;
        p2a_[i] = p0_.d_xi_dir(a).div_xi_exact(a);
    }
    return *p2a_[i];
}

const XiPoly& SymbolPipeline::p4_alpha(std::size_t i) const {
    if (!p4a_[i]) {
        const auto& e = locus_[i];
        XiPoly num =
            p2_alpha(i).d_xi_dir(e.alpha).scaled(e.coupling + Scalar(6) * norm2(e.alpha)) -
            p0_.d_xi_dir(e.alpha).d_xi_dir(e.alpha).d_xi_dir(e.alpha).scaled(Scalar(4));
        p4a_[i] = num.div_xi_exact(e.alpha);
    }
    return *p4a_[i];
}

XiPoly SymbolPipeline::p6_alpha(std::size_t i) const {
    const auto& e = locus_[i];
    auto d = [&](const XiPoly& f) { return f.d_xi_dir(e.alpha); };
    XiPoly num = d(d(d(d(d(p0_))))).scaled(Scalar(24)) +
                 d(d(d(p2_alpha(i)))).scaled(e.coupling - Scalar(90) * norm2(e.alpha)) +
                 d(p4_alpha(i)).scaled(e.coupling);
    return num.div_xi_exact(e.alpha);
}

Scalar SymbolPipeline::d_coeff(std::size_t i, std::size_t j, std::size_t k) const {
    const Covector &a = locus_[i].alpha, &b = locus_[j].alpha, &g = locus_[k].alpha;
    const Scalar &Ca = locus_[i].coupling, &Cb = locus_[j].coupling, &Cg = locus_[k].coupling;
    return pairing(b, g) / (perp_pairing(b, g).pow(3) * Ca) +
           pairing(g, a) / (perp_pairing(g, a).pow(3) * Cb) +
           pairing(a, b) / (perp_pairing(a, b).pow(3) * Cg);
}

XiPoly SymbolPipeline::p4_ab_with_gamma(std::size_t i, std::size_t j, std::size_t g) const {
    const std::size_t N = locus_.size();
    const Covector &a = locus_[i].alpha, &b = locus_[j].alpha, &gc = locus_[g].alpha;
    XiPoly num = p2_alpha(i).d_xi_dir(b).scaled(perp_pairing(gc, a)) +
                 p2_alpha(j).d_xi_dir(a).scaled(perp_pairing(b, gc));
    XiPoly first = num.div_xi_exact(gc).scaled(-(perp_pairing(a, b).inverse()));

    XiPoly second;
    XiPoly dth = p0_.d_theta();
    for (std::size_t d = 0; d < N; ++d) {
        if (d == i || d == j || d == g) continue;
        XiPoly quot =
            dth.div_xi_exact(a).div_xi_exact(b).div_xi_exact(gc).div_xi_exact(locus_[d].alpha);
        second += quot.scaled(perp_pairing(locus_[d].alpha, gc) * locus_[d].coupling *
                              d_coeff(i, j, d));
    }
    return first + second.scaled(perp_pairing(a, b).pow(3) / Scalar(long(N)));
}

XiPoly SymbolPipeline::p4_ab(std::size_t i, std::size_t j) const {
    const std::size_t N = locus_.size();
    if (N < 3) throw NeedsThirdLine();
    std::optional<XiPoly> result;
    for (std::size_t g = 0; g < N; ++g) {
        if (g == i || g == j) continue;
        XiPoly cand = p4_ab_with_gamma(i, j, g);
        if (!result) result = std::move(cand);
        else if (*result != cand)
            throw Error("P4^{a,b} depends on the auxiliary line choice (first relation fails)");
    }
    // cross-check: xi_a P4^{ab} equals the D_theta form of the same object
    const Covector &a = locus_[i].alpha, &b = locus_[j].alpha;
    XiPoly rhs = p2_alpha(j).d_xi_dir(a);
    XiPoly dth = p0_.d_theta();
    XiPoly sum;
    for (std::size_t d = 0; d < N; ++d) {
        if (d == i || d == j) continue;
        XiPoly quot = dth.div_xi_exact(a).div_xi_exact(b).div_xi_exact(locus_[d].alpha);
        sum +=
            quot.scaled(perp_pairing(locus_[d].alpha, a) * locus_[d].coupling * d_coeff(i, j, d));
    }
    rhs += sum.scaled(perp_pairing(a, b).pow(3) / Scalar(long(N)));
    if (result->mul_xi(a) != rhs) throw Error("P4^{a,b} identity check failed");
    return *result;
}

std::pair<XiPoly, XiPoly> SymbolPipeline::build_p2_p3() const {
    XiPoly p2, p3;
    for (std::size_t i = 0; i < locus_.size(); ++i) {
        p2 += p2_alpha(i).coef_mul(u(i, 0));
        p3 += p2_alpha(i).d_xi_dir(locus_[i].alpha).coef_mul(u(i, 1));
    }
    return {p2.scaled(Scalar(-1, 2)), p3.scaled(Scalar(-1, 4))};
}

SymbolPipeline::Levels SymbolPipeline::build_levels() const {
    Levels lv;
    auto [p2, p3] = build_p2_p3();
    lv.p2 = std::move(p2);
    lv.p3 = std::move(p3);

    const std::size_t N = locus_.size();
    XiPoly pair_part;
    if (N >= 3) {
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i + 1; j < N; ++j)
                pair_part += p4_ab(i, j).coef_mul(u(i, 0) * u(j, 0));
    } else if (N == 2) {
        // two lines must be orthogonal (first relation); the pair term is
        // d_a d_b P0 / (xi_a xi_b), the N = 2 solution of the k = 4 recursion
        if (!pairing(locus_[0].alpha, locus_[1].alpha).is_zero()) throw NeedsThirdLine();
        XiPoly q = p0_.d_xi_dir(locus_[0].alpha)
                       .d_xi_dir(locus_[1].alpha)
                       .div_xi_exact(locus_[0].alpha)
                       .div_xi_exact(locus_[1].alpha);
        pair_part = q.coef_mul(u(0, 0) * u(1, 0));
    }
    for (std::size_t i = 0; i < N; ++i)
        lv.p4 += p4_alpha(i).coef_mul(u(i, 2)).scaled(Scalar(1, 48));
    lv.p4 += pair_part.scaled(Scalar(1, 4));

    // post-check: the pair part integrates the u_a' u_b cross source
    {
        XiPoly lhs;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) {
                if (i == j) continue;
                lhs += p2_alpha(j).d_xi_dir(locus_[i].alpha).coef_mul(u(i, 1) * u(j, 0));
            }
        lv.p4_postcheck = (lhs == pair_part.xi_dot_dx());
    }

    // P5 = 1/2 sum_{j=1}^{5} ((-1)^{j+1}/j!) <dx,dxi>^j P_{5-j}
    const XiPoly* levels[5] = {&p0_, nullptr, &lv.p2, &lv.p3, &lv.p4};
    long fact = 1;
    for (unsigned j = 1; j <= 5; ++j) {
        fact *= j;
        if (5 - j == 1) continue; // P1 = 0
        XiPoly t = *levels[5 - j];
        for (unsigned it = 0; it < j; ++it) t = t.dx_dot_dxi();
        Scalar c(1, 2 * fact);
        if (j % 2 == 0) c = -c;
        lv.p5 += t.scaled(c);
    }
    return lv;
}

std::vector<Scalar> SymbolPipeline::first_relation_for(const Locus& locus) {
    std::vector<Scalar> r;
    for (std::size_t i = 0; i < locus.size(); ++i) {
        Scalar s(0);
        for (std::size_t j = 0; j < locus.size(); ++j) {
            if (i == j) continue;
            s += pairing(locus[i].alpha, locus[j].alpha) * locus[j].coupling /
                 perp_pairing(locus[i].alpha, locus[j].alpha).pow(3);
        }
        r.push_back(std::move(s));
    }
    return r;
}

std::vector<SecondRelationEntry> SymbolPipeline::second_relation_for(const Locus& locus) {
    std::vector<SecondRelationEntry> out;
    for (std::size_t i = 0; i < locus.size(); ++i) {
        SecondRelationEntry e;
        e.coupling_factor = locus[i].coupling - Scalar(2) * norm2(locus[i].alpha);
        e.sum_factor = Scalar(0);
        for (std::size_t j = 0; j < locus.size(); ++j) {
            if (i == j) continue;
            e.sum_factor += pairing(locus[i].alpha, locus[j].alpha) * norm2(locus[j].alpha) *
                            locus[j].coupling /
                            perp_pairing(locus[i].alpha, locus[j].alpha).pow(5);
        }
        e.residual = e.coupling_factor * e.sum_factor;
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<Scalar> SymbolPipeline::first_relation() const { return first_relation_for(locus_); }

std::vector<SecondRelationEntry> SymbolPipeline::second_relation() const {
    return second_relation_for(locus_);
}

Scalar SymbolPipeline::k_constant(std::size_t i) const {
    Covector sum(Scalar(0), Scalar(0));
    for (std::size_t j = 0; j < locus_.size(); ++j) {
        if (i == j) continue;
        Scalar f = locus_[j].coupling / perp_pairing(locus_[i].alpha, locus_[j].alpha).pow(3);
        sum.c1 += f * locus_[j].alpha.c1;
        sum.c2 += f * locus_[j].alpha.c2;
    }
    Covector perp = locus_[i].alpha.perp();
    Scalar k;
    if (!perp.c1.is_zero()) {
        k = sum.c1 / perp.c1;
        if (sum.c2 != k * perp.c2) throw InconsistentK();
    } else {
        k = sum.c2 / perp.c2;
        if (!sum.c1.is_zero()) throw InconsistentK();
    }
    return k;
}

DiffOp SymbolPipeline::build_L() const {
    CoefElem R(ring_, Scalar(0));
    for (std::size_t i = 0; i < locus_.size(); ++i) R += u(i, 0);
    return -(DiffOp::monomial(2, 0, CoefElem(ring_, Scalar(1))) +
             DiffOp::monomial(0, 2, CoefElem(ring_, Scalar(1)))) +
           DiffOp::mult(R);
}

DiffOp SymbolPipeline::assemble_partial(const Levels& lv) const {
    XiPoly total = p0_ + lv.p2 + lv.p3 + lv.p4 + lv.p5;
    return DiffOp::from_symbol(total);
}

bool SymbolPipeline::partial_commutes(const DiffOp& L, const DiffOp& P) const {
    DiffOp K = commutator(L, P);
    for (const auto& [k, c] : K.terms())
        if (XiPoly::e1(k) + XiPoly::e2(k) >= 2 && !c.is_zero()) return false;
    return true;
}

} // namespace cms2
