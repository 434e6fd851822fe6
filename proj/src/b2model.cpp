#include "cms2/b2model.hpp"

#include <cassert>
#include <map>
#include <sstream>
#include <functional>

#include "cms2/errors.hpp"
#include "cms2/linsolve.hpp"

namespace cms2 {

namespace {

Scalar sc(long n, long d = 1) { return Scalar(n, d); }

} // namespace

B2Model::B2Model(Scalar a, Scalar g2, Scalar g3)
    : a_(std::move(a)), g2_(std::move(g2)), g3_(std::move(g3)) {
    if (a_.is_rational()) {
        auto ex = is_excluded_parameter(a_.to_rational());
        if (ex.excluded) throw ExcludedParameter(ex.reason);
    }
    mu_ = a_ * a_ + sc(1);
    rational_ = g2_.is_zero() && g3_.is_zero();

    Scalar C1 = sc(3) * mu_ * (sc(3) - a_ * a_) / (sc(16) * a_.pow(4));
    Scalar C2 = sc(3, 16) * mu_ * (sc(3) * a_ * a_ - sc(1));
    Scalar Cp = sc(6) * mu_;

    std::vector<LocusEntry> gen;
    gen.push_back({Covector(sc(1), sc(0)), C1, PotentialKind::Elliptic, sc(2) * a_});
    gen.push_back({Covector(sc(0), sc(1)), C2, PotentialKind::Elliptic, sc(2)});
    gen.push_back({Covector(a_, sc(1)), Cp, PotentialKind::Elliptic, sc(1)});
    gen.push_back({Covector(-a_, sc(1)), Cp, PotentialKind::Elliptic, sc(1)});
    gen_ring_ = std::make_shared<CoefRing>(Locus(gen), g2_, g3_);

    std::vector<LocusEntry> pol = gen;
    for (auto& e : pol) {
        e.kind = PotentialKind::Rational;
        e.scale = sc(1);
    }
    pole_ring_ = std::make_shared<CoefRing>(Locus(pol), Scalar(0), Scalar(0));
}

Scalar B2Model::coupling(std::size_t i) const { return locus()[i].coupling; }

CoefElem B2Model::u(std::size_t i, unsigned j) const {
    return CoefElem::u_deriv(gen_ring_, i, j);
}

DiffOp B2Model::build_Lpm(int sign) const {
    std::size_t i = sign > 0 ? 2 : 3;
    return to_delivery(DiffOp::dir_pow(locus()[i].alpha, 2) - DiffOp::mult(u(i, 0).scaled(mu_)));
}

DiffOp B2Model::build_A5(int sign) const {
    std::size_t i = sign > 0 ? 2 : 3;
    const Covector& al = locus()[i].alpha;
    DiffOp t = DiffOp::dir_pow(al, 5);
    t -= compose(DiffOp::mult(u(i, 0).scaled(mu_)), DiffOp::dir_pow(al, 3)).scaled(sc(5, 2));
    t -= compose(DiffOp::mult(u(i, 1).scaled(mu_ * mu_)), DiffOp::dir_pow(al, 2))
             .scaled(sc(15, 4));
    CoefElem last = (u(i, 0) * u(i, 0)).scaled(sc(15)) - u(i, 2).scaled(sc(25) * mu_);
    t += compose(DiffOp::mult(last.scaled(sc(1, 8) * mu_ * mu_)), DiffOp::dir_pow(al, 1));
    return to_delivery(t);
}

namespace {

DiffOp dxdxi_requantize(const DiffOp& op) {
    // <d_x, d_xi> applied to the symbol, re-quantized coefficients-left
    return DiffOp::from_symbol(op.total_symbol().dx_dot_dxi());
}

} // namespace

DiffOp B2Model::blocks_without_completion() const {
    const Covector &ap = locus()[2].alpha, &am = locus()[3].alpha;
    const Covector app = ap.perp(), amp = am.perp();
    CoefElem u1 = u(0, 0), u2 = u(1, 0), up = u(2, 0), um = u(3, 0);
    CoefElem one(gen_ring_, sc(1));

    DiffOp L1 = DiffOp::monomial(2, 0, one) - DiffOp::mult(u1);
    DiffOp L2 = DiffOp::monomial(0, 2, one) - DiffOp::mult(u2);
    DiffOp Lp = DiffOp::dir_pow(ap, 2) - DiffOp::mult(up.scaled(mu_));
    DiffOp Lm = DiffOp::dir_pow(am, 2) - DiffOp::mult(um.scaled(mu_));

    Scalar ia = a_.inverse();

    // leading cubic combination
    DiffOp P = compose(compose(L1, L1), L1).scaled(a_ * (sc(4) - a_ * a_));
    P += compose(compose(L1, L1), L2).scaled(sc(5) * a_);
    P += compose(L1, compose(L2, L2)).scaled(sc(5) * ia);
    P += compose(compose(L2, L2), L2).scaled(ia * (sc(4) - ia * ia));

    // P2 block
    DiffOp A5p = DiffOp::dir_pow(ap, 5);
    {
        A5p -= compose(DiffOp::mult(u(2, 0).scaled(mu_)), DiffOp::dir_pow(ap, 3)).scaled(sc(5, 2));
        A5p -= compose(DiffOp::mult(u(2, 1).scaled(mu_ * mu_)), DiffOp::dir_pow(ap, 2))
                   .scaled(sc(15, 4));
        CoefElem last = (u(2, 0) * u(2, 0)).scaled(sc(15)) - u(2, 2).scaled(sc(25) * mu_);
        A5p += compose(DiffOp::mult(last.scaled(sc(1, 8) * mu_ * mu_)), DiffOp::dir_pow(ap, 1));
    }
    DiffOp A5m = DiffOp::dir_pow(am, 5);
    {
        A5m -= compose(DiffOp::mult(u(3, 0).scaled(mu_)), DiffOp::dir_pow(am, 3)).scaled(sc(5, 2));
        A5m -= compose(DiffOp::mult(u(3, 1).scaled(mu_ * mu_)), DiffOp::dir_pow(am, 2))
                   .scaled(sc(15, 4));
        CoefElem last = (u(3, 0) * u(3, 0)).scaled(sc(15)) - u(3, 2).scaled(sc(25) * mu_);
        A5m += compose(DiffOp::mult(last.scaled(sc(1, 8) * mu_ * mu_)), DiffOp::dir_pow(am, 1));
    }

    DiffOp P2 = (compose(DiffOp::mult(up), DiffOp::dir_pow(app, 4)) +
                 compose(DiffOp::mult(um), DiffOp::dir_pow(amp, 4)))
                    .scaled(sc(-20) * a_ * mu_);
    P2 += (compose(compose(Lp, Lp) - DiffOp::dir_pow(ap, 4), DiffOp::dir_pow(app, 2)) +
           compose(compose(Lm, Lm) - DiffOp::dir_pow(am, 4), DiffOp::dir_pow(amp, 2)))
              .scaled(sc(-10) * a_ * (ia * ia - sc(4) + a_ * a_));
    P2 += (compose(A5p - DiffOp::dir_pow(ap, 5), DiffOp::dir_pow(app, 1)) -
           compose(A5m - DiffOp::dir_pow(am, 5), DiffOp::dir_pow(amp, 1)))
              .scaled(sc(-2) * (a_ * a_ - sc(1)) * (sc(3) * ia * ia - sc(1)) *
                      (sc(3) * a_ * a_ - sc(1)));
    P2 += ((compose(compose(Lp, Lp), Lp) - DiffOp::dir_pow(ap, 6)) +
           (compose(compose(Lm, Lm), Lm) - DiffOp::dir_pow(am, 6)))
              .scaled(-a_ * (a_.pow(4) - sc(6) * a_ * a_ + sc(6) - sc(6) * ia * ia + ia.pow(4)));
    P += P2.scaled(mu_.pow(4).inverse());

    // P4 block; last line carries u+ u- (the sum (u+ + u-) printed in the
    // source breaks both homogeneity and the commutation)
    CoefElem upl = up + um, umi = up - um, upp = up * um;
    DiffOp P4 = DiffOp::monomial(
        2, 0,
        (u1 * upl).scaled(sc(6) * a_ * (sc(4) - a_ * a_)) +
            (u2 * upl).scaled(sc(7) * (a_ + ia)) +
            upp.scaled(sc(1, 8) * (sc(35) * ia + sc(156) * a_ - sc(39) * a_.pow(3))));
    P4 += DiffOp::monomial(
        0, 2,
        (u1 * upl).scaled(sc(7) * (a_ + ia)) +
            (u2 * upl).scaled(sc(6) * ia * (sc(4) - ia * ia)) +
            upp.scaled(sc(1, 8) * (sc(35) * a_ + sc(156) * ia - sc(39) * ia.pow(3))));
    P4 += DiffOp::monomial(1, 1,
                           (u1 * umi).scaled(sc(3) * a_ * a_ - sc(7)) +
                               (u2 * umi).scaled(sc(3) * ia * ia - sc(7)));
    // the self-adjoint completion of the P4 block
    DiffOp T1 = dxdxi_requantize(P4);
    DiffOp T2 = dxdxi_requantize(T1);
    P += P4 + T1.scaled(sc(1, 2)) + T2.scaled(sc(1, 8));

    // Q4 block
    Scalar q4c = sc(-21, 16) * mu_ * mu_ * (a_ - ia) * (sc(3) * a_ * a_ - sc(1)) *
                 (sc(3) * ia * ia - sc(1)) * g2_;
    if (!q4c.is_zero()) {
        DiffOp Q4 = L1 - L2 - DiffOp::mult(upl.scaled((a_ * a_ - sc(1)) / mu_));
        P += Q4.scaled(q4c);
    }

    // P6 block (multiplication part as printed)
    CoefElem p6 = ((u(0, 2) - u1 * u1) * upl).scaled(sc(3) * a_ * (sc(4) - a_ * a_));
    p6 += ((u(1, 2) - u2 * u2) * upl).scaled(sc(3) * ia * (sc(4) - ia * ia));
    {
        CoefElem t = u1.scaled(sc(15) * a_.pow(3) - sc(72) * a_ - sc(7) * ia) +
                     u2.scaled(sc(15) * ia.pow(3) - sc(72) * ia - sc(7) * a_);
        p6 += (t * (up * up + um * um)).scaled(sc(1, 8));
    }
    {
        CoefElem t = u1.scaled(sc(20) * a_.pow(4) - sc(83) * a_ * a_ + sc(24) + sc(7) * ia * ia) +
                     u2.scaled(sc(20) * ia.pow(4) - sc(83) * ia * ia + sc(24) + sc(7) * a_ * a_);
        p6 += (t * (u(2, 2) + u(3, 2))).scaled(a_ / sc(4));
    }
    p6 += (upp * upl).scaled(sc(3, 16) * (a_ + ia) * (sc(7) * a_ * a_ - sc(38) + sc(7) * ia * ia));
    p6 += (u(2, 2) * um + up * u(3, 2))
              .scaled(sc(-5, 32) * a_ * (sc(5) * a_.pow(4) - sc(202) + sc(5) * ia.pow(4)));
    p6 += (u(2, 1) * u(3, 1))
              .scaled(sc(3, 16) * a_ * (a_ * a_ - ia * ia) *
                      (sc(19) * a_ * a_ - sc(122) + sc(19) * ia * ia));
    p6 += (u1 * u2 * upl).scaled(sc(-7) * (a_ + ia));
    {
        CoefElem t = u1.scaled(a_ * (sc(57) * a_ * a_ - sc(216) + sc(7) * ia * ia)) +
                     u2.scaled(ia * (sc(57) * ia * ia - sc(216) + sc(7) * a_ * a_));
        p6 += (t * upp).scaled(sc(1, 8));
    }
    P += DiffOp::mult(p6);
    return P;
}

std::vector<CoefElem> addition_identity_columns(const RingPtr& ring) {
    // For any zero-sum triple of wp arguments (w_i, e_j w_j, e_k w_k) the
    // determinant det[[wp, wp', 1]; ...] vanishes identically although it is
    // nonzero in the free generator ring. wp is even and wp' odd, so a sign
    // flip on the argument flips only the q entry.
    const std::size_t n = ring->size();
    std::vector<CoefElem> gens;
    auto P_ = [&](unsigned i) { return CoefElem::p_gen(ring, i); };
    auto Q_ = [&](unsigned i) { return CoefElem::q_gen(ring, i); };
    auto det3 = [&](const CoefElem& a1, const CoefElem& b1, const CoefElem& a2,
                    const CoefElem& b2, const CoefElem& a3, const CoefElem& b3) {
        return a1 * (b2 - b3) - b1 * (a2 - a3) + (a2 * b3 - a3 * b2);
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (ring->locus()[i].kind != PotentialKind::Elliptic) continue;
        Covector wi = ring->locus()[i].alpha.scaled(ring->locus()[i].scale);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (ring->locus()[j].kind != PotentialKind::Elliptic) continue;
            Covector wj = ring->locus()[j].alpha.scaled(ring->locus()[j].scale);
            for (std::size_t k = j + 1; k < n; ++k) {
                if (ring->locus()[k].kind != PotentialKind::Elliptic) continue;
                Covector wk = ring->locus()[k].alpha.scaled(ring->locus()[k].scale);
                for (int ej : {+1, -1})
                    for (int ek : {+1, -1}) {
                        Scalar s1 = wi.c1 + Scalar(ej) * wj.c1 + Scalar(ek) * wk.c1;
                        Scalar s2 = wi.c2 + Scalar(ej) * wj.c2 + Scalar(ek) * wk.c2;
                        if (!s1.is_zero() || !s2.is_zero()) continue;
                        CoefElem qj = Q_(unsigned(j)), qk = Q_(unsigned(k));
                        if (ej < 0) qj = -qj;
                        if (ek < 0) qk = -qk;
                        gens.push_back(det3(P_(unsigned(i)), Q_(unsigned(i)),
                                            P_(unsigned(j)), qj, P_(unsigned(k)), qk));
                    }
            }
        }
    }

    std::vector<CoefElem> cols;
    for (const CoefElem& I : gens) {
        cols.push_back(I);
        for (unsigned i = 0; i < n; ++i) cols.push_back(I * P_(i));
        for (unsigned i = 0; i < n; ++i) cols.push_back(I * Q_(i));
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = i; j < n; ++j) cols.push_back(I * P_(i) * P_(j));
        CoefElem d0 = I.dx(0), d1 = I.dx(1);
        cols.push_back(d0);
        cols.push_back(d1);
        for (unsigned i = 0; i < n; ++i) {
            cols.push_back(d0 * P_(i));
            cols.push_back(d1 * P_(i));
        }
        cols.push_back(d0.dx(0));
        cols.push_back(d0.dx(1));
        cols.push_back(d1.dx(1));
    }
    return cols;
}

std::vector<CoefElem> B2Model::identity_elements() const {
    return addition_identity_columns(gen_ring_);
}

namespace {

// all wp-generator monomials of weight sum(2 e_p + 3 e_q) <= 6, nonconstant
std::vector<CoefKey> completion_monomials() {
    std::vector<CoefKey> out;
    std::vector<unsigned> e(8, 0);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned pos, unsigned w) {
        if (pos == 8) {
            if (w > 0) {
                CoefKey k;
                for (unsigned i = 0; i < 4; ++i) k.set_p(i, e[i]);
                for (unsigned i = 0; i < 4; ++i) k.set_q(i, e[4 + i]);
                out.push_back(k);
            }
            return;
        }
        unsigned unit = pos < 4 ? 2 : 3;
        for (unsigned v = 0; w + v * unit <= 6; ++v) {
            e[pos] = v;
            rec(pos + 1, w + v * unit);
        }
        e[pos] = 0;
    };
    rec(0, 0);
    return out;
}

} // namespace

CoefElem B2Model::solve_completion(const DiffOp& L, const DiffOp& blocks) const {
    DiffOp K = commutator(L, blocks);

    std::vector<CoefKey> zmons = completion_monomials();
    std::vector<CoefElem> ident = identity_elements();

    // equation slots: dx-keys (1,0), (0,1), (0,0); identity multipliers are
    // independent per slot
    const DiffOp::Key slots[3] = {XiPoly::key(1, 0), XiPoly::key(0, 1), XiPoly::key(0, 0)};
    auto slot_index = [&](DiffOp::Key k) -> int {
        for (int s = 0; s < 3; ++s)
            if (slots[s] == k) return s;
        return -1;
    };

    // column layout: z monomials, then lambda[slot][ident]
    const std::size_t nz = zmons.size();
    const std::size_t nid = ident.size();
    const std::size_t ncols = nz + 3 * nid;

    // rows indexed by (slot, monomial)
    std::map<std::pair<int, std::uint64_t>, SparseRow> rows;
    auto add_entry = [&](int slot, const CoefElem& e, std::size_t col, const Scalar& scale) {
        for (const auto& [k, s] : e.terms()) {
            auto& row = rows[{slot, k.v}];
            row.entries.push_back({col, s * scale});
        }
    };

    // residual -> rhs
    for (const auto& [k, c] : K.terms()) {
        int s = slot_index(k);
        if (s < 0) continue; // higher orders certified separately
        for (const auto& [mk, sv] : c.terms()) rows[{s, mk.v}].rhs -= sv;
    }
    // z columns: [L, mult(Z)] = -Lap(Z) - 2 dZ/dx1 d1 - 2 dZ/dx2 d2
    for (std::size_t m = 0; m < nz; ++m) {
        CoefElem zc = CoefElem::from_terms(gen_ring_, {{zmons[m], Scalar(1)}}, {});
        CoefElem d0 = zc.dx(0), d1 = zc.dx(1);
        add_entry(0, d0, m, Scalar(-2));
        add_entry(1, d1, m, Scalar(-2));
        add_entry(2, d0.dx(0) + d1.dx(1), m, Scalar(-1));
    }
    // identity columns (the residual is allowed to be a combination of them)
    for (int s = 0; s < 3; ++s)
        for (std::size_t j = 0; j < nid; ++j)
            add_entry(s, ident[j], nz + std::size_t(s) * nid + j, Scalar(-1));

    std::vector<SparseRow> sys;
    sys.reserve(rows.size());
    for (auto& [key, row] : rows) sys.push_back(std::move(row));
    auto sol = sparse_solve(std::move(sys), ncols);
    if (!sol) return CoefElem(); // caller records failure

    std::vector<CoefElem::Term> zterms;
    for (std::size_t m = 0; m < nz; ++m)
        if (!(*sol)[m].is_zero()) zterms.push_back({zmons[m], (*sol)[m]});
    return CoefElem::from_terms(gen_ring_, std::move(zterms), {});
}

DiffOp B2Model::to_delivery(const DiffOp& op) const {
    if (!rational_) return op;
    // wp(k t; 0, 0) = 1/(k t)^2: p_i -> k_i^-2 x_a^-2, q_i -> -2 k_i^-3 x_a^-3
    DiffOp out;
    for (const auto& [key, c] : op.terms()) {
        CoefElem conv(pole_ring_, Scalar(0));
        for (const auto& [mk, s] : c.terms()) {
            Scalar f = s;
            std::array<std::uint16_t, CoefKey::kMax> den{};
            for (unsigned i = 0; i < 4; ++i) {
                unsigned pe = mk.p(i), qe = mk.q(i);
                if (pe + qe == 0) continue;
                const Scalar& k = gen_ring_->locus()[i].scale;
                f *= k.pow(-2 * long(pe) - 3 * long(qe));
                if (qe % 2) f = -f;
                f *= Scalar(2).pow(long(qe));
                den[i] = std::uint16_t(2 * pe + 3 * qe);
            }
            std::vector<CoefElem::Term> t;
            CoefKey xk;
            xk.set_x(0, mk.x(0));
            xk.set_x(1, mk.x(1));
            t.push_back({xk, f});
            conv += CoefElem::from_terms(pole_ring_, std::move(t), den);
        }
        // existing pole denominators carry over unchanged
        for (unsigned i = 0; i < 4; ++i)
            if (c.den()[i])
                throw Error("unexpected pole denominator in generator-ring operator");
        out += DiffOp::monomial(XiPoly::e1(key), XiPoly::e2(key), std::move(conv));
    }
    return out;
}

DiffOp B2Model::build_L() const {
    CoefElem R = u(0, 0) + u(1, 0) + u(2, 0) + u(3, 0);
    CoefElem one(gen_ring_, sc(1));
    DiffOp L = -(DiffOp::monomial(2, 0, one) + DiffOp::monomial(0, 2, one)) + DiffOp::mult(R);
    return to_delivery(L);
}

const B2Model::BuildInfo& B2Model::build_P() const {
    if (built_) return *built_;
    BuildInfo info;
    CoefElem one(gen_ring_, sc(1));
    DiffOp Lgen =
        -(DiffOp::monomial(2, 0, one) + DiffOp::monomial(0, 2, one)) +
        DiffOp::mult(u(0, 0) + u(1, 0) + u(2, 0) + u(3, 0));
    DiffOp blocks = blocks_without_completion();
    CoefElem z = solve_completion(Lgen, blocks);
    info.completion = z;
    info.completion_found = !z.is_zero();
    info.P = to_delivery(blocks + DiffOp::mult(z));
    built_ = std::move(info);
    return *built_;
}

DiffOp B2Model::mutated_P() const {
    // bump the coefficient of the u1*u2*(u+ + u-) multiplication monomial by 1
    CoefElem bump = CoefElem::p_gen(gen_ring_, 0) * CoefElem::p_gen(gen_ring_, 1) *
                    (CoefElem::p_gen(gen_ring_, 2) + CoefElem::p_gen(gen_ring_, 3));
    DiffOp blocks = blocks_without_completion();
    CoefElem one(gen_ring_, sc(1));
    DiffOp Lgen =
        -(DiffOp::monomial(2, 0, one) + DiffOp::monomial(0, 2, one)) +
        DiffOp::mult(u(0, 0) + u(1, 0) + u(2, 0) + u(3, 0));
    CoefElem z = solve_completion(Lgen, blocks);
    return to_delivery(blocks + DiffOp::mult(z + bump));
}

Scalar::Bindings B2Model::bindings(std::optional<mpq_class> a_value) const {
    Scalar::Bindings b;
    if (a_.is_rational()) b.a = a_.to_rational();
    else if (a_value) b.a = *a_value;
    if (g2_.is_rational()) b.g2 = g2_.to_rational();
    if (g3_.is_rational()) b.g3 = g3_.to_rational();
    return b;
}

mpq_class B2Model::default_tolerance() {
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), 10, 25);
    return mpq_class(1, d);
}

B2Model::VerifyReport verify_operators(const RingPtr& ring, const DiffOp& L,
                                       const DiffOp& P, B2Model::VerifyMode mode,
                                       unsigned trials, mpq_class tol, std::uint64_t seed,
                                       unsigned digits, const Scalar& a, const Scalar& g2,
                                       const Scalar& g3) {
    using VerifyMode = B2Model::VerifyMode;
    using ExactOutcome = B2Model::ExactOutcome;
    B2Model::VerifyReport rep;
    if (tol == 1) tol = B2Model::default_tolerance();
    DiffOp K = commutator(L, P);

    if (mode == VerifyMode::Exact || mode == VerifyMode::Both) {
        rep.ran_exact = true;
        if (K.is_zero()) {
            rep.exact = ExactOutcome::Zero;
            rep.verdict_zero = true;
        } else {
            // certify the residual against the addition-identity columns
            std::vector<CoefElem> ident = addition_identity_columns(ring);
            bool all_certified = !ident.empty();
            for (const auto& [key, c] : K.terms()) {
                rep.residual_terms += c.terms().size();
                std::ostringstream os;
                os << "dx^(" << XiPoly::e1(key) << "," << XiPoly::e2(key) << "): "
                   << c.terms().size() << " monomials";
                rep.residual_keys.push_back(os.str());
                if (!all_certified) continue;
                std::map<std::uint64_t, SparseRow> rows;
                for (const auto& [mk, s] : c.terms()) rows[mk.v].rhs += s;
                for (std::size_t j = 0; j < ident.size(); ++j)
                    for (const auto& [mk, s] : ident[j].terms())
                        rows[mk.v].entries.push_back({j, s});
                std::vector<SparseRow> sys;
                for (auto& [k2, row] : rows) sys.push_back(std::move(row));
                if (!sparse_solve(std::move(sys), ident.size())) all_certified = false;
            }
            rep.exact = all_certified ? ExactOutcome::ZeroModuloIdentities
                                      : ExactOutcome::Nonzero;
            rep.verdict_zero = all_certified;
        }
    }
    if (mode == VerifyMode::Numeric || (mode == VerifyMode::Both && !K.is_zero())) {
        rep.ran_numeric = true;
        rep.numeric_zero = true;
        std::vector<mpq_class> a_samples;
        if (a.is_rational()) a_samples.push_back(a.to_rational());
        else a_samples = {mpq_class(2), mpq_class(5, 3), mpq_class(7, 4)};
        std::vector<std::pair<mpq_class, mpq_class>> g_samples;
        if (g2.is_rational() && g3.is_rational())
            g_samples.push_back({g2.to_rational(), g3.to_rational()});
        else
            g_samples = {{mpq_class(1), mpq_class(0)},
                         {mpq_class(0), mpq_class(1)},
                         {mpq_class(3), mpq_class(2)}};
        unsigned per = std::max(1u, trials / unsigned(a_samples.size() * g_samples.size()));
        std::uint64_t s = seed;
        for (const auto& av : a_samples)
            for (const auto& [gv2, gv3] : g_samples) {
                Scalar::Bindings b;
                b.a = av;
                b.g2 = gv2;
                b.g3 = gv3;
                for (const auto& [key, c] : K.terms()) {
                    auto zt = numeric_zero_test(c, b, per, tol, ++s, digits);
                    rep.numeric_max = std::max(rep.numeric_max, zt.max_abs);
                    rep.numeric_scale = std::max(rep.numeric_scale, zt.max_scale);
                    if (!zt.numerically_zero) rep.numeric_zero = false;
                }
            }
        if (mode == VerifyMode::Numeric) rep.verdict_zero = rep.numeric_zero;
        if (mode == VerifyMode::Both && !rep.verdict_zero) rep.verdict_zero = rep.numeric_zero;
    }

    std::ostringstream os;
    if (rep.ran_exact) {
        switch (rep.exact) {
            case ExactOutcome::Zero: os << "exact: commutator is structurally zero"; break;
            case ExactOutcome::ZeroModuloIdentities:
                os << "exact: zero modulo the wp addition-theorem identities ("
                   << rep.residual_terms << " free-ring residual monomials certified)";
                break;
            case ExactOutcome::Nonzero: os << "exact: NONZERO free-ring residual"; break;
        }
    }
    if (rep.ran_numeric) {
        if (rep.ran_exact) os << "; ";
        os << "numeric: max |residual| " << decimal_string(rep.numeric_max, 6) << " vs scale "
           << decimal_string(rep.numeric_scale, 6) << " -> "
           << (rep.numeric_zero ? "zero" : "NONZERO");
    }
    rep.summary = os.str();
    return rep;
}

B2Model::VerifyReport B2Model::verify_commutation(VerifyMode mode, unsigned trials,
                                                  mpq_class tol, std::uint64_t seed,
                                                  unsigned digits) const {
    return verify_operators(rational_ ? pole_ring_ : gen_ring_, build_L(), build_P().P, mode,
                            trials, std::move(tol), seed, digits, a_, g2_, g3_);
}

PotentialAnsatz b2_ansatz(const Scalar& a) {
    Scalar mu = a * a + Scalar(1);
    Scalar ia = a.inverse();
    PotentialAnsatz an;
    an.coef[0] = Scalar(3, 4) * mu * (Scalar(3) * ia * ia - Scalar(1));
    an.coef[1] = Scalar(3, 4) * mu * (Scalar(3) * a * a - Scalar(1));
    an.coef[2] = Scalar(6) * mu;
    an.coef[3] = Scalar(6) * mu;
    an.scale[0] = Scalar(2) * a;
    an.scale[1] = Scalar(2);
    an.scale[2] = Scalar(1);
    an.scale[3] = Scalar(1);
    return an;
}

PotentialConditionsReport derive_potential_conditions(const Scalar& a,
                                                      const PotentialAnsatz& an) {
    if (a.is_rational()) {
        mpq_class a2 = a.to_rational() * a.to_rational();
        if (a2 == mpq_class(7, 3) || a2 == mpq_class(3, 7))
            throw ExcludedParameter("a^2 in {7/3, 3/7} degenerates conditions 1-2");
    }
    PotentialConditionsReport rep;
    // argument compatibility (wp is even, so compare squared scales):
    //   k+ = k-,  k1 = 2 a k-,  k2 = 2 k+
    auto eq2 = [](const Scalar& x, const Scalar& y) { return x * x == y * y; };
    rep.scales_compatible = eq2(an.scale[2], an.scale[3]) &&
                            eq2(an.scale[0], Scalar(2) * a * an.scale[3]) &&
                            eq2(an.scale[1], Scalar(2) * an.scale[2]);
    if (!rep.scales_compatible) {
        rep.detail = "wp arguments do not coincide; conditions are not scalar reductions";
        return rep;
    }
    Scalar ia = a.inverse();
    const Scalar &c1 = an.coef[0], &c2 = an.coef[1], &cp = an.coef[2], &cm = an.coef[3];
    rep.residuals.push_back((Scalar(3) * ia * ia - Scalar(7)) * (cp - cm));
    rep.residuals.push_back((Scalar(3) * a * a - Scalar(7)) * (cp - cm));
    rep.residuals.push_back(Scalar(2) * a * a * c1 - Scalar(2) * c2 + (a * a - Scalar(1)) * cm);
    rep.residuals.push_back(Scalar(2) * a * a * c1 - Scalar(2) * c2 + (a * a - Scalar(1)) * cp);
    Scalar pref = Scalar(3) * a * (a * a - Scalar(1)) * (a * a + Scalar(1)).pow(2) *
                  (Scalar(3) * a.pow(4) - Scalar(26) * a * a + Scalar(3));
    rep.residuals.push_back(pref * (Scalar(8) * a * a * c1 + (a * a - Scalar(3)) * cp));
    rep.all_zero = true;
    for (const auto& r : rep.residuals) rep.all_zero = rep.all_zero && r.is_zero();
    rep.detail = rep.all_zero ? "all five conditions vanish"
                              : "some conditions fail on this ansatz";
    return rep;
}

} // namespace cms2
