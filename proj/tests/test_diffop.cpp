#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cms2/diffop.hpp"
#include "cms2/errors.hpp"

using namespace cms2;

namespace {

std::mt19937 rng(4242);

RingPtr ring() {
    static RingPtr r = [] {
        std::vector<LocusEntry> es;
        es.push_back({Covector(1, 0), Scalar(2), PotentialKind::Rational, Scalar(1)});
        es.push_back({Covector(0, 1), Scalar(3), PotentialKind::Rational, Scalar(1)});
        es.push_back({Covector(1, -1), Scalar(5), PotentialKind::Rational, Scalar(1)});
        return std::make_shared<CoefRing>(Locus(std::move(es)), Scalar(0), Scalar(0));
    }();
    return r;
}

CoefElem rand_coef() {
    std::uniform_int_distribution<long> c(-4, 4);
    std::uniform_int_distribution<unsigned> j(0, 2);
    std::uniform_int_distribution<int> pick(0, 3);
    CoefElem e(ring(), Scalar(c(rng)));
    if (pick(rng) < 2) e += CoefElem::u_deriv(ring(), j(rng), j(rng)).scaled(Scalar(c(rng)));
    if (pick(rng) == 0) e += CoefElem::x_mono(ring(), j(rng) % 2, j(rng) % 2).scaled(Scalar(c(rng)));
    return e;
}

DiffOp rand_op(unsigned maxOrder = 3) {
    std::uniform_int_distribution<unsigned> d(0, maxOrder);
    DiffOp op;
    for (int t = 0; t < 3; ++t) {
        unsigned k1 = d(rng), k2 = d(rng);
        if (k1 + k2 > maxOrder) continue;
        op += DiffOp::monomial(k1, k2, rand_coef());
    }
    return op;
}

DiffOp laplacian() {
    return DiffOp::monomial(2, 0, CoefElem(ring(), Scalar(1))) +
           DiffOp::monomial(0, 2, CoefElem(ring(), Scalar(1)));
}

} // namespace

TEST_CASE("canonical commutation [d1, x1] = 1") {
    DiffOp d1 = DiffOp::monomial(1, 0, CoefElem(ring(), Scalar(1)));
    DiffOp x1 = DiffOp::mult(CoefElem::x_mono(ring(), 1, 0));
    CHECK(commutator(d1, x1) == DiffOp::mult(CoefElem(ring(), Scalar(1))));
}

TEST_CASE("compose with identity") {
    for (int t = 0; t < 20; ++t) {
        DiffOp A = rand_op();
        CHECK(compose(A, DiffOp::identity()) == A);
        CHECK(compose(DiffOp::identity(), A) == A);
    }
}

TEST_CASE("Leibniz: d1 o u = u d1 + u'") {
    CoefElem u = CoefElem::u_deriv(ring(), 0, 0);
    DiffOp d1 = DiffOp::monomial(1, 0, CoefElem(ring(), Scalar(1)));
    DiffOp got = compose(d1, DiffOp::mult(u));
    DiffOp want = DiffOp::monomial(1, 0, u) + DiffOp::mult(CoefElem::u_deriv(ring(), 0, 1));
    CHECK(got == want);
}

TEST_CASE("commutator of an operator with itself and of plain derivatives") {
    DiffOp d1 = DiffOp::monomial(1, 0, CoefElem(ring(), Scalar(1)));
    DiffOp d2 = DiffOp::monomial(0, 1, CoefElem(ring(), Scalar(1)));
    CHECK(commutator(d1, d2).is_zero());
    for (int t = 0; t < 10; ++t) {
        DiffOp A = rand_op();
        CHECK(commutator(A, A).is_zero());
    }
}

TEST_CASE("associativity of composition") {
    for (int t = 0; t < 120; ++t) {
        DiffOp A = rand_op(), B = rand_op(), C = rand_op();
        CHECK(compose(compose(A, B), C) == compose(A, compose(B, C)));
    }
}

TEST_CASE("parallel compose equals serial reference") {
    for (int t = 0; t < 40; ++t) {
        DiffOp A = rand_op(4), B = rand_op(4);
        CHECK(compose(A, B) == compose_serial(A, B));
    }
}

TEST_CASE("adjoint involution and anti-homomorphism") {
    DiffOp d1 = DiffOp::monomial(1, 0, CoefElem(ring(), Scalar(1)));
    CHECK(formal_adjoint(d1) == -d1);
    CoefElem u = CoefElem::u_deriv(ring(), 1, 0);
    CHECK(formal_adjoint(DiffOp::mult(u)) == DiffOp::mult(u));
    for (int t = 0; t < 100; ++t) {
        DiffOp A = rand_op(), B = rand_op();
        CHECK(formal_adjoint(formal_adjoint(A)) == A);
        CHECK(formal_adjoint(compose(A, B)) == compose(formal_adjoint(B), formal_adjoint(A)));
    }
}

TEST_CASE("Schroedinger operators are self-adjoint") {
    CoefElem R = CoefElem::u_deriv(ring(), 0, 0) + CoefElem::u_deriv(ring(), 1, 0) +
                 CoefElem::u_deriv(ring(), 2, 0);
    DiffOp L = -laplacian() + DiffOp::mult(R);
    CHECK(formal_adjoint(L) == L);
}

TEST_CASE("Jacobi identity") {
    for (int t = 0; t < 100; ++t) {
        DiffOp A = rand_op(2), B = rand_op(2), C = rand_op(2);
        DiffOp j = commutator(A, commutator(B, C)) + commutator(B, commutator(C, A)) +
                   commutator(C, commutator(A, B));
        CHECK(j.is_zero());
    }
}

TEST_CASE("symbol levels") {
    CoefElem u = CoefElem::u_deriv(ring(), 0, 0);
    DiffOp L = -laplacian() + DiffOp::mult(u);
    XiPoly lvl0 = L.symbol_level(0);
    CHECK(lvl0 == -(XiPoly::monomial(2, 0, Scalar(1)) + XiPoly::monomial(0, 2, Scalar(1))).coef_mul(CoefElem(ring(), Scalar(1))));
    CHECK(L.symbol_level(2) == XiPoly::constant(u));
    CHECK(L.symbol_level(1).is_zero());
    CHECK_THROWS_AS(L.symbol_level(3), LevelOutOfRange);
}

TEST_CASE("odd symbol levels of self-adjoint operators obey the adjoint recursion") {
    // P~_{2k+1} = (1/2) sum_{j=1}^{2k+1} ((-1)^(j+1)/j!) <d_x,d_xi>^j P~_{2k+1-j}
    for (int t = 0; t < 30; ++t) {
        DiffOp B = rand_op(2);
        DiffOp P = compose(B, formal_adjoint(B)); // self-adjoint, order <= 4
        CHECK(formal_adjoint(P) == P);
        unsigned m0 = P.order();
        if (m0 < 1) continue;
        long factorial = 1;
        for (unsigned level = 1; level <= m0; level += 2) {
            XiPoly want = P.symbol_level(level);
            XiPoly sum;
            factorial = 1;
            for (unsigned j = 1; j <= level; ++j) {
                factorial *= j;
                XiPoly term = P.symbol_level(level - j);
                for (unsigned it = 0; it < j; ++it) term = term.dx_dot_dxi();
                Scalar c(Scalar(1, factorial));
                if (j % 2 == 0) c = -c;
                sum += term.scaled(c);
            }
            CHECK(want == sum.scaled(Scalar(1, 2)));
        }
    }
}
