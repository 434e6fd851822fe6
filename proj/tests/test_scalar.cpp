#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cms2/errors.hpp"
#include "cms2/scalar.hpp"

using namespace cms2;

namespace {

Scalar A() { return Scalar::sym_a(); }

std::mt19937 rng(20240811);

Scalar random_scalar(int depth = 0) {
    std::uniform_int_distribution<int> pick(0, depth > 1 ? 3 : 5);
    std::uniform_int_distribution<long> num(-9, 9);
    switch (pick(rng)) {
        case 0: return Scalar(num(rng));
        case 1: return Scalar::sym_a();
        case 2: return Scalar::sym_g2();
        case 3: {
            long d = 0;
            while (d == 0) d = num(rng);
            return Scalar(num(rng), d);
        }
        case 4: return random_scalar(depth + 1) + random_scalar(depth + 1);
        default: return random_scalar(depth + 1) * random_scalar(depth + 1);
    }
}

} // namespace

TEST_CASE("polynomial cancellation (a^2-1)/(a-1) = a+1") {
    Scalar n = A() * A() - Scalar(1);
    Scalar d = A() - Scalar(1);
    CHECK(n / d == A() + Scalar(1));
}

TEST_CASE("inverse: (1/a)*a = 1") {
    CHECK(A().inverse() * A() == Scalar(1));
}

TEST_CASE("division by zero throws") {
    CHECK_THROWS_AS(Scalar(1) / Scalar(0), DivisionByZero);
    CHECK_THROWS_AS(Scalar(0).inverse(), DivisionByZero);
}

TEST_CASE("specialize substitutes and reduces") {
    Scalar s = (A() * A() + Scalar(1)) / A();
    Scalar::Bindings b;
    b.a = mpq_class(2);
    CHECK(s.specialize(b) == Scalar(5, 2));

    Scalar t = Scalar::sym_g2() * A();
    Scalar::Bindings b2;
    b2.g2 = mpq_class(0);
    CHECK(t.specialize(b2).is_zero());

    Scalar u = Scalar(1) / (A() - Scalar(2));
    Scalar::Bindings b3;
    b3.a = mpq_class(2);
    CHECK_THROWS_AS(u.specialize(b3), PoleAtSpecialization);
}

TEST_CASE("excluded parameters of the deformation") {
    CHECK(is_excluded_parameter(mpq_class(1)).excluded);
    CHECK(is_excluded_parameter(mpq_class(-1)).excluded);
    CHECK(is_excluded_parameter(mpq_class(0)).excluded);
    CHECK_FALSE(is_excluded_parameter(mpq_class(2)).excluded);
    CHECK_FALSE(is_excluded_parameter(mpq_class(5, 3)).excluded);
    // a^2 = 3 has no rational root, but a^2 values are tested through a:
    // the rational exclusions reachable are only via the listed squares.
    CHECK_FALSE(is_excluded_parameter(mpq_class(3)).excluded); // a=3 -> a^2=9 fine
}

TEST_CASE("field axioms on random scalars") {
    for (int trial = 0; trial < 1200; ++trial) {
        Scalar x = random_scalar(), y = random_scalar(), z = random_scalar();
        CHECK((x + y) + z == x + (y + z));
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK(x + y == y + x);
        CHECK(x * y == y * x);
        if (!x.is_zero()) CHECK(x * x.inverse() == Scalar(1));
    }
}

TEST_CASE("canonical form is idempotent and equality is structural") {
    for (int trial = 0; trial < 300; ++trial) {
        Scalar x = random_scalar(), y = random_scalar();
        if (y.is_zero()) continue;
        Scalar q = x / y;
        // rebuilding from the reduced parts must not change anything
        Scalar again(q.num(), q.den());
        CHECK(again == q);
        // equal values have identical representation
        Scalar q2 = (x * Scalar(7)) / (y * Scalar(7));
        CHECK(q2 == q);
    }
}

TEST_CASE("specialize commutes with arithmetic") {
    Scalar::Bindings b;
    b.a = mpq_class(3, 2);
    b.g2 = mpq_class(-2);
    b.g3 = mpq_class(7, 5);
    for (int trial = 0; trial < 300; ++trial) {
        Scalar x = random_scalar(), y = random_scalar();
        bool ok = true;
        Scalar lhs, rx, ry;
        try {
            lhs = (x * y).specialize(b);
            rx = x.specialize(b);
            ry = y.specialize(b);
        } catch (const PoleAtSpecialization&) {
            ok = false;
        }
        if (ok) CHECK(lhs == rx * ry);
    }
}

TEST_CASE("textual round trip") {
    for (int trial = 0; trial < 300; ++trial) {
        Scalar x = random_scalar();
        CHECK(Scalar::parse(x.to_string()) == x);
    }
    CHECK(Scalar::parse("3/4*a^2 - g2*g3 + 1/(a+1)") ==
          Scalar(3, 4) * A() * A() - Scalar::sym_g2() * Scalar::sym_g3() +
              (A() + Scalar(1)).inverse());
}
