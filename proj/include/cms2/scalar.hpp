#pragma once

#include <optional>
#include <string>

#include "cms2/mpoly.hpp"

namespace cms2 {

// Exact element of Q(a, g2, g3), kept reduced: gcd(num, den) = 1 and the
// denominator's lex-leading coefficient is positive. Equality is structural.
class Scalar {
public:
    Scalar() : num_(), den_(1) {}
    Scalar(long v) : num_(v), den_(1) {}
    Scalar(long n, long d);
    explicit Scalar(const mpq_class& q);
    Scalar(MPoly num, MPoly den);

    static Scalar sym_a() { return Scalar(MPoly::variable(MPoly::VarA), MPoly(1)); }
    static Scalar sym_g2() { return Scalar(MPoly::variable(MPoly::VarG2), MPoly(1)); }
    static Scalar sym_g3() { return Scalar(MPoly::variable(MPoly::VarG3), MPoly(1)); }

    const MPoly& num() const { return num_; }
    const MPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
    // value as an exact rational; only valid when is_rational()
    mpq_class to_rational() const;

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const; // throws DivisionByZero
    Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
    Scalar& operator-=(const Scalar& o) { *this = *this - o; return *this; }
    Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }
    Scalar& operator/=(const Scalar& o) { *this = *this / o; return *this; }

    bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar inverse() const; // throws DivisionByZero
    Scalar pow(long n) const;

    struct Bindings {
        std::optional<mpq_class> a, g2, g3;
    };
    // substitute bound indeterminates, re-reduce; throws PoleAtSpecialization
    Scalar specialize(const Bindings& b) const;

    // evaluate fully; all variables appearing must be bound
    mpq_class evaluate(const Bindings& b) const;

    std::string to_string() const;
    // parses the textual form: rationals "n/d", symbols a g2 g3, + - * / ^ ( )
    static Scalar parse(const std::string& text);

    std::size_t hash() const;

private:
    MPoly num_, den_;
    void reduce();
};

inline Scalar operator*(long c, const Scalar& s) { return Scalar(c) * s; }

struct ExclusionReport {
    bool excluded;
    std::string reason;
};

// The parameter exclusions for rational a: a in {0, +-1} or a^2 in
// {3, 1/3, 7/3, 3/7}. The irrational thresholds (13 +- 4*sqrt(10))/3 cannot
// be hit by a rational a and are reported as automatically satisfied.
ExclusionReport is_excluded_parameter(const mpq_class& a);

} // namespace cms2
