#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace cms2 {

// Polynomials in Z[a, g2, g3], sparse, terms sorted by descending exponent
// key. The key packs the three exponents (a, g2, g3) into 21 bits each, so
// numeric comparison of keys is lexicographic a > g2 > g3.
class MPoly {
public:
    enum Var : int { VarA = 0, VarG2 = 1, VarG3 = 2 };

    using Term = std::pair<std::uint64_t, mpz_class>;

    MPoly() = default;
    explicit MPoly(long c);
    explicit MPoly(const mpz_class& c);

    static MPoly variable(Var v, unsigned exp = 1);
    static MPoly monomial(const mpz_class& c, unsigned ea, unsigned e2, unsigned e3);

    static std::uint64_t pack(unsigned ea, unsigned e2, unsigned e3);
    static unsigned exponent(std::uint64_t key, Var v);

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_constant() const;
    // total degree in the given variable
    unsigned degree(Var v) const;

    const std::vector<Term>& terms() const { return terms_; }
    // leading (lex-greatest) coefficient
    const mpz_class& leading_coeff() const;

    MPoly operator-() const;
    MPoly operator+(const MPoly& o) const;
    MPoly operator-(const MPoly& o) const;
    MPoly operator*(const MPoly& o) const;
    MPoly& operator+=(const MPoly& o) { *this = *this + o; return *this; }
    MPoly& operator-=(const MPoly& o) { *this = *this - o; return *this; }
    MPoly& operator*=(const MPoly& o) { *this = *this * o; return *this; }

    bool operator==(const MPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const MPoly& o) const { return !(*this == o); }

    MPoly mul_mpz(const mpz_class& c) const;
    MPoly pow(unsigned n) const;

    // exact division; returns false (and leaves q untouched) on failure
    bool div_exact(const MPoly& d, MPoly& q) const;

    // gcd of integer coefficients (non-negative)
    mpz_class content() const;
    MPoly divide_content(const mpz_class& c) const;

    static MPoly gcd(const MPoly& x, const MPoly& y);

    // Substitute rationals for a subset of variables. `bound[v]` says whether
    // var v is bound to `vals[v]`. Result is poly * (1/den), den > 0.
    void substitute(const bool bound[3], const mpq_class vals[3],
                    MPoly& out, mpz_class& den) const;

    std::string to_string() const;

    std::size_t hash() const;

private:
    std::vector<Term> terms_;

    void normalize_sorted();
    friend class MPolyBuilder;
};

// accumulate terms unordered, then finish() into canonical form
class MPolyBuilder {
public:
    void add(std::uint64_t key, const mpz_class& c);
    MPoly finish();

private:
    std::vector<MPoly::Term> acc_;
};

} // namespace cms2
