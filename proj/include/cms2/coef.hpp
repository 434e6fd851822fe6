#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cms2/geometry.hpp"

namespace cms2 {

// Monomial key for the x-coefficient ring. Packs, per locus entry i (up to 6),
// the wp-generator exponents p_i (5 bits) and q_i (3 bits), plus x1/x2 degrees
// (8 bits each):  [x1:8][x2:8][p0..p5:5*6][q0..q5:3*6] = 64 bits.
struct CoefKey {
    std::uint64_t v = 0;

    static constexpr unsigned kMax = 6;

    unsigned x(int d) const { return unsigned((v >> (d == 0 ? 56 : 48)) & 0xff); }
    unsigned p(unsigned i) const { return unsigned((v >> (18 + 5 * i)) & 0x1f); }
    unsigned q(unsigned i) const { return unsigned((v >> (3 * i)) & 0x7); }

    void set_x(int d, unsigned e) {
        int sh = d == 0 ? 56 : 48;
        v = (v & ~(std::uint64_t(0xff) << sh)) | (std::uint64_t(e & 0xff) << sh);
    }
    void set_p(unsigned i, unsigned e) {
        int sh = 18 + 5 * i;
        v = (v & ~(std::uint64_t(0x1f) << sh)) | (std::uint64_t(e & 0x1f) << sh);
    }
    void set_q(unsigned i, unsigned e) {
        int sh = 3 * i;
        v = (v & ~(std::uint64_t(0x7) << sh)) | (std::uint64_t(e & 0x7) << sh);
    }

    bool operator==(const CoefKey& o) const { return v == o.v; }
    bool operator<(const CoefKey& o) const { return v < o.v; }
};

// Shared immutable context: the locus (linear forms, potential kinds, scales)
// and the wp invariants used by the ODE rewrite q_i^2 = 4 p_i^3 - g2 p_i - g3.
class CoefRing {
public:
    CoefRing(Locus locus, Scalar g2, Scalar g3);

    const Locus& locus() const { return locus_; }
    std::size_t size() const { return locus_.size(); }
    const Scalar& g2() const { return g2_; }
    const Scalar& g3() const { return g3_; }

    // linear form coefficient of entry i in direction d (alpha_i components)
    const Scalar& form(unsigned i, int d) const {
        return d == 0 ? locus_[i].alpha.c1 : locus_[i].alpha.c2;
    }

private:
    Locus locus_;
    Scalar g2_, g3_;
};

using RingPtr = std::shared_ptr<const CoefRing>;

// Element of the x-coefficient ring. Numerator: polynomial over Scalar in
// x1, x2 and the wp generators p_i = wp(k_i x_{alpha_i}), q_i = wp'(...);
// denominator: a monomial in the locus linear forms. Canonical form: every
// q_i-degree <= 1 (ODE applied) and no linear form divides the numerator
// while its denominator exponent is positive. A null ring means the element
// is a plain Scalar.
class CoefElem {
public:
    using Term = std::pair<CoefKey, Scalar>;

    CoefElem() = default;
    explicit CoefElem(Scalar s);
    CoefElem(RingPtr ring, Scalar s);

    static CoefElem zero() { return CoefElem(); }
    // generator monomials
    static CoefElem p_gen(const RingPtr& ring, unsigned i, unsigned exp = 1);
    static CoefElem q_gen(const RingPtr& ring, unsigned i);
    static CoefElem x_mono(const RingPtr& ring, unsigned e1, unsigned e2);
    // scalar over a product of linear-form powers
    static CoefElem pole(const RingPtr& ring, Scalar num, const std::vector<unsigned>& denExp);
    static CoefElem from_terms(RingPtr ring, std::vector<Term> terms,
                               std::array<std::uint16_t, CoefKey::kMax> den);

    // j-th derivative (in the potential's own argument t = x_alpha) of u_i
    static CoefElem u_deriv(const RingPtr& ring, unsigned i, unsigned j);

    const RingPtr& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return terms_; }
    const std::array<std::uint16_t, CoefKey::kMax>& den() const { return den_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_scalar() const;
    Scalar scalar_value() const; // valid when is_scalar()

    CoefElem operator-() const;
    CoefElem operator+(const CoefElem& o) const;
    CoefElem operator-(const CoefElem& o) const;
    CoefElem operator*(const CoefElem& o) const;
    CoefElem& operator+=(const CoefElem& o) { *this = *this + o; return *this; }
    CoefElem& operator-=(const CoefElem& o) { *this = *this - o; return *this; }
    CoefElem& operator*=(const CoefElem& o) { *this = *this * o; return *this; }
    bool operator==(const CoefElem& o) const;
    bool operator!=(const CoefElem& o) const { return !(*this == o); }

    CoefElem scaled(const Scalar& s) const;

    // exact spatial derivative d/dx_d (d in {0,1}); poles and generators both
    // contribute, with chain factors k_i alpha_{i,d}
    CoefElem dx(int d) const;
    // <alpha, d_x>
    CoefElem dx_dir(const Covector& alpha) const;

    // maximal pole order along entry i
    unsigned pole_order(unsigned i) const { return den_[i]; }

    // same data over another (structurally identical) ring instance
    CoefElem rebased(const RingPtr& r) const { return from_terms(r, terms_, den_); }

    std::string to_string() const;

private:
    RingPtr ring_;
    std::vector<Term> terms_; // sorted ascending by key
    std::array<std::uint16_t, CoefKey::kMax> den_{};

    void canon();
    void rewrite_q();
    void cancel_poles();
    static RingPtr merge_rings(const RingPtr& x, const RingPtr& y);
};

} // namespace cms2
