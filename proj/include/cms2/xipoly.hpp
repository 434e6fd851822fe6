#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cms2/coef.hpp"

namespace cms2 {

// Polynomial in xi1, xi2 with CoefElem coefficients (a plain Scalar is the
// ring-free special case). No stored zero coefficients.
class XiPoly {
public:
    using Key = std::uint16_t; // (e1 << 8) | e2
    using Term = std::pair<Key, CoefElem>;

    static Key key(unsigned e1, unsigned e2) { return Key((e1 << 8) | e2); }
    static unsigned e1(Key k) { return k >> 8; }
    static unsigned e2(Key k) { return k & 0xff; }

    XiPoly() = default;
    static XiPoly monomial(unsigned d1, unsigned d2, CoefElem c);
    static XiPoly monomial(unsigned d1, unsigned d2, Scalar c);
    static XiPoly constant(CoefElem c) { return monomial(0, 0, std::move(c)); }
    // xi_alpha = alpha1 xi1 + alpha2 xi2
    static XiPoly xi_form(const Covector& alpha);

    bool is_zero() const { return terms_.empty(); }
    unsigned degree() const;
    bool is_homogeneous() const;
    const std::vector<Term>& terms() const { return terms_; }
    const CoefElem* coeff(unsigned d1, unsigned d2) const;

    XiPoly operator-() const;
    XiPoly operator+(const XiPoly& o) const;
    XiPoly operator-(const XiPoly& o) const;
    XiPoly operator*(const XiPoly& o) const;
    XiPoly& operator+=(const XiPoly& o) { *this = *this + o; return *this; }
    XiPoly& operator-=(const XiPoly& o) { *this = *this - o; return *this; }
    bool operator==(const XiPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const XiPoly& o) const { return !(*this == o); }

    XiPoly scaled(const Scalar& s) const;
    XiPoly coef_mul(const CoefElem& c) const;

    // d/dxi_d
    XiPoly dxi(int d) const;
    // <alpha, d_xi>
    XiPoly d_xi_dir(const Covector& alpha) const;
    // D_theta = xi2 d/dxi1 - xi1 d/dxi2
    XiPoly d_theta() const;

    XiPoly mul_xi(const Covector& alpha) const;
    // exact division by xi_alpha; nullopt when not divisible
    std::optional<XiPoly> div_xi(const Covector& alpha) const;
    // throwing variant; error carries the remainder.
    XiPoly div_xi_exact(const Covector& alpha) const;

    // <xi, d_x> : multiply by xi_i, differentiate coefficient in x_i
    XiPoly xi_dot_dx() const;
    // <d_x, d_xi>
    XiPoly dx_dot_dxi() const;
    // Laplacian applied to coefficients
    XiPoly laplace_coef() const;

    // For homogeneous scalar-coefficient polys: coefficients c_k in
    // F = sum_k c_k xi_alpha^k xi_alphaperp^(m-k).  (divides by |alpha|^2)
    std::vector<Scalar> expand_in_dir(const Covector& alpha) const;

    std::string to_string() const;

private:
    std::vector<Term> terms_; // ascending by key
    void prune();
};

} // namespace cms2
