#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cms2/diffop.hpp"

namespace cms2 {

struct AdmissibilityEntry {
    bool pass = true;
    // m > 0 when C_alpha = m(m+1)|alpha|^2 holds for an integer m; 0 = generic
    unsigned coupling_class = 0;
    std::vector<unsigned> offending_k; // odd indices whose c_k must vanish but do not
    std::vector<Scalar> coefficients;  // expansion of P0 in (xi_alpha, xi_alphaperp)
};

struct AdmissibilityReport {
    std::vector<AdmissibilityEntry> entries;
    bool all_pass = true;
};

struct OrderBoundResult {
    bool divisible = false;
    XiPoly quotient;          // D_theta P0 / prod xi_alpha when divisible
    std::size_t failed_at = 0; // index of the first line that blocked division
};

struct SecondRelationEntry {
    Scalar residual;
    Scalar coupling_factor; // C_alpha0 - 2|alpha0|^2
    Scalar sum_factor;      // sum_beta <a0,b>|b|^2 C_b / <a0^,b>^5
};

// The construction pipeline for a principal symbol over a singular locus:
// admissibility, P2/P3/P4/P5, the building blocks P2^a, P4^a, P4^{ab}, P6^a,
// the two necessary relations, and the K_alpha0 constants.
class SymbolPipeline {
public:
    // P0 must be x-constant (scalar coefficients) and homogeneous.
    SymbolPipeline(Locus locus, XiPoly p0);

    const Locus& locus() const { return locus_; }
    const XiPoly& p0() const { return p0_; }
    unsigned m0() const { return m0_; }
    const RingPtr& ring() const { return ring_; }

    AdmissibilityReport check_admissible() const;
    OrderBoundResult order_bound_check() const;

    // P2^alpha = d_{xi,alpha} P0 / xi_alpha (scalar coefficients)
    const XiPoly& p2_alpha(std::size_t i) const;
    // P4^alpha = [(C + 6|a|^2) d P2^a - 4 d^3 P0]/xi_a
    const XiPoly& p4_alpha(std::size_t i) const;
    // P6^alpha = [24 d^5 P0 + (C - 90|a|^2) d^3 P2^a + C d P4^a]/xi_a
    XiPoly p6_alpha(std::size_t i) const;

    Scalar d_coeff(std::size_t i, std::size_t j, std::size_t k) const;

    // the P4^{ab} formula evaluated with an explicit third line g; no checks
    XiPoly p4_ab_with_gamma(std::size_t i, std::size_t j, std::size_t g) const;
    // gamma-independent version; verifies independence over all choices and
    // the xi_a P4^{ab} identity. Throws NeedsThirdLine when N == 2.
    XiPoly p4_ab(std::size_t i, std::size_t j) const;

    struct Levels {
        XiPoly p2, p3, p4, p5;
        bool p4_postcheck = false; // pair-part source identity verified
    };
    std::pair<XiPoly, XiPoly> build_p2_p3() const;
    Levels build_levels() const; // P2..P5 (requires both relations for P4)

    std::vector<Scalar> first_relation() const;
    std::vector<SecondRelationEntry> second_relation() const;

    Scalar k_constant(std::size_t i) const; // throws InconsistentK

    // L = -Lap + sum u_alpha in the locus's coefficient ring
    DiffOp build_L() const;
    // operator assembled from levels 0..5 (coefficients-left quantization)
    DiffOp assemble_partial(const Levels& lv) const;
    // true when all commutator parts of xi-degree >= 2 vanish
    bool partial_commutes(const DiffOp& L, const DiffOp& P) const;

    // relation residuals as matrix products, for cross-checking locus-lab
    static std::vector<Scalar> first_relation_for(const Locus& locus);
    static std::vector<SecondRelationEntry> second_relation_for(const Locus& locus);

private:
    Locus locus_;
    XiPoly p0_;
    unsigned m0_;
    RingPtr ring_;
    mutable std::vector<std::optional<XiPoly>> p2a_, p4a_;

    CoefElem u(std::size_t i, unsigned j) const { return CoefElem::u_deriv(ring_, i, j); }
};

} // namespace cms2
