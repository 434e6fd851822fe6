#pragma once

#include <string>
#include <vector>

#include "cms2/xipoly.hpp"

namespace cms2 {

// Normal-ordered differential operator on R^2: finite sum a_p(x) d_x^p with
// coefficients standing to the left of the derivatives. Keys pack the
// multi-index like XiPoly keys.
class DiffOp {
public:
    using Key = XiPoly::Key;
    using Term = std::pair<Key, CoefElem>;

    DiffOp() = default;

    static DiffOp zero() { return DiffOp(); }
    static DiffOp identity() { return monomial(0, 0, CoefElem(Scalar(1))); }
    static DiffOp monomial(unsigned k1, unsigned k2, CoefElem c);
    static DiffOp mult(CoefElem c) { return monomial(0, 0, std::move(c)); }
    // (alpha1 d1 + alpha2 d2)^n, constant coefficients
    static DiffOp dir_pow(const Covector& alpha, unsigned n);
    static DiffOp from_symbol(const XiPoly& sym);

    bool is_zero() const { return terms_.empty(); }
    unsigned order() const;
    const std::vector<Term>& terms() const { return terms_; }

    XiPoly total_symbol() const;
    // P~_k = sum over |p| = order - k of a_p xi^p ; throws LevelOutOfRange
    XiPoly symbol_level(unsigned k) const;
    // all terms of exact xi-degree d (no grading by order)
    XiPoly degree_part(unsigned d) const;

    DiffOp operator-() const;
    DiffOp operator+(const DiffOp& o) const;
    DiffOp operator-(const DiffOp& o) const;
    DiffOp& operator+=(const DiffOp& o) { *this = *this + o; return *this; }
    DiffOp& operator-=(const DiffOp& o) { *this = *this - o; return *this; }
    bool operator==(const DiffOp& o) const { return terms_ == o.terms_; }
    bool operator!=(const DiffOp& o) const { return !(*this == o); }

    DiffOp scaled(const Scalar& s) const;
    DiffOp pow(unsigned n) const; // composition power
    DiffOp rebased(const RingPtr& r) const;

    std::string to_string() const;

private:
    std::vector<Term> terms_; // ascending by key
    void prune();
    friend DiffOp compose_impl(const DiffOp&, const DiffOp&, bool);
};

// total symbol of A o B via sum_p (1/p!) d_xi^p(A~) d_x^p(B~);
// `compose` may parallelize (OpenMP), `compose_serial` is the reference.
DiffOp compose(const DiffOp& A, const DiffOp& B);
DiffOp compose_serial(const DiffOp& A, const DiffOp& B);

DiffOp commutator(const DiffOp& A, const DiffOp& B);

// formal adjoint  tQ = sum_p (-d_x)^p o a_p
DiffOp formal_adjoint(const DiffOp& Q);

} // namespace cms2
