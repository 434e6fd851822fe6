#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cms2/coef.hpp"

namespace cms2 {

// Laurent-series evaluation of wp and wp' near 0:
//   wp(z) = z^-2 + sum_{k>=2} c_k z^(2k-2),
//   c2 = g2/20, c3 = g3/28, c_k = 3/((2k+1)(k-3)) sum_{m=2}^{k-2} c_m c_{k-m}.
// Values are exact rational partial sums; the reported bound estimates the
// truncated tail geometrically.
class WpContext {
public:
    WpContext(mpq_class g2, mpq_class g3, unsigned digits = 50, unsigned max_terms = 480);

    const mpq_class& g2() const { return g2_; }
    const mpq_class& g3() const { return g3_; }
    unsigned digits() const { return digits_; }

    struct Value {
        mpq_class wp, wp1;
        mpq_class bound; // estimated absolute truncation error (both values)
    };
    // throws OutOfConvergenceRegion / PrecisionUnachievable
    Value eval(const mpq_class& z) const;

private:
    mpq_class g2_, g3_;
    unsigned digits_;
    unsigned max_terms_;
    mutable std::vector<mpq_class> c_; // c_[k] for k >= 2; c_[0], c_[1] unused
    void ensure_terms(unsigned k) const;
};

// decimal rendering of a rational, round-to-nearest, `digits` significant digits
std::string decimal_string(const mpq_class& q, unsigned digits = 20);

struct ZeroTestReport {
    bool numerically_zero = false;
    unsigned trials = 0;
    mpq_class max_abs;     // largest |value| seen
    mpq_class max_scale;   // largest |single monomial| seen
    mpq_class tolerance;   // the effective threshold max_scale * tol
    std::string note;
};

// Evaluates `expr` at `trials` random points inside the convergence region,
// with the symbols bound by `bind` (a must be bound; g2/g3 must be bound for
// elliptic generators). Verdict: every |value| < tol * max(1, scale).
ZeroTestReport numeric_zero_test(const CoefElem& expr, const Scalar::Bindings& bind,
                                 unsigned trials, const mpq_class& tol, std::uint64_t seed,
                                 unsigned digits = 50);

} // namespace cms2
