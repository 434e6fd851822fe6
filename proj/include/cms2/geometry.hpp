#pragma once

#include <string>
#include <vector>

#include "cms2/scalar.hpp"

namespace cms2 {

// Row vector (a1, a2) over the scalar field, not both zero.
struct Covector {
    Scalar c1, c2;

    Covector() = default;
    Covector(Scalar a1, Scalar a2) : c1(std::move(a1)), c2(std::move(a2)) {}
    Covector(long a1, long a2) : c1(a1), c2(a2) {}

    bool is_zero() const { return c1.is_zero() && c2.is_zero(); }
    // (-a2, a1)
    Covector perp() const { return Covector(-c2, c1); }
    Covector negate() const { return Covector(-c1, -c2); }
    Covector scaled(const Scalar& k) const { return Covector(k * c1, k * c2); }

    std::string to_string() const { return "(" + c1.to_string() + ", " + c2.to_string() + ")"; }
};

inline Scalar pairing(const Covector& u, const Covector& v) {
    return u.c1 * v.c1 + u.c2 * v.c2;
}
inline Scalar norm2(const Covector& v) { return pairing(v, v); }
inline Scalar perp_pairing(const Covector& u, const Covector& v) {
    return pairing(u.perp(), v);
}
inline bool parallel(const Covector& u, const Covector& v) {
    return perp_pairing(u, v).is_zero();
}

enum class PotentialKind { Rational, Elliptic };

struct LocusEntry {
    Covector alpha;
    Scalar coupling;                               // C_alpha, nonzero
    PotentialKind kind = PotentialKind::Rational;
    Scalar scale = Scalar(1);                      // k_alpha for u = c wp(k x_alpha)
};

// Ordered list of pairwise non-parallel covectors with nonzero couplings.
class Locus {
public:
    Locus() = default;
    explicit Locus(std::vector<LocusEntry> entries); // throws LocusError

    std::size_t size() const { return entries_.size(); }
    const LocusEntry& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<LocusEntry>& entries() const { return entries_; }

    bool all_rational() const;
    std::string to_string() const;

private:
    std::vector<LocusEntry> entries_;
};

} // namespace cms2
