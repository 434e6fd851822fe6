#include "cms2/geometry.hpp"

#include <sstream>

#include "cms2/errors.hpp"

namespace cms2 {

Locus::Locus(std::vector<LocusEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.alpha.is_zero()) throw LocusError("locus entry " + std::to_string(i) + " is the zero covector");
        if (e.coupling.is_zero())
            throw LocusError("locus entry " + std::to_string(i) + " has zero coupling");
        if (e.kind == PotentialKind::Elliptic && e.scale.is_zero())
            throw LocusError("locus entry " + std::to_string(i) + " has zero elliptic scale");
        for (std::size_t j = 0; j < i; ++j)
            if (parallel(entries_[j].alpha, e.alpha))
                throw LocusError("locus entries " + std::to_string(j) + " and " +
                                 std::to_string(i) + " are parallel");
    }
}

bool Locus::all_rational() const {
    for (const auto& e : entries_)
        if (e.kind != PotentialKind::Rational) return false;
    return true;
}

std::string Locus::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) os << "; ";
        os << entries_[i].alpha.to_string() << " C=" << entries_[i].coupling.to_string();
        if (entries_[i].kind == PotentialKind::Elliptic)
            os << " elliptic scale=" << entries_[i].scale.to_string();
    }
    return os.str();
}

} // namespace cms2
