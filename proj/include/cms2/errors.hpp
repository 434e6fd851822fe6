#pragma once

#include <stdexcept>
#include <string>

namespace cms2 {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero scalar") {}
};

struct PoleAtSpecialization : Error {
    explicit PoleAtSpecialization(const std::string& what)
        : Error("denominator vanishes under binding: " + what) {}
};

// Exact division by a linear form failed. The remainder is meaningful to
// callers (it witnesses violation of the admissibility constraints), so it
// travels with the error in printed form.
struct NotDivisible : Error {
    std::string remainder;
    explicit NotDivisible(std::string rem)
        : Error("not divisible; remainder " + rem), remainder(std::move(rem)) {}
};

struct LevelOutOfRange : Error {
    LevelOutOfRange() : Error("symbol level exceeds operator order") {}
};

struct NotAntisymmetric : Error {
    NotAntisymmetric() : Error("matrix is not antisymmetric") {}
};

struct InconsistentK : Error {
    InconsistentK() : Error("K_alpha0 component equations disagree (first relation violated)") {}
};

struct NeedsThirdLine : Error {
    NeedsThirdLine() : Error("P4^{a,b} needs a third locus line") {}
};

struct UnsupportedCardinality : Error {
    explicit UnsupportedCardinality(std::size_t n)
        : Error("classification supports 2, 3 or 4 lines, got " + std::to_string(n)) {}
};

struct ExcludedParameter : Error {
    explicit ExcludedParameter(const std::string& why) : Error("excluded parameter: " + why) {}
};

struct OutOfConvergenceRegion : Error {
    OutOfConvergenceRegion() : Error("argument outside the series convergence region") {}
};

struct PrecisionUnachievable : Error {
    PrecisionUnachievable() : Error("requested precision unachievable at configured truncation") {}
};

struct LocusError : Error {
    explicit LocusError(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
    int line;
    int column;
    ParseError(int ln, int col, const std::string& what)
        : Error("parse error at " + std::to_string(ln) + ":" + std::to_string(col) + ": " + what),
          line(ln), column(col) {}
};

} // namespace cms2
