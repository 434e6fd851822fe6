#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cms2/geometry.hpp"
#include "cms2/linsolve.hpp"

namespace cms2 {

// A_ij = <a_i,a_j>/<a_i^,a_j>^3, B_ij likewise with |a_i|^2|a_j|^2 and 5th
// power; both antisymmetric by construction (asserted).
struct RelationMatrices {
    Matrix A, B;
    std::vector<Scalar> couplings; // copied from the locus (may be empty)
};

RelationMatrices build_matrices(const Locus& locus);

// Pfaffian of an antisymmetric matrix; odd dimension gives 0.
Scalar pfaffian(const Matrix& m); // throws NotAntisymmetric

// Pf_i: Pfaffian of the matrix with row and column i removed.
Scalar pfaffian_minor(const Matrix& m, std::size_t i);

struct CouplingFamily {
    std::size_t rank = 0;
    std::vector<std::vector<Scalar>> basis; // nullspace of A
    // special presentations, when they apply
    bool n3_form = false;  // C_i = C * (A23, A31, A12)
    bool pf_form = false;  // odd N, rank N-1: C_i = C (-1)^i Pf_i(A)
    bool n4_form = false;  // N = 4, Pf(A) = 0: two-parameter s,t family
    Scalar pf;             // Pf(A) for even N
};

CouplingFamily solve_couplings(const Locus& locus);

enum class LocusClass {
    A1xA1,          // two orthogonal lines
    Infeasible,     // no nonzero coupling satisfies the relations
    A2,             // three lines at 60 degrees (positive A2 system)
    CFVDeformation, // 3 lines, deformed, the +-a couplings in the m=1 class
    ThreeLineOther, // 3 lines, relations feasible outside the above labels
    B2Deformation,  // 4 lines in the normal form {e1, e2, +-a e1 + e2}
    FourLineOther,
};

struct ClassifyReport {
    LocusClass verdict = LocusClass::Infeasible;
    std::string detail;
    CouplingFamily family;
    // residuals of the two relations on the supplied couplings (when given)
    std::vector<Scalar> first_residuals;
    std::vector<Scalar> second_residuals;
    bool feasible_second = false; // some family member satisfies both relations
};

// N in {2,3,4}; throws UnsupportedCardinality otherwise.
ClassifyReport classify(const Locus& locus,
                        const std::optional<std::vector<Scalar>>& couplings);

std::string to_string(LocusClass c);

} // namespace cms2
