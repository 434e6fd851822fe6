#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cms2/diffop.hpp"
#include "cms2/wp.hpp"

namespace cms2 {

// The deformed-B2 pair: locus {e1, e2, (a,1), (-a,1)} with potentials
//   u1 = c1 wp(2a x1), u2 = c2 wp(2 x2), u+- = c wp(x_{alpha+-}),
//   c1 = (3/4)(a^2+1)(3a^-2 - 1), c2 = (3/4)(a^2+1)(3a^2 - 1), c = 6(a^2+1).
// When g2 = g3 = 0 the model is delivered in the rational-pole representation
// (wp(kt) = 1/(kt)^2); otherwise operators live in the wp-generator ring.
class B2Model {
public:
    // a, g2, g3 symbolic or rational; throws ExcludedParameter for bad rational a
    B2Model(Scalar a, Scalar g2, Scalar g3);

    const Scalar& a() const { return a_; }
    const Scalar& g2() const { return g2_; }
    const Scalar& g3() const { return g3_; }
    bool rational_mode() const { return rational_; }
    // ring the delivered operators live in
    const RingPtr& ring() const { return rational_ ? pole_ring_ : gen_ring_; }
    const RingPtr& generator_ring() const { return gen_ring_; }

    Scalar coupling(std::size_t i) const; // C1, C2, C+, C-
    const Locus& locus() const { return gen_ring_->locus(); }

    DiffOp build_L() const;
    // the BC order-five operator along alpha_+ (sign=+1) or alpha_- (sign=-1)
    DiffOp build_A5(int sign) const;
    // directional L_+- = d_{x,a+-}^2 - (a^2+1) u_+-
    DiffOp build_Lpm(int sign) const;

    struct BuildInfo {
        DiffOp P;
        CoefElem completion;       // the derived multiplication completion
        bool completion_found = false;
    };
    const BuildInfo& build_P() const;

    // P with one multiplication coefficient bumped by +1 (mutation testing)
    DiffOp mutated_P() const;

    // bindings that evaluate this model's symbols (requires rational a or an
    // explicit value); used by the numeric zero test
    Scalar::Bindings bindings(std::optional<mpq_class> a_value = std::nullopt) const;

    enum class ExactOutcome { Zero, ZeroModuloIdentities, Nonzero };
    struct VerifyReport {
        bool ran_exact = false, ran_numeric = false;
        ExactOutcome exact = ExactOutcome::Nonzero;
        std::size_t residual_terms = 0;        // free-ring support size
        std::vector<std::string> residual_keys; // per-order support summary
        bool numeric_zero = false;
        mpq_class numeric_max, numeric_scale;
        bool verdict_zero = false;
        std::string summary;
    };
    enum class VerifyMode { Exact, Numeric, Both };
    VerifyReport verify_commutation(VerifyMode mode, unsigned trials = 20,
                                    mpq_class tol = mpq_class(1, 1), std::uint64_t seed = 1,
                                    unsigned digits = 50) const;
    static mpq_class default_tolerance(); // 10^-25

    // operators L and P converted for export
    DiffOp L() const { return build_L(); }
    DiffOp P() const { return build_P().P; }

private:
    Scalar a_, g2_, g3_, mu_; // mu = a^2 + 1
    bool rational_ = false;
    RingPtr gen_ring_;  // wp-generator ring (always used for construction)
    RingPtr pole_ring_; // rational-pole ring (delivery in rational mode)
    mutable std::optional<BuildInfo> built_;

    CoefElem u(std::size_t i, unsigned j) const;
    DiffOp blocks_without_completion() const;
    CoefElem solve_completion(const DiffOp& L, const DiffOp& blocks) const;
    std::vector<CoefElem> identity_elements() const;
    DiffOp to_delivery(const DiffOp& op) const; // generator -> pole conversion
};

// Addition-theorem determinant identities for every zero-sum triple of
// elliptic arguments in the ring, together with derivative and low-degree
// monomial multiples: the columns used to certify residual membership.
std::vector<CoefElem> addition_identity_columns(const RingPtr& ring);

// Generic commutator verification of an operator pair over a shared ring.
B2Model::VerifyReport verify_operators(const RingPtr& ring, const DiffOp& L, const DiffOp& P,
                                       B2Model::VerifyMode mode, unsigned trials,
                                       mpq_class tol, std::uint64_t seed, unsigned digits,
                                       const Scalar& a, const Scalar& g2, const Scalar& g3);

// Functional conditions pinning the potential shapes: coefficients and
// scales of the ansatz u_i = c_i wp(k_i t).
struct PotentialAnsatz {
    Scalar coef[4];  // c1, c2, c+, c-
    Scalar scale[4]; // k1, k2, k+, k-
};

struct PotentialConditionsReport {
    bool scales_compatible = false; // arguments match so conditions reduce to scalars
    std::vector<Scalar> residuals;  // the five displayed conditions
    bool all_zero = false;
    std::string detail;
};

// evaluates the five conditions; throws ExcludedParameter when a^2 in {7/3,3/7}
PotentialConditionsReport derive_potential_conditions(const Scalar& a,
                                                      const PotentialAnsatz& ansatz);

// the model's own ansatz (for convenience and tests)
PotentialAnsatz b2_ansatz(const Scalar& a);

} // namespace cms2
