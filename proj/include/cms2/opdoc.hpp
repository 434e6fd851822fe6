#pragma once

#include <iosfwd>
#include <string>

#include "cms2/diffop.hpp"

namespace cms2 {

// Text document carrying one operator together with the data needed to
// reconstruct its coefficient ring: scalar bindings (sym or rational
// expression) for a, g2, g3; the locus; and the operator terms. Documents
// round-trip: parse(print(doc)) is structurally equal. Unknown directives
// are rejected with a position.
struct OperatorDocument {
    int version = 1;
    Scalar a = Scalar::sym_a();
    Scalar g2 = Scalar::sym_g2();
    Scalar g3 = Scalar::sym_g3();
    Locus locus;
    RingPtr ring;
    DiffOp op;

    bool same_context(const OperatorDocument& o) const;
};

std::string print_opdoc(const OperatorDocument& doc);
OperatorDocument parse_opdoc(const std::string& text); // throws ParseError

OperatorDocument make_opdoc(Scalar a, Scalar g2, Scalar g3, const RingPtr& ring,
                            DiffOp op);

// One-locus-per-line batch format:
//   (a1, a2) C=<expr> [kind=rational|elliptic] [scale=<expr>] ; (…) …
// Couplings may be omitted (C=?), in which case has_couplings is false.
struct LocusLine {
    Locus locus;
    bool has_couplings = true;
};
LocusLine parse_locus_line(const std::string& line, int lineno = 1);

} // namespace cms2
