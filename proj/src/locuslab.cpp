#include "cms2/locuslab.hpp"

#include <cassert>

#include "cms2/errors.hpp"
#include "cms2/pipeline.hpp"

namespace cms2 {

RelationMatrices build_matrices(const Locus& locus) {
    const std::size_t n = locus.size();
    RelationMatrices rm;
    rm.A = Matrix(n, n);
    rm.B = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        rm.couplings.push_back(locus[i].coupling);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            Scalar pp = perp_pairing(locus[i].alpha, locus[j].alpha);
            Scalar pr = pairing(locus[i].alpha, locus[j].alpha);
            rm.A.at(i, j) = pr / pp.pow(3);
            rm.B.at(i, j) = pr * norm2(locus[i].alpha) * norm2(locus[j].alpha) / pp.pow(5);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rm.A.at(i, j) != -rm.A.at(j, i) || rm.B.at(i, j) != -rm.B.at(j, i))
                throw NotAntisymmetric();
    return rm;
}

static Matrix minor_matrix(const Matrix& m, std::size_t r, std::size_t c) {
    Matrix out(m.rows() - 1, m.cols() - 1);
    for (std::size_t i = 0, oi = 0; i < m.rows(); ++i) {
        if (i == r) continue;
        for (std::size_t j = 0, oj = 0; j < m.cols(); ++j) {
            if (j == c) continue;
            out.at(oi, oj) = m.at(i, j);
            ++oj;
        }
        ++oi;
    }
    return out;
}

static Matrix drop_row_col(const Matrix& m, std::size_t k) { return minor_matrix(m, k, k); }

Scalar pfaffian(const Matrix& m) {
    if (m.rows() != m.cols()) throw NotAntisymmetric();
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (m.at(i, j) != -m.at(j, i)) throw NotAntisymmetric();
    if (n % 2 == 1) return Scalar(0);
    if (n == 0) return Scalar(1);
    // expand along the first row: Pf = sum_j (-1)^j A_{0j} Pf(A without 0,j)
    Scalar pf(0);
    for (std::size_t j = 1; j < n; ++j) {
        if (m.at(0, j).is_zero()) continue;
        Matrix sub = minor_matrix(minor_matrix(m, 0, 0), j - 1, j - 1);
        Scalar term = m.at(0, j) * pfaffian(sub);
        if (j % 2 == 0) term = -term;
        pf += term;
    }
    return pf;
}

Scalar pfaffian_minor(const Matrix& m, std::size_t i) { return pfaffian(drop_row_col(m, i)); }

CouplingFamily solve_couplings(const Locus& locus) {
    RelationMatrices rm = build_matrices(locus);
    const std::size_t n = locus.size();
    CouplingFamily fam;
    fam.rank = rm.A.rank();
    fam.basis = rm.A.nullspace();
    if (n % 2 == 0) fam.pf = pfaffian(rm.A);

    auto in_span = [&](const std::vector<Scalar>& v) {
        // v in span(basis): stack basis columns and v; rank must not grow
        Matrix m(n, fam.basis.size() + 1);
        for (std::size_t j = 0; j < fam.basis.size(); ++j)
            for (std::size_t i = 0; i < n; ++i) m.at(i, j) = fam.basis[j][i];
        for (std::size_t i = 0; i < n; ++i) m.at(i, fam.basis.size()) = v[i];
        return m.rank() == fam.basis.size();
    };

    if (n == 3 && fam.rank == 2) {
        std::vector<Scalar> v = {rm.A.at(1, 2), rm.A.at(2, 0), rm.A.at(0, 1)};
        fam.n3_form = in_span(v);
    }
    if (n % 2 == 1 && fam.rank == n - 1) {
        std::vector<Scalar> v;
        for (std::size_t i = 0; i < n; ++i) {
            Scalar t = pfaffian_minor(rm.A, i);
            if ((i + 1) % 2 == 1) t = -t; // (-1)^i with 1-based index
            v.push_back(std::move(t));
        }
        fam.pf_form = in_span(v);
    }
    if (n == 4 && fam.pf.is_zero()) {
        std::vector<Scalar> v1 = {rm.A.at(2, 3), Scalar(0), -rm.A.at(0, 3), rm.A.at(0, 2)};
        std::vector<Scalar> v2 = {Scalar(0), rm.A.at(2, 3), -rm.A.at(1, 3), rm.A.at(1, 2)};
        fam.n4_form = in_span(v1) && in_span(v2);
    }
    return fam;
}

namespace {

// Exact feasibility of both relations over the nullspace family: does some
// v = sum_k s_k basis_k with all C_i != 0 satisfy the second relation rows
// (C_i - 2|a_i|^2)(Bv)_i = 0?  Handles family dimensions 0, 1, 2.
bool second_feasible(const Locus& locus, const RelationMatrices& rm,
                     const std::vector<std::vector<Scalar>>& basis) {
    const std::size_t n = locus.size();
    const std::size_t d = basis.size();
    if (d == 0) return false;

    std::vector<std::vector<Scalar>> Bw(d);
    for (std::size_t k = 0; k < d; ++k) Bw[k] = rm.B.mul(basis[k]);

    if (d == 1) {
        // rows: (s w_i - 2|a_i|^2)(s (Bw)_i) = 0, need s != 0, all s w_i != 0
        const auto& w = basis[0];
        for (std::size_t i = 0; i < n; ++i)
            if (w[i].is_zero()) return false; // C_i would vanish
        bool constrained = false;
        Scalar sval;
        for (std::size_t i = 0; i < n; ++i) {
            if (Bw[0][i].is_zero()) continue; // row satisfied for every s
            Scalar cand = Scalar(2) * norm2(locus[i].alpha) / w[i];
            if (cand.is_zero()) return false;
            if (!constrained) {
                constrained = true;
                sval = cand;
            } else if (sval != cand) {
                return false;
            }
        }
        return true;
    }

    // d >= 2 (only d == 2 arises for N <= 4): enumerate which factor vanishes
    // per row; each choice is an affine-linear condition on the parameters.
    assert(d == 2);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        // collect equations  a*s + b*t = c
        std::vector<std::array<Scalar, 3>> eqs;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                // C_i = 2|a_i|^2
                eqs.push_back({basis[0][i], basis[1][i], Scalar(2) * norm2(locus[i].alpha)});
            } else {
                // (Bv)_i = 0
                eqs.push_back({Bw[0][i], Bw[1][i], Scalar(0)});
            }
        }
        // solve in (s,t) by elimination; track solution space
        // gather nonzero equations
        std::vector<std::array<Scalar, 3>> sys;
        bool bad = false;
        for (auto& e : eqs) {
            if (e[0].is_zero() && e[1].is_zero()) {
                if (!e[2].is_zero()) {
                    bad = true;
                    break;
                }
                continue;
            }
            sys.push_back(e);
        }
        if (bad) continue;
        // reduce to row echelon
        std::vector<std::array<Scalar, 3>> red;
        for (auto e : sys) {
            for (auto& p : red) {
                std::size_t lead = p[0].is_zero() ? 1 : 0;
                if (!e[lead].is_zero()) {
                    Scalar f = e[lead] / p[lead];
                    for (int c = 0; c < 3; ++c) e[c] -= f * p[c];
                }
            }
            if (e[0].is_zero() && e[1].is_zero()) {
                if (!e[2].is_zero()) {
                    bad = true;
                    break;
                }
                continue;
            }
            red.push_back(e);
            if (red.size() == 2) {
                // complete elimination for remaining equations handled above
            }
        }
        if (bad) continue;
        // solution space dimension = 2 - red.size()
        // find a witness (s,t) with all C_i != 0
        auto coupling_at = [&](const Scalar& s, const Scalar& t, std::size_t i) {
            return s * basis[0][i] + t * basis[1][i];
        };
        auto all_nonzero = [&](const Scalar& s, const Scalar& t) {
            if (s.is_zero() && t.is_zero()) return false;
            for (std::size_t i = 0; i < n; ++i)
                if (coupling_at(s, t, i).is_zero()) return false;
            // check every equation of this mask actually holds
            for (auto& e : sys)
                if (!(e[0] * s + e[1] * t - e[2]).is_zero()) return false;
            return true;
        };
        if (red.size() == 2) {
            // unique solution: solve the 2x2 system
            Scalar a = red[0][0], b = red[0][1], c = red[0][2];
            Scalar a2 = red[1][0], b2 = red[1][1], c2 = red[1][2];
            Scalar det = a * b2 - b * a2;
            if (det.is_zero()) continue;
            Scalar s = (c * b2 - b * c2) / det;
            Scalar t = (a * c2 - c * a2) / det;
            if (all_nonzero(s, t)) return true;
        } else if (red.size() == 1) {
            // a line of solutions: try several rational points on it
            Scalar a = red[0][0], b = red[0][1], c = red[0][2];
            for (long trial = 1; trial <= 8; ++trial) {
                Scalar s, t;
                if (!b.is_zero()) {
                    s = Scalar(trial);
                    t = (c - a * s) / b;
                } else {
                    t = Scalar(trial);
                    s = (c - b * t) / a;
                }
                if (all_nonzero(s, t)) return true;
            }
        } else {
            // whole plane: generic point
            for (long trial = 1; trial <= 8; ++trial)
                if (all_nonzero(Scalar(trial), Scalar(2 * trial + 1))) return true;
        }
    }
    return false;
}

bool is_sixty_degrees(const Covector& a, const Covector& b) {
    // tan^2(angle) = 3  <=>  <a^,b>^2 = 3 <a,b>^2 (and not orthogonal)
    Scalar p = pairing(a, b), q = perp_pairing(a, b);
    return !p.is_zero() && q * q == Scalar(3) * p * p;
}

// does r_{axis} map u to a multiple of v?
bool reflection_swaps(const Covector& axis, const Covector& u, const Covector& v) {
    Scalar n2 = norm2(axis);
    Scalar f = Scalar(2) * pairing(axis, u) / n2;
    Covector ru(u.c1 - f * axis.c1, u.c2 - f * axis.c2);
    return parallel(ru, v);
}

} // namespace

std::string to_string(LocusClass c) {
    switch (c) {
        case LocusClass::A1xA1: return "A1xA1";
        case LocusClass::Infeasible: return "infeasible";
        case LocusClass::A2: return "A2";
        case LocusClass::CFVDeformation: return "CFV-deformation (m=1 couplings)";
        case LocusClass::ThreeLineOther: return "three lines, unlabelled feasible family";
        case LocusClass::B2Deformation: return "B2-deformation normal form {e1, e2, +-a e1 + e2}";
        case LocusClass::FourLineOther: return "four lines outside the normal form";
    }
    return "?";
}

ClassifyReport classify(const Locus& locus,
                        const std::optional<std::vector<Scalar>>& couplings) {
    const std::size_t n = locus.size();
    if (n < 2 || n > 4) throw UnsupportedCardinality(n);

    ClassifyReport rep;
    RelationMatrices rm = build_matrices(locus);
    rep.family = solve_couplings(locus);

    if (couplings) {
        std::vector<LocusEntry> es = locus.entries();
        for (std::size_t i = 0; i < n; ++i) es[i].coupling = (*couplings)[i];
        Locus withC(es);
        rep.first_residuals = SymbolPipeline::first_relation_for(withC);
        for (auto& e : SymbolPipeline::second_relation_for(withC))
            rep.second_residuals.push_back(e.residual);
    }

    if (n == 2) {
        if (pairing(locus[0].alpha, locus[1].alpha).is_zero()) {
            rep.verdict = LocusClass::A1xA1;
            rep.detail = "two lines crossing at right angles";
            rep.feasible_second = true; // A = B = 0, any couplings work
        } else {
            rep.verdict = LocusClass::Infeasible;
            rep.detail = "two non-orthogonal lines cannot satisfy the first relation";
        }
        return rep;
    }

    rep.feasible_second = second_feasible(locus, rm, rep.family.basis);

    if (n == 3) {
        bool a2 = is_sixty_degrees(locus[0].alpha, locus[1].alpha) &&
                  is_sixty_degrees(locus[1].alpha, locus[2].alpha) &&
                  is_sixty_degrees(locus[0].alpha, locus[2].alpha);
        if (a2) {
            rep.verdict = LocusClass::A2;
            rep.detail = "positive system of A2 (all angles 60 degrees)";
            return rep;
        }
        if (!rep.feasible_second) {
            rep.verdict = LocusClass::Infeasible;
            rep.detail = "no coupling vector satisfies both relations with all C nonzero";
            return rep;
        }
        // find the symmetry axis; the other two lines carry the m=1 couplings
        int axis = -1;
        for (int i = 0; i < 3; ++i) {
            int j = (i + 1) % 3, k = (i + 2) % 3;
            if (reflection_swaps(locus[std::size_t(i)].alpha, locus[std::size_t(j)].alpha,
                                 locus[std::size_t(k)].alpha)) {
                axis = i;
                break;
            }
        }
        if (axis >= 0) {
            rep.verdict = LocusClass::CFVDeformation;
            rep.detail = "normal form {e1, +-a e1 + e2} about line " + std::to_string(axis) +
                         "; the symmetric pair carries coupling one (C = 2|alpha|^2)";
        } else {
            rep.verdict = LocusClass::ThreeLineOther;
            rep.detail = "feasible family without reflection symmetry";
        }
        return rep;
    }

    // n == 4
    int oi = -1, oj = -1;
    for (int i = 0; i < 4 && oi < 0; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (pairing(locus[std::size_t(i)].alpha, locus[std::size_t(j)].alpha).is_zero()) {
                oi = i;
                oj = j;
                break;
            }
    if (oi < 0) {
        rep.verdict = LocusClass::Infeasible;
        rep.detail = rep.feasible_second
                         ? "unexpected: no orthogonal pair yet a feasible family"
                         : "no two lines cross at right angles; relations infeasible";
        if (rep.feasible_second) rep.verdict = LocusClass::FourLineOther;
        return rep;
    }
    // remaining two lines must be swapped by reflection about either axis
    int rest[2], rc = 0;
    for (int t = 0; t < 4; ++t)
        if (t != oi && t != oj) rest[rc++] = t;
    bool normal = reflection_swaps(locus[std::size_t(oi)].alpha, locus[std::size_t(rest[0])].alpha,
                                   locus[std::size_t(rest[1])].alpha) ||
                  reflection_swaps(locus[std::size_t(oj)].alpha, locus[std::size_t(rest[0])].alpha,
                                   locus[std::size_t(rest[1])].alpha);
    if (normal) {
        rep.verdict = LocusClass::B2Deformation;
        rep.detail = "orthogonal pair plus a reflection-symmetric pair";
    } else {
        rep.verdict = LocusClass::FourLineOther;
        rep.detail = "orthogonal pair present but the remaining lines are not symmetric";
    }
    return rep;
}

} // namespace cms2
