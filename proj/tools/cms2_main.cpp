// Command line front end: classify / couplings / conditions / build / verify / wp.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cms2/b2model.hpp"
#include "cms2/errors.hpp"
#include "cms2/locuslab.hpp"
#include "cms2/opdoc.hpp"
#include "cms2/pipeline.hpp"
#include "cms2/wp.hpp"

using namespace cms2;

namespace {

constexpr int kExitZero = 0;
constexpr int kExitNonzero = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

Scalar parse_value(const std::string& text, const char* symname) {
    if (text == "sym") {
        return std::string(symname) == "a"    ? Scalar::sym_a()
               : std::string(symname) == "g2" ? Scalar::sym_g2()
                                              : Scalar::sym_g3();
    }
    return Scalar::parse(text);
}

std::string join_scalars(const std::vector<Scalar>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i].to_string();
    }
    return os.str();
}

const char* verdict_slug(LocusClass c) {
    switch (c) {
        case LocusClass::A1xA1: return "a1xa1";
        case LocusClass::Infeasible: return "infeasible";
        case LocusClass::A2: return "a2";
        case LocusClass::CFVDeformation: return "cfv-deformation";
        case LocusClass::ThreeLineOther: return "three-line-other";
        case LocusClass::B2Deformation: return "b2-deformation";
        case LocusClass::FourLineOther: return "four-line-other";
    }
    return "unknown";
}

std::vector<std::pair<int, LocusLine>> load_locus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::vector<std::pair<int, LocusLine>> out;
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i == line.size() || line[i] == '#') continue;
        out.push_back({no, parse_locus_line(line, no)});
    }
    if (out.empty()) throw Error("no loci in " + path);
    return out;
}

int cmd_classify(const std::string& path) {
    for (const auto& [no, ll] : load_locus_file(path)) {
        std::optional<std::vector<Scalar>> coups;
        if (ll.has_couplings) {
            std::vector<Scalar> c;
            for (const auto& e : ll.locus.entries()) c.push_back(e.coupling);
            coups = std::move(c);
        }
        auto rep = classify(ll.locus, coups);
        std::cout << "locus " << no << ": " << ll.locus.to_string() << "\n";
        std::cout << "  verdict: " << to_string(rep.verdict) << "\n";
        std::cout << "  detail: " << rep.detail << "\n";
        std::cout << "  nullspace dimension: " << rep.family.basis.size()
                  << " (rank " << rep.family.rank << ")\n";
        std::cout << "  second relation feasible on the family: "
                  << (rep.feasible_second ? "yes" : "no") << "\n";
        if (coups) {
            std::cout << "  first relation residuals: " << join_scalars(rep.first_residuals)
                      << "\n";
            std::cout << "  second relation residuals: " << join_scalars(rep.second_residuals)
                      << "\n";
        }
        std::cout << "machine classify " << no << " verdict=" << verdict_slug(rep.verdict)
                  << " rank=" << rep.family.rank << " dim=" << rep.family.basis.size()
                  << " feasible=" << (rep.feasible_second ? 1 : 0) << "\n";
    }
    return kExitZero;
}

int cmd_couplings(const std::string& path) {
    for (const auto& [no, ll] : load_locus_file(path)) {
        auto fam = solve_couplings(ll.locus);
        std::cout << "locus " << no << ": " << ll.locus.to_string() << "\n";
        std::cout << "  rank: " << fam.rank << ", nullspace dimension: " << fam.basis.size()
                  << "\n";
        if (ll.locus.size() % 2 == 0)
            std::cout << "  Pf(A) = " << fam.pf.to_string() << "\n";
        for (std::size_t k = 0; k < fam.basis.size(); ++k)
            std::cout << "  basis[" << k << "] = (" << join_scalars(fam.basis[k]) << ")\n";
        if (fam.n3_form)
            std::cout << "  presentation: C = C0 * (A23, A31, A12)\n";
        if (fam.pf_form)
            std::cout << "  presentation: C_i = C0 * (-1)^i Pf_i(A)\n";
        if (fam.n4_form)
            std::cout << "  presentation: (s A34, t A34, -(s A14 + t A24), s A13 + t A23)\n";
        std::cout << "machine couplings " << no << " rank=" << fam.rank
                  << " dim=" << fam.basis.size();
        for (std::size_t k = 0; k < fam.basis.size(); ++k)
            std::cout << " basis" << k << "=(" << join_scalars(fam.basis[k]) << ")";
        std::cout << "\n";
    }
    return kExitZero;
}

int cmd_conditions(const std::string& path) {
    for (const auto& [no, ll] : load_locus_file(path)) {
        if (!ll.has_couplings)
            throw Error("conditions requires couplings on line " + std::to_string(no));
        auto first = SymbolPipeline::first_relation_for(ll.locus);
        auto second = SymbolPipeline::second_relation_for(ll.locus);
        std::cout << "locus " << no << ": " << ll.locus.to_string() << "\n";
        bool allzero = true;
        for (std::size_t i = 0; i < first.size(); ++i) {
            std::cout << "  alpha" << i << ": first = " << first[i].to_string()
                      << ", second = " << second[i].residual.to_string()
                      << " (coupling factor " << second[i].coupling_factor.to_string()
                      << ", sum factor " << second[i].sum_factor.to_string() << ")\n";
            allzero = allzero && first[i].is_zero() && second[i].residual.is_zero();
        }
        std::cout << "machine conditions " << no << " first=(" << join_scalars(first)
                  << ") allzero=" << (allzero ? 1 : 0) << "\n";
    }
    return kExitZero;
}

int cmd_build(const std::string& model, const std::string& aText, const std::string& g2Text,
              const std::string& g3Text, const std::string& outL, const std::string& outP) {
    if (model != "b2") throw Error("unknown model '" + model + "' (only b2 is available)");
    B2Model m(parse_value(aText, "a"), parse_value(g2Text, "g2"), parse_value(g3Text, "g3"));
    const auto& info = m.build_P();
    if (!info.completion_found)
        std::cout << "warning: multiplication completion not found; P left as the raw blocks\n";
    write_file(outL, print_opdoc(make_opdoc(m.a(), m.g2(), m.g3(), m.ring(), m.build_L())));
    write_file(outP, print_opdoc(make_opdoc(m.a(), m.g2(), m.g3(), m.ring(), info.P)));
    std::cout << "model b2 (a = " << m.a().to_string() << ", g2 = " << m.g2().to_string()
              << ", g3 = " << m.g3().to_string() << ", "
              << (m.rational_mode() ? "rational" : "elliptic") << " mode)\n";
    std::cout << "L -> " << outL << " (order 2), P -> " << outP << " (order "
              << info.P.order() << ")\n";
    return kExitZero;
}

int cmd_verify(const std::string& fileL, const std::string& fileP, const std::string& mode,
               unsigned trials, unsigned digits, const std::string& tolText,
               std::uint64_t seed) {
    auto docL = parse_opdoc(read_file(fileL));
    auto docP = parse_opdoc(read_file(fileP));
    if (!docL.same_context(docP))
        throw Error("operator documents carry different bindings or loci");
    B2Model::VerifyMode vm = mode == "exact"     ? B2Model::VerifyMode::Exact
                             : mode == "numeric" ? B2Model::VerifyMode::Numeric
                                                 : B2Model::VerifyMode::Both;
    mpq_class tol(1);
    if (!tolText.empty()) {
        tol = mpq_class(tolText);
        tol.canonicalize();
    }
    auto rep = verify_operators(docL.ring, docL.op, docP.op.rebased(docL.ring), vm, trials,
                                tol, seed, digits, docL.a, docL.g2, docL.g3);
    std::cout << "verify [" << mode << "]: " << rep.summary << "\n";
    for (const auto& k : rep.residual_keys) std::cout << "  residual " << k << "\n";
    std::cout << "verdict: " << (rep.verdict_zero ? "commutator is zero" : "NONZERO commutator")
              << "\n";
    std::cout << "machine verify verdict=" << (rep.verdict_zero ? "zero" : "nonzero")
              << " exact="
              << (!rep.ran_exact                                            ? "skipped"
                  : rep.exact == B2Model::ExactOutcome::Zero                ? "zero"
                  : rep.exact == B2Model::ExactOutcome::ZeroModuloIdentities ? "zero-mod-identities"
                                                                            : "nonzero")
              << " numeric="
              << (!rep.ran_numeric ? "skipped" : rep.numeric_zero ? "zero" : "nonzero") << "\n";
    return rep.verdict_zero ? kExitZero : kExitNonzero;
}

int cmd_wp(const std::string& zText, const std::string& g2Text, const std::string& g3Text,
           unsigned digits) {
    mpq_class z(zText), g2(g2Text), g3(g3Text);
    z.canonicalize();
    g2.canonicalize();
    g3.canonicalize();
    WpContext ctx(g2, g3, digits);
    auto v = ctx.eval(z);
    std::cout << "wp(z)  = " << decimal_string(v.wp, digits) << "\n";
    std::cout << "wp'(z) = " << decimal_string(v.wp1, digits) << "\n";
    std::cout << "error bound <= " << (v.bound == 0 ? "0 (exact)" : decimal_string(v.bound, 4))
              << "\n";
    std::cout << "machine wp wp=" << decimal_string(v.wp, digits)
              << " wp1=" << decimal_string(v.wp1, digits)
              << " bound=" << (v.bound == 0 ? "0" : decimal_string(v.bound, 4)) << "\n";
    return kExitZero;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank-two quantum CMS integrable pairs: classification and verification"};
    app.require_subcommand(1);

    std::string locusFile;
    auto* classifyCmd = app.add_subcommand("classify", "classify loci (N = 2, 3, 4)");
    classifyCmd->add_option("--locus", locusFile, "line-delimited locus file")->required();

    auto* couplingsCmd = app.add_subcommand("couplings", "coupling families from A v = 0");
    couplingsCmd->add_option("--locus", locusFile, "line-delimited locus file")->required();

    auto* conditionsCmd =
        app.add_subcommand("conditions", "first/second relation residuals per line");
    conditionsCmd->add_option("--locus", locusFile, "line-delimited locus file")->required();

    std::string model = "b2", aText = "sym", g2Text = "sym", g3Text = "sym";
    std::string outL = "L.opdoc", outP = "P.opdoc";
    auto* buildCmd = app.add_subcommand("build", "build the deformed-B2 pair (L, P)");
    buildCmd->add_option("--model", model, "model name (b2)");
    buildCmd->add_option("--a", aText, "deformation parameter: rational or 'sym'");
    buildCmd->add_option("--g2", g2Text, "wp invariant g2: rational or 'sym'");
    buildCmd->add_option("--g3", g3Text, "wp invariant g3: rational or 'sym'");
    buildCmd->add_option("--out-L", outL, "output path for L");
    buildCmd->add_option("--out-P", outP, "output path for P");

    std::string fileL, fileP, mode = "both", tolText;
    unsigned trials = 20, digits = 50;
    std::uint64_t seed = 1;
    auto* verifyCmd = app.add_subcommand("verify", "verify [L, P] = 0 from documents");
    verifyCmd->add_option("--L", fileL, "operator document for L")->required();
    verifyCmd->add_option("--P", fileP, "operator document for P")->required();
    verifyCmd->add_option("--mode", mode, "exact | numeric | both")
        ->check(CLI::IsMember({"exact", "numeric", "both"}));
    verifyCmd->add_option("--trials", trials, "numeric sample points");
    verifyCmd->add_option("--digits", digits, "working precision in decimal digits");
    verifyCmd->add_option("--tol", tolText, "numeric tolerance (rational, default 1/10^25)");
    verifyCmd->add_option("--seed", seed, "random seed for numeric trials");

    std::string zText, wg2 = "0", wg3 = "0";
    unsigned wdigits = 50;
    auto* wpCmd = app.add_subcommand("wp", "evaluate wp and wp' at a rational point");
    wpCmd->add_option("--z", zText, "argument (rational)")->required();
    wpCmd->add_option("--g2", wg2, "invariant g2 (rational)");
    wpCmd->add_option("--g3", wg3, "invariant g3 (rational)");
    wpCmd->add_option("--digits", wdigits, "requested digits");

    CLI11_PARSE(app, argc, argv);

    try {
        if (classifyCmd->parsed()) return cmd_classify(locusFile);
        if (couplingsCmd->parsed()) return cmd_couplings(locusFile);
        if (conditionsCmd->parsed()) return cmd_conditions(locusFile);
        if (buildCmd->parsed()) return cmd_build(model, aText, g2Text, g3Text, outL, outP);
        if (verifyCmd->parsed())
            return cmd_verify(fileL, fileP, mode, trials, digits, tolText, seed);
        if (wpCmd->parsed()) return cmd_wp(zText, wg2, wg3, wdigits);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
