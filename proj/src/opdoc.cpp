#include "cms2/opdoc.hpp"

#include <cctype>
#include <cstring>
#include <sstream>

#include "cms2/errors.hpp"

namespace cms2 {

namespace {

std::string scalar_or_sym(const Scalar& s, const char* symname) {
    Scalar sym = std::string(symname) == "a"    ? Scalar::sym_a()
                 : std::string(symname) == "g2" ? Scalar::sym_g2()
                                                : Scalar::sym_g3();
    if (s == sym) return "sym";
    return s.to_string();
}

const char* kind_name(PotentialKind k) {
    return k == PotentialKind::Rational ? "rational" : "elliptic";
}

void print_coef(std::ostream& os, const CoefElem& c) {
    if (c.is_zero()) {
        os << "0";
        return;
    }
    bool hasDen = false;
    for (unsigned i = 0; i < CoefKey::kMax; ++i) hasDen = hasDen || c.den()[i];
    if (hasDen) os << "(";
    bool first = true;
    for (const auto& [k, s] : c.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << s.to_string() << ")";
        if (k.x(0)) os << "*x1^" << k.x(0);
        if (k.x(1)) os << "*x2^" << k.x(1);
        for (unsigned i = 0; i < CoefKey::kMax; ++i) {
            if (k.p(i)) os << "*wp(" << i << ")^" << k.p(i);
            if (k.q(i)) os << "*wp1(" << i << ")^" << k.q(i);
        }
    }
    if (hasDen) os << ")";
    for (unsigned i = 0; i < CoefKey::kMax; ++i)
        if (c.den()[i]) os << " * lin(" << i << ")^-" << c.den()[i];
}

} // namespace

bool OperatorDocument::same_context(const OperatorDocument& o) const {
    if (!(a == o.a && g2 == o.g2 && g3 == o.g3)) return false;
    if (locus.size() != o.locus.size()) return false;
    for (std::size_t i = 0; i < locus.size(); ++i) {
        const auto &x = locus[i], &y = o.locus[i];
        if (!(x.alpha.c1 == y.alpha.c1 && x.alpha.c2 == y.alpha.c2 &&
              x.coupling == y.coupling && x.kind == y.kind && x.scale == y.scale))
            return false;
    }
    return true;
}

std::string print_opdoc(const OperatorDocument& doc) {
    std::ostringstream os;
    os << "cms2-opdoc " << doc.version << "\n";
    os << "binding a " << scalar_or_sym(doc.a, "a") << "\n";
    os << "binding g2 " << scalar_or_sym(doc.g2, "g2") << "\n";
    os << "binding g3 " << scalar_or_sym(doc.g3, "g3") << "\n";
    os << "locus " << doc.locus.size() << "\n";
    for (std::size_t i = 0; i < doc.locus.size(); ++i) {
        const auto& e = doc.locus[i];
        os << "line (" << e.alpha.c1.to_string() << ", " << e.alpha.c2.to_string()
           << ") coupling " << e.coupling.to_string() << " kind " << kind_name(e.kind)
           << " scale " << e.scale.to_string() << "\n";
    }
    os << "operator " << doc.op.terms().size() << "\n";
    for (const auto& [k, c] : doc.op.terms()) {
        os << "term dx " << XiPoly::e1(k) << " " << XiPoly::e2(k) << " coef ";
        print_coef(os, c);
        os << "\n";
    }
    os << "end\n";
    return os.str();
}

namespace {

struct LineParser {
    std::string s;
    int lineno;
    std::size_t pos = 0;

    LineParser(std::string text, int ln) : s(std::move(text)), lineno(ln) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(lineno, int(pos) + 1, msg);
    }
    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool eat_word(const std::string& w) {
        skip();
        if (s.compare(pos, w.size(), w) == 0) {
            pos += w.size();
            return true;
        }
        return false;
    }
    std::string word() {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        return s.substr(start, pos - start);
    }
    long integer() {
        skip();
        bool neg = eat('-');
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        long v = std::stol(s.substr(start, pos - start));
        return neg ? -v : v;
    }
    bool at_end() {
        skip();
        return pos == s.size();
    }

    Scalar scalar_word() {
        skip();
        std::size_t start = pos;
        std::string w = word();
        if (w.empty()) fail("expected scalar expression");
        try {
            return Scalar::parse(w);
        } catch (const ParseError& e) {
            throw ParseError(lineno, int(start) + e.column, e.what());
        }
    }

    // scalar sub-expression delimited by balanced parentheses / next token
    Scalar scalar_until(const char* stops) {
        skip();
        std::size_t start = pos;
        int depth = 0;
        while (pos < s.size()) {
            char c = s[pos];
            if (c == '(') ++depth;
            if (c == ')') {
                if (depth == 0) break;
                --depth;
            }
            if (depth == 0 && strchr(stops, c)) break;
            ++pos;
        }
        std::string sub = s.substr(start, pos - start);
        if (sub.empty()) fail("expected scalar expression");
        try {
            return Scalar::parse(sub);
        } catch (const ParseError& e) {
            throw ParseError(lineno, int(start) + e.column, e.what());
        }
    }
};

// full coefficient expression: sums of products with atoms
// rational | a | g2 | g3 | x1 | x2 | wp(i) | wp1(i) | lin(i) | ( expr ),
// each optionally raised with ^[-]n (negative only for lin); terms join with
// * and + -.
struct CoefParser {
    LineParser& lp;
    const RingPtr& ring;

    CoefElem expr() {
        CoefElem v = term();
        while (true) {
            lp.skip();
            if (lp.eat('+')) v += term();
            else if (lp.eat('-')) v -= term();
            else return v;
        }
    }
    CoefElem term() {
        CoefElem v = factor();
        while (true) {
            lp.skip();
            if (lp.eat('*')) v *= factor();
            else if (lp.eat('/')) {
                CoefElem d = factor();
                if (!d.is_scalar() || d.is_zero())
                    lp.fail("division only by nonzero scalars");
                v = v.scaled(d.scalar_value().inverse());
            } else return v;
        }
    }
    CoefElem factor() {
        lp.skip();
        bool neg = false;
        while (lp.eat('-')) neg = !neg;
        CoefElem v = atom();
        lp.skip();
        if (lp.pos < lp.s.size() && lp.s[lp.pos] == '^') {
            // exponent was already handled inside atom() for lin(); here only
            // non-negative powers are legal
            ++lp.pos;
            long e = lp.integer();
            if (e < 0) lp.fail("negative exponent only allowed on lin()");
            CoefElem base = v;
            v = CoefElem(ring, Scalar(1));
            for (long i = 0; i < e; ++i) v *= base;
        }
        return neg ? -v : v;
    }
    CoefElem atom() {
        lp.skip();
        if (lp.pos >= lp.s.size()) lp.fail("unexpected end of coefficient");
        char c = lp.s[lp.pos];
        if (c == '(') {
            // could be a parenthesized scalar or coefficient expression;
            // coefficient grammar allows scalars inside parens uniformly
            ++lp.pos;
            CoefElem v = expr();
            if (!lp.eat(')')) lp.fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = lp.pos;
            while (lp.pos < lp.s.size() &&
                   (std::isdigit(static_cast<unsigned char>(lp.s[lp.pos])) ||
                    (lp.s[lp.pos] == '/' && lp.pos + 1 < lp.s.size() &&
                     std::isdigit(static_cast<unsigned char>(lp.s[lp.pos + 1])))))
                ++lp.pos;
            return CoefElem(ring, Scalar::parse(lp.s.substr(start, lp.pos - start)));
        }
        if (lp.eat_word("wp1")) return gen_atom(true);
        if (lp.eat_word("wp")) return gen_atom(false);
        if (lp.eat_word("lin")) return lin_atom();
        if (lp.eat_word("x1")) return CoefElem::x_mono(ring, 1, 0);
        if (lp.eat_word("x2")) return CoefElem::x_mono(ring, 0, 1);
        if (lp.eat_word("g2")) return CoefElem(ring, Scalar::sym_g2());
        if (lp.eat_word("g3")) return CoefElem(ring, Scalar::sym_g3());
        if (c == 'a') {
            ++lp.pos;
            return CoefElem(ring, Scalar::sym_a());
        }
        lp.fail(std::string("unexpected character '") + c + "' in coefficient");
    }
    CoefElem gen_atom(bool prime) {
        if (!lp.eat('(')) lp.fail("expected '(' after generator");
        long i = lp.integer();
        if (!lp.eat(')')) lp.fail("expected ')'");
        if (i < 0 || std::size_t(i) >= ring->size()) lp.fail("generator index out of range");
        return prime ? CoefElem::q_gen(ring, unsigned(i))
                     : CoefElem::p_gen(ring, unsigned(i));
    }
    CoefElem lin_atom() {
        if (!lp.eat('(')) lp.fail("expected '(' after lin");
        long i = lp.integer();
        if (!lp.eat(')')) lp.fail("expected ')'");
        if (i < 0 || std::size_t(i) >= ring->size()) lp.fail("lin index out of range");
        long e = 1;
        lp.skip();
        if (lp.pos < lp.s.size() && lp.s[lp.pos] == '^') {
            ++lp.pos;
            e = lp.integer();
        }
        if (e >= 0) {
            const Covector& al = ring->locus()[unsigned(i)].alpha;
            CoefElem form = CoefElem::x_mono(ring, 1, 0).scaled(al.c1) +
                            CoefElem::x_mono(ring, 0, 1).scaled(al.c2);
            CoefElem v(ring, Scalar(1));
            for (long k = 0; k < e; ++k) v *= form;
            return v;
        }
        std::vector<unsigned> den(ring->size(), 0);
        den[std::size_t(i)] = unsigned(-e);
        return CoefElem::pole(ring, Scalar(1), den);
    }
};

Scalar parse_binding(LineParser& lp, const char* name) {
    lp.skip();
    if (lp.s.compare(lp.pos, 3, "sym") == 0) {
        lp.pos += 3;
        return std::string(name) == "a"    ? Scalar::sym_a()
               : std::string(name) == "g2" ? Scalar::sym_g2()
                                           : Scalar::sym_g3();
    }
    return lp.scalar_word();
}

} // namespace

OperatorDocument parse_opdoc(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto next = [&](bool required = true) {
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t i = 0;
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i < line.size() && line[i] != '#') return true;
        }
        if (required) throw ParseError(lineno, 1, "unexpected end of document");
        return false;
    };

    OperatorDocument doc;
    next();
    {
        LineParser lp(line, lineno);
        if (!lp.eat_word("cms2-opdoc")) lp.fail("expected 'cms2-opdoc <version>' header");
        doc.version = int(lp.integer());
        if (doc.version != 1) lp.fail("unsupported version");
    }
    for (const char* nm : {"a", "g2", "g3"}) {
        next();
        LineParser lp(line, lineno);
        if (!lp.eat_word("binding")) lp.fail("expected 'binding'");
        std::string got = lp.word();
        if (got != nm) lp.fail(std::string("expected binding for '") + nm + "'");
        Scalar v = parse_binding(lp, nm);
        if (std::string(nm) == "a") doc.a = v;
        else if (std::string(nm) == "g2") doc.g2 = v;
        else doc.g3 = v;
        if (!lp.at_end()) lp.fail("trailing input after binding");
    }
    next();
    std::size_t nent = 0;
    {
        LineParser lp(line, lineno);
        if (!lp.eat_word("locus")) lp.fail("expected 'locus <count>'");
        nent = std::size_t(lp.integer());
    }
    std::vector<LocusEntry> entries;
    for (std::size_t i = 0; i < nent; ++i) {
        next();
        LineParser lp(line, lineno);
        if (!lp.eat_word("line")) lp.fail("expected 'line'");
        if (!lp.eat('(')) lp.fail("expected '('");
        Scalar a1 = lp.scalar_until(",");
        if (!lp.eat(',')) lp.fail("expected ','");
        Scalar a2 = lp.scalar_until(")");
        if (!lp.eat(')')) lp.fail("expected ')'");
        if (!lp.eat_word("coupling")) lp.fail("expected 'coupling'");
        Scalar coup = lp.scalar_word();
        if (!lp.eat_word("kind")) lp.fail("expected 'kind'");
        std::string kind = lp.word();
        if (kind != "rational" && kind != "elliptic") lp.fail("kind must be rational|elliptic");
        if (!lp.eat_word("scale")) lp.fail("expected 'scale'");
        Scalar scale = lp.scalar_word();
        if (!lp.at_end()) lp.fail("trailing input after locus line");
        entries.push_back({Covector(a1, a2), coup,
                           kind == "rational" ? PotentialKind::Rational
                                              : PotentialKind::Elliptic,
                           scale});
    }
    try {
        doc.locus = Locus(entries);
    } catch (const LocusError& e) {
        throw ParseError(lineno, 1, e.what());
    }
    doc.ring = std::make_shared<CoefRing>(doc.locus, doc.g2, doc.g3);

    next();
    std::size_t nterms = 0;
    {
        LineParser lp(line, lineno);
        if (!lp.eat_word("operator")) lp.fail("expected 'operator <count>'");
        nterms = std::size_t(lp.integer());
    }
    DiffOp op;
    for (std::size_t t = 0; t < nterms; ++t) {
        next();
        LineParser lp(line, lineno);
        if (!lp.eat_word("term")) lp.fail("expected 'term'");
        if (!lp.eat_word("dx")) lp.fail("expected 'dx'");
        long k1 = lp.integer(), k2 = lp.integer();
        if (k1 < 0 || k2 < 0) lp.fail("negative derivative order");
        if (!lp.eat_word("coef")) lp.fail("expected 'coef'");
        CoefParser cp{lp, doc.ring};
        CoefElem c = cp.expr();
        if (!lp.at_end()) lp.fail("trailing input after coefficient");
        op += DiffOp::monomial(unsigned(k1), unsigned(k2), std::move(c));
    }
    doc.op = std::move(op);
    next();
    {
        LineParser lp(line, lineno);
        if (!lp.eat_word("end")) lp.fail("expected 'end'");
    }
    if (next(false)) throw ParseError(lineno, 1, "unexpected directive after 'end'");
    return doc;
}

OperatorDocument make_opdoc(Scalar a, Scalar g2, Scalar g3, const RingPtr& ring, DiffOp op) {
    OperatorDocument doc;
    doc.a = std::move(a);
    doc.g2 = std::move(g2);
    doc.g3 = std::move(g3);
    doc.locus = ring->locus();
    doc.ring = ring;
    doc.op = std::move(op);
    return doc;
}

LocusLine parse_locus_line(const std::string& text, int lineno) {
    LocusLine out;
    std::vector<LocusEntry> entries;
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ';' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    for (auto& part : parts) {
        LineParser lp(part, lineno);
        if (lp.at_end()) continue;
        if (!lp.eat('(')) lp.fail("expected '(' starting a covector");
        Scalar a1 = lp.scalar_until(",");
        if (!lp.eat(',')) lp.fail("expected ','");
        Scalar a2 = lp.scalar_until(")");
        if (!lp.eat(')')) lp.fail("expected ')'");
        LocusEntry e{Covector(a1, a2), Scalar(1), PotentialKind::Rational, Scalar(1)};
        bool coupled = false;
        while (!lp.at_end()) {
            if (lp.eat_word("C=")) {
                lp.skip();
                if (lp.pos < lp.s.size() && lp.s[lp.pos] == '?') {
                    ++lp.pos;
                    coupled = false;
                } else {
                    e.coupling = lp.scalar_word();
                    coupled = true;
                }
            } else if (lp.eat_word("kind=")) {
                std::string w = lp.word();
                if (w != "rational" && w != "elliptic") lp.fail("kind must be rational|elliptic");
                e.kind = (w == "rational") ? PotentialKind::Rational : PotentialKind::Elliptic;
            } else if (lp.eat_word("scale=")) {
                e.scale = lp.scalar_word();
            } else {
                lp.fail("expected C=, kind= or scale=");
            }
        }
        if (!coupled) out.has_couplings = false;
        entries.push_back(std::move(e));
    }
    if (entries.empty()) throw ParseError(lineno, 1, "empty locus line");
    try {
        out.locus = Locus(entries);
    } catch (const LocusError& e) {
        throw ParseError(lineno, 1, e.what());
    }
    return out;
}

} // namespace cms2
