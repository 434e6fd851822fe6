#include "cms2/scalar.hpp"

#include <cctype>
#include <sstream>

#include "cms2/errors.hpp"

namespace cms2 {

Scalar::Scalar(long n, long d) : num_(n), den_(d) {
    if (d == 0) throw DivisionByZero();
    reduce();
}

Scalar::Scalar(const mpq_class& q) : num_(mpz_class(q.get_num())), den_(mpz_class(q.get_den())) {
    reduce();
}

Scalar::Scalar(MPoly num, MPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DivisionByZero();
    reduce();
}

void Scalar::reduce() {
    if (num_.is_zero()) {
        den_ = MPoly(1);
        return;
    }
    MPoly g = MPoly::gcd(num_, den_);
    if (!g.is_one()) {
        MPoly qn, qd;
        bool okn = num_.div_exact(g, qn);
        bool okd = den_.div_exact(g, qd);
        (void)okn;
        (void)okd;
        num_ = std::move(qn);
        den_ = std::move(qd);
    }
    if (den_.leading_coeff() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

mpq_class Scalar::to_rational() const {
    mpz_class n = num_.is_zero() ? mpz_class(0) : num_.leading_coeff();
    mpq_class q(n, den_.leading_coeff());
    q.canonicalize();
    return q;
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    r.num_ = -r.num_;
    return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) return Scalar(num_ + o.num_, den_);
    return Scalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    if (is_zero() || o.is_zero()) return Scalar();
    return Scalar(num_ * o.num_, den_ * o.den_);
}

Scalar Scalar::operator/(const Scalar& o) const {
    if (o.is_zero()) throw DivisionByZero();
    if (is_zero()) return Scalar();
    return Scalar(num_ * o.den_, den_ * o.num_);
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw DivisionByZero();
    return Scalar(den_, num_);
}

Scalar Scalar::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    Scalar r(1);
    Scalar base = *this;
    unsigned k = unsigned(n);
    while (k) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

Scalar Scalar::specialize(const Bindings& b) const {
    bool bound[3] = {b.a.has_value(), b.g2.has_value(), b.g3.has_value()};
    mpq_class vals[3];
    if (b.a) vals[0] = *b.a;
    if (b.g2) vals[1] = *b.g2;
    if (b.g3) vals[2] = *b.g3;
    MPoly n, d;
    mpz_class dn, dd;
    num_.substitute(bound, vals, n, dn);
    den_.substitute(bound, vals, d, dd);
    if (d.is_zero()) throw PoleAtSpecialization(to_string());
    return Scalar(n.mul_mpz(dd), d.mul_mpz(dn));
}

mpq_class Scalar::evaluate(const Bindings& b) const {
    Scalar s = specialize(b);
    if (!s.is_rational()) throw Error("evaluate: unbound symbol remains in " + s.to_string());
    return s.to_rational();
}

std::string Scalar::to_string() const {
    if (den_.is_one()) {
        if (num_.terms().size() <= 1) return num_.to_string();
        return num_.to_string();
    }
    std::ostringstream os;
    bool nParen = num_.terms().size() > 1;
    bool dParen = den_.terms().size() > 1 || den_.terms()[0].first != 0 ||
                  den_.terms()[0].second < 0;
    if (nParen) os << "(" << num_.to_string() << ")";
    else os << num_.to_string();
    os << "/";
    if (dParen) os << "(" << den_.to_string() << ")";
    else os << den_.to_string();
    return os.str();
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

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
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(1, int(pos) + 1, msg);
    }

    Scalar expr() {
        Scalar v = term();
        while (true) {
            skip();
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }
    Scalar term() {
        Scalar v = factor();
        while (true) {
            skip();
            if (eat('*')) v *= factor();
            else if (eat('/')) {
                Scalar d = factor();
                if (d.is_zero()) throw DivisionByZero();
                v /= d;
            } else return v;
        }
    }
    Scalar factor() {
        skip();
        bool neg = false;
        while (eat('-')) neg = !neg;
        Scalar v = atom();
        skip();
        if (eat('^')) {
            skip();
            bool eneg = eat('-');
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("expected integer exponent");
            long e = std::stol(s.substr(start, pos - start));
            v = v.pow(eneg ? -e : e);
        }
        return neg ? -v : v;
    }
    Scalar atom() {
        skip();
        if (pos >= s.size()) fail("unexpected end of input");
        if (eat('(')) {
            Scalar v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            mpz_class n(s.substr(start, pos - start));
            return Scalar(MPoly(n), MPoly(1));
        }
        if (c == 'a') {
            ++pos;
            return Scalar::sym_a();
        }
        if (c == 'g' && pos + 1 < s.size()) {
            if (s[pos + 1] == '2') {
                pos += 2;
                return Scalar::sym_g2();
            }
            if (s[pos + 1] == '3') {
                pos += 2;
                return Scalar::sym_g3();
            }
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace

Scalar Scalar::parse(const std::string& text) {
    Parser p(text);
    Scalar v = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return v;
}

std::size_t Scalar::hash() const {
    return num_.hash() * 31 + den_.hash();
}

ExclusionReport is_excluded_parameter(const mpq_class& a) {
    mpq_class a2 = a * a;
    if (a == 0) return {true, "a = 0 degenerates the locus"};
    if (a2 == 1) return {true, "a = +-1 gives the B2 positive system, not a deformation"};
    if (a2 == 3 || a2 == mpq_class(1, 3))
        return {true, "a^2 in {3, 1/3} forces C1 or C2 = 0"};
    if (a2 == mpq_class(7, 3) || a2 == mpq_class(3, 7))
        return {true, "a^2 in {7/3, 3/7} degenerates the potential conditions"};
    return {false,
            "not excluded (irrational thresholds (13 +- 4*sqrt(10))/3 are unreachable for "
            "rational a)"};
}

} // namespace cms2
