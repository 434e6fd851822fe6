#include "cms2/diffop.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cms2/errors.hpp"

namespace cms2 {

DiffOp DiffOp::monomial(unsigned k1, unsigned k2, CoefElem c) {
    DiffOp d;
    if (!c.is_zero()) d.terms_.push_back({XiPoly::key(k1, k2), std::move(c)});
    return d;
}

DiffOp DiffOp::dir_pow(const Covector& alpha, unsigned n) {
    XiPoly sym = XiPoly::monomial(0, 0, Scalar(1));
    XiPoly form = XiPoly::xi_form(alpha);
    for (unsigned i = 0; i < n; ++i) sym = sym * form;
    return from_symbol(sym);
}

DiffOp DiffOp::from_symbol(const XiPoly& sym) {
    DiffOp d;
    for (const auto& [k, c] : sym.terms()) d.terms_.push_back({k, c});
    return d;
}

unsigned DiffOp::order() const {
    unsigned m = 0;
    for (const auto& [k, c] : terms_) m = std::max(m, XiPoly::e1(k) + XiPoly::e2(k));
    return m;
}

XiPoly DiffOp::total_symbol() const {
    XiPoly p;
    for (const auto& [k, c] : terms_)
        p += XiPoly::monomial(XiPoly::e1(k), XiPoly::e2(k), c);
    return p;
}

XiPoly DiffOp::symbol_level(unsigned k) const {
    unsigned m0 = order();
    if (k > m0) throw LevelOutOfRange();
    return degree_part(m0 - k);
}

XiPoly DiffOp::degree_part(unsigned d) const {
    XiPoly p;
    for (const auto& [k, c] : terms_)
        if (XiPoly::e1(k) + XiPoly::e2(k) == d)
            p += XiPoly::monomial(XiPoly::e1(k), XiPoly::e2(k), c);
    return p;
}

void DiffOp::prune() {
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                [](const Term& t) { return t.second.is_zero(); }),
                 terms_.end());
}

DiffOp DiffOp::operator-() const {
    DiffOp r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
    DiffOp r;
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        if (terms_[i].first < o.terms_[j].first) r.terms_.push_back(terms_[i++]);
        else if (terms_[i].first > o.terms_[j].first) r.terms_.push_back(o.terms_[j++]);
        else {
            CoefElem s = terms_[i].second + o.terms_[j].second;
            if (!s.is_zero()) r.terms_.push_back({terms_[i].first, std::move(s)});
            ++i;
            ++j;
        }
    }
    for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
    for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
    return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const { return *this + (-o); }

DiffOp DiffOp::scaled(const Scalar& s) const {
    DiffOp r;
    if (s.is_zero()) return r;
    r = *this;
    for (auto& [k, c] : r.terms_) c = c.scaled(s);
    return r;
}

DiffOp DiffOp::rebased(const RingPtr& r) const {
    DiffOp out;
    for (const auto& [k, c] : terms_)
        out += DiffOp::monomial(XiPoly::e1(k), XiPoly::e2(k), c.rebased(r));
    return out;
}

DiffOp DiffOp::pow(unsigned n) const {
    DiffOp r = identity();
    for (unsigned i = 0; i < n; ++i) r = compose(r, *this);
    return r;
}

namespace {

// derivative tables for the right factor: dcache[t][p1][p2] = d_x^p (b_t)
struct DerivTable {
    std::vector<std::vector<std::vector<CoefElem>>> d; // [term][p1][p2]
};

DerivTable build_deriv_table(const DiffOp& B, unsigned m1, unsigned m2, bool parallel) {
    const auto& bt = B.terms();
    DerivTable tab;
    tab.d.resize(bt.size());
    auto work = [&](std::size_t t) {
        auto& grid = tab.d[t];
        grid.assign(m1 + 1, std::vector<CoefElem>(m2 + 1));
        grid[0][0] = bt[t].second;
        for (unsigned p1 = 1; p1 <= m1; ++p1) grid[p1][0] = grid[p1 - 1][0].dx(0);
        for (unsigned p1 = 0; p1 <= m1; ++p1)
            for (unsigned p2 = 1; p2 <= m2; ++p2) grid[p1][p2] = grid[p1][p2 - 1].dx(1);
    };
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long t = 0; t < long(bt.size()); ++t) work(std::size_t(t));
    } else
#endif
    {
        (void)parallel;
        for (std::size_t t = 0; t < bt.size(); ++t) work(t);
    }
    return tab;
}

mpz_class binom(unsigned n, unsigned k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

} // namespace

DiffOp compose_impl(const DiffOp& A, const DiffOp& B, bool parallel) {
    if (A.is_zero() || B.is_zero()) return DiffOp();
    unsigned m1 = 0, m2 = 0;
    for (const auto& [k, c] : A.terms()) {
        m1 = std::max(m1, XiPoly::e1(k));
        m2 = std::max(m2, XiPoly::e2(k));
    }
    DerivTable tab = build_deriv_table(B, m1, m2, parallel);

    const auto& at = A.terms();
    const auto& bt = B.terms();
    using Acc = std::map<DiffOp::Key, CoefElem>;

    // one task per (A-term, derivative multi-index)
    struct Task {
        std::size_t ia;
        unsigned p1, p2;
    };
    std::vector<Task> tasks;
    for (std::size_t ia = 0; ia < at.size(); ++ia) {
        unsigned q1 = XiPoly::e1(at[ia].first), q2 = XiPoly::e2(at[ia].first);
        for (unsigned p1 = 0; p1 <= q1; ++p1)
            for (unsigned p2 = 0; p2 <= q2; ++p2) tasks.push_back({ia, p1, p2});
    }

    auto run_task = [&](const Task& task, Acc& acc) {
        const auto& [ka, ca] = at[task.ia];
        unsigned q1 = XiPoly::e1(ka), q2 = XiPoly::e2(ka);
        Scalar c(MPoly(binom(q1, task.p1) * binom(q2, task.p2)), MPoly(1));
        for (std::size_t t = 0; t < bt.size(); ++t) {
            const CoefElem& d = tab.d[t][task.p1][task.p2];
            if (d.is_zero()) continue;
            unsigned r1 = XiPoly::e1(bt[t].first), r2 = XiPoly::e2(bt[t].first);
            DiffOp::Key k = XiPoly::key(q1 - task.p1 + r1, q2 - task.p2 + r2);
            CoefElem tm = (ca * d).scaled(c);
            if (tm.is_zero()) continue;
            auto [it, fresh] = acc.emplace(k, tm);
            if (!fresh) it->second += tm;
        }
    };

    Acc total;
#ifdef _OPENMP
    if (parallel && tasks.size() > 1) {
        int nt = omp_get_max_threads();
        std::vector<Acc> parts;
        parts.resize(std::size_t(nt));
#pragma omp parallel num_threads(nt)
        {
            int me = omp_get_thread_num();
#pragma omp for schedule(dynamic)
            for (long ti = 0; ti < long(tasks.size()); ++ti)
                run_task(tasks[std::size_t(ti)], parts[std::size_t(me)]);
        }
        // merge per output key, in parallel; key order fixes determinism
        std::vector<DiffOp::Key> keys;
        for (const auto& part : parts)
            for (const auto& [k, c] : part) keys.push_back(k);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        std::vector<CoefElem> merged(keys.size());
#pragma omp parallel for schedule(dynamic)
        for (long ki = 0; ki < long(keys.size()); ++ki) {
            CoefElem sum;
            for (const auto& part : parts) {
                auto it = part.find(keys[std::size_t(ki)]);
                if (it != part.end()) sum += it->second;
            }
            merged[std::size_t(ki)] = std::move(sum);
        }
        for (std::size_t ki = 0; ki < keys.size(); ++ki)
            if (!merged[ki].is_zero()) total.emplace(keys[ki], std::move(merged[ki]));
    } else
#endif
    {
        for (const Task& task : tasks) run_task(task, total);
    }

    DiffOp r;
    for (auto& [k, c] : total)
        if (!c.is_zero()) r += DiffOp::monomial(XiPoly::e1(k), XiPoly::e2(k), std::move(c));
    return r;
}

DiffOp compose(const DiffOp& A, const DiffOp& B) { return compose_impl(A, B, true); }
DiffOp compose_serial(const DiffOp& A, const DiffOp& B) { return compose_impl(A, B, false); }

DiffOp commutator(const DiffOp& A, const DiffOp& B) {
    return compose(A, B) - compose(B, A);
}

DiffOp formal_adjoint(const DiffOp& Q) {
    DiffOp r;
    for (const auto& [k, c] : Q.terms()) {
        unsigned p1 = XiPoly::e1(k), p2 = XiPoly::e2(k);
        long sgn = ((p1 + p2) % 2 == 0) ? 1 : -1;
        // (-d)^p o a = sum_{s<=p} C(p,s) (d^s a) (-1)^(p1+p2) d^(p-s) ... with signs
        for (unsigned s1 = 0; s1 <= p1; ++s1)
            for (unsigned s2 = 0; s2 <= p2; ++s2) {
                Scalar coef(MPoly(binom(p1, s1) * binom(p2, s2) * sgn), MPoly(1));
                CoefElem d = c;
                for (unsigned i = 0; i < s1; ++i) d = d.dx(0);
                for (unsigned i = 0; i < s2; ++i) d = d.dx(1);
                if (d.is_zero()) continue;
                r += DiffOp::monomial(p1 - s1, p2 - s2, d.scaled(coef));
            }
    }
    return r;
}

std::string DiffOp::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [k, c] = *it;
        if (!first) os << " + ";
        first = false;
        os << "[" << c.to_string() << "]";
        if (XiPoly::e1(k)) os << "*d1^" << XiPoly::e1(k);
        if (XiPoly::e2(k)) os << "*d2^" << XiPoly::e2(k);
    }
    return os.str();
}

} // namespace cms2
