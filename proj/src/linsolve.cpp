#include "cms2/linsolve.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace cms2 {

std::vector<Scalar> Matrix::mul(const std::vector<Scalar>& v) const {
    assert(v.size() == c_);
    std::vector<Scalar> out(r_, Scalar(0));
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j)
            if (!at(i, j).is_zero() && !v[j].is_zero()) out[i] += at(i, j) * v[j];
    return out;
}

Scalar Matrix::det_gauss() const {
    assert(r_ == c_);
    Matrix m = *this;
    Scalar det(1);
    for (std::size_t k = 0; k < r_; ++k) {
        std::size_t piv = k;
        while (piv < r_ && m.at(piv, k).is_zero()) ++piv;
        if (piv == r_) return Scalar(0);
        if (piv != k) {
            for (std::size_t j = 0; j < c_; ++j) std::swap(m.at(piv, j), m.at(k, j));
            det = -det;
        }
        det *= m.at(k, k);
        Scalar inv = m.at(k, k).inverse();
        for (std::size_t i = k + 1; i < r_; ++i) {
            if (m.at(i, k).is_zero()) continue;
            Scalar f = m.at(i, k) * inv;
            for (std::size_t j = k; j < c_; ++j) m.at(i, j) -= f * m.at(k, j);
        }
    }
    return det;
}

Scalar Matrix::det_bareiss() const {
    assert(r_ == c_);
    if (r_ == 0) return Scalar(1);
    Matrix m = *this;
    Scalar prev(1);
    long sign = 1;
    for (std::size_t k = 0; k + 1 < r_; ++k) {
        if (m.at(k, k).is_zero()) {
            std::size_t piv = k + 1;
            while (piv < r_ && m.at(piv, k).is_zero()) ++piv;
            if (piv == r_) return Scalar(0);
            for (std::size_t j = 0; j < c_; ++j) std::swap(m.at(piv, j), m.at(k, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < r_; ++i)
            for (std::size_t j = k + 1; j < c_; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
        prev = m.at(k, k);
    }
    Scalar d = m.at(r_ - 1, r_ - 1);
    return sign < 0 ? -d : d;
}

std::size_t Matrix::rank() const {
    Matrix m = *this;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < c_ && rank < r_; ++col) {
        std::size_t piv = rank;
        while (piv < r_ && m.at(piv, col).is_zero()) ++piv;
        if (piv == r_) continue;
        for (std::size_t j = 0; j < c_; ++j) std::swap(m.at(piv, j), m.at(rank, j));
        Scalar inv = m.at(rank, col).inverse();
        for (std::size_t i = 0; i < r_; ++i) {
            if (i == rank || m.at(i, col).is_zero()) continue;
            Scalar f = m.at(i, col) * inv;
            for (std::size_t j = col; j < c_; ++j) m.at(i, j) -= f * m.at(rank, j);
        }
        ++rank;
    }
    return rank;
}

std::vector<std::vector<Scalar>> Matrix::nullspace() const {
    Matrix m = *this;
    std::vector<std::size_t> pivCol;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < c_ && rank < r_; ++col) {
        std::size_t piv = rank;
        while (piv < r_ && m.at(piv, col).is_zero()) ++piv;
        if (piv == r_) continue;
        for (std::size_t j = 0; j < c_; ++j) std::swap(m.at(piv, j), m.at(rank, j));
        Scalar inv = m.at(rank, col).inverse();
        for (std::size_t j = col; j < c_; ++j) m.at(rank, j) *= inv;
        for (std::size_t i = 0; i < r_; ++i) {
            if (i == rank || m.at(i, col).is_zero()) continue;
            Scalar f = m.at(i, col);
            for (std::size_t j = col; j < c_; ++j) m.at(i, j) -= f * m.at(rank, j);
        }
        pivCol.push_back(col);
        ++rank;
    }
    std::vector<bool> isPiv(c_, false);
    for (auto c : pivCol) isPiv[c] = true;
    std::vector<std::vector<Scalar>> basis;
    for (std::size_t freeCol = 0; freeCol < c_; ++freeCol) {
        if (isPiv[freeCol]) continue;
        std::vector<Scalar> v(c_, Scalar(0));
        v[freeCol] = Scalar(1);
        for (std::size_t i = 0; i < rank; ++i)
            v[pivCol[i]] = -m.at(i, freeCol);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Scalar>> sparse_solve(std::vector<SparseRow> rows,
                                                std::size_t ncols) {
    // forward elimination with pivot bookkeeping per column
    std::map<std::size_t, SparseRow> piv; // pivot col -> normalized row

    auto reduce = [&](SparseRow& row) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& [col, val] : row.entries) {
                auto it = piv.find(col);
                if (it == piv.end() || val.is_zero()) continue;
                Scalar f = val;
                const SparseRow& p = it->second;
                // row -= f * p
                std::map<std::size_t, Scalar> acc;
                for (auto& [c, v] : row.entries) acc[c] = v;
                for (const auto& [c, v] : p.entries) {
                    auto [jt, fresh] = acc.emplace(c, -(f * v));
                    if (!fresh) jt->second -= f * v;
                }
                row.entries.clear();
                for (auto& [c, v] : acc)
                    if (!v.is_zero()) row.entries.push_back({c, v});
                row.rhs -= f * p.rhs;
                changed = true;
                break;
            }
        }
    };

    for (auto& row : rows) {
        std::sort(row.entries.begin(), row.entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        // merge duplicate columns
        std::vector<std::pair<std::size_t, Scalar>> merged;
        for (auto& [c, v] : row.entries) {
            if (!merged.empty() && merged.back().first == c) merged.back().second += v;
            else merged.push_back({c, v});
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [](const auto& e) { return e.second.is_zero(); }),
                     merged.end());
        row.entries = std::move(merged);
        reduce(row);
        if (row.entries.empty()) {
            if (!row.rhs.is_zero()) return std::nullopt;
            continue;
        }
        // normalize on least column
        auto lead = row.entries.front();
        Scalar inv = lead.second.inverse();
        for (auto& [c, v] : row.entries) v *= inv;
        row.rhs *= inv;
        piv.emplace(lead.first, row);
    }

    // back substitution, free variables zero
    std::vector<Scalar> x(ncols, Scalar(0));
    for (auto it = piv.rbegin(); it != piv.rend(); ++it) {
        const SparseRow& p = it->second;
        Scalar v = p.rhs;
        bool first = true;
        for (const auto& [c, coef] : p.entries) {
            if (first) {
                first = false;
                continue;
            }
            if (!x[c].is_zero()) v -= coef * x[c];
        }
        x[it->first] = v;
    }
    return x;
}

} // namespace cms2
