#pragma once

// Exact linear algebra over TowerScalar: reduced row echelon form, rank,
// kernels and linear solves. Everything is dense and desk-scale.

#include <optional>
#include <vector>

#include "locuslab/scalar.hpp"

namespace locuslab {

using Vec = std::vector<TowerScalar>;
using Mat = std::vector<Vec>;

// reduced row echelon form with zero rows dropped; pivots collects the pivot
// column of each remaining row
inline Mat rref(Mat m, std::vector<int>* pivots = nullptr) {
    if (pivots) pivots->clear();
    int rows = (int)m.size();
    int cols = rows ? (int)m[0].size() : 0;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (!m[i][c].is_zero()) { p = i; break; }
        if (p < 0) continue;
        std::swap(m[r], m[p]);
        TowerScalar inv = m[r][c].inverse();
        for (int j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            TowerScalar f = m[i][c];
            for (int j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
        }
        if (pivots) pivots->push_back(c);
        ++r;
    }
    m.resize(r);
    return m;
}

inline int rank(const Mat& m) { return (int)rref(m).size(); }

// basis of { x : m x = 0 }
inline Mat kernel_basis(const Mat& m, int cols) {
    std::vector<int> pivots;
    Mat r = rref(m, &pivots);
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots) is_pivot[c] = true;
    Mat out;
    for (int c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        Vec v(cols);
        v[c] = TowerScalar(1L);
        for (size_t i = 0; i < r.size(); ++i) v[pivots[i]] = -r[i][c];
        out.push_back(std::move(v));
    }
    return out;
}

// solve m x = b; nullopt if inconsistent (any solution is fine)
inline std::optional<Vec> solve(const Mat& m, const Vec& b) {
    int rows = (int)m.size();
    int cols = rows ? (int)m[0].size() : 0;
    Mat aug = m;
    for (int i = 0; i < rows; ++i) aug[i].push_back(b[i]);
    std::vector<int> pivots;
    Mat r = rref(aug, &pivots);
    Vec x(cols);
    for (size_t i = 0; i < r.size(); ++i) {
        if (pivots[i] == cols) return std::nullopt;  // 0 = 1 row
        x[pivots[i]] = r[i][cols];
    }
    return x;
}

inline TowerScalar dot_vec(const Vec& a, const Vec& b) {
    TowerScalar s;
    for (size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
    return s;
}

inline bool proportional(const Vec& a, const Vec& b) {
    // first nonzero entries fix the ratio
    int p = -1;
    for (int i = 0; i < (int)a.size(); ++i)
        if (!a[i].is_zero()) { p = i; break; }
    if (p < 0) {
        for (auto& x : b)
            if (!x.is_zero()) return false;
        return true;
    }
    if (b[p].is_zero()) return false;
    TowerScalar lam = b[p] * a[p].inverse();
    for (size_t i = 0; i < a.size(); ++i)
        if (!(a[i] * lam == b[i])) return false;
    return true;
}

}  // namespace locuslab
