#include "dq/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace dq {

Matrix identity_matrix(int n)
{
    Matrix m(n, std::vector<Scalar>(n));
    for (int i = 0; i < n; ++i)
        m[i][i] = Scalar(1);
    return m;
}

Matrix transpose(const Matrix &a)
{
    if (a.empty())
        return a;
    Matrix t(a[0].size(), std::vector<Scalar>(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j)
            t[j][i] = a[i][j];
    return t;
}

Matrix matmul(const Matrix &a, const Matrix &b)
{
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Matrix c(n, std::vector<Scalar>(m));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero())
                continue;
            for (size_t j = 0; j < m; ++j)
                c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

Matrix inverse(const Matrix &a)
{
    int n = (int)a.size();
    Matrix m = a, inv = identity_matrix(n);
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && m[p][c].is_zero())
            ++p;
        if (p == n)
            throw std::domain_error("singular matrix");
        std::swap(m[p], m[c]);
        std::swap(inv[p], inv[c]);
        Scalar s = Scalar(1) / m[c][c];
        for (int j = 0; j < n; ++j) {
            m[c][j] *= s;
            inv[c][j] *= s;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || m[r][c].is_zero())
                continue;
            Scalar f = m[r][c];
            for (int j = 0; j < n; ++j) {
                m[r][j] -= f * m[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

static void axpy(SparseRow &row, const Scalar &f, const SparseRow &piv)
{
    for (auto &[c, v] : piv) {
        auto it = row.find(c);
        if (it == row.end())
            row.emplace(c, -(f * v));
        else {
            it->second -= f * v;
            if (it->second.is_zero())
                row.erase(it);
        }
    }
}

std::vector<SparseRow> row_reduce(std::vector<SparseRow> rows, std::vector<int> *pivots)
{
    // forward elimination keyed by leading column
    std::map<int, SparseRow> piv;
    for (auto &row : rows) {
        for (auto it = row.begin(); it != row.end();)
            it = it->second.is_zero() ? row.erase(it) : std::next(it);
        while (!row.empty()) {
            int lead = row.begin()->first;
            auto pit = piv.find(lead);
            if (pit == piv.end()) {
                Scalar s = Scalar(1) / row.begin()->second;
                for (auto &[c, v] : row)
                    v *= s;
                piv.emplace(lead, std::move(row));
                break;
            }
            Scalar f = row.begin()->second;
            axpy(row, f, pit->second);
        }
    }
    // back substitution, from the last pivot upwards
    for (auto it = piv.rbegin(); it != piv.rend(); ++it) {
        int col = it->first;
        for (auto jt = piv.begin(); jt->first != col; ++jt) {
            auto f = jt->second.find(col);
            if (f == jt->second.end())
                continue;
            Scalar s = f->second;
            axpy(jt->second, s, it->second);
        }
    }
    std::vector<SparseRow> out;
    if (pivots)
        pivots->clear();
    for (auto &[c, r] : piv) {
        if (pivots)
            pivots->push_back(c);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SparseRow> nullspace(const std::vector<SparseRow> &rows, int ncols)
{
    std::vector<int> pivots;
    auto rref = row_reduce(rows, &pivots);
    std::vector<char> is_piv(ncols, 0);
    for (int p : pivots)
        is_piv[p] = 1;
    std::vector<SparseRow> basis;
    for (int f = 0; f < ncols; ++f) {
        if (is_piv[f])
            continue;
        SparseRow v;
        v[f] = Scalar(1);
        for (size_t k = 0; k < rref.size(); ++k) {
            auto it = rref[k].find(f);
            if (it != rref[k].end())
                v[pivots[k]] = -it->second;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace dq
