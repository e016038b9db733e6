#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <vector>

#include "dense.hpp"
#include "fields.hpp"

namespace qpnkit {

/* Column-major sparse matrix.  Degreewise realizations of polynomial matrices
 * are huge but extremely sparse (a Koszul column carries two nonzeros), so the
 * rank engine below works on this shape; the dense type stays the API of
 * record for small data. */
template <Field F>
struct SparseMat {
    using Elt = typename F::Elt;
    using Entry = std::pair<std::uint32_t, Elt>;  // (row, value), column sorted by row

    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<Entry>> col;

    SparseMat() = default;
    SparseMat(std::size_t r, std::size_t c) : rows(r), cols(c), col(c) {}

    void add_entry(std::size_t i, std::size_t j, Elt v)
    {
        col[j].emplace_back(static_cast<std::uint32_t>(i), std::move(v));
    }

    void sort_columns()
    {
        for (auto& c : col)
            std::sort(c.begin(), c.end(),
                      [](const Entry& x, const Entry& y) { return x.first < y.first; });
    }
};

template <Field F>
SparseMat<F> sp_hstack(const SparseMat<F>& x, const SparseMat<F>& y)
{
    SparseMat<F> r(x.rows, x.cols + y.cols);
    for (std::size_t j = 0; j < x.cols; ++j)
        r.col[j] = x.col[j];
    for (std::size_t j = 0; j < y.cols; ++j)
        r.col[x.cols + j] = y.col[j];
    return r;
}

template <Field F>
SparseMat<F> sp_from_dense(const F& f, const DenseMatrix<F>& m)
{
    SparseMat<F> r(m.rows, m.cols);
    for (std::size_t j = 0; j < m.cols; ++j)
        for (std::size_t i = 0; i < m.rows; ++i)
            if (!f.is_zero(m.at(i, j)))
                r.add_entry(i, j, m.at(i, j));
    return r;
}

template <Field F>
DenseMatrix<F> sp_to_dense(const F& f, const SparseMat<F>& m)
{
    DenseMatrix<F> r(f, m.rows, m.cols);
    for (std::size_t j = 0; j < m.cols; ++j)
        for (const auto& [i, v] : m.col[j])
            r.at(i, j) = v;
    return r;
}

/* Sparse Gaussian elimination rank.  Pivot columns are chosen by fewest
 * nonzeros (lowest index on ties), pivot rows by fewest nonzeros within the
 * column, which keeps fill-in small on incidence-like input and makes the
 * elimination order reproducible. */
template <Field F>
std::size_t sp_rank(const F& f, const SparseMat<F>& input)
{
    using Entry = typename SparseMat<F>::Entry;

    std::vector<std::vector<Entry>> col(input.col);
    for (auto& c : col) {
        std::sort(c.begin(), c.end(), [](const Entry& x, const Entry& y) { return x.first < y.first; });
    }

    const std::size_t ncols = col.size();
    std::vector<char> col_alive(ncols, 1);
    std::vector<std::uint32_t> row_nnz(input.rows, 0);
    std::vector<std::vector<std::uint32_t>> row_cols(input.rows);  // may hold stale column ids
    for (std::size_t j = 0; j < ncols; ++j)
        for (const auto& [i, v] : col[j]) {
            (void)v;
            ++row_nnz[i];
            row_cols[i].push_back(static_cast<std::uint32_t>(j));
        }

    // (nnz, col) min-heap with lazy invalidation
    using QEntry = std::pair<std::uint32_t, std::uint32_t>;
    std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> queue;
    for (std::size_t j = 0; j < ncols; ++j)
        if (!col[j].empty())
            queue.emplace(static_cast<std::uint32_t>(col[j].size()), static_cast<std::uint32_t>(j));

    auto find_in_col = [](const std::vector<Entry>& c, std::uint32_t row) {
        auto it = std::lower_bound(c.begin(), c.end(), row,
                                   [](const Entry& e, std::uint32_t r) { return e.first < r; });
        return (it != c.end() && it->first == row) ? it : c.end();
    };

    std::size_t rank = 0;
    while (!queue.empty()) {
        auto [nnz, p] = queue.top();
        queue.pop();
        if (!col_alive[p] || col[p].size() != nnz)
            continue;  // stale entry

        // pivot row: fewest nonzeros, lowest index on ties
        std::uint32_t pivot_row = col[p][0].first;
        for (const auto& [i, v] : col[p]) {
            (void)v;
            if (row_nnz[i] < row_nnz[pivot_row] || (row_nnz[i] == row_nnz[pivot_row] && i < pivot_row))
                pivot_row = i;
        }
        auto pit = find_in_col(col[p], pivot_row);
        const typename F::Elt pivot_inv = f.inv(pit->second);

        ++rank;
        col_alive[p] = 0;
        for (const auto& [i, v] : col[p]) {
            (void)v;
            --row_nnz[i];
        }

        std::vector<std::uint32_t> touched = std::move(row_cols[pivot_row]);
        row_cols[pivot_row].clear();
        std::vector<Entry> merged;
        for (std::uint32_t k : touched) {
            if (k == p || !col_alive[k])
                continue;
            auto kit = find_in_col(col[k], pivot_row);
            if (kit == col[k].end())
                continue;  // stale: cancelled earlier
            const typename F::Elt factor = f.neg(f.mul(kit->second, pivot_inv));

            // col[k] += factor * col[p]; the pivot row cancels exactly
            merged.clear();
            merged.reserve(col[k].size() + col[p].size());
            auto a = col[k].begin(), ae = col[k].end();
            auto b = col[p].begin(), be = col[p].end();
            while (a != ae || b != be) {
                if (b == be || (a != ae && a->first < b->first)) {
                    merged.push_back(*a++);
                } else if (a == ae || b->first < a->first) {
                    if (b->first != pivot_row) {
                        typename F::Elt nv = f.mul(factor, b->second);
                        if (!f.is_zero(nv)) {
                            ++row_nnz[b->first];
                            row_cols[b->first].push_back(k);
                            merged.emplace_back(b->first, std::move(nv));
                        }
                    }
                    ++b;
                } else {
                    if (a->first != pivot_row) {
                        typename F::Elt nv = f.add(a->second, f.mul(factor, b->second));
                        if (f.is_zero(nv))
                            --row_nnz[a->first];
                        else
                            merged.emplace_back(a->first, std::move(nv));
                    } else {
                        --row_nnz[a->first];
                    }
                    ++a;
                    ++b;
                }
            }
            col[k].swap(merged);
            if (col[k].empty())
                col_alive[k] = 0;
            else
                queue.emplace(static_cast<std::uint32_t>(col[k].size()), k);
        }
        col[p].clear();
    }
    return rank;
}

}  // namespace qpnkit
