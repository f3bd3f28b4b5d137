#pragma once

// Square nonnegative matrix with two storage layouts sharing one set of
// semantics: dense row-major, or compressed sparse rows. Products and
// vector actions accumulate in ascending inner index and skip exact zeros
// in both layouts, so dense and sparse results agree bit for bit.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace nhdmp {

inline constexpr std::size_t kDenseLimit = 2048;

class KernelMatrix {
public:
    enum class Layout { dense, sparse };

    struct Entry {
        std::size_t col;
        double value;
    };

    KernelMatrix() = default;

    static Layout default_layout(std::size_t n) { return n <= kDenseLimit ? Layout::dense : Layout::sparse; }

    static KernelMatrix zeros(std::size_t n, Layout layout) {
        KernelMatrix m;
        m.n_ = n;
        m.layout_ = layout;
        if (layout == Layout::dense)
            m.dense_.assign(n * n, 0.0);
        else
            m.row_ptr_.assign(n + 1, 0);
        return m;
    }

    static KernelMatrix identity(std::size_t n) { return identity(n, default_layout(n)); }
    static KernelMatrix identity(std::size_t n, Layout layout) {
        std::vector<std::vector<Entry>> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i].push_back({i, 1.0});
        return from_sparse_rows(n, std::move(rows), layout);
    }

    // Rows given as (column, value) lists; columns need not be sorted.
    static KernelMatrix from_sparse_rows(std::size_t n, std::vector<std::vector<Entry>> rows, Layout layout) {
        if (rows.size() != n) throw Error(ErrorKind::dimension_mismatch, "row count differs from size");
        for (auto& row : rows) {
            std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
            for (std::size_t e = 0; e < row.size(); ++e) {
                if (row[e].col >= n) throw Error(ErrorKind::dimension_mismatch, "column outside matrix");
                if (e > 0 && row[e].col == row[e - 1].col)
                    throw Error(ErrorKind::invalid_argument, "duplicate column in sparse row");
            }
        }
        KernelMatrix m = zeros(n, layout);
        if (layout == Layout::dense) {
            for (std::size_t i = 0; i < n; ++i)
                for (const auto& e : rows[i]) m.dense_[i * n + e.col] = e.value;
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                for (const auto& e : rows[i]) {
                    if (e.value == 0.0) continue;
                    m.cols_.push_back(e.col);
                    m.vals_.push_back(e.value);
                }
                m.row_ptr_[i + 1] = m.cols_.size();
            }
        }
        return m;
    }

    static KernelMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        return from_rows(rows, default_layout(rows.size()));
    }
    static KernelMatrix from_rows(const std::vector<std::vector<double>>& rows, Layout layout) {
        const std::size_t n = rows.size();
        std::vector<std::vector<Entry>> sparse(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n)
                throw Error(ErrorKind::dimension_mismatch,
                            "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                " entries, expected " + std::to_string(n));
            for (std::size_t j = 0; j < n; ++j)
                if (rows[i][j] != 0.0) sparse[i].push_back({j, rows[i][j]});
        }
        return from_sparse_rows(n, std::move(sparse), layout);
    }

    std::size_t size() const { return n_; }
    Layout layout() const { return layout_; }

    double operator()(std::size_t i, std::size_t j) const {
        if (layout_ == Layout::dense) return dense_[i * n_ + j];
        auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
        auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
        auto it = std::lower_bound(first, last, j);
        if (it == last || *it != j) return 0.0;
        return vals_[static_cast<std::size_t>(it - cols_.begin())];
    }

    // Visits nonzero entries of row i in ascending column order.
    template <class F>
    void for_each_in_row(std::size_t i, F&& visit) const {
        if (layout_ == Layout::dense) {
            const double* row = dense_.data() + i * n_;
            for (std::size_t j = 0; j < n_; ++j)
                if (row[j] != 0.0) visit(j, row[j]);
        } else {
            for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) visit(cols_[e], vals_[e]);
        }
    }

    std::vector<double> row(std::size_t i) const {
        std::vector<double> out(n_, 0.0);
        for_each_in_row(i, [&](std::size_t j, double v) { out[j] = v; });
        return out;
    }

    std::vector<std::vector<double>> to_rows() const {
        std::vector<std::vector<double>> out;
        out.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) out.push_back(row(i));
        return out;
    }

    double row_sum(std::size_t i) const {
        double s = 0.0;
        for_each_in_row(i, [&](std::size_t, double v) { s += v; });
        return s;
    }

    std::size_t nonzeros() const {
        std::size_t count = 0;
        for (std::size_t i = 0; i < n_; ++i) for_each_in_row(i, [&](std::size_t, double) { ++count; });
        return count;
    }

    KernelMatrix with_layout(Layout layout) const {
        if (layout == layout_) return *this;
        std::vector<std::vector<Entry>> rows(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for_each_in_row(i, [&](std::size_t j, double v) { rows[i].push_back({j, v}); });
        return from_sparse_rows(n_, std::move(rows), layout);
    }

    // (this * rhs)(i,j) = sum_l this(i,l) rhs(l,j); the result takes the
    // layout of the left operand.
    KernelMatrix operator*(const KernelMatrix& rhs) const {
        if (rhs.n_ != n_) throw Error(ErrorKind::dimension_mismatch, "matrix product");
        std::vector<double> acc(n_, 0.0);
        std::vector<std::vector<Entry>> rows(n_);
        KernelMatrix out = zeros(n_, layout_);
        for (std::size_t i = 0; i < n_; ++i) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for_each_in_row(i, [&](std::size_t l, double a) {
                rhs.for_each_in_row(l, [&](std::size_t j, double b) { acc[j] += a * b; });
            });
            if (layout_ == Layout::dense) {
                std::copy(acc.begin(), acc.end(), out.dense_.begin() + static_cast<std::ptrdiff_t>(i * n_));
            } else {
                for (std::size_t j = 0; j < n_; ++j)
                    if (acc[j] != 0.0) rows[i].push_back({j, acc[j]});
            }
        }
        if (layout_ == Layout::sparse) return from_sparse_rows(n_, std::move(rows), Layout::sparse);
        return out;
    }

    // Row vector times matrix: out_j = sum_i v_i M(i,j).
    std::vector<double> left_multiply(std::span<const double> v) const {
        if (v.size() != n_) throw Error(ErrorKind::dimension_mismatch, "left_multiply");
        std::vector<double> out(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            const double vi = v[i];
            if (vi == 0.0) continue;
            for_each_in_row(i, [&](std::size_t j, double m) { out[j] += vi * m; });
        }
        return out;
    }

    // Matrix times column vector: out_i = sum_j M(i,j) f_j.
    std::vector<double> right_multiply(std::span<const double> f) const {
        if (f.size() != n_) throw Error(ErrorKind::dimension_mismatch, "right_multiply");
        std::vector<double> out(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for_each_in_row(i, [&](std::size_t j, double m) { s += m * f[j]; });
            out[i] = s;
        }
        return out;
    }

private:
    std::size_t n_ = 0;
    Layout layout_ = Layout::dense;
    std::vector<double> dense_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> cols_;
    std::vector<double> vals_;
};

} // namespace nhdmp
