#pragma once

#include "hcdg/rational.hpp"

#include <cassert>
#include <stdexcept>
#include <vector>

namespace hcdg {

/// Dense matrix over exact rationals. Row-major, sized at construction.
/// Maps act on column vectors: (rows x cols) * (cols) -> (rows).
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }
    const Rational& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (x != 0) return false;
        return true;
    }

    Mat operator+(const Mat& o) const {
        check_same_shape(o);
        Mat r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }

    Mat operator-(const Mat& o) const {
        check_same_shape(o);
        Mat r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Mat: product shape mismatch");
        Mat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rational& v = (*this)(i, k);
                if (v == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    const Rational& w = o(k, j);
                    if (w != 0) r(i, j) += v * w;
                }
            }
        return r;
    }

    Mat scaled(const Rational& c) const {
        Mat r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = c * a_[i];
        return r;
    }

    Mat transposed() const {
        Mat r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    std::vector<Rational> apply(const std::vector<Rational>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Mat: apply shape mismatch");
        std::vector<Rational> r(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0 && v[j] != 0) r[i] += (*this)(i, j) * v[j];
        return r;
    }

private:
    void check_same_shape(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Mat: shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<Rational> a_;
};

/// Reduced row echelon form computed in place; returns pivot columns.
inline std::vector<std::size_t> rref(Mat& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(p, j));
        Rational inv = Rational(1) / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            Rational f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(Mat m) { return rref(m).size(); }

/// Null space basis as matrix columns (cols x nullity).
inline Mat kernel_basis(Mat m) {
    const std::size_t n = m.cols();
    std::vector<std::size_t> pivots = rref(m);
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Mat basis(n, free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        basis(free_cols[k], k) = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            basis(pivots[r], k) = -m(r, free_cols[k]);
    }
    return basis;
}

/// Incremental row space: feeds rows into a growing rref. Used to build
/// spans, test membership, and read off ranks without re-eliminating.
class RowSpace {
public:
    explicit RowSpace(std::size_t width) : width_(width) {}

    std::size_t width() const { return width_; }
    std::size_t dim() const { return rows_.size(); }

    /// Reduces v against the current basis; inserts the remainder if nonzero.
    /// Returns true when the row enlarged the span.
    bool add(std::vector<Rational> v) {
        reduce(v);
        std::size_t lead = leading(v);
        if (lead == width_) return false;
        Rational inv = Rational(1) / v[lead];
        for (auto& x : v) x *= inv;
        // keep rows sorted by pivot and fully reduced
        for (auto& r : rows_) {
            if (r.row[lead] != 0) {
                Rational f = r.row[lead];
                for (std::size_t j = 0; j < width_; ++j) r.row[j] -= f * v[j];
            }
        }
        std::size_t pos = 0;
        while (pos < rows_.size() && rows_[pos].pivot < lead) ++pos;
        rows_.insert(rows_.begin() + pos, Row{lead, std::move(v)});
        return true;
    }

    bool contains(std::vector<Rational> v) const {
        reduce(v);
        return leading(v) == width_;
    }

    /// Remainder of v modulo the span (fully reduced representative).
    std::vector<Rational> reduce_vector(std::vector<Rational> v) const {
        reduce(v);
        return v;
    }

    /// Basis rows, pivot-sorted.
    Mat basis() const {
        Mat b(rows_.size(), width_);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (std::size_t j = 0; j < width_; ++j) b(i, j) = rows_[i].row[j];
        return b;
    }

    const std::vector<std::size_t> pivot_columns() const {
        std::vector<std::size_t> p;
        for (const auto& r : rows_) p.push_back(r.pivot);
        return p;
    }

private:
    struct Row {
        std::size_t pivot;
        std::vector<Rational> row;
    };

    std::size_t leading(const std::vector<Rational>& v) const {
        for (std::size_t j = 0; j < width_; ++j)
            if (v[j] != 0) return j;
        return width_;
    }

    void reduce(std::vector<Rational>& v) const {
        for (const auto& r : rows_) {
            if (v[r.pivot] == 0) continue;
            Rational f = v[r.pivot];
            for (std::size_t j = r.pivot; j < width_; ++j) v[j] -= f * r.row[j];
        }
    }

    std::size_t width_;
    std::vector<Row> rows_;
};

/// Solves m x = b; returns one solution or nullopt when inconsistent.
inline std::optional<std::vector<Rational>> solve(const Mat& m, const std::vector<Rational>& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: rhs shape mismatch");
    Mat aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    std::vector<std::size_t> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    std::vector<Rational> x(m.cols());
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, m.cols());
    return x;
}

} // namespace hcdg
