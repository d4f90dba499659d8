#pragma once

// Dense matrices over an exact field and the Gauss-Jordan kernels everything
// else is built on.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ptw/field.hpp"

namespace ptw {

struct NoSolution : std::runtime_error {
    NoSolution() : std::runtime_error("NoSolution: right-hand side is not in the column space") {}
};
struct NotInvertible : std::runtime_error {
    NotInvertible() : std::runtime_error("NotInvertible: matrix is singular or not square") {}
};

template <class F>
class Matrix {
public:
    using V = typename F::value_type;

    Matrix() = default;
    Matrix(const F& f, std::size_t rows, std::size_t cols)
        : f_(f), rows_(rows), cols_(cols), a_(rows * cols, f.zero()) {}

    static Matrix identity(const F& f, std::size_t n) {
        Matrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = f.one();
        return m;
    }
    static Matrix from_ints(const F& f, const std::vector<std::vector<long long>>& rows) {
        std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
        Matrix m(f, r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw std::invalid_argument("from_ints: ragged rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = f.from_int(rows[i][j]);
        }
        return m;
    }
    static Matrix column(const F& f, const std::vector<V>& v) {
        Matrix m(f, v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
        return m;
    }
    static Matrix from_columns(const F& f, std::size_t rows, const std::vector<std::vector<V>>& cols) {
        Matrix m(f, rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        return m;
    }

    const F& field() const { return f_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    V& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const V& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    V* row_ptr(std::size_t i) { return a_.data() + i * cols_; }
    const V* row_ptr(std::size_t i) const { return a_.data() + i * cols_; }

    std::vector<V> col(std::size_t j) const {
        std::vector<V> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    std::vector<V> row(std::size_t i) const { return std::vector<V>(row_ptr(i), row_ptr(i) + cols_); }
    void set_col(std::size_t j, const std::vector<V>& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!f_.is_zero(x)) return false;
        return true;
    }
    bool operator==(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (std::size_t k = 0; k < a_.size(); ++k)
            if (!f_.eq(a_[k], o.a_[k])) return false;
        return true;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
        Matrix r(f_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            V* out = r.row_ptr(i);
            for (std::size_t k = 0; k < cols_; ++k) {
                const V& x = (*this)(i, k);
                if (f_.is_zero(x)) continue;
                const V* in = o.row_ptr(k);
                for (std::size_t j = 0; j < o.cols_; ++j)
                    if (!f_.is_zero(in[j])) out[j] = f_.add(out[j], f_.mul(x, in[j]));
            }
        }
        return r;
    }
    std::vector<V> apply(const std::vector<V>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("matrix-vector: dimension mismatch");
        std::vector<V> r(rows_, f_.zero());
        for (std::size_t i = 0; i < rows_; ++i) {
            const V* rp = row_ptr(i);
            V acc = f_.zero();
            for (std::size_t k = 0; k < cols_; ++k)
                if (!f_.is_zero(rp[k]) && !f_.is_zero(v[k])) acc = f_.add(acc, f_.mul(rp[k], v[k]));
            r[i] = acc;
        }
        return r;
    }
    Matrix operator+(const Matrix& o) const {
        check_same(o);
        Matrix r = *this;
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = f_.add(a_[k], o.a_[k]);
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        check_same(o);
        Matrix r = *this;
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = f_.sub(a_[k], o.a_[k]);
        return r;
    }
    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.a_) x = f_.neg(x);
        return r;
    }
    Matrix scaled(const V& s) const {
        Matrix r = *this;
        for (auto& x : r.a_) x = f_.mul(x, s);
        return r;
    }
    /// this += s * o
    void add_scaled(const Matrix& o, const V& s) {
        check_same(o);
        if (f_.is_zero(s)) return;
        for (std::size_t k = 0; k < a_.size(); ++k)
            if (!f_.is_zero(o.a_[k])) a_[k] = f_.add(a_[k], f_.mul(s, o.a_[k]));
    }
    Matrix transpose() const {
        Matrix r(f_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix r(f_, nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
        return r;
    }
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }
    Matrix select(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
        Matrix r(f_, rs.size(), cs.size());
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < cs.size(); ++j) r(i, j) = (*this)(rs[i], cs[j]);
        return r;
    }
    Matrix select_cols(const std::vector<std::size_t>& cs) const {
        Matrix r(f_, rows_, cs.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cs.size(); ++j) r(i, j) = (*this)(i, cs[j]);
        return r;
    }
    Matrix select_rows(const std::vector<std::size_t>& rs) const {
        Matrix r(f_, rs.size(), cols_);
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(rs[i], j);
        return r;
    }
    static Matrix hstack(const Matrix& a, const Matrix& b) {
        if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
        Matrix r(a.f_, a.rows(), a.cols() + b.cols());
        r.set_block(0, 0, a);
        r.set_block(0, a.cols(), b);
        return r;
    }
    static Matrix vstack(const Matrix& a, const Matrix& b) {
        if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column mismatch");
        Matrix r(a.f_, a.rows() + b.rows(), a.cols());
        r.set_block(0, 0, a);
        r.set_block(a.rows(), 0, b);
        return r;
    }
    /// Append rows in place (column counts must agree unless this is empty).
    void append_rows(const Matrix& b) {
        if (rows_ == 0 && cols_ == 0) { *this = b; return; }
        if (b.cols() != cols_) throw std::invalid_argument("append_rows: column mismatch");
        a_.insert(a_.end(), b.a_.begin(), b.a_.end());
        rows_ += b.rows();
    }
    void append_row(const std::vector<V>& r) {
        if (rows_ == 0 && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_) throw std::invalid_argument("append_row: column mismatch");
        a_.insert(a_.end(), r.begin(), r.end());
        ++rows_;
    }

    std::vector<std::vector<std::string>> to_strings() const {
        std::vector<std::vector<std::string>> out(rows_, std::vector<std::string>(cols_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i][j] = f_.to_string((*this)(i, j));
        return out;
    }
    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? ",[" : "[");
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << f_.to_string((*this)(i, j));
            os << "]";
        }
        os << "]";
        return os.str();
    }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shapes differ");
    }

    F f_{};
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<V> a_;
};

template <class F>
struct RrefResult {
    Matrix<F> reduced;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
};

/// In-place Gauss-Jordan.  Returns pivot columns.  When `stop_col` is given,
/// pivots are only sought in columns < stop_col (used for augmented systems).
template <class F>
std::vector<std::size_t> rref_inplace(Matrix<F>& m, std::size_t stop_col = static_cast<std::size_t>(-1)) {
    const F& f = m.field();
    using V = typename F::value_type;
    std::size_t R = m.rows(), C = m.cols(), r = 0;
    stop_col = std::min(stop_col, C);
    std::vector<std::size_t> piv;
    for (std::size_t c = 0; c < stop_col && r < R; ++c) {
        std::size_t sel = R;
        for (std::size_t i = r; i < R; ++i)
            if (!f.is_zero(m(i, c))) { sel = i; break; }
        if (sel == R) continue;
        if (sel != r)
            for (std::size_t j = 0; j < C; ++j) std::swap(m(sel, j), m(r, j));
        V* pr = m.row_ptr(r);
        if (!f.is_one(pr[c])) {
            V s = f.inv(pr[c]);
            for (std::size_t j = c; j < C; ++j) pr[j] = f.mul(pr[j], s);
        }
        // Columns left of c in the pivot row are already zero.
        std::vector<std::size_t> nz;
        for (std::size_t j = c; j < C; ++j)
            if (!f.is_zero(pr[j])) nz.push_back(j);
        for (std::size_t i = 0; i < R; ++i) {
            if (i == r) continue;
            V* ri = m.row_ptr(i);
            if (f.is_zero(ri[c])) continue;
            V s = ri[c];
            for (std::size_t j : nz) ri[j] = f.sub(ri[j], f.mul(s, pr[j]));
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

template <class F>
RrefResult<F> rref(const Matrix<F>& m) {
    RrefResult<F> res{m, 0, {}};
    res.pivots = rref_inplace(res.reduced);
    res.rank = res.pivots.size();
    return res;
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
    Matrix<F> w = m.rows() > m.cols() ? m.transpose() : m;
    return rref_inplace(w).size();
}

/// Columns spanning the kernel, one per free variable (free variable set to 1,
/// other free variables 0).
template <class F>
Matrix<F> kernel_basis(const Matrix<F>& m) {
    const F& f = m.field();
    Matrix<F> red = m;
    auto piv = rref_inplace(red);
    std::size_t C = m.cols();
    std::vector<char> is_piv(C, 0);
    for (auto p : piv) is_piv[p] = 1;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < C; ++j)
        if (!is_piv[j]) free.push_back(j);
    Matrix<F> K(f, C, free.size());
    for (std::size_t t = 0; t < free.size(); ++t) {
        std::size_t fj = free[t];
        K(fj, t) = f.one();
        for (std::size_t i = 0; i < piv.size(); ++i) K(piv[i], t) = f.neg(red(i, fj));
    }
    return K;
}

/// Canonical solution of a x = b (free variables zero), or nullopt.
template <class F>
std::optional<Matrix<F>> try_solve(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("solve: row counts differ");
    const F& f = a.field();
    Matrix<F> aug = Matrix<F>::hstack(a, b);
    auto piv = rref_inplace(aug, a.cols());
    for (std::size_t i = piv.size(); i < aug.rows(); ++i)
        for (std::size_t j = a.cols(); j < aug.cols(); ++j)
            if (!f.is_zero(aug(i, j))) return std::nullopt;
    Matrix<F> x(f, a.cols(), b.cols());
    for (std::size_t i = 0; i < piv.size(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x(piv[i], j) = aug(i, a.cols() + j);
    return x;
}

template <class F>
Matrix<F> solve(const Matrix<F>& a, const Matrix<F>& b) {
    auto x = try_solve(a, b);
    if (!x) throw NoSolution();
    return *x;
}

template <class F>
std::optional<Matrix<F>> try_invert(const Matrix<F>& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    std::size_t n = m.rows();
    Matrix<F> aug = Matrix<F>::hstack(m, Matrix<F>::identity(m.field(), n));
    auto piv = rref_inplace(aug, n);
    if (piv.size() != n) return std::nullopt;
    return aug.block(0, n, n, n);
}

template <class F>
Matrix<F> invert(const Matrix<F>& m) {
    auto r = try_invert(m);
    if (!r) throw NotInvertible();
    return *r;
}

/// Basis (as columns) of the column space, chosen among the original columns.
template <class F>
Matrix<F> column_space(const Matrix<F>& m) {
    Matrix<F> red = m;
    auto piv = rref_inplace(red);
    return m.select_cols(piv);
}

/// For a matrix with independent columns, L with L*m = I (L picks a set of
/// pivot rows and inverts that square block).
template <class F>
Matrix<F> left_inverse(const Matrix<F>& m) {
    Matrix<F> t = m.transpose();
    auto rows = rref_inplace(t);
    if (rows.size() != m.cols()) throw NotInvertible();
    Matrix<F> sq = m.select_rows(rows);
    Matrix<F> inv = invert(sq);
    Matrix<F> l(m.field(), m.cols(), m.rows());
    for (std::size_t i = 0; i < m.cols(); ++i)
        for (std::size_t k = 0; k < rows.size(); ++k) l(i, rows[k]) = inv(i, k);
    return l;
}

/// Incremental independent-set builder: keeps a row-reduced copy of accepted
/// vectors so each membership test costs one reduction.
template <class F>
class SpanBuilder {
public:
    using V = typename F::value_type;
    SpanBuilder(const F& f, std::size_t dim) : f_(f), dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }

    /// Reduce v against the current span; returns the residue.
    std::vector<V> reduce(std::vector<V> v) const {
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const V& c = v[pivots_[k]];
            if (f_.is_zero(c)) continue;
            V s = c;
            const auto& r = rows_[k];
            for (std::size_t j = 0; j < dim_; ++j)
                if (!f_.is_zero(r[j])) v[j] = f_.sub(v[j], f_.mul(s, r[j]));
        }
        return v;
    }
    bool contains(const std::vector<V>& v) const {
        auto r = reduce(v);
        for (const auto& x : r)
            if (!f_.is_zero(x)) return false;
        return true;
    }
    /// Add v if independent; returns true if the span grew.
    bool add(const std::vector<V>& v) {
        auto r = reduce(v);
        std::size_t p = dim_;
        for (std::size_t j = 0; j < dim_; ++j)
            if (!f_.is_zero(r[j])) { p = j; break; }
        if (p == dim_) return false;
        V s = f_.inv(r[p]);
        for (auto& x : r) x = f_.mul(x, s);
        // keep rows fully reduced with respect to each other
        for (auto& row : rows_) {
            if (f_.is_zero(row[p])) continue;
            V c = row[p];
            for (std::size_t j = 0; j < dim_; ++j)
                if (!f_.is_zero(r[j])) row[j] = f_.sub(row[j], f_.mul(c, r[j]));
        }
        rows_.push_back(std::move(r));
        pivots_.push_back(p);
        return true;
    }

private:
    F f_;
    std::size_t dim_;
    std::vector<std::vector<V>> rows_;
    std::vector<std::size_t> pivots_;
};

template <class F>
std::vector<typename F::value_type> zero_vec(const F& f, std::size_t n) {
    return std::vector<typename F::value_type>(n, f.zero());
}

template <class F>
bool is_zero_vec(const F& f, const std::vector<typename F::value_type>& v) {
    for (const auto& x : v)
        if (!f.is_zero(x)) return false;
    return true;
}

template <class F>
void axpy(const F& f, std::vector<typename F::value_type>& y, const typename F::value_type& a,
          const std::vector<typename F::value_type>& x) {
    if (f.is_zero(a)) return;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!f.is_zero(x[i])) y[i] = f.add(y[i], f.mul(a, x[i]));
}

}  // namespace ptw
