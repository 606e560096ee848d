#ifndef PLATEAU_NUMERIC_HPP
#define PLATEAU_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace plateau {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }
inline double to_double(const Int& z) { return z.convert_to<double>(); }

/// Parses "p/q" or "p" into an exact rational.
Rat parse_rational(const std::string& s);
std::string rational_to_string(const Rat& q);

/// Dense matrix with value semantics, row-major storage.
template <typename T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix& other) const = default;

    Matrix operator*(const Matrix& rhs) const
    {
        if (cols_ != rhs.rows_)
            throw std::invalid_argument("matrix product: shape mismatch");
        Matrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) {
                    const T& b = rhs(k, j);
                    if (b != 0) out(i, j) += a * b;
                }
            }
        return out;
    }

    std::vector<T> apply(const std::vector<T>& v) const
    {
        if (cols_ != v.size())
            throw std::invalid_argument("matrix apply: shape mismatch");
        std::vector<T> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0 && v[j] != 0) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    std::vector<T> col(std::size_t j) const
    {
        std::vector<T> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
        return out;
    }

    void set_col(std::size_t j, const std::vector<T>& v)
    {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    bool is_zero() const
    {
        for (const T& x : data_)
            if (x != 0) return false;
        return true;
    }

    /// Horizontal concatenation [A | B].
    static Matrix hcat(const Matrix& a, const Matrix& b)
    {
        if (a.rows_ != b.rows_ && a.cols_ != 0 && b.cols_ != 0)
            throw std::invalid_argument("hcat: row mismatch");
        std::size_t rows = a.cols_ ? a.rows_ : b.rows_;
        Matrix out(rows, a.cols_ + b.cols_);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < a.cols_; ++j) out(i, j) = a(i, j);
            for (std::size_t j = 0; j < b.cols_; ++j) out(i, a.cols_ + j) = b(i, j);
        }
        return out;
    }

    /// Vertical concatenation [A; B].
    static Matrix vcat(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.cols_ && a.rows_ != 0 && b.rows_ != 0)
            throw std::invalid_argument("vcat: col mismatch");
        std::size_t cols = a.rows_ ? a.cols_ : b.cols_;
        Matrix out(a.rows_ + b.rows_, cols);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < cols; ++j) out(i, j) = a(i, j);
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < cols; ++j) out(a.rows_ + i, j) = b(i, j);
        return out;
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

using IntMat = Matrix<Int>;
using RatMat = Matrix<Rat>;

using IntVec = std::vector<Int>;

/// Rank over Q by fraction-free (Bareiss) elimination; exact.
std::size_t rational_rank(const IntMat& m);

/// Solves A x = b over Q. Returns false when inconsistent.
bool rational_solve(const RatMat& a, const std::vector<Rat>& b, std::vector<Rat>& x);

} // namespace plateau

#endif
