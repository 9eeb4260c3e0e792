#pragma once

// Exact arithmetic substrate: GMP integers/rationals, dense rational
// matrices and the handful of linear-algebra routines everything else uses.

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tq/errors.hpp"

namespace tq {

using Int = mpz_class;
using Rat = mpq_class;
using Vec = std::vector<Rat>;
using IntVec = std::vector<Int>;

Rat parse_rat(std::string_view s);
std::string to_string(const Rat& r);
std::string to_string(const Int& z);

/// Dense row-major matrix of rationals.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Mat identity(std::size_t n);
    static Mat from_rows(const std::vector<Vec>& rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec row(std::size_t i) const;
    Vec col(std::size_t j) const;
    void set_row(std::size_t i, const Vec& v);
    std::vector<Vec> row_list() const;

    Mat transpose() const;
    bool is_zero() const;
    bool is_symmetric() const;

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> data_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator*(const Rat& s, const Mat& a);
Vec operator*(const Mat& a, const Vec& x);

Rat dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Rat& s, const Vec& a);
bool is_zero(const Vec& v);
Vec to_vec(const IntVec& v);

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Mat& m);
std::size_t rank(const Mat& m);
/// Basis (as rows) of the right kernel {x : m x = 0}.
std::vector<Vec> kernel(const Mat& m);
Rat det(const Mat& m);
/// Exact inverse; throws Error when singular.
Mat inverse(const Mat& m);
/// Solves m x = b; returns false when inconsistent.
bool solve(const Mat& m, const Vec& b, Vec& x);

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
Int det_bareiss(std::vector<std::vector<Int>> a);

/// Scales v to a primitive integer vector whose first nonzero entry is positive.
IntVec primitive(const Vec& v);
Int height(const IntVec& v);
Int lcm_denominators(const Vec& v);

}  // namespace tq
