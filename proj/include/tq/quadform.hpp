#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "tq/rational.hpp"

namespace tq {

/// Quadratic form Q(x) = x^T A x with A symmetric over Q.
///
/// Off-diagonal entries carry half the cross coefficient, so x1*x2 has
/// gram entries 1/2.
class QuadForm {
public:
    QuadForm() = default;
    explicit QuadForm(Mat gram);

    static QuadForm zero(std::size_t n);
    static QuadForm diagonal(const Vec& d);

    std::size_t n() const noexcept { return gram_.rows(); }
    const Mat& gram() const noexcept { return gram_; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return gram_(i, j); }

    friend bool operator==(const QuadForm& a, const QuadForm& b) { return a.gram_ == b.gram_; }

private:
    Mat gram_;
};

struct QuadSystem {
    std::array<QuadForm, 3> forms;

    QuadSystem() = default;
    QuadSystem(QuadForm q1, QuadForm q2, QuadForm q3);

    std::size_t n() const noexcept { return forms[0].n(); }
    const QuadForm& operator[](std::size_t i) const { return forms[i]; }

    friend bool operator==(const QuadSystem&, const QuadSystem&) = default;
};

/// Projective t-plane spanned by the rows of a full-rank (t+1) x n matrix.
class LinearSpace {
public:
    LinearSpace() = default;
    explicit LinearSpace(Mat basis);
    static LinearSpace from_rows(const std::vector<Vec>& rows, std::size_t n);

    std::size_t n() const noexcept { return basis_.cols(); }
    std::size_t t() const noexcept { return basis_.rows() - 1; }
    std::size_t dim() const noexcept { return basis_.rows(); }
    const Mat& basis() const noexcept { return basis_; }

    /// Point of the space with the given coordinates in the basis.
    Vec point(const Vec& coords) const;
    bool contains(const Vec& x) const;
    bool contains(const LinearSpace& other) const;

    friend bool operator==(const LinearSpace& a, const LinearSpace& b) { return a.basis_ == b.basis_; }

private:
    Mat basis_;
};

struct Signature {
    std::size_t n_plus = 0;
    std::size_t n_minus = 0;
    std::size_t n_zero = 0;

    friend bool operator==(const Signature&, const Signature&) = default;
};

struct Diagonalization {
    QuadForm d;  // diagonal
    Mat u;       // columns are the new basis; u^T A u = d
};

Rat eval_form(const QuadForm& q, const Vec& x);
/// Symmetric bilinear form x^T A y, so that Q(x) = b(x, x).
Rat bilinear(const QuadForm& q, const Vec& x, const Vec& y);
Vec gradient(const QuadForm& q, const Vec& x);

Diagonalization congruence_diagonalize(const QuadForm& q);
Signature signature_real(const QuadForm& q);
std::size_t rank(const QuadForm& q);

/// Form with gram B A B^T, i.e. Q restricted to the row span of B.
QuadForm congruence(const QuadForm& q, const Mat& rows);
QuadForm linear_combination(const QuadSystem& s, const Vec& coeffs);
QuadForm operator+(const QuadForm& a, const QuadForm& b);
QuadForm operator*(const Rat& c, const QuadForm& q);

/// Integer matrix 2*A scaled by a positive rational to be primitive; same zero set.
std::vector<std::vector<Int>> primitive_integer_gram2(const QuadForm& q);

}  // namespace tq
