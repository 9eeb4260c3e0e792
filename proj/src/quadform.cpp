#include "tq/quadform.hpp"

#include <utility>

namespace tq {

QuadForm::QuadForm(Mat gram) : gram_(std::move(gram)) {
    for (std::size_t i = 0; i < gram_.rows(); ++i)
        for (std::size_t j = 0; j < gram_.cols(); ++j) gram_(i, j).canonicalize();
    if (!gram_.is_symmetric()) throw Error("gram matrix must be square and symmetric");
}

QuadForm QuadForm::zero(std::size_t n) { return QuadForm(Mat(n, n)); }

QuadForm QuadForm::diagonal(const Vec& d) {
    Mat m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return QuadForm(std::move(m));
}

QuadSystem::QuadSystem(QuadForm q1, QuadForm q2, QuadForm q3) : forms{std::move(q1), std::move(q2), std::move(q3)} {
    if (forms[0].n() != forms[1].n() || forms[0].n() != forms[2].n())
        throw DimensionMismatch("system forms differ in dimension");
}

LinearSpace::LinearSpace(Mat basis) : basis_(std::move(basis)) {
    if (basis_.rows() == 0 || basis_.rows() > basis_.cols())
        throw Error("linear space needs 1..n basis rows");
    if (rank(basis_) != basis_.rows()) throw Error("linear space basis is not of full row rank");
}

LinearSpace LinearSpace::from_rows(const std::vector<Vec>& rows, std::size_t n) {
    return LinearSpace(Mat::from_rows(rows, n));
}

Vec LinearSpace::point(const Vec& coords) const {
    if (coords.size() != dim()) throw DimensionMismatch("plane coordinates have wrong length");
    return basis_.transpose() * coords;
}

bool LinearSpace::contains(const Vec& x) const {
    if (x.size() != n()) throw DimensionMismatch("point dimension mismatch");
    Mat m(dim() + 1, n());
    for (std::size_t i = 0; i < dim(); ++i) m.set_row(i, basis_.row(i));
    m.set_row(dim(), x);
    return rank(m) == dim();
}

bool LinearSpace::contains(const LinearSpace& other) const {
    if (other.n() != n()) throw DimensionMismatch("ambient dimension mismatch");
    Mat m(dim() + other.dim(), n());
    for (std::size_t i = 0; i < dim(); ++i) m.set_row(i, basis_.row(i));
    for (std::size_t i = 0; i < other.dim(); ++i) m.set_row(dim() + i, other.basis().row(i));
    return rank(m) == dim();
}

Rat bilinear(const QuadForm& q, const Vec& x, const Vec& y) {
    if (x.size() != q.n() || y.size() != q.n()) throw DimensionMismatch("vector length differs from form dimension");
    return dot(x, q.gram() * y);
}

Rat eval_form(const QuadForm& q, const Vec& x) { return bilinear(q, x, x); }

Vec gradient(const QuadForm& q, const Vec& x) {
    if (x.size() != q.n()) throw DimensionMismatch("vector length differs from form dimension");
    return scale(Rat(2), q.gram() * x);
}

Diagonalization congruence_diagonalize(const QuadForm& q) {
    const std::size_t n = q.n();
    Mat a = q.gram();
    Mat u = Mat::identity(n);
    Rat c;

    // Basis change on column j of u: u_j <- u_j + c u_k, mirrored on a.
    auto add_multiple = [&](std::size_t j, std::size_t k, const Rat& f) {
        for (std::size_t r = 0; r < n; ++r) u(r, j) += f * u(r, k);
        for (std::size_t r = 0; r < n; ++r) a(j, r) += f * a(k, r);
        for (std::size_t r = 0; r < n; ++r) a(r, j) += f * a(r, k);
    };
    auto scale_basis = [&](std::size_t j, const Rat& f) {
        for (std::size_t r = 0; r < n; ++r) u(r, j) *= f;
        for (std::size_t r = 0; r < n; ++r) a(j, r) *= f;
        for (std::size_t r = 0; r < n; ++r) a(r, j) *= f;
    };
    auto swap_basis = [&](std::size_t j, std::size_t k) {
        for (std::size_t r = 0; r < n; ++r) std::swap(u(r, j), u(r, k));
        for (std::size_t r = 0; r < n; ++r) std::swap(a(j, r), a(k, r));
        for (std::size_t r = 0; r < n; ++r) std::swap(a(r, j), a(r, k));
    };

    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t j = k + 1;
            while (j < n && a(k, j) == 0) ++j;
            if (j == n) continue;  // k lies in the radical of what remains
            if (a(j, j) == 0) {
                // hyperbolic block: (u_k, u_j) -> (u_k + u_j, u_k - u_j)
                add_multiple(k, j, Rat(1));
                scale_basis(j, Rat(-2));
                add_multiple(j, k, Rat(1));
            } else {
                swap_basis(k, j);
            }
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            c = -a(i, k) / a(k, k);
            add_multiple(i, k, c);
        }
    }
    Vec d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
    return {QuadForm::diagonal(d), std::move(u)};
}

Signature signature_real(const QuadForm& q) {
    auto dz = congruence_diagonalize(q);
    Signature s;
    for (std::size_t i = 0; i < q.n(); ++i) {
        int sg = sgn(dz.d(i, i));
        if (sg > 0)
            ++s.n_plus;
        else if (sg < 0)
            ++s.n_minus;
        else
            ++s.n_zero;
    }
    return s;
}

std::size_t rank(const QuadForm& q) { return rank(q.gram()); }

QuadForm congruence(const QuadForm& q, const Mat& rows) {
    if (rows.cols() != q.n()) throw DimensionMismatch("basis width differs from form dimension");
    Mat g = rows * q.gram() * rows.transpose();
    // products of symmetric congruences are symmetric; enforce bitwise
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = i + 1; j < g.cols(); ++j) g(j, i) = g(i, j);
    return QuadForm(std::move(g));
}

QuadForm operator+(const QuadForm& a, const QuadForm& b) { return QuadForm(a.gram() + b.gram()); }
QuadForm operator*(const Rat& c, const QuadForm& q) { return QuadForm(c * q.gram()); }

QuadForm linear_combination(const QuadSystem& s, const Vec& coeffs) {
    if (coeffs.size() != 3) throw DimensionMismatch("net coefficients must have length 3");
    return coeffs[0] * s[0] + coeffs[1] * s[1] + coeffs[2] * s[2];
}

std::vector<std::vector<Int>> primitive_integer_gram2(const QuadForm& q) {
    const std::size_t n = q.n();
    Int l = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rat e = 2 * q(i, j);
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.get_den_mpz_t());
        }
    std::vector<std::vector<Int>> m(n, std::vector<Int>(n));
    Int g = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rat e = 2 * q(i, j) * l;
            m[i][j] = e.get_num();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m[i][j].get_mpz_t());
        }
    if (g > 1)
        for (auto& row : m)
            for (auto& e : row) mpz_divexact(e.get_mpz_t(), e.get_mpz_t(), g.get_mpz_t());
    return m;
}

}  // namespace tq
