#include "tq/lattice.hpp"

#include <utility>

namespace tq {

std::vector<IntVec> integer_kernel(const Mat& c) {
    const std::size_t m = c.rows(), n = c.cols();
    std::vector<std::vector<Int>> a(m, std::vector<Int>(n));
    for (std::size_t i = 0; i < m; ++i) {
        Int l = lcm_denominators(c.row(i));
        for (std::size_t j = 0; j < n; ++j) a[i][j] = c(i, j).get_num() * (l / c(i, j).get_den());
    }
    std::vector<std::vector<Int>> u(n, std::vector<Int>(n));  // u[col][row]
    for (std::size_t j = 0; j < n; ++j) u[j][j] = 1;

    auto combine = [&](std::size_t ci, std::size_t cj, const Int& s, const Int& t, const Int& x, const Int& y) {
        // col_ci <- s col_ci + t col_cj ; col_cj <- x col_ci + y col_cj
        for (std::size_t r = 0; r < m; ++r) {
            Int p = s * a[r][ci] + t * a[r][cj];
            Int q = x * a[r][ci] + y * a[r][cj];
            a[r][ci] = std::move(p);
            a[r][cj] = std::move(q);
        }
        for (std::size_t r = 0; r < n; ++r) {
            Int p = s * u[ci][r] + t * u[cj][r];
            Int q = x * u[ci][r] + y * u[cj][r];
            u[ci][r] = std::move(p);
            u[cj][r] = std::move(q);
        }
    };

    std::size_t pc = 0;
    for (std::size_t i = 0; i < m && pc < n; ++i) {
        for (std::size_t j = pc + 1; j < n; ++j) {
            if (a[i][j] == 0) continue;
            if (a[i][pc] == 0) {
                combine(pc, j, 0, 1, 1, 0);
                continue;
            }
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[i][pc].get_mpz_t(), a[i][j].get_mpz_t());
            Int x = -a[i][j] / g, y = a[i][pc] / g;
            combine(pc, j, s, t, x, y);
        }
        if (a[i][pc] != 0) ++pc;
    }
    std::vector<IntVec> out;
    for (std::size_t j = pc; j < n; ++j) out.push_back(u[j]);
    return out;
}

std::vector<IntVec> saturated_basis(const std::vector<Vec>& rows, std::size_t n) {
    Mat b = Mat::from_rows(rows, n);
    auto perp = kernel(b);
    if (perp.empty()) {
        std::vector<IntVec> id;
        for (std::size_t i = 0; i < n; ++i) {
            IntVec e(n, Int(0));
            e[i] = 1;
            id.push_back(e);
        }
        return id;
    }
    return integer_kernel(Mat::from_rows(perp, n));
}

// Fraction-free LLL with delta = 3/4 (Cohen, Algorithm 2.6.7). d[i] is the
// Gram determinant of the first i vectors, lam[k][j] = d[j+1] mu[k][j].
std::vector<IntVec> lll_reduce(std::vector<IntVec> b) {
    const std::size_t n = b.size();
    if (n < 2) return b;
    auto idot = [](const IntVec& x, const IntVec& y) {
        Int s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    };
    std::vector<Int> d(n + 1);
    std::vector<std::vector<Int>> lam(n, std::vector<Int>(n));
    d[0] = 1;
    d[1] = idot(b[0], b[0]);
    auto red = [&](std::size_t k, std::size_t l) {
        Int twice = 2 * lam[k][l];
        if (abs(twice) <= d[l + 1]) return;
        // nearest integer to lam / d
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), Int(twice + d[l + 1]).get_mpz_t(), Int(2 * d[l + 1]).get_mpz_t());
        for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[l][c];
        lam[k][l] -= q * d[l + 1];
        for (std::size_t i = 0; i < l; ++i) lam[k][i] -= q * lam[l][i];
    };
    std::size_t k = 1, kmax = 0;
    while (k < n) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 0; j <= k; ++j) {
                Int u = idot(b[k], b[j]);
                for (std::size_t i = 0; i < j; ++i) u = (d[i + 1] * u - lam[k][i] * lam[j][i]) / d[i];
                if (j < k) lam[k][j] = u;
                else d[k + 1] = u;
            }
            if (d[k + 1] == 0) throw Error("LLL input vectors are dependent");
        }
        red(k, k - 1);
        if (4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] * lam[k][k - 1]) {
            std::swap(b[k], b[k - 1]);
            for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
            Int l = lam[k][k - 1];
            Int bb = (d[k - 1] * d[k + 1] + l * l) / d[k];
            for (std::size_t i = k + 1; i <= kmax; ++i) {
                Int t = lam[i][k];
                lam[i][k] = (d[k + 1] * lam[i][k - 1] - l * t) / d[k];
                lam[i][k - 1] = (bb * t + l * lam[i][k]) / d[k + 1];
            }
            d[k] = bb;
            if (k > 1) --k;
        } else {
            for (std::size_t l = k - 1; l-- > 0;) red(k, l);
            ++k;
        }
    }
    return b;
}

}  // namespace tq
