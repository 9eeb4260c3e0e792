#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "tq/lattice.hpp"
#include "tq/modular.hpp"
#include "tq/poly.hpp"
#include "tq/quadform.hpp"
#include "tq/random.hpp"

using namespace tq;

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rat("3/6") == Rat(1, 2));
    CHECK(parse_rat("-4") == Rat(-4));
    CHECK(to_string(Rat(-3, 4)) == "-3/4");
    CHECK(to_string(Rat(5)) == "5");
    CHECK_THROWS_AS(parse_rat("1/0"), Malformed);
    CHECK_THROWS_AS(parse_rat("abc"), Malformed);
    CHECK_THROWS_AS(parse_rat(""), Malformed);
}

TEST_CASE("determinant agrees with permutation expansion") {
    Rng rng(1);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 1 + trial % 5;
        Mat m = oracle::random_mat(rng, n, n, 4, trial % 2 == 0);
        Rat d = oracle::leibniz_det(m);
        CHECK(det(m) == d);
        std::vector<std::vector<Int>> a(n, std::vector<Int>(n));
        bool integral = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                integral = integral && m(i, j).get_den() == 1;
                a[i][j] = m(i, j).get_num();
            }
        if (integral) CHECK(Rat(det_bareiss(a)) == d);
    }
}

TEST_CASE("inverse, kernel, solve, rank") {
    Rng rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t r = 2 + trial % 4, c = 2 + (trial / 4) % 4;
        Mat m = oracle::random_mat(rng, r, c, 2, false);
        auto ker = kernel(m);
        CHECK(ker.size() + rank(m) == c);
        for (const auto& k : ker) CHECK(is_zero(m * k));
        if (r == c) {
            if (det(m) != 0) {
                Mat inv = inverse(m);
                CHECK(inv * m == Mat::identity(r));
            } else {
                CHECK_THROWS_AS(inverse(m), Error);
            }
        }
        Vec x0(c);
        for (auto& v : x0) v = rng.uniform(-3, 3);
        Vec b = m * x0, x;
        REQUIRE(solve(m, b, x));
        CHECK(m * x == b);
    }
    Mat z(2, 2);
    z(0, 0) = 1;
    Vec x;
    CHECK_FALSE(solve(z, Vec{0, 1}, x));
}

TEST_CASE("rref gives pivots in increasing order") {
    Mat m = Mat::from_rows({{0, 2, 4}, {0, 1, 2}, {1, 0, 1}}, 3);
    auto piv = rref(m);
    CHECK(piv == std::vector<std::size_t>{0, 1});
    CHECK(m.row(2) == Vec{0, 0, 0});
}

TEST_CASE("congruence diagonalization and signature") {
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 2 + trial % 6;
        QuadForm q(oracle::random_symmetric(rng, n, 3, trial % 3 == 0));
        auto dg = congruence_diagonalize(q);
        CHECK(dg.u.transpose() * q.gram() * dg.u == dg.d.gram());
        CHECK(det(dg.u) != 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) CHECK(dg.d(i, j) == 0);
        auto sig = signature_real(q);
        CHECK(sig.n_plus + sig.n_minus + sig.n_zero == n);
        CHECK(n - sig.n_zero == rank(q));
        if (auto jac = oracle::jacobi_signature(q.gram())) {
            CHECK(sig.n_plus == jac->first);
            CHECK(sig.n_minus == jac->second);
        }
    }
}

TEST_CASE("quadratic form helpers") {
    QuadForm q = QuadForm::diagonal({1, 1, -1});
    CHECK(eval_form(q, {3, 4, 5}) == 0);
    CHECK(bilinear(q, {1, 0, 1}, {0, 1, 1}) == -1);
    CHECK(gradient(q, {1, 2, 3}) == Vec{2, 4, -6});
    Mat rows = Mat::from_rows({{1, 0, 1}, {0, 1, 0}}, 3);
    QuadForm r = congruence(q, rows);
    CHECK(r(0, 0) == 0);
    CHECK(r(1, 1) == 1);
    auto g2 = primitive_integer_gram2(QuadForm::diagonal({Rat(1, 2), Rat(3, 2)}));
    CHECK(g2[0][0] == 1);
    CHECK(g2[1][1] == 3);
    CHECK_THROWS(QuadForm(Mat::from_rows({{1, 2}, {3, 4}}, 2)));
}

TEST_CASE("linear space membership") {
    LinearSpace l = LinearSpace::from_rows({{1, 0, 1, 0}, {0, 1, 0, 1}}, 4);
    CHECK(l.t() == 1);
    CHECK(l.contains(Vec{2, 3, 2, 3}));
    CHECK_FALSE(l.contains(Vec{1, 0, 0, 0}));
    CHECK(l.point({1, 1}) == Vec{1, 1, 1, 1});
    LinearSpace p = LinearSpace::from_rows({{1, 1, 1, 1}}, 4);
    CHECK(l.contains(p));
    CHECK_THROWS(LinearSpace::from_rows({{1, 0}, {2, 0}}, 2));
}

TEST_CASE("primitive vectors and heights") {
    IntVec v = primitive({Rat(-2, 3), Rat(4, 9), 0});
    CHECK(v == IntVec{3, -2, 0});
    CHECK(height(v) == 3);
    CHECK(lcm_denominators({Rat(1, 4), Rat(1, 6)}) == 12);
}

TEST_CASE("number theory against brute force") {
    for (u64 n = 0; n < 2000; ++n) CHECK(is_prime(n) == oracle::is_prime_naive(n));
    CHECK(is_prime(1000000007ULL));
    CHECK_FALSE(is_prime(1000000007ULL * 3));
    CHECK(primes_up_to(20) == std::vector<u64>{2, 3, 5, 7, 11, 13, 17, 19});
    for (u64 p : {3, 5, 7, 11, 13, 37}) {
        for (u64 a = 0; a < p; ++a) {
            bool square = false;
            for (u64 x = 0; x < p; ++x) square = square || (x * x) % p == a;
            int want = a == 0 ? 0 : (square ? 1 : -1);
            CHECK(legendre(Int(static_cast<unsigned long>(a)), p) == want);
            u64 root = 0;
            CHECK(sqrt_mod(a, p, root) == (square || a == 0));
            if (square) CHECK((root * root) % p == a);
            if (a) CHECK((a * invmod(a, p)) % p == 1);
            u64 naive = 1;
            for (int e = 0; e < 7; ++e) naive = naive * a % p;
            CHECK(powmod(a, 7, p) == naive);
        }
    }
    CHECK(valuation(Int(72), Int(2)) == 3);
    CHECK(valuation(Rat(9, 8), Int(2)) == -3);
    CHECK(valuation(Int(0), Int(5)) == kInfiniteValuation);
    CHECK(residue(Rat(1, 2), Int(9)) == 5);
    CHECK(mod_positive(Int(-1), Int(7)) == 6);
}

TEST_CASE("trial factorization reconstructs its input") {
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        Int n = Int(static_cast<unsigned long>(rng.uniform(2, 1000000))) * Int(static_cast<unsigned long>(rng.uniform(1, 100000)));
        auto f = trial_factor(n, 1000);
        Int prod = f.cofactor;
        for (const auto& [p, e] : f.factors) {
            CHECK(is_prime(p.get_ui()));
            prod *= pow_int(p, e);
        }
        CHECK(prod == n);
    }
}

TEST_CASE("rank mod p matches rational rank for a large prime") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Mat m = oracle::random_mat(rng, 4, 5, 3, true);
        std::vector<std::vector<u64>> a(4, std::vector<u64>(5));
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 5; ++j) a[i][j] = mod_positive(m(i, j).get_num(), Int(1000003)).get_ui();
        CHECK(rank_mod(a, 1000003) == rank(m));
    }
}

TEST_CASE("p-adic approximations") {
    PadicApprox x = make_padic(7, 2, {50, 7, 1});
    CHECK(x.coords == IntVec{1, 7, 1});
    CHECK(x.modulus() == 49);
    CHECK(x.first_unit() == 0);
    CHECK(projectively_congruent({2, 14, 2}, x, 2));
    CHECK_FALSE(projectively_congruent({2, 15, 2}, x, 2));
    CHECK_THROWS(make_padic(7, 1, {7, 14, 0}).first_unit());
}

TEST_CASE("saturated basis and integer kernel") {
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        Mat c = oracle::random_mat(rng, 2, 5, 3, true);
        auto ker = integer_kernel(c);
        CHECK(ker.size() == 5 - rank(c));
        for (const auto& k : ker) CHECK(is_zero(c * to_vec(k)));
        // saturation: every small integer kernel vector is an integer combination
        Mat km(ker.size(), 5);
        for (std::size_t i = 0; i < ker.size(); ++i) km.set_row(i, to_vec(ker[i]));
        for (const auto& v : oracle::small_integer_kernel(c, 2)) {
            Vec coeffs;
            REQUIRE(solve(km.transpose(), to_vec(v), coeffs));
            for (const auto& x : coeffs) CHECK(x.get_den() == 1);
        }
        std::vector<Vec> rows{{1, 2, 0, Rat(1, 2), 0}, {0, 0, 3, 0, Rat(1, 3)}};
        auto sb = saturated_basis(rows, 5);
        CHECK(sb.size() == 2);
    }
}

TEST_CASE("LLL output is reduced and spans the same lattice") {
    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t k = 2 + trial % 4, n = k + 1;
        std::vector<IntVec> b;
        Mat bm(k, n);
        do {
            b.clear();
            for (std::size_t i = 0; i < k; ++i) {
                IntVec v(n);
                for (auto& x : v) x = rng.uniform(-50, 50);
                b.push_back(v);
                bm.set_row(i, to_vec(v));
            }
        } while (rank(bm) < k);
        auto r = lll_reduce(b);
        REQUIRE(r.size() == k);
        CHECK(oracle::same_lattice(b, r));
        CHECK(oracle::lll_reduced(r, Rat(3, 4)));
    }
}

TEST_CASE("polynomials from quadratic forms") {
    Rng rng(8);
    QuadForm q(oracle::random_symmetric(rng, 4, 3, false));
    Poly f = Poly::from_quadform(q);
    CHECK(f.is_homogeneous());
    CHECK(f.degree() == 2);
    for (int i = 0; i < 10; ++i) {
        Vec x{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        CHECK(f.eval(x) == eval_form(q, x));
        Vec g = gradient(q, x);
        for (std::size_t j = 0; j < 4; ++j) CHECK(f.derivative(j).eval(x) == g[j]);
    }
    PolySystem s = PolySystem::from_forms({q, QuadForm::diagonal({1, 1, 1, 1})});
    Mat j = s.jacobian({1, 0, 0, 0});
    CHECK(j.rows() == 2);
    CHECK(j(1, 0) == 2);
    Poly lin = Poly::linear({1, -2, 0, 3});
    CHECK(lin.eval_mod({1, 1, 1, 1}, Int(5)) == 2);
}
