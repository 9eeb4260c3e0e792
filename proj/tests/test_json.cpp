#include <doctest.h>

#include "oracles.hpp"
#include "tq/json_io.hpp"

using namespace tq;

namespace {

Rat rrat(Rng& r) {
    Rat x(r.uniform(-1000000, 1000000), r.uniform(1, 999));
    x.canonicalize();
    if (r.uniform(0, 3) == 0) x *= pow_int(Int(10), 40);  // beyond 64 bits
    return x;
}

Vec rvec(Rng& r, std::size_t n) {
    Vec v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(rrat(r));
    return v;
}

IntVec rintvec(Rng& r, std::size_t n) {
    IntVec v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(rrat(r).get_num());
    return v;
}

QuadForm rform(Rng& r, std::size_t n) {
    Mat a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = rrat(r);
    return QuadForm(a);
}

PadicApprox rpadic(Rng& r, std::size_t n, u64 p = 0) {
    if (p == 0) p = std::vector<u64>{3, 5, 7, 41}[static_cast<std::size_t>(r.uniform(0, 3))];
    IntVec c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(Int(r.uniform(0, 100000)));
    c[0] = 1;
    return make_padic(p, static_cast<unsigned>(r.uniform(1, 6)), c);
}

LinearSpace rspace(Rng& r, std::size_t n, std::size_t k) {
    Mat m;
    do {
        m = oracle::random_mat(r, k, n, 5, false);
    } while (rank(m) < k);
    return LinearSpace(m);
}

LocalTarget rtarget(Rng& r, std::size_t n) {
    if (r.uniform(0, 1)) return LocalTarget::real_target(rvec(r, n), Rat(1, r.uniform(1, 100)));
    PadicApprox p = rpadic(r, n);
    return LocalTarget::finite_target(p, static_cast<unsigned>(r.uniform(1, static_cast<long>(p.precision))));
}

FFSweep rsweep(Rng& r) {
    FFSweep s;
    s.p = 5;
    s.points = static_cast<u64>(r.uniform(0, 1000000));
    s.verdict = static_cast<SweepVerdict>(r.uniform(0, 2));
    if (s.verdict == SweepVerdict::singular_witness) s.witness = FFPoint::normalized(5, {0, 1, 3});
    return s;
}

AdmissibilityReport rreport(Rng& r) {
    AdmissibilityReport a;
    a.contained_in_q3 = r.uniform(0, 1);
    a.pair_disc = rrat(r);
    a.vacuous = r.uniform(0, 1);
    a.perp_system_sweeps = {rsweep(r), rsweep(r)};
    if (r.uniform(0, 1)) a.skipped_primes = {7};
    a.verdict = r.uniform(0, 1) ? Verdict::admissible : Verdict::not_admissible;
    a.reason = a.verdict == Verdict::admissible ? "" : "pair_singular";
    return a;
}

LocalWitness rwitness(Rng& r, std::size_t n) {
    LocalWitness w;
    if (r.uniform(0, 1)) {
        w.place = Place::infinite();
        w.coords = rvec(r, 4);
        w.point = rvec(r, n);
        w.radius = Rat(1, r.uniform(1, 1000));
    } else {
        w.padic_coords = rpadic(r, 4);
        w.padic_point = rpadic(r, n, w.padic_coords.p);
        w.place = Place::prime(w.padic_coords.p);
    }
    return w;
}

template <class T>
T round_trip(const T& x) {
    return from_json<T>(parse_json(dump(to_json(x))));
}

template <class T>
bool same_json(const T& x) {
    return dump(to_json(round_trip(x))) == dump(to_json(x));
}

}  // namespace

TEST_CASE("round trip of scalar and vector types") {
    Rng r(51);
    for (int i = 0; i < 100; ++i) {
        Rat q = rrat(r);
        CHECK(round_trip(q) == q);
        Int z = q.get_num();
        CHECK(round_trip(z) == z);
        Vec v = rvec(r, 5);
        CHECK(round_trip(v) == v);
        IntVec iv = rintvec(r, 5);
        CHECK(round_trip(iv) == iv);
        Signature s{static_cast<std::size_t>(r.uniform(0, 9)), static_cast<std::size_t>(r.uniform(0, 9)), 1};
        CHECK(round_trip(s) == s);
        CountRecord c{7, r.uniform(0, 3), static_cast<u64>(r.uniform(0, 1000000))};
        auto c2 = round_trip(c);
        CHECK((c2.p == c.p && c2.t == c.t && c2.count == c.count));
    }
    CHECK(to_json(Rat(-3, 4)) == "-3/4");
    CHECK(to_json(Place::infinite()) == "real");
    CHECK(to_json(Place::prime(7)) == 7);
    CHECK(round_trip(Place::prime(13)) == Place::prime(13));
}

TEST_CASE("round trip of forms, spaces and local data") {
    Rng r(52);
    for (int i = 0; i < 40; ++i) {
        const std::size_t n = static_cast<std::size_t>(r.uniform(2, 8));
        QuadForm q = rform(r, n);
        CHECK(round_trip(q) == q);
        QuadSystem s(rform(r, n), rform(r, n), rform(r, n));
        CHECK(round_trip(s) == s);
        LinearSpace l = rspace(r, n, static_cast<std::size_t>(r.uniform(1, static_cast<long>(n))));
        CHECK(round_trip(l) == l);
        PadicApprox p = rpadic(r, n);
        CHECK(round_trip(p) == p);
        FFPoint f = FFPoint::normalized(7, {0, 3, 5});
        CHECK(round_trip(f) == f);
        CHECK(same_json(rtarget(r, n)));
        FFSweep sw = rsweep(r);
        CHECK(round_trip(sw) == sw);
        CHECK(same_json(rreport(r)));
        LocalWitness w = rwitness(r, n);
        CHECK(round_trip(w) == w);
        GeneratorTriple g{rvec(r, 3), rvec(r, 3), rvec(r, 3), rrat(r), rrat(r), rrat(r), rrat(r), 4};
        CHECK(round_trip(g) == g);
    }
}

TEST_CASE("round trip of descent inputs and certificates") {
    Rng r(53);
    for (int i = 0; i < 15; ++i) {
        const std::size_t n = static_cast<std::size_t>(r.uniform(4, 9));
        DescentInput in;
        in.system = QuadSystem(rform(r, n), rform(r, n), rform(r, n));
        in.targets = {rtarget(r, n)};
        in.epsilon = Rat(1, r.uniform(2, 50));
        in.seed = r.next();
        in.budgets.sweep_points = static_cast<u64>(r.uniform(1, 1000000000));
        in.ff_primes = {3, 5, 7};
        in.forced_t = {41};
        DescentInput back = round_trip(in);
        CHECK(back.system == in.system);
        CHECK(back.seed == in.seed);
        CHECK(back.budgets == in.budgets);
        CHECK(back.forced_t == in.forced_t);
        CHECK(same_json(in));

        DescentCertificate c;
        c.n = n;
        c.n_at_least_19 = n >= 19;
        c.seed = r.next();
        c.generators = {rvec(r, 3), rvec(r, 3), rvec(r, 3), rrat(r), rrat(r), rrat(r), rrat(r), 2};
        c.c = rrat(r);
        c.c_signature = {3, 2, 0};
        c.adjusted = in.system;
        c.split.pairs = {{rvec(r, n), rvec(r, n)}};
        c.split.residual_basis = {rvec(r, n)};
        c.split.residual_form = rform(r, 1);
        c.chain = {rspace(r, n, 2), rspace(r, n, 3)};
        c.reports = {rreport(r), rreport(r)};
        c.local_witnesses = {rwitness(r, n)};
        c.disc_primes = {53, 59};
        c.disc_cofactor = Int("123456789012345678901234567890");
        c.t_record = {TRecord{41, true, rintvec(r, n), rwitness(r, n)}};
        c.final_height_bound = 100;
        if (r.uniform(0, 1)) c.final_point = rintvec(r, n);
        c.plane_attempts = 3;
        DescentCertificate cb = round_trip(c);
        CHECK(cb.chain == c.chain);
        CHECK(cb.t_record == c.t_record);
        CHECK(cb.final_point == c.final_point);
        CHECK(cb.disc_cofactor == c.disc_cofactor);
        CHECK(same_json(c));
    }
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS_AS(parse_json("{"), Malformed);
    CHECK_THROWS_AS(from_json<Rat>(Json(3.5)), Malformed);
    CHECK_THROWS_AS(from_json<Rat>(Json("1/0")), Malformed);
    CHECK_THROWS_AS(from_json<QuadForm>(parse_json(R"({"n": 2, "gram": [["1","0"],["1","1"]]})")), Malformed);
    CHECK_THROWS_AS(from_json<QuadForm>(parse_json(R"({"n": 3, "gram": [["1","0"],["0","1"]]})")), Malformed);
    CHECK_THROWS_AS(from_json<QuadSystem>(parse_json(R"({"n": 2, "forms": []})")), Malformed);
    CHECK_THROWS_AS(from_json<LinearSpace>(parse_json(R"({"n": 2, "t": 1, "basis": [["1","0"],["2","0"]]})")), Malformed);
    CHECK_THROWS_AS(from_json<Place>(Json("complex")), Malformed);
    CHECK_THROWS_AS(from_json<Place>(Json(4)), Malformed);
    CHECK_THROWS_AS(from_json<DescentBudgets>(parse_json(R"({"sweep_points": 0})")), Malformed);
    CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), Malformed);
    CHECK(from_json<Rat>(Json(7)) == 7);
}
