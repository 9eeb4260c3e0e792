#include <doctest.h>

#include "tq/descent.hpp"
#include "tq/json_io.hpp"

using namespace tq;

namespace {

std::string fixture(const std::string& name) { return std::string(TQ_FIXTURES) + "/" + name; }

DescentInput load_input(const std::string& name = "f19_input.json") {
    return from_json<DescentInput>(read_json_file(fixture(name)));
}

QuadForm product_form(std::size_t n, std::size_t i, std::size_t j) {
    Mat a(n, n);
    a(i, j) = a(j, i) = Rat(1, 2);
    return QuadForm(a);
}

}  // namespace

TEST_CASE("preprocessing the F19 system") {
    DescentInput in = load_input();
    Preprocessed pre = preprocess(in.system, in.seed, in.budgets);
    CHECK(pre.generators.d1_m3 != 0);
    CHECK(pre.generators.d2_m1m2 != 0);
    CHECK(pre.generators.d2_m1m3 != 0);
    CHECK(pre.generators.det_m != 0);
    QuadSystem g = apply_generators(in.system, pre.generators);
    CHECK(pre.adjusted[0] == g[0]);
    CHECK(pre.adjusted[1] == g[1]);
    CHECK(pre.adjusted[2] == pre.c * g[0] + g[2]);
    CHECK(signature_real(pre.adjusted[2]) == pre.c_signature);
    // min(n+, n-) >= ceil((n-2)/2) = 9 for n = 19
    CHECK(std::min(pre.c_signature.n_plus, pre.c_signature.n_minus) >= 9);
    CHECK(verify_split(pre.adjusted[2], pre.split));
    CHECK(pre.split.witt_index() >= 7);
    Preprocessed again = preprocess(in.system, in.seed, in.budgets);
    CHECK(again.c == pre.c);
    CHECK(again.generators == pre.generators);
}

TEST_CASE("input validation") {
    DescentInput in = load_input();
    CHECK_NOTHROW(validate_input(in));
    DescentInput bad = in;
    for (auto& t : bad.targets)
        if (!t.place.real) t.padic.coords[1] = mod_positive(t.padic.coords[1] + 1, t.padic.modulus());
    CHECK_THROWS_AS(validate_input(bad), PreconditionViolated);
    DescentInput far = in;
    for (auto& t : far.targets)
        if (t.place.real) {
            t.real_point[0] += 1;
            t.eps = Rat(1, 1000000);
        }
    CHECK_THROWS_AS(validate_input(far), PreconditionViolated);
    DescentInput twice = in;
    twice.targets.push_back(in.targets.front());
    CHECK_THROWS(validate_input(twice));
}

TEST_CASE("shipped certificate verifies and rejects a changed input") {
    DescentInput in = load_input();
    auto cert = from_json<DescentCertificate>(read_json_file(fixture("f19_certificate.json")));
    auto rep = verify_certificate(cert, in, true, 4);
    CHECK(rep.ok);
    CHECK(rep.failing_claim.empty());
    CHECK(cert.chain.size() == 5);
    for (std::size_t i = 0; i < cert.chain.size(); ++i) CHECK(cert.chain[i].t() == 3 + i);
    CHECK(cert.n_at_least_19);

    DescentInput other = in;
    other.system = QuadSystem(in.system[1], in.system[0], in.system[2]);
    CHECK_FALSE(verify_certificate(cert, other).ok);

    auto tampered = from_json<DescentCertificate>(read_json_file(fixture("f19_tampered.json")));
    auto bad = verify_certificate(tampered, in);
    CHECK_FALSE(bad.ok);
    CHECK(bad.failing_claim == "adjusted_system");
}

TEST_CASE("T places are guarded") {
    DescentInput in = load_input();
    Preprocessed pre = preprocess(in.system, in.seed, in.budgets);
    auto cert = from_json<DescentCertificate>(read_json_file(fixture("f19_certificate.json")));
    const LinearSpace& l3 = cert.chain.front();
    CHECK_THROWS_AS(extend_for_T(l3, pre, in, {{31, true}}), PreconditionViolated);
    CHECK_THROWS_AS(extend_for_T(l3, pre, in, {{3, true}}), PreconditionViolated);
    CHECK_THROWS_AS(extend_for_T(l3, pre, in, {{39, true}}), PreconditionViolated);
    TExtension none = extend_for_T(l3, pre, in, {});
    CHECK(none.plane == l3);
    CHECK(none.records.empty());
}

TEST_CASE("descent with a forced T place") {
    DescentInput in = load_input("f19_input_forced_t.json");
    DescentCertificate cert = run_descent(in, 4);
    REQUIRE(cert.t_record.size() >= 1);
    const TRecord& r = cert.t_record.front();
    CHECK(r.p == 41);
    CHECK(r.forced);
    CHECK(r.witness.padic_point.p == 41);
    CHECK(cert.chain.size() == 5);
    auto rep = verify_certificate(cert, in);
    CHECK(rep.ok);

    DescentCertificate bad = cert;
    bad.t_record.front().extension[0] += 1;
    auto br = verify_certificate(bad, in);
    CHECK_FALSE(br.ok);
    CHECK(br.failing_claim == "t_record.41");

    DescentCertificate small = cert;
    small.t_record.front().p = 31;
    CHECK(verify_certificate(small, in).failing_claim == "t_record.31");
}

TEST_CASE("bounded final search") {
    const std::size_t n = 4;
    QuadSystem s(product_form(n, 0, 1), product_form(n, 0, 2), product_form(n, 0, 3));
    LinearSpace l = LinearSpace::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}}, n);
    auto y = final_point_search(s, l, 3, 1000);
    REQUIRE(y);
    for (int i = 0; i < 3; ++i) CHECK(eval_form(s[i], to_vec(*y)) == 0);
    CHECK(l.contains(to_vec(*y)));
    QuadSystem none(QuadForm::diagonal({1, 1, 0, 0}), product_form(n, 0, 2), product_form(n, 0, 3));
    CHECK_FALSE(final_point_search(none, l, 5, 10000));
}

TEST_CASE("projective distance") {
    CHECK(projective_distance({2, 4, -2}, {1, 2, -1}) == 0);
    CHECK(projective_distance({1, 0, 0}, {1, Rat(1, 10), 0}) == Rat(1, 10));
}
