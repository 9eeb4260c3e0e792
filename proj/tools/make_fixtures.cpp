// Writes the JSON fixtures used by the tests and README examples.
// Usage: tq_make_fixtures <dir> [--with-certificate]

#include <fstream>
#include <iostream>
#include <string>

#include "tq/descent.hpp"
#include "tq/json_io.hpp"
#include "tq/random.hpp"

using namespace tq;

namespace {

void write(const std::string& dir, const std::string& name, const Json& j) {
    std::ofstream f(dir + "/" + name);
    f << dump(j);
}

QuadForm diag(std::initializer_list<long> d) {
    Mat a(d.size(), d.size());
    std::size_t i = 0;
    for (long x : d) a(i, i) = x, ++i;
    return QuadForm(a);
}

// x1*x2 + x3*x4 (+ x5^2 when n = 5)
QuadForm split_form(std::size_t n) {
    Mat a(n, n);
    a(0, 1) = a(1, 0) = Rat(1, 2);
    a(2, 3) = a(3, 2) = Rat(1, 2);
    if (n == 5) a(4, 4) = 1;
    return QuadForm(a);
}

// Third form in normal shape: eight hyperbolic pairs plus x17^2 + x18^2 - x19^2.
// The first two forms are random with the x1^2 coefficient cleared so e1 lies
// on all three quadrics.
QuadSystem f19_system(std::uint64_t seed) {
    const std::size_t n = 19;
    Mat a3(n, n);
    for (std::size_t i = 0; i < 8; ++i) a3(i, i + 8) = a3(i + 8, i) = Rat(1, 2);
    a3(16, 16) = 1;
    a3(17, 17) = 1;
    a3(18, 18) = -1;
    Rng r(seed);
    auto rnd = [&] {
        Mat a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                long v = r.uniform(-3, 3);
                if (i == j) a(i, i) = v;
                else a(i, j) = a(j, i) = Rat(v, 2), a(i, j).canonicalize(), a(j, i).canonicalize();
            }
        a(0, 0) = 0;
        return QuadForm(a);
    };
    QuadForm q1 = rnd();
    QuadForm q2 = rnd();
    return QuadSystem(q1, q2, QuadForm(a3));
}

DescentInput f19_input() {
    DescentInput in;
    in.system = f19_system(7);
    in.seed = 5;
    in.epsilon = Rat(1, 10);
    const auto& s = in.system;
    PolySystem full = PolySystem::from_forms({s[0], s[1], s[2]});
    std::vector<long double> x0(19, 0);
    x0[0] = 1;
    for (std::size_t i = 1; i < 19; ++i) x0[i] = 0.01L * (static_cast<long>(i % 5) - 2);
    in.targets.push_back(LocalTarget::real_target(from_real(newton_refine_real(full, x0, 60)), Rat(1, 10)));
    auto sm = smooth_point_mod_p(full, 3, 1000000, 11);
    if (!sm.point) throw Error("no smooth point mod 3 for the fixture");
    IntVec c;
    for (u64 x : sm.point->coords) c.push_back(Int(static_cast<unsigned long>(x)));
    in.targets.push_back(LocalTarget::finite_target(hensel_lift(full, make_padic(3, 1, c), 6), 4));
    return in;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: tq_make_fixtures <dir> [--with-certificate]\n";
        return 2;
    }
    const std::string dir = argv[1];
    const bool with_cert = argc > 2 && std::string(argv[2]) == "--with-certificate";

    write(dir, "split4.json", to_json(split_form(4)));
    write(dir, "split5.json", to_json(split_form(5)));
    write(dir, "circle.json", to_json(diag({1, 1, -1})));
    write(dir, "anisotropic3.json", to_json(diag({1, 1, 1})));
    Json circle_targets{
        {"base", to_json(Vec{1, 0, 1})},
        {"targets",
         {to_json(LocalTarget::real_target(Vec{Rat(3, 5), Rat(4, 5), 1}, Rat(1, 10))),
          to_json(LocalTarget::finite_target(make_padic(7, 1, IntVec{1, 0, 1}), 1))}},
        {"height_bound", "10000000000000000000000000000000000000000"}};
    write(dir, "circle_targets.json", circle_targets);

    DescentInput in = f19_input();
    write(dir, "f19_input.json", to_json(in));
    write(dir, "f19_system.json", to_json(in.system));
    DescentInput forced = in;
    forced.forced_t = {41};
    write(dir, "f19_input_forced_t.json", to_json(forced));

    if (with_cert) {
        DescentCertificate cert = run_descent(in, 4);
        write(dir, "f19_certificate.json", to_json(cert));
        write(dir, "f19_l3.json", to_json(cert.chain.front()));
        cert.c = cert.c + 1;
        write(dir, "f19_tampered.json", to_json(cert));
    }
    return 0;
}
