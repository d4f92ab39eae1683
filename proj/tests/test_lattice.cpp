#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "latlab/errors.hpp"
#include "latlab/lattice.hpp"

using namespace latlab;
using namespace latlab::lattice;
using doctest::Approx;

namespace {

Numerators codeword_numerators(codes::BitVec c, int n, long sign = 1) {
    Numerators u(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = sign * static_cast<long>((c >> i) & 1U);
    return u;
}

KissingReport run(const LatticeD& lat, const bodies::BodySpec& spec, Method m, int threads = 0) {
    KissingOptions o;
    o.method = m;
    o.threads = threads;
    return kissing_count(lat, spec, o);
}

}  // namespace

TEST_CASE("build_lattice validates t") {
    CHECK_THROWS_AS(build_lattice(codes::hamming8(), 1), InvalidParameter);
    CHECK_THROWS_AS(build_lattice(codes::hamming8(), 256), InvalidParameter);
    const auto lat = build_lattice(codes::hamming8(), 3);
    CHECK(lat.n() == 8);
    CHECK(lat.code.d() == 4);
}

TEST_CASE("choose_t_lp") {
    CHECK(choose_t_lp(2.0, 4) == 2);
    CHECK(choose_t_lp(1.0, 4) == 4);
    CHECK(choose_t_lp(1.0, 8) == 8);
    CHECK(choose_t_lp(1.5, 8) == 4);
    CHECK(choose_t_lp(2.0, 8) == 3);
    CHECK(choose_t_lp(3.0, 8) == 2);
    CHECK(choose_t_lp(1.5, 4) == 3);
    CHECK(choose_t_lp(2.0, 1) == 2);
    CHECK(choose_t_lp(1.0, 1) == 2);
    CHECK(robust_ceil(2.0000000000001) == 2);
    CHECK(robust_ceil(2.001) == 3);
}

TEST_CASE("Hermite basis, coset closure and dual membership agree") {
    for (std::string name : {"repetition(4)", "parity(4)", "hamming8", "parity(6)"}) {
        for (int t : {2, 3, 4, 5}) {
            const auto lat = build_lattice(codes::named_code(name), t);
            const auto basis = numerator_basis(lat);
            const auto sub = coset_subgroup(lat);
            const DualMembership dual(lat);
            CAPTURE(name);
            CAPTURE(t);
            CHECK(static_cast<double>(sub.size()) == basis.subgroup_size());
            CHECK(dual.size() == sub.size());
            const double tn = std::pow(t, lat.n());
            CHECK(std::fmod(tn, static_cast<double>(sub.size())) == 0.0);
            for (std::size_t i = 0; i < sub.size(); ++i) {
                const auto r = sub.rep(i);
                CHECK(dual.contains(r));
                Numerators u(r.begin(), r.end());
                CHECK(basis.contains(u));
            }
            for (codes::BitVec c : lat.code.min_weight_set()) CHECK(basis.contains(codeword_numerators(c, lat.n())));
            for (int i = 0; i < lat.n(); ++i) {
                Numerators e(static_cast<std::size_t>(lat.n()), 0);
                e[static_cast<std::size_t>(i)] = t;
                CHECK(basis.contains(e));
                e[static_cast<std::size_t>(i)] = 1;
                CHECK(basis.contains(e) == sub.contains(std::vector<int>(e.begin(), e.end())));
            }
        }
    }
}

TEST_CASE("membership on random residues") {
    std::mt19937_64 rng(3);
    const auto lat = build_lattice(codes::hamming8(), 4);
    const auto basis = numerator_basis(lat);
    const auto sub = coset_subgroup(lat);
    const DualMembership dual(lat);
    std::uniform_int_distribution<long> u(-9, 9);
    for (int trial = 0; trial < 2000; ++trial) {
        Numerators v(8);
        std::vector<int> r(8);
        for (int i = 0; i < 8; ++i) {
            v[static_cast<std::size_t>(i)] = u(rng);
            r[static_cast<std::size_t>(i)] = static_cast<int>(v[static_cast<std::size_t>(i)]);
        }
        const bool in = basis.contains(v);
        CHECK(in == sub.contains(r));
        CHECK(in == dual.contains(r));
    }
}

TEST_CASE("coset guard") {
    const auto lat = build_lattice(codes::golay24(), 3);
    CHECK_THROWS_AS(coset_subgroup(lat), ResourceLimit);
    const auto small = build_lattice(codes::hamming8(), 4);
    CHECK_THROWS_AS(coset_subgroup(small, 100), ResourceLimit);
}

TEST_CASE("E8: 240 minimal vectors, derived by direct count") {
    // Z^8 + (1/2)H8: minimal vectors are ±e_i and the vectors with entries
    // ±1/2 on the support of a weight-4 codeword.
    auto code = codes::analyzed(codes::hamming8());
    std::uint64_t expected = 2 * 8;
    for (codes::BitVec c : code.min_weight_set()) expected += std::uint64_t{1} << codes::weight(c);
    CHECK(expected == 240);

    const auto lat = build_lattice(code, 2);
    const auto spec = bodies::lp_body(8, 2.0);
    for (Method m : {Method::CosetExact, Method::BasisEnum, Method::BruteForce}) {
        const auto rep = run(lat, spec, m);
        CAPTURE(method_name(m));
        CHECK(rep.count == expected);
        CHECK(rep.nu == Approx(1.0));
        CHECK(rep.integral_count == 16);
        CHECK(rep.witnesses.size() == 240);
    }
}

TEST_CASE("methods agree on small lattices") {
    const auto mixed = bodies::parse_body_spec(
        "block [1,2] lq q=2 w=[1,1] p=2\nblock [3] lq q=1 w=[1] p=1\n"
        "block [4,5] quad Q=[[1,0.25],[0.25,1]] p=1.5\nblock [6,7,8] lq q=3 w=[1,1,1] p=3");
    for (std::string name : {"hamming8", "parity(8)"}) {
        for (int t : {2, 4}) {
            const auto lat = build_lattice(codes::named_code(name), t);
            for (const auto& spec : {bodies::lp_body(8, 1.0), mixed}) {
                const auto a = run(lat, spec, Method::CosetExact);
                const auto b = run(lat, spec, Method::BasisEnum);
                const auto c = run(lat, spec, Method::BruteForce);
                CAPTURE(name);
                CAPTURE(t);
                CHECK(c.oracle_complete);
                CHECK(a.count == c.count);
                CHECK(b.count == c.count);
                CHECK(gauge_equal(a.nu, c.nu));
                CHECK(gauge_equal(b.nu, c.nu));
                CHECK(a.witnesses == c.witnesses);
                CHECK(b.witnesses == c.witnesses);
                CHECK(a.min_g_fractional == Approx(c.min_g_fractional));
            }
        }
    }
}

TEST_CASE("basis enumeration matches coset sweep at n = 24") {
    const auto lat = build_lattice(codes::golay24(), 2);
    const auto spec = bodies::lp_body(24, 3.0);
    const auto a = run(lat, spec, Method::CosetExact);
    const auto b = run(lat, spec, Method::BasisEnum);
    // ±e_i plus all sign patterns of c/2 over the 759 octads
    CHECK(a.count == 48 + 759 * 256);
    CHECK(b.count == a.count);
    CHECK(a.witnesses == b.witnesses);
}

TEST_CASE("reports are independent of the worker count") {
    const auto lat = build_lattice(codes::hamming8(), 4);
    const auto spec = bodies::lp_body(8, 1.0);
    const auto one = run(lat, spec, Method::CosetExact, 1);
    for (int threads : {2, 3, 8}) {
        const auto many = run(lat, spec, Method::CosetExact, threads);
        CHECK(many.count == one.count);
        CHECK(many.nu == one.nu);
        CHECK(many.witnesses == one.witnesses);
        CHECK(many.anomalies == one.anomalies);
        CHECK(many.first_anomaly == one.first_anomaly);
        CHECK(many.min_g_fractional == one.min_g_fractional);
    }
}

TEST_CASE("minimal sets are symmetric") {
    const auto lat = build_lattice(codes::hamming8(), 4);
    const auto rep = run(lat, bodies::lp_body(8, 1.0), Method::CosetExact);
    CHECK(rep.count % 2 == 0);
    std::set<Numerators> all(rep.witnesses.begin(), rep.witnesses.end());
    for (auto u : rep.witnesses) {
        for (auto& x : u) x = -x;
        CHECK(all.count(u) == 1);
    }
}

TEST_CASE("rescaling leaves the count unchanged") {
    const auto lat = build_lattice(codes::hamming8(), 3);
    const auto spec = bodies::lp_body(8, 1.5);
    const auto base = run(lat, spec, Method::CosetExact);
    for (double s : {0.5, 2.0, 1.0 / base.nu}) {
        KissingOptions o;
        o.scale = s;
        const auto r = kissing_count(lat, spec, o);
        CHECK(r.count == base.count);
        CHECK(r.nu == Approx(s * base.nu));
        CHECK(r.witnesses == base.witnesses);
    }
}

TEST_CASE("shortest vector in a coset") {
    const auto spec = bodies::lp_body(8, 2.0);
    const auto zero = shortest_in_coset(std::vector<int>(8, 0), spec, 2);
    CHECK(zero.value == Approx(1.0));
    CHECK(zero.count == 16);
    // c/2 + Z^8 for a weight-4 word: 2^4 sign choices of ±1/2
    const auto half = shortest_in_coset({1, 1, 1, 1, 0, 0, 0, 0}, spec, 2);
    CHECK(half.value == Approx(1.0));
    CHECK(half.count == 16);
    const auto third = shortest_in_coset({1, 2, 0, 0, 0, 0, 0, 0}, spec, 3);
    CHECK(third.value == Approx(std::sqrt(2.0) / 3.0));
    CHECK(third.count == 1);
    CHECK(third.witnesses.front() == Numerators{1, -1, 0, 0, 0, 0, 0, 0});
}

TEST_CASE("brute-force short vectors") {
    const auto lat = build_lattice(codes::repetition_code(4), 2);
    const auto spec = bodies::lp_body(4, 2.0);
    const auto list = brute_force_short_vectors(lat, spec, 1, 1.0 + 1e-9);
    // ±e_i and (±1/2)^4
    CHECK(list.size() == 8 + 16);
    for (std::size_t i = 1; i < list.size(); ++i) CHECK(list[i - 1].gauge <= list[i].gauge);
    CHECK_THROWS_AS(brute_force_short_vectors(build_lattice(codes::golay24(), 2), bodies::lp_body(24, 2.0), 1),
                    ResourceLimit);
}

TEST_CASE("decomposition") {
    const auto lat = build_lattice(codes::hamming8(), 4);
    const Numerators c{1, 1, 1, 1, 0, 0, 0, 0};
    const auto d1 = decompose(c, lat);
    CHECK(d1.r == 1);
    CHECK(d1.v0 == c);
    CHECK(d1.v1 == Numerators(8, 0));

    const Numerators mixed{5, 1, 1, -3, 4, 0, 0, 8};
    const auto d2 = decompose(mixed, lat);
    CHECK(d2.v0 == Numerators{1, 1, 1, 1, 0, 0, 0, 0});
    CHECK(d2.v1 == Numerators{1, 0, 0, -1, 1, 0, 0, 2});

    const auto d3 = decompose(Numerators{4, 0, 0, 0, 0, 0, 0, -8}, lat);
    CHECK(d3.r == 0);
    CHECK(d3.v1 == Numerators{1, 0, 0, 0, 0, 0, 0, -2});

    CHECK_THROWS_AS(decompose(Numerators{1, 0, 0, 0, 0, 0, 0, 0}, lat), NotInLattice);

    // Integer combinations of codewords can reduce to residues of support < d.
    const auto rep = kissing_count(lat, bodies::lp_body(8, 1.0));
    REQUIRE(rep.anomalies > 0);
    REQUIRE_FALSE(rep.first_anomaly.empty());
    CHECK_THROWS_AS(decompose(rep.first_anomaly, lat), DecompositionAnomaly);
}
