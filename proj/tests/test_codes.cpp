#include <bit>
#include <map>

#include "doctest.h"
#include "latlab/codes.hpp"
#include "latlab/errors.hpp"

using namespace latlab;
using namespace latlab::codes;

namespace {

// Weight histogram of the XOR span of raw rows, without any row reduction.
std::map<int, std::uint64_t> span_weights(const std::vector<BitVec>& rows) {
    std::vector<BitVec> span{0};
    for (BitVec r : rows) {
        bool inside = false;
        for (BitVec s : span) inside = inside || s == r;
        if (inside) continue;
        const std::size_t m = span.size();
        for (std::size_t i = 0; i < m; ++i) {
            const BitVec v = span[i] ^ r;
            bool seen = false;
            for (BitVec s : span) seen = seen || s == v;
            if (!seen) span.push_back(v);
        }
    }
    std::map<int, std::uint64_t> h;
    for (BitVec s : span) ++h[std::popcount(s)];
    return h;
}

std::pair<int, std::uint64_t> min_weight_of(const std::map<int, std::uint64_t>& h) {
    for (auto [w, c] : h) {
        if (w > 0) return {w, c};
    }
    return {0, 0};
}

BitVec bits(const char* s) { return from_string(s); }

}  // namespace

TEST_CASE("make_code reduces rows and keeps the span") {
    auto rep = make_code(std::vector<std::string>{"1111"});
    CHECK(rep.n() == 4);
    CHECK(rep.k() == 1);
    CHECK(min_distance(rep) == 4);

    auto c = make_code(std::vector<std::string>{"1100", "0110", "1010"});
    CHECK(c.k() == 2);
    for (BitVec v : {bits("1100"), bits("0110"), bits("1010"), BitVec{0}}) CHECK(c.contains(v));
    CHECK_FALSE(c.contains(bits("1000")));

    CHECK_THROWS_AS(make_code(std::vector<std::string>{"0000"}), DegenerateCode);
    CHECK_THROWS_AS(make_code(std::vector<std::string>{"101", "11"}), FormatError);
    CHECK_THROWS_AS(make_code(std::vector<std::string>{"10a"}), FormatError);
}

TEST_CASE("span stability over rebuilt generator rows") {
    for (auto code : {hamming8(), reed_muller(1, 4), parity_code(6), golay24()}) {
        auto again = make_code(code.rows(), code.n());
        std::vector<BitVec> a, b;
        for_each_codeword(code, [&](BitVec v) { a.push_back(v); });
        for_each_codeword(again, [&](BitVec v) { b.push_back(v); });
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
        CHECK(a.size() == (std::size_t{1} << code.k()));
    }
}

TEST_CASE("named codes against independent span enumeration") {
    struct Case {
        BinaryCode code;
        int n, k;
    };
    // Raw generator rows written out here, independent of the library tables.
    const std::vector<BitVec> hamming_rows{bits("11110000"), bits("00111100"), bits("00001111"), bits("01010101")};
    std::vector<BitVec> golay_rows;
    for (int s = 0; s < 12; ++s) {
        BitVec r = 0;
        for (int e : {0, 2, 4, 5, 6, 10, 11}) r |= BitVec{1} << (e + s);
        if (std::popcount(r) % 2) r |= BitVec{1} << 23;
        golay_rows.push_back(r);
    }
    std::vector<BitVec> rm_rows{0xFFFF};
    for (int v = 0; v < 4; ++v) {
        BitVec r = 0;
        for (int p = 0; p < 16; ++p) {
            if ((p >> v) & 1) r |= BitVec{1} << p;
        }
        rm_rows.push_back(r);
    }

    auto h8 = hamming8();
    CHECK(min_distance(h8) == 4);
    CHECK(h8.a_d() == 14);
    CHECK(min_weight_of(span_weights(hamming_rows)) == std::pair<int, std::uint64_t>{4, 14});
    for (BitVec r : hamming_rows) CHECK(h8.contains(r));

    auto g = golay24();
    CHECK(g.n() == 24);
    CHECK(g.k() == 12);
    const auto gh = span_weights(golay_rows);
    CHECK(min_weight_of(gh) == std::pair<int, std::uint64_t>{8, 759});
    CHECK(min_distance(g) == 8);
    CHECK(g.a_d() == 759);
    const auto wd = weight_distribution(g);
    for (auto [w, c] : gh) CHECK(wd[static_cast<std::size_t>(w)] == c);

    auto rm = named_code("reed_muller(1,4)");
    CHECK(rm.n() == 16);
    CHECK(rm.k() == 5);
    CHECK(min_weight_of(span_weights(rm_rows)) == std::pair<int, std::uint64_t>{8, 30});
    CHECK(min_distance(rm) == 8);
    CHECK(rm.a_d() == 30);

    auto par = named_code("parity(4)");
    CHECK(par.k() == 3);
    CHECK(min_distance(par) == 2);
    auto rep = named_code("repetition(4)");
    CHECK(min_distance(rep) == 4);
    CHECK(rep.a_d() == 1);
    CHECK_THROWS_AS(named_code("hadamard(8)"), FormatError);
}

TEST_CASE("minimum-weight set invariants") {
    for (auto code : {hamming8(), reed_muller(1, 4), reed_muller(2, 5), parity_code(8)}) {
        const int d = min_distance(code);
        std::uint64_t count = 0;
        for_each_codeword(code, [&](BitVec v) { count += (weight(v) == d); });
        const auto& cd = min_weight_codewords(code);
        CHECK(cd.size() == count);
        for (BitVec c : cd) {
            CHECK(weight(c) == d);
            CHECK(code.contains(c));
        }
    }
}

TEST_CASE("codewords are closed under XOR") {
    auto code = reed_muller(1, 4);
    std::vector<BitVec> all;
    for_each_codeword(code, [&](BitVec v) { all.push_back(v); });
    for (BitVec a : all) {
        for (BitVec b : all) CHECK(code.contains(a ^ b));
    }
}

TEST_CASE("lengthen relabels coordinates") {
    auto rep = analyzed(repetition_code(4));
    auto l = lengthen(rep, {0, 2, 4, 6}, 8);
    CHECK(l.n() == 8);
    REQUIRE(l.min_weight_set().size() == 1);
    CHECK(to_string(l.min_weight_set()[0], 8) == "10101010");

    auto h = analyzed(hamming8());
    auto lh = lengthen(h, {0, 2, 4, 6, 8, 10, 12, 14}, 16);
    auto fresh = make_code(lh.rows(), 16);
    CHECK(min_distance(fresh) == 4);
    CHECK(fresh.a_d() == 14);
    for_each_codeword(h, [&](BitVec c) { CHECK(weight(embed(c, {0, 2, 4, 6, 8, 10, 12, 14})) == weight(c)); });

    auto same = lengthen(h, {0, 1, 2, 3, 4, 5, 6, 7}, 8);
    CHECK(same.rows() == h.rows());

    CHECK_THROWS_AS(lengthen(rep, {0, 0, 1, 2}, 8), FormatError);
    CHECK_THROWS_AS(lengthen(rep, {0, 1, 2, 9}, 8), FormatError);
    CHECK_THROWS_AS(lengthen(rep, {0, 1, 2}, 8), FormatError);
}

TEST_CASE("dimension guard") {
    std::vector<BitVec> rows;
    for (int i = 0; i < 30; ++i) rows.push_back(BitVec{1} << i);
    auto big = make_code(rows, 30);
    CHECK_THROWS_AS(min_distance(big), ResourceLimit);
}
