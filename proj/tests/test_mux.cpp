#include <map>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "hqam/mux.hpp"

using namespace hqam;

namespace {

// the reference n=2, q=3, J=3 multiplexer used throughout
DMuxPattern reference_pattern() {
    return DMuxPattern::from_entries(
        {{{1, 1}, {2, 2}, {2, 1}}, {{1, 2}, {3, 2}, {3, 1}}}, 3);
}

}  // namespace

TEST_CASE("parse and to_text round trip") {
    const auto p = DMuxPattern::parse("1,2,2/1,3,3", 3);
    CHECK(p.n == 2);
    CHECK(p.J == 3);
    CHECK(p.q == 3);
    CHECK(p.slots_per_stream() == 2);
    CHECK(DMuxPattern::parse(p.to_text(), 3) == p);
    CHECK_THROWS_AS(DMuxPattern::parse("1,2/1,3", 3), std::invalid_argument);  // unbalanced
    CHECK_THROWS_AS(DMuxPattern::parse("1,4,2/1,3,3", 3), std::invalid_argument);
}

TEST_CASE("reference multiplexer routes bits to the documented cells") {
    const auto p = reference_pattern();
    const std::vector<std::vector<std::uint8_t>> C = {
        {11, 12, 13, 14, 15, 16},
        {21, 22, 23, 24, 25, 26},
    };
    const auto O = apply_dmux(C, p);
    REQUIRE(O.size() == 3);
    CHECK(O[0] == std::vector<std::uint8_t>{11, 21, 14, 24});
    CHECK(O[1] == std::vector<std::uint8_t>{13, 12, 16, 15});
    CHECK(O[2] == std::vector<std::uint8_t>{23, 22, 26, 25});
}

TEST_CASE("stream weights of the shortest (5,7) error event per phase") {
    // phase j divergence of the weight-5 event gives stream weights
    // (2,1,2), (2,1,2), (1,2,2) for j = 1,2,3
    const auto p = reference_pattern();
    const std::vector<std::vector<std::vector<std::uint8_t>>> Cs = {
        {{1, 0, 1, 0, 0, 0}, {1, 1, 1, 0, 0, 0}},
        {{0, 1, 0, 1, 0, 0}, {0, 1, 1, 1, 0, 0}},
        {{0, 0, 1, 0, 1, 0}, {0, 0, 1, 1, 1, 0}},
    };
    const std::vector<std::vector<int>> expected = {{2, 1, 2}, {2, 1, 2}, {1, 2, 2}};
    for (int j = 0; j < 3; ++j) {
        const auto O = apply_dmux(Cs[j], p);
        for (int k = 0; k < 3; ++k) {
            int w = 0;
            for (auto b : O[k]) w += b;
            CHECK(w == expected[j][k]);
        }
    }
}

TEST_CASE("demux is the exact inverse of the mux") {
    const auto p = reference_pattern();
    std::vector<std::vector<double>> L(2, std::vector<double>(12));
    for (int r = 0; r < 2; ++r)
        for (int t = 0; t < 12; ++t) L[r][t] = 100.0 * r + t;
    // push through as the stream layout, then invert
    std::vector<std::vector<std::uint8_t>> C(2, std::vector<std::uint8_t>(12));
    for (int r = 0; r < 2; ++r)
        for (int t = 0; t < 12; ++t) C[r][t] = static_cast<std::uint8_t>(r * 12 + t);
    const auto O = apply_dmux(C, p);
    std::vector<std::vector<double>> Od(3, std::vector<double>(O[0].size()));
    for (int k = 0; k < 3; ++k)
        for (std::size_t t = 0; t < O[k].size(); ++t) Od[k][t] = O[k][t];
    const auto back = demux_llrs(Od, p);
    for (int r = 0; r < 2; ++r)
        for (int t = 0; t < 12; ++t) CHECK(back[r][t] == doctest::Approx(r * 12 + t));
}

TEST_CASE("rotation and canonical form") {
    const auto p = DMuxPattern::parse("1,2,3/3,2,1", 3);
    CHECK(p.rotated(0) == p);
    CHECK(p.rotated(3) == p);
    const auto r1 = p.rotated(1);
    CHECK(r1.assign[0] == std::vector<int>{2, 3, 1});
    CHECK(r1.canonical() == p.canonical());
    CHECK(p.rotated(2).canonical() == p.canonical());
    // canonical is idempotent and lexicographically minimal
    CHECK(p.canonical().canonical() == p.canonical());
}

TEST_CASE("canonical class counts") {
    CHECK(enumerate_canonical(2, 2, 2).size() == 4);
    CHECK(enumerate_canonical(2, 3, 3).size() == 30);
}

TEST_CASE("enumerated patterns are balanced, canonical and distinct") {
    const auto all = enumerate_canonical(2, 3, 3);
    std::set<std::string> seen;
    for (const auto& p : all) {
        CHECK(p.canonical() == p);
        seen.insert(p.to_text());
        std::map<int, int> load;
        for (const auto& row : p.assign)
            for (int k : row) ++load[k];
        for (int k = 1; k <= 3; ++k) CHECK(load[k] == 2);
    }
    CHECK(seen.size() == all.size());
}

TEST_CASE("every balanced assignment reduces to an enumerated representative") {
    const auto all = enumerate_canonical(2, 2, 2);
    std::set<std::string> canon;
    for (const auto& p : all) canon.insert(p.to_text());
    // spot-check a few raw assignments
    for (const char* text : {"1,2/2,1", "2,1/1,2", "1,1/2,2", "2,2/1,1", "1,2/1,2", "2,1/2,1"}) {
        const auto c = DMuxPattern::parse(text, 2).canonical();
        CHECK(canon.count(c.to_text()) == 1);
    }
}

TEST_CASE("interleaver is a seeded permutation with an exact inverse") {
    const Interleaver pi(1000, 77);
    std::vector<int> x(1000);
    for (int i = 0; i < 1000; ++i) x[i] = i;
    const auto y = pi.interleave(x);
    CHECK(pi.deinterleave(y) == x);
    std::set<std::uint32_t> positions(pi.permutation().begin(), pi.permutation().end());
    CHECK(positions.size() == 1000);
    CHECK(*positions.rbegin() == 999u);
    // different seeds give different permutations; same seed reproduces
    CHECK(Interleaver(1000, 77).permutation() == pi.permutation());
    CHECK(Interleaver(1000, 78).permutation() != pi.permutation());
    // not the identity for any sane draw of this length
    CHECK(y != x);
}

TEST_CASE("random mux baselines give every stream exactly N_s bits") {
    const std::size_t N_c = 2400;
    for (auto kind : {RandomMuxKind::SInterleaver, RandomMuxKind::RMux}) {
        const std::vector<std::vector<double>> probs = {
            {2.0 / 3.0, 1.0 / 3.0, 0.0}, {0.0, 1.0 / 3.0, 2.0 / 3.0}};
        const auto a = random_mux_baseline(kind, 2, 3, N_c,
                                           kind == RandomMuxKind::RMux ? probs : std::vector<std::vector<double>>{},
                                           9);
        CHECK(a.N_s == 1600);
        std::vector<std::size_t> load(3, 0);
        std::set<std::uint64_t> slots(a.slot_of.begin(), a.slot_of.end());
        CHECK(slots.size() == 2 * N_c);  // bijection onto stream slots
        for (std::size_t t = 0; t < N_c; ++t)
            for (int p = 0; p < 2; ++p) ++load[a.stream_of(p, t)];
        for (int k = 0; k < 3; ++k) CHECK(load[k] == a.N_s);
    }
}

TEST_CASE("R-MUX empirical routing frequencies track the probability table") {
    const std::size_t N_c = 24000;
    const std::vector<std::vector<double>> probs = {
        {2.0 / 3.0, 1.0 / 3.0, 0.0}, {0.0, 1.0 / 3.0, 2.0 / 3.0}};
    const auto a = random_mux_baseline(RandomMuxKind::RMux, 2, 3, N_c, probs, 123);
    std::vector<std::vector<double>> freq(2, std::vector<double>(3, 0.0));
    for (std::size_t t = 0; t < N_c; ++t)
        for (int p = 0; p < 2; ++p) freq[p][a.stream_of(p, t)] += 1.0 / N_c;
    for (int p = 0; p < 2; ++p)
        for (int k = 0; k < 3; ++k) CHECK(freq[p][k] == doctest::Approx(probs[p][k]).epsilon(0.03));
    // zero-probability routes fire only through the exactness repair
    CHECK(freq[0][2] < 0.01);
    CHECK(freq[1][0] < 0.01);
}

TEST_CASE("pattern json carries the expanded cells") {
    const auto j = reference_pattern().to_json();
    CHECK(j.find("\"q\": 3") != std::string::npos);
    CHECK(j.find("pattern") != std::string::npos);
    CHECK(j.find("K0") != std::string::npos);
}
