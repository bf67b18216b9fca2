#include <cmath>
#include <random>

#include "doctest.h"
#include "hqam/constellation.hpp"

using namespace hqam;

namespace {

// random alpha draw strictly inside the BRGC region
std::vector<double> random_in_region(int q, std::mt19937_64& eng) {
    std::uniform_real_distribution<double> uni(0.01, 0.99);
    for (;;) {
        std::vector<double> a(q - 1);
        for (auto& v : a) v = uni(eng);
        if (!validate_region(a).valid) continue;
        // strict interior only
        double tail = 0.0, total = 0.0;
        bool strict = a.back() > 1e-3;
        for (double v : a) total += v;
        strict = strict && total < 1.0 - 1e-3;
        for (int k = static_cast<int>(a.size()) - 1; k >= 1; --k) {
            tail += a[k];
            strict = strict && a[k - 1] > tail + 1e-3;
        }
        if (strict) return a;
    }
}

}  // namespace

TEST_CASE("2-PAM build") {
    const auto c = Constellation::build({}, 2);
    CHECK(c.points()[0] == doctest::Approx(-1.0));
    CHECK(c.points()[1] == doctest::Approx(1.0));
    CHECK(c.label_bit(1, 0) == 0);
    CHECK(c.label_bit(1, 1) == 1);
}

TEST_CASE("8-PAM with alphas (1/2, 1/4)") {
    const auto c = Constellation::build({0.5, 0.25}, 8);
    const double s21 = std::sqrt(21.0);
    CHECK(c.d()[0] == doctest::Approx(4.0 / s21).epsilon(1e-12));
    CHECK(c.d()[1] == doctest::Approx(2.0 / s21).epsilon(1e-12));
    CHECK(c.d()[2] == doctest::Approx(1.0 / s21).epsilon(1e-12));
    double energy = 0.0;
    for (int j = 0; j < 8; ++j) {
        CHECK(c.points()[j] == doctest::Approx((2.0 * j - 7.0) / s21).epsilon(1e-12));
        energy += c.points()[j] * c.points()[j];
    }
    CHECK(energy / 8.0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equally spaced 4-PAM") {
    const auto c = Constellation::build({0.5}, 4);
    const double s5 = std::sqrt(5.0);
    CHECK(c.points()[0] == doctest::Approx(-3.0 / s5).epsilon(1e-12));
    CHECK(c.points()[1] == doctest::Approx(-1.0 / s5).epsilon(1e-12));
    CHECK(c.points()[2] == doctest::Approx(1.0 / s5).epsilon(1e-12));
    CHECK(c.points()[3] == doctest::Approx(3.0 / s5).epsilon(1e-12));
}

TEST_CASE("region predicate") {
    CHECK(validate_region({0.5, 0.25}).valid);
    CHECK_FALSE(validate_region({0.2, 0.3}).valid);
    CHECK_FALSE(validate_region({0.6, 0.5}).valid);
    CHECK(validate_region({}).valid);
    CHECK(validate_region({0.0}).valid);  // boundary accepted
}

TEST_CASE("build rejects out-of-region alphas with a report") {
    CHECK_THROWS_AS(Constellation::build({0.2, 0.3}, 8), std::invalid_argument);
    CHECK_NOTHROW(Constellation::build_unchecked({0.2, 0.3}, 8));
    CHECK_THROWS_AS(Constellation::build({0.5}, 8), std::invalid_argument);  // dim mismatch
}

TEST_CASE("mu table for M=8 matches the symbolic values") {
    const auto c = Constellation::build({0.5, 0.25}, 8);
    const auto t = mu_table(c);
    const double d1 = c.d()[0], d2 = c.d()[1], d3 = c.d()[2];
    auto sq = [](double x) { return 4.0 * x * x; };
    // all 24 signed entries, rows x_0..x_7
    const double expect[8][3] = {
        {+sq(d1), +sq(d2), +sq(d3)},
        {+sq(d1 - d3), +sq(d2 - d3), -sq(d3)},
        {+sq(d1 - d2), -sq(d2 - d3), -sq(d3)},
        {+sq(d1 - d2 - d3), -sq(d2), +sq(d3)},
        {-sq(d1 - d2 - d3), -sq(d2), +sq(d3)},
        {-sq(d1 - d2), -sq(d2 - d3), -sq(d3)},
        {-sq(d1 - d3), +sq(d2 - d3), -sq(d3)},
        {-sq(d1), +sq(d2), +sq(d3)},
    };
    for (int j = 0; j < 8; ++j)
        for (int k = 1; k <= 3; ++k)
            CHECK(t.mu[k - 1][j] == doctest::Approx(expect[j][k - 1]).epsilon(1e-12));
    CHECK(t.mu[0][0] == doctest::Approx(64.0 / 21.0).epsilon(1e-12));
}

TEST_CASE("2-PAM mu is +-4 at unit energy") {
    const auto t = mu_table(Constellation::build({}, 2));
    CHECK(t.mu[0][0] == doctest::Approx(4.0));
    CHECK(t.mu[0][1] == doctest::Approx(-4.0));
}

TEST_CASE("nearest competitor") {
    const auto c8 = Constellation::build({0.5, 0.25}, 8);
    CHECK(nearest_competitor(c8, 3, 0) == 1);
    CHECK(nearest_competitor(c8, 1, 3) == 4);
    const auto c4 = Constellation::build({0.5}, 4);
    CHECK(nearest_competitor(c4, 2, 0) == 1);
}

TEST_CASE("closed form equals geometric search for random in-region alphas") {
    std::mt19937_64 eng(12345);
    for (int M : {2, 4, 8, 16}) {
        const int q = M == 2 ? 1 : (M == 4 ? 2 : (M == 8 ? 3 : 4));
        for (int rep = 0; rep < 25; ++rep) {
            const auto a = q == 1 ? std::vector<double>{} : random_in_region(q, eng);
            // mu_table itself asserts closed form vs geometric to 1e-12
            CHECK_NOTHROW(mu_table(Constellation::build(a, M)));
        }
    }
}

TEST_CASE("mu sign matches the label bit and M_k magnitudes are distinct") {
    std::mt19937_64 eng(99);
    for (int M : {4, 8, 16}) {
        const int q = M == 4 ? 2 : (M == 8 ? 3 : 4);
        const auto c = Constellation::build(random_in_region(q, eng), M);
        const auto t = mu_table(c);
        for (int k = 1; k <= q; ++k) {
            for (int j = 0; j < M; ++j)
                CHECK((t.mu[k - 1][j] > 0) == (c.label_bit(k, j) == 0));
            // exactly M_k distinct magnitudes
            std::vector<double> mags;
            for (int j = 0; j < M; ++j) mags.push_back(std::abs(t.mu[k - 1][j]));
            std::sort(mags.begin(), mags.end());
            mags.erase(std::unique(mags.begin(), mags.end(),
                                   [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                       mags.end());
            CHECK(static_cast<int>(mags.size()) == M >> k);
        }
    }
}

TEST_CASE("Gray adjacency for strictly valid alphas") {
    std::mt19937_64 eng(7);
    for (int M : {4, 8, 16}) {
        const int q = M == 4 ? 2 : (M == 8 ? 3 : 4);
        for (int rep = 0; rep < 10; ++rep) {
            const auto c = Constellation::build(random_in_region(q, eng), M);
            for (int j = 0; j + 1 < M; ++j) {
                CHECK(c.points()[j] < c.points()[j + 1]);
                int diff = 0;
                for (int k = 1; k <= q; ++k) diff += c.label_bit(k, j) != c.label_bit(k, j + 1);
                CHECK(diff == 1);
            }
        }
    }
}

TEST_CASE("degenerate boundary alpha_{q-1}=0 collapses pairs with zero mu") {
    const auto c = Constellation::build({0.45, 0.0}, 8);
    const auto t = mu_table(c);
    for (int j = 0; j + 1 < 8; ++j) CHECK(c.points()[j] <= c.points()[j + 1]);
    for (int j = 0; j < 8; ++j) CHECK(std::abs(t.mu[2][j]) == doctest::Approx(0.0));
    double energy = 0.0;
    for (double x : c.points()) energy += x * x;
    CHECK(energy / 8.0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("json dump carries the core fields") {
    const auto j = Constellation::build({0.5}, 4).to_json();
    CHECK(j.find("\"M\": 4") != std::string::npos);
    CHECK(j.find("labels") != std::string::npos);
    CHECK(j.find("mu") != std::string::npos);
}
