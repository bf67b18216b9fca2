#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "hqam/lvalues.hpp"

using namespace hqam;

namespace {

double numeric_dd(const std::function<double(double)>& f, double s, double h = 1e-4) {
    return (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h);
}

}  // namespace

TEST_CASE("max-log L-value of 2-PAM is the matched filter output") {
    // bit 0 sits on the negative point, so the sign is flipped
    const auto c = Constellation::build({}, 2);
    for (double y : {-1.3, -0.2, 0.0, 0.7, 2.5})
        for (double g : {0.5, 1.0, 4.0})
            CHECK(maxlog_llr(y, g, c)[0] == doctest::Approx(-4.0 * g * y).epsilon(1e-12));
}

TEST_CASE("max-log L-values match a direct minimum search") {
    const auto c = Constellation::build({0.5, 0.25}, 8);
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int rep = 0; rep < 200; ++rep) {
        const double y = uni(eng);
        const double g = 0.3 + 3.0 * std::abs(uni(eng));
        const auto l = maxlog_llr(y, g, c);
        for (int k = 1; k <= 3; ++k) {
            double m0 = 1e30, m1 = 1e30;
            for (int j = 0; j < 8; ++j) {
                const double d2 = (y - c.points()[j]) * (y - c.points()[j]);
                if (c.label_bit(k, j) == 0)
                    m0 = std::min(m0, d2);
                else
                    m1 = std::min(m1, d2);
            }
            CHECK(l[k - 1] == doctest::Approx(g * (m1 - m0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("sign convention: far-left samples favor the all-zero label bits") {
    const auto c = Constellation::build({0.5, 0.25}, 8);
    const auto l = maxlog_llr(-5.0, 1.0, c);
    CHECK(l[0] > 0.0);  // leftmost point has label 000
    CHECK(l[1] > 0.0);
    CHECK(l[2] > 0.0);
}

TEST_CASE("mixture density integrates to one minus the point mass") {
    const auto c = Constellation::build({0.45, 0.1}, 8);
    const LValueModel model(c);
    const double g = 2.0;
    for (int k = 1; k <= 3; ++k) {
        // Simpson rule over a wide window
        const double lo = -200.0, hi = 400.0;
        const int N = 200000;
        const double h = (hi - lo) / N;
        double sum = 0.0;
        for (int i = 0; i <= N; ++i) {
            const double w = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            sum += w * model.mixture_pdf(k, lo + i * h, g);
        }
        sum *= h / 3.0;
        CHECK(sum + model.zero_mass(k) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("zero mass appears only on the degenerate boundary") {
    const LValueModel interior(Constellation::build({0.45, 0.1}, 8));
    for (int k = 1; k <= 3; ++k) CHECK(interior.zero_mass(k) == 0.0);
    const LValueModel boundary(Constellation::build({0.45, 0.0}, 8));
    CHECK(boundary.zero_mass(3) == doctest::Approx(1.0));
    CHECK(boundary.zero_mass(1) < 1.0);
}

TEST_CASE("mixture cdf is monotone with the right limits") {
    const auto c = Constellation::build({0.4, 0.15}, 8);
    const LValueModel model(c);
    const double g = 1.5;
    for (int k = 1; k <= 3; ++k) {
        CHECK(model.mixture_cdf(k, -1e4, g) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(model.mixture_cdf(k, 1e4, g) == doctest::Approx(1.0).epsilon(1e-9));
        double prev = 0.0;
        for (double l = -30.0; l <= 60.0; l += 0.5) {
            const double v = model.mixture_cdf(k, l, g);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("awgn transform: symmetry, saddlepoint and known 2-PAM value") {
    const LValueModel m2(Constellation::build({}, 2));
    const double g = 2.5;
    CHECK(m2.laplace_awgn(1, 0.5, g) == doctest::Approx(std::exp(-g)).epsilon(1e-12));
    const LValueModel m8(Constellation::build({0.45, 0.15}, 8));
    for (int k = 1; k <= 3; ++k) {
        for (double s : {0.1, 0.3, 0.45})
            CHECK(m8.laplace_awgn(k, s, g) ==
                  doctest::Approx(m8.laplace_awgn(k, 1.0 - s, g)).epsilon(1e-12));
        // first derivative vanishes at s = 1/2
        const double h = 1e-5;
        const double d1 = (m8.laplace_awgn(k, 0.5 + h, g) - m8.laplace_awgn(k, 0.5 - h, g)) / (2 * h);
        CHECK(d1 == doctest::Approx(0.0).epsilon(1e-6));
        // Phi(s) >= Phi(1/2): the saddlepoint is the minimum on (0,1)
        CHECK(m8.laplace_awgn(k, 0.3, g) >= m8.laplace_awgn(k, 0.5, g));
    }
}

TEST_CASE("awgn second derivative matches a finite difference") {
    const LValueModel m8(Constellation::build({0.45, 0.15}, 8));
    const double g = 1.7;
    for (int k = 1; k <= 3; ++k) {
        auto f = [&](double s) { return m8.laplace_awgn(k, s, g); };
        CHECK(m8.laplace_awgn_dd_half(k, g) ==
              doctest::Approx(numeric_dd(f, 0.5)).epsilon(1e-5));
    }
    // 2-PAM closed form: 2 * mu * gamma * exp(-gamma), mu = 4
    const LValueModel m2(Constellation::build({}, 2));
    CHECK(m2.laplace_awgn_dd_half(1, g) == doctest::Approx(8.0 * g * std::exp(-g)).epsilon(1e-12));
}

TEST_CASE("fading transform: 2-PAM m=1 closed form and symmetry") {
    const LValueModel m2(Constellation::build({}, 2));
    const double gbar = 6.0;
    CHECK(m2.laplace_fading(1, 0.5, gbar, 1.0) ==
          doctest::Approx(1.0 / (1.0 + gbar)).epsilon(1e-12));
    const LValueModel m8(Constellation::build({0.45, 0.15}, 8));
    for (int k = 1; k <= 3; ++k)
        for (double s : {0.2, 0.35})
            CHECK(m8.laplace_fading(k, s, gbar, 2.0) ==
                  doctest::Approx(m8.laplace_fading(k, 1.0 - s, gbar, 2.0)).epsilon(1e-12));
}

TEST_CASE("fading transform throws in the pole region") {
    const LValueModel m2(Constellation::build({}, 2));
    // m - gbar*mu*(s^2-s) <= 0 for s outside the strip
    CHECK_THROWS_AS(m2.laplace_fading(1, 30.0, 50.0, 1.0), std::domain_error);
}

TEST_CASE("fading second derivative matches a finite difference") {
    const LValueModel m8(Constellation::build({0.45, 0.15}, 8));
    const double gbar = 4.0;
    for (double m : {1.0, 2.0, 5.0})
        for (int k = 1; k <= 3; ++k) {
            auto f = [&](double s) { return m8.laplace_fading(k, s, gbar, m); };
            CHECK(m8.laplace_fading_dd_half(k, gbar, m) ==
                  doctest::Approx(numeric_dd(f, 0.5)).epsilon(1e-5));
        }
}

TEST_CASE("large m fading converges to the awgn transform") {
    const LValueModel m8(Constellation::build({0.45, 0.15}, 8));
    const double g = 3.0;
    for (int k = 1; k <= 3; ++k)
        CHECK(m8.laplace_fading(k, 0.5, g, 1e7) ==
              doctest::Approx(m8.laplace_awgn(k, 0.5, g)).epsilon(1e-5));
}

TEST_CASE("model error probability tracks the simulated max-log demapper") {
    // all-zero transmission: pick a uniform symbol with bit k = 0, demap, and
    // compare Pr(L_k < 0) with the mixture cdf at zero
    const auto c = Constellation::build({0.5, 0.25}, 8);
    const LValueModel model(c);
    const double g = 3.0;
    std::mt19937_64 eng(2024);
    std::normal_distribution<double> noise(0.0, std::sqrt(0.5 / g));
    for (int k = 1; k <= 3; ++k) {
        std::vector<int> zeros;
        for (int j = 0; j < 8; ++j)
            if (c.label_bit(k, j) == 0) zeros.push_back(j);
        const int N = 400000;
        int neg = 0;
        std::uniform_int_distribution<int> pick(0, static_cast<int>(zeros.size()) - 1);
        for (int i = 0; i < N; ++i) {
            const double y = c.points()[zeros[pick(eng)]] + noise(eng);
            if (maxlog_llr(y, g, c)[k - 1] < 0.0) ++neg;
        }
        const double sim = static_cast<double>(neg) / N;
        const double model_p = model.mixture_cdf(k, 0.0, g);
        CHECK(sim == doctest::Approx(model_p).epsilon(0.08));
    }
}
