#include <cmath>

#include "doctest.h"
#include "hqam/montecarlo.hpp"
#include "hqam/optimizer.hpp"

using namespace hqam;

namespace {

OptimizeOptions small_options() {
    OptimizeOptions opt;
    opt.grid_step = 0.05;
    opt.wmax = 30;
    return opt;
}

}  // namespace

TEST_CASE("search space enumerates grids and spectra once") {
    const auto code = ConvCode::from_octal("5,7");
    const auto space = build_search_space(code, 4, small_options());
    CHECK(space.M == 4);
    CHECK(space.patterns.size() == 4);
    CHECK(space.spectra.size() == 4);
    for (const auto& a : space.alpha_grid) CHECK(validate_region(a).valid);
    // grid covers alpha_1 in {0, 0.05, ..., 1}
    CHECK(space.alpha_grid.size() == 21);
}

TEST_CASE("reported bound is reproducible from the returned design") {
    const auto code = ConvCode::from_octal("5,7");
    const auto ch = ChannelModel::awgn(db_to_linear(9.0));
    const auto r = optimize(ch, code, 4, small_options());
    const auto spec = compute_ewds(Trellis(code), r.pattern, 30);
    const auto c = Constellation::build(r.alphas, 4);
    const auto ub = union_bound(spec, c, ch, code.k_c());
    CHECK(ub.ub == doctest::Approx(r.ub).epsilon(1e-12));
    CHECK(ub.last_shell == doctest::Approx(r.last_shell).epsilon(1e-12));
    CHECK_FALSE(ub.validity_warning);
}

TEST_CASE("serial reference equals the parallel search") {
    const auto code = ConvCode::from_octal("5,7");
    for (const auto ch : {ChannelModel::awgn(db_to_linear(8.0)),
                          ChannelModel::nakagami(2.0, db_to_linear(14.0))}) {
        const auto par = optimize(ch, code, 4, small_options());
        const auto ser = optimize_reference(ch, code, 4, small_options());
        CHECK(par.pattern_text == ser.pattern_text);
        CHECK(par.alphas == ser.alphas);
        CHECK(par.ub == ser.ub);
    }
}

TEST_CASE("the optimum beats every other design in the ranked table") {
    const auto code = ConvCode::from_octal("5,7");
    auto opt = small_options();
    opt.keep_table = true;
    opt.grid_step = 0.1;
    const auto r = optimize(ChannelModel::awgn(db_to_linear(9.0)), code, 4, opt);
    REQUIRE_FALSE(r.table.empty());
    CHECK(r.table.front().ub == r.ub);
    CHECK(r.table.front().alphas == r.alphas);
    for (std::size_t i = 1; i < r.table.size(); ++i)
        CHECK(r.table[i - 1].ub <= r.table[i].ub);
    CHECK(r.table.size() == 4 * 11);
}

TEST_CASE("4-PAM awgn design protects the strong stream with both outputs") {
    // the known optimum sends both encoder outputs of one period column to
    // stream 2 and the next to stream 1
    const auto code = ConvCode::from_octal("5,7");
    auto opt = small_options();
    opt.grid_step = 0.01;
    const auto r = optimize(ChannelModel::awgn(db_to_linear(9.0)), code, 4, opt);
    const auto expect = DMuxPattern::parse("2,2/1,1", 2).canonical();
    CHECK(r.pattern.canonical() == expect);
    // unequal protection pays: the best alpha is off the equally spaced point
    CHECK(r.alphas[0] < 0.5);
    CHECK(r.ub < 1e-4);
}

TEST_CASE("optimum moves with the channel") {
    const auto code = ConvCode::from_octal("5,7");
    const auto space = build_search_space(code, 4, small_options());
    const auto lo = optimize_in_space(ChannelModel::awgn(db_to_linear(7.0)), space, 1,
                                      small_options());
    const auto hi = optimize_in_space(ChannelModel::awgn(db_to_linear(11.0)), space, 1,
                                      small_options());
    CHECK(lo.ub > hi.ub);
}

TEST_CASE("fading design rule lands on the target bound") {
    const auto code = ConvCode::from_octal("5,7");
    auto opt = small_options();
    const double target = 1e-5;
    const auto r = optimize_fading_fixed(1.0, target, code, 4, opt);
    CHECK(r.ub == doctest::Approx(target).epsilon(0.02));
    CHECK(r.channel.fading);
    CHECK(r.channel.m == 1.0);
    CHECK(r.gamma_bar_dB > 5.0);
    CHECK(r.gamma_bar_dB < 45.0);
    // unreachable inside the bracket [5, 45] dB
    CHECK_THROWS_AS(optimize_fading_fixed(1.0, 1e-30, code, 4, opt), std::runtime_error);
}

TEST_CASE("design card json carries the design") {
    const auto code = ConvCode::from_octal("5,7");
    auto opt = small_options();
    opt.grid_step = 0.1;
    const auto r = optimize(ChannelModel::awgn(db_to_linear(9.0)), code, 4, opt);
    const auto j = r.to_json();
    CHECK(j.find("\"channel\": \"awgn\"") != std::string::npos);
    CHECK(j.find("\"mux\"") != std::string::npos);
    CHECK(j.find("\"alphas\"") != std::string::npos);
    CHECK(j.find("\"ub\"") != std::string::npos);
}
