// Benchmark comparing the OpenMP grid search and block simulator against
// their serial reference paths. Results must match exactly; the wall times
// show the speedup.

#include <chrono>
#include <cstdlib>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hqam/montecarlo.hpp"
#include "hqam/optimizer.hpp"

using namespace hqam;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::string(argv[1]) == "--quick";
#ifdef _OPENMP
    const int hw_threads = omp_get_max_threads();
#else
    const int hw_threads = 1;
#endif

    const auto code = ConvCode::from_octal("5,7");
    OptimizeOptions opt;
    opt.wmax = quick ? 20 : 30;
    opt.grid_step = quick ? 0.05 : 0.02;
    const auto ch = ChannelModel::awgn(db_to_linear(12.0));

    std::cout << "optimizer grid search (M=8, wmax=" << opt.wmax
              << ", step=" << opt.grid_step << ")\n";
    auto t0 = Clock::now();
    const auto serial = optimize_reference(ch, code, 8, opt);
    const double t_serial = seconds_since(t0);
    t0 = Clock::now();
    const auto parallel = optimize(ch, code, 8, opt);
    const double t_parallel = seconds_since(t0);
    const bool opt_match =
        serial.pattern_text == parallel.pattern_text && serial.alphas == parallel.alphas &&
        serial.ub == parallel.ub;
    std::cout << "  serial:   " << t_serial << " s\n"
              << "  parallel: " << t_parallel << " s  (speedup " << t_serial / t_parallel
              << "x)\n"
              << "  results identical: " << (opt_match ? "yes" : "NO") << "\n";

    SimConfig cfg;
    cfg.code = code;
    cfg.pattern = DMuxPattern::parse("2,2/1,1", 2);
    cfg.constellation = Constellation::build({0.45}, 4);
    cfg.N_c = 6000;
    cfg.min_error_bits = quick ? 200 : 2000;
    cfg.max_blocks = 100000;
    cfg.seed = 7;
    const std::vector<double> snrs = {6.0};

    std::cout << "ber sweep (min errors " << cfg.min_error_bits << ")\n";
    cfg.jobs = 1;
    t0 = Clock::now();
    const auto s1 = run_ber_sweep(cfg, snrs);
    const double t_sim_serial = seconds_since(t0);
    cfg.jobs = hw_threads;
    t0 = Clock::now();
    const auto s2 = run_ber_sweep(cfg, snrs);
    const double t_sim_parallel = seconds_since(t0);
    const bool sim_match = s1[0].errors == s2[0].errors && s1[0].bits == s2[0].bits;
    std::cout << "  serial:   " << t_sim_serial << " s\n"
              << "  parallel: " << t_sim_parallel << " s  (speedup "
              << t_sim_serial / t_sim_parallel << "x)\n"
              << "  results identical: " << (sim_match ? "yes" : "NO") << "\n";

    return opt_match && sim_match ? 0 : 1;
}
