#pragma once

#include <string>
#include <vector>

#include "hqam/bounds.hpp"
#include "hqam/convcode.hpp"
#include "hqam/mux.hpp"
#include "hqam/spectrum.hpp"

namespace hqam {

struct RankedDesign {
    int pattern_index = 0;  // into the canonical pattern list
    std::vector<double> alphas;
    double ub = 0.0;
};

struct DesignResult {
    double gamma_bar_dB = 0.0;
    ChannelModel channel;
    int pattern_index = 0;
    std::string pattern_text;
    DMuxPattern pattern;
    std::vector<double> alphas;
    double ub = 0.0;
    double last_shell = 0.0;
    int wmax = 0;
    double grid_step = 0.0;
    std::vector<RankedDesign> table;  // filled when requested

    std::string to_json() const;  // design card
};

struct OptimizeOptions {
    double grid_step = 0.01;
    int wmax = 125;
    int J = 0;          // 0 = default q
    bool keep_table = false;
    bool parallel = true;
    int jobs = 0;
};

/// Precomputed search space: the canonical D-MUX patterns with their EWDS
/// (constellation independent) plus the in-region alpha grid. Reused across
/// SNR points and for the fading bisection.
struct SearchSpace {
    int M = 0;
    std::vector<DMuxPattern> patterns;
    std::vector<WeightSpectrum> spectra;
    std::vector<std::vector<double>> alpha_grid;
};

SearchSpace build_search_space(const ConvCode& code, int M, const OptimizeOptions& opt);

/// Exhaustive minimization of the union bound over (pattern, alphas) at one
/// channel point. Ties break toward the smaller (pattern index, alphas).
DesignResult optimize(const ChannelModel& ch, const ConvCode& code, int M,
                      const OptimizeOptions& opt);
DesignResult optimize_in_space(const ChannelModel& ch, const SearchSpace& space, int k_c,
                               const OptimizeOptions& opt);

/// Serial reference for the parallel grid search; used by tests and the
/// benchmark target.
DesignResult optimize_reference(const ChannelModel& ch, const ConvCode& code, int M,
                                OptimizeOptions opt);

/// Fading design rule: finds the average SNR whose minimized UB equals
/// `target_ub` (bisection on the monotone UB curve) and freezes the design
/// found there. Throws std::runtime_error when the target is outside
/// [lo_dB, hi_dB].
DesignResult optimize_fading_fixed(double m, double target_ub, const ConvCode& code, int M,
                                   const OptimizeOptions& opt, double lo_dB = 5.0,
                                   double hi_dB = 45.0);

}  // namespace hqam
