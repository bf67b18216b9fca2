#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hqam/convcode.hpp"
#include "hqam/mux.hpp"

namespace hqam {

/// Multiplicity of one spectrum entry. `num/den` is exact when den > 0;
/// entries whose counts overflow 64 bits (deep truncation depths) carry the
/// floating value only.
struct Beta {
    double value = 0.0;
    long long num = 0;
    long long den = 0;

    bool exact() const { return den > 0; }
};

/// Equivalent weight distribution spectrum of an encoder + D-MUX compound:
/// maps per-stream weight vectors w = [w_1..w_q] to multiplicities counting
/// the input Hamming weights of remerging trellis paths.
struct WeightSpectrum {
    int q = 0;
    int wmax = 0;
    int J = 1;
    bool below_free_distance = false;  // set when no path fits under wmax
    std::map<std::vector<int>, Beta> entries;

    /// Sum of multiplicities over entries with the given total weight
    /// (the scalar spectrum marginal).
    double total_weight_marginal(int d) const;

    /// CSV dump: w_1..w_q, beta_numerator, beta_denominator (denominator 0
    /// marks a floating-only entry whose value is in the numerator column),
    /// sorted by total weight then lexicographically.
    std::string to_csv() const;
};

/// Computes the EWDS by breadth-first search over remerging trellis paths,
/// phase-averaged over the J divergence phases of the periodic D-MUX.
/// Paths are pruned once their total stream weight exceeds wmax. Throws
/// std::runtime_error if the search frontier exceeds `frontier_cap`
/// (catastrophic-code guard).
WeightSpectrum compute_ewds(const Trellis& trellis, const DMuxPattern& pattern, int wmax,
                            std::size_t frontier_cap = 1u << 22);

/// Expected spectrum of the randomized baselines: remerging paths are
/// enumerated by per-encoder-output weight, then each surviving coded bit of
/// output p is spread over the q streams with probabilities probs[p][k]
/// (multinomial redistribution). A uniform table gives the S-interleaver
/// baseline. An optional puncture pattern drops bits before spreading, which
/// yields the punctured BICM-S baseline.
WeightSpectrum expected_ewds(const Trellis& trellis,
                             const std::vector<std::vector<double>>& probs, int wmax,
                             const PuncturePattern* punct = nullptr,
                             std::size_t frontier_cap = 1u << 22);

/// Scalar weight spectrum of the code itself (q = 1), optionally punctured.
WeightSpectrum scalar_spectrum(const Trellis& trellis, int wmax,
                               const PuncturePattern* punct = nullptr,
                               std::size_t frontier_cap = 1u << 22);

}  // namespace hqam
