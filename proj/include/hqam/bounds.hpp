#pragma once

#include <cstdint>
#include <vector>

#include "hqam/constellation.hpp"
#include "hqam/lvalues.hpp"
#include "hqam/spectrum.hpp"

namespace hqam {

/// AWGN or Nakagami-m fading channel at average SNR gamma_bar (linear).
struct ChannelModel {
    bool fading = false;
    double m = 0.0;
    double gamma_bar = 1.0;

    static ChannelModel awgn(double gamma) { return {false, 0.0, gamma}; }
    static ChannelModel nakagami(double m, double gamma_bar) { return {true, m, gamma_bar}; }

    ChannelModel at(double new_gamma_bar) const { return {fading, m, new_gamma_bar}; }
};

/// Saddlepoint PEP machinery for one (constellation, channel) pair: per-k
/// log Phi(1/2) and the ratio Phi''(1/2)/Phi(1/2), evaluated in log domain so
/// high-SNR products do not underflow.
class PepEvaluator {
public:
    PepEvaluator(const Constellation& c, const ChannelModel& ch);

    /// log of the SPA pairwise error probability for weight vector w
    /// (1-based streams, w.size() == q). Returns log(1/2) when the curvature
    /// term vanishes (all contributing components are zero-mu).
    double log_pep(const std::vector<int>& w) const;

    double log_phi(int k) const { return log_phi_[k - 1]; }
    double curvature_ratio(int k) const { return ratio_[k - 1]; }

private:
    std::vector<double> log_phi_;  // per k, at s = 1/2
    std::vector<double> ratio_;    // Phi''/Phi per k, at s = 1/2
};

/// SPA pairwise error probability, AWGN channel, clipped to [0, 1].
double pep_awgn(const std::vector<int>& w, double gamma, const Constellation& c);

/// SPA pairwise error probability, Nakagami-m fading, clipped to [0, 1].
double pep_fading(const std::vector<int>& w, double gamma_bar, double m,
                  const Constellation& c);

struct UnionBoundResult {
    double ub = 0.0;
    double last_shell = 0.0;      // contribution of the largest total-weight shell
    bool validity_warning = false;  // ub above the trusted range (~1e-3)
};

/// Truncated union bound (1/k_c) * sum beta(w) * PEP(w). PEP terms are not
/// clipped; the result carries a validity flag when it exceeds 1e-3.
UnionBoundResult union_bound(const WeightSpectrum& spectrum, const Constellation& c,
                             const ChannelModel& ch, int k_c);

struct PepEstimate {
    double p = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
};

/// Monte Carlo PEP oracle: draws the decision variable directly from the
/// Gaussian-mixture L-value model (gamma redrawn per L-value under fading)
/// and estimates the probability that the error path is preferred.
PepEstimate pep_oracle(const std::vector<int>& w, const ChannelModel& ch,
                       const Constellation& c, std::size_t samples, std::uint64_t seed);

}  // namespace hqam
