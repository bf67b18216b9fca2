#include "hqam/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hqam/rng.hpp"

namespace hqam {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log sqrt(2*pi)

}  // namespace

PepEvaluator::PepEvaluator(const Constellation& c, const ChannelModel& ch) {
    const MuTable t = mu_table(c);
    const int q = c.q();
    log_phi_.resize(q);
    ratio_.resize(q);
    for (int k = 1; k <= q; ++k) {
        const auto& mus = t.positive_mu[k - 1];
        const double xi = t.xi[k - 1];
        // per-component log terms at s = 1/2
        std::vector<double> le(mus.size()), ledd(mus.size());
        for (std::size_t j = 0; j < mus.size(); ++j) {
            if (!ch.fading) {
                le[j] = -mus[j] * ch.gamma_bar / 4.0;
                ledd[j] = le[j];  // exp factor shared; mu weight applied below
            } else {
                const double r = ch.gamma_bar * mus[j] / (4.0 * ch.m);
                le[j] = -ch.m * std::log1p(r);
                ledd[j] = -(ch.m + 1.0) * std::log1p(r);
            }
        }
        const double a = *std::max_element(le.begin(), le.end());
        double phi = 0.0, dd = 0.0;
        for (std::size_t j = 0; j < mus.size(); ++j) {
            phi += xi * std::exp(le[j] - a);
            dd += 2.0 * xi * ch.gamma_bar * mus[j] * std::exp(ledd[j] - a);
        }
        log_phi_[k - 1] = std::log(phi) + a;
        ratio_[k - 1] = dd / phi;
    }
}

double PepEvaluator::log_pep(const std::vector<int>& w) const {
    if (w.size() != log_phi_.size()) throw std::invalid_argument("weight vector length mismatch");
    int total = 0;
    double curv = 0.0, lp = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] < 0) throw std::invalid_argument("negative weight");
        total += w[k];
        curv += w[k] * ratio_[k];
        lp += w[k] * log_phi_[k];
    }
    if (total == 0) throw std::invalid_argument("all-zero weight vector");
    if (curv <= 0.0) return std::log(0.5);  // degenerate: no distance anywhere
    // 1/(s_hat*sqrt(2*pi)) * curv^{-1/2} * prod Phi^{w_k}, s_hat = 1/2
    return std::log(2.0) - kLogSqrt2Pi - 0.5 * std::log(curv) + lp;
}

double pep_awgn(const std::vector<int>& w, double gamma, const Constellation& c) {
    if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
    const PepEvaluator ev(c, ChannelModel::awgn(gamma));
    return std::clamp(std::exp(ev.log_pep(w)), 0.0, 1.0);
}

double pep_fading(const std::vector<int>& w, double gamma_bar, double m,
                  const Constellation& c) {
    if (gamma_bar <= 0.0 || m <= 0.0) throw std::invalid_argument("channel parameters must be positive");
    const PepEvaluator ev(c, ChannelModel::nakagami(m, gamma_bar));
    return std::clamp(std::exp(ev.log_pep(w)), 0.0, 1.0);
}

UnionBoundResult union_bound(const WeightSpectrum& spectrum, const Constellation& c,
                             const ChannelModel& ch, int k_c) {
    UnionBoundResult r;
    if (spectrum.entries.empty()) return r;
    const PepEvaluator ev(c, ch);
    int max_total = 0;
    for (const auto& [w, b] : spectrum.entries)
        max_total = std::max(max_total, std::accumulate(w.begin(), w.end(), 0));
    double sum = 0.0, last = 0.0;
    for (const auto& [w, b] : spectrum.entries) {
        const double term = b.value * std::exp(ev.log_pep(w));
        sum += term;
        if (std::accumulate(w.begin(), w.end(), 0) == max_total) last += term;
    }
    r.ub = sum / k_c;
    r.last_shell = last / k_c;
    r.validity_warning = r.ub > 1e-3;
    return r;
}

PepEstimate pep_oracle(const std::vector<int>& w, const ChannelModel& ch,
                       const Constellation& c, std::size_t samples, std::uint64_t seed) {
    const MuTable t = mu_table(c);
    if (w.size() != static_cast<std::size_t>(c.q()))
        throw std::invalid_argument("weight vector length mismatch");
    Rng rng(seed);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        double d = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const auto& mus = t.positive_mu[k];
            for (int i = 0; i < w[k]; ++i) {
                const std::size_t j = static_cast<std::size_t>(rng.next_below(mus.size()));
                const double mu = mus[j];
                if (mu == 0.0) continue;  // degenerate component: L = 0
                const double g = ch.fading
                                     ? rng.next_gamma(ch.m, ch.gamma_bar / ch.m)
                                     : ch.gamma_bar;
                d += g * mu + std::sqrt(2.0 * g * mu) * rng.next_normal();
            }
        }
        if (d < 0.0) ++hits;  // error path preferred over the all-zero word
    }
    PepEstimate e;
    e.samples = samples;
    e.p = static_cast<double>(hits) / samples;
    e.stderr_ = std::sqrt(std::max(e.p * (1.0 - e.p), 1.0 / samples) / samples);
    return e;
}

}  // namespace hqam
