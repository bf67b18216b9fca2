#pragma once

#include <vector>

#include "hqam/constellation.hpp"

namespace hqam {

/// Max-log L-values for a received real sample at instantaneous SNR gamma:
/// l_k = gamma * [min_{a: bit k = 1} (y-a)^2 - min_{a: bit k = 0} (y-a)^2].
/// Positive favors bit 0.
std::vector<double> maxlog_llr(double y, double gamma, const Constellation& c);

/// Gaussian-mixture model of the k-th L-value under all-zero transmission:
/// components N(gamma*mu, 2*gamma*mu) with weights 1/M_k over the positive
/// mu_{k,j}. Zero-mu components are point masses at 0.
class LValueModel {
public:
    LValueModel(const Constellation& c);

    int q() const { return q_; }
    const std::vector<double>& positive_mu(int k) const { return mu_.positive_mu[k - 1]; }
    double xi(int k) const { return mu_.xi[k - 1]; }

    /// Mixture density of L_k at lambda. Point-mass components (mu = 0) are
    /// excluded from the density value; their weight is reported separately
    /// by zero_mass().
    double mixture_pdf(int k, double lambda, double gamma) const;
    double zero_mass(int k) const;
    /// Mixture CDF (zero-mu components counted as mass at 0-).
    double mixture_cdf(int k, double lambda, double gamma) const;

    /// Two-sided Laplace transform for the AWGN channel:
    /// Phi(s) = sum_j xi * exp(mu_j * gamma * (s^2 - s)). Entire in s.
    double laplace_awgn(int k, double s, double gamma) const;
    /// Second derivative of the AWGN transform at s = 1/2.
    double laplace_awgn_dd_half(int k, double gamma) const;

    /// Nakagami-m averaged transform:
    /// Phi(s) = sum_j xi * (m / (m - gamma_bar * mu_j * (s^2 - s)))^m.
    /// Throws std::domain_error when s is in the pole region.
    double laplace_fading(int k, double s, double gamma_bar, double m) const;
    /// Second derivative of the fading transform at s = 1/2.
    double laplace_fading_dd_half(int k, double gamma_bar, double m) const;

private:
    int q_;
    MuTable mu_;
};

}  // namespace hqam
