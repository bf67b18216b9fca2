#include "hqam/lvalues.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hqam {

std::vector<double> maxlog_llr(double y, double gamma, const Constellation& c) {
    const int q = c.q();
    const int M = c.M();
    std::vector<double> l(q);
    for (int k = 1; k <= q; ++k) {
        double min0 = std::numeric_limits<double>::infinity();
        double min1 = min0;
        for (int j = 0; j < M; ++j) {
            const double d = y - c.points()[j];
            const double dd = d * d;
            if (c.label_bit(k, j) == 0)
                min0 = std::min(min0, dd);
            else
                min1 = std::min(min1, dd);
        }
        l[k - 1] = gamma * (min1 - min0);
    }
    return l;
}

LValueModel::LValueModel(const Constellation& c) : q_(c.q()), mu_(mu_table(c)) {}

double LValueModel::zero_mass(int k) const {
    double m = 0.0;
    for (double mu : mu_.positive_mu[k - 1])
        if (mu == 0.0) m += mu_.xi[k - 1];
    return m;
}

double LValueModel::mixture_pdf(int k, double lambda, double gamma) const {
    double v = 0.0;
    const double xi = mu_.xi[k - 1];
    for (double mu : mu_.positive_mu[k - 1]) {
        if (mu == 0.0) continue;  // point mass at 0, not a density
        const double mean = gamma * mu;
        const double var = 2.0 * gamma * mu;
        const double z = lambda - mean;
        v += xi * std::exp(-z * z / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
    }
    return v;
}

double LValueModel::mixture_cdf(int k, double lambda, double gamma) const {
    double v = 0.0;
    const double xi = mu_.xi[k - 1];
    for (double mu : mu_.positive_mu[k - 1]) {
        if (mu == 0.0) {
            if (lambda >= 0.0) v += xi;
            continue;
        }
        const double mean = gamma * mu;
        const double sd = std::sqrt(2.0 * gamma * mu);
        v += xi * 0.5 * std::erfc(-(lambda - mean) / (sd * std::sqrt(2.0)));
    }
    return v;
}

double LValueModel::laplace_awgn(int k, double s, double gamma) const {
    const double t = s * s - s;
    double v = 0.0;
    for (double mu : mu_.positive_mu[k - 1]) v += mu_.xi[k - 1] * std::exp(mu * gamma * t);
    return v;
}

double LValueModel::laplace_awgn_dd_half(int k, double gamma) const {
    double v = 0.0;
    for (double mu : mu_.positive_mu[k - 1])
        v += 2.0 * mu_.xi[k - 1] * mu * gamma * std::exp(-mu * gamma / 4.0);
    return v;
}

double LValueModel::laplace_fading(int k, double s, double gamma_bar, double m) const {
    if (m <= 0.0) throw std::invalid_argument("m must be positive");
    const double t = s * s - s;
    double v = 0.0;
    for (double mu : mu_.positive_mu[k - 1]) {
        const double denom = m - gamma_bar * mu * t;
        if (denom <= 0.0) throw std::domain_error("s in the pole region of the fading transform");
        v += mu_.xi[k - 1] * std::pow(m / denom, m);
    }
    return v;
}

double LValueModel::laplace_fading_dd_half(int k, double gamma_bar, double m) const {
    double v = 0.0;
    for (double mu : mu_.positive_mu[k - 1])
        v += 2.0 * mu_.xi[k - 1] * gamma_bar * mu *
             std::pow(4.0 * m / (4.0 * m + gamma_bar * mu), m + 1.0);
    return v;
}

}  // namespace hqam
