#include "hqam/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace hqam {

namespace {

bool is_power_of_two(int M) { return M > 1 && (M & (M - 1)) == 0; }

int ilog2(int M) {
    int q = 0;
    while ((1 << q) < M) ++q;
    return q;
}

std::uint32_t gray(std::uint32_t j) { return j ^ (j >> 1); }

}  // namespace

RegionReport validate_region(const std::vector<double>& alphas) {
    const int qm1 = static_cast<int>(alphas.size());
    RegionReport r;
    if (qm1 == 0) {
        r.valid = true;
        return r;
    }
    if (alphas.back() < 0.0) {
        r.violation = "alpha_" + std::to_string(qm1) + " < 0";
        return r;
    }
    double total = 0.0;
    for (double a : alphas) total += a;
    if (total > 1.0 + 1e-15) {
        r.violation = "sum of alphas > 1";
        return r;
    }
    for (int k = 1; k <= qm1; ++k) {
        double tail = 0.0;
        for (int j = k + 1; j <= qm1; ++j) tail += alphas[j - 1];
        if (alphas[k - 1] < tail - 1e-15) {
            r.violation = "alpha_" + std::to_string(k) + " < sum of alpha_{k+1..}";
            return r;
        }
    }
    r.valid = true;
    return r;
}

Constellation Constellation::build_unchecked(const std::vector<double>& alphas, int M) {
    if (!is_power_of_two(M) && M != 2)
        throw std::invalid_argument("M must be a power of two >= 2");
    const int q = ilog2(M);
    if (static_cast<int>(alphas.size()) != q - 1)
        throw std::invalid_argument("expected " + std::to_string(q - 1) + " alphas for M=" +
                                    std::to_string(M));

    Constellation c;
    c.M_ = M;
    c.q_ = q;
    c.alphas_ = alphas;

    double sum_sq = 1.0;
    for (double a : alphas) sum_sq += a * a;
    const double d1 = 1.0 / std::sqrt(sum_sq);
    c.d_.resize(q);
    c.d_[0] = d1;
    for (int k = 1; k < q; ++k) c.d_[k] = alphas[k - 1] * d1;

    c.points_.resize(M);
    c.labels_.resize(M);
    c.label_to_point_.assign(M, -1);
    for (int j = 0; j < M; ++j) {
        double x = 0.0;
        for (int k = 1; k <= q; ++k) {
            const int bit = (j >> (q - k)) & 1;  // natural binary, MSB first
            x += (bit ? 1.0 : -1.0) * c.d_[k - 1];
        }
        c.points_[j] = x;
        c.labels_[j] = gray(static_cast<std::uint32_t>(j));
        c.label_to_point_[c.labels_[j]] = j;
    }
    return c;
}

Constellation Constellation::build(const std::vector<double>& alphas, int M) {
    const RegionReport r = validate_region(alphas);
    if (!r.valid) throw std::invalid_argument("alphas outside BRGC region: " + r.violation);
    return build_unchecked(alphas, M);
}

int nearest_competitor(const Constellation& c, int k, int j) {
    const int M = c.M();
    const int own = c.label_bit(k, j);
    int best = -1;
    double best_dist = 0.0;
    for (int i = 0; i < M; ++i) {
        if (c.label_bit(k, i) == own) continue;
        const double dist = std::abs(c.points()[i] - c.points()[j]);
        if (best < 0 || dist < best_dist) {
            best = i;
            best_dist = dist;
        }
    }
    return best;
}

MuTable mu_table(const Constellation& c) {
    const int M = c.M();
    const int q = c.q();
    MuTable t;
    t.M = M;
    t.q = q;
    t.mu.assign(q, std::vector<double>(M, 0.0));
    t.positive_mu.assign(q, {});
    t.xi.resize(q);

    for (int k = 1; k <= q; ++k) {
        for (int j = 0; j < M; ++j) {
            const int comp = nearest_competitor(c, k, j);
            const double diff = c.points()[comp] - c.points()[j];
            const double mag = diff * diff;
            t.mu[k - 1][j] = c.label_bit(k, j) == 0 ? mag : -mag;
        }
        const int Mk = M >> k;
        t.xi[k - 1] = 1.0 / Mk;
        t.positive_mu[k - 1].resize(Mk);
        for (int j = 0; j < Mk; ++j) {
            // generic closed form: 4(d_k - sum_{k'=k+1..q} bit_{k'-k}(j) d_{k'})^2
            double s = c.d()[k - 1];
            for (int kp = k + 1; kp <= q; ++kp) {
                const int bit = (j >> (q - kp)) & 1;
                if (bit) s -= c.d()[kp - 1];
            }
            const double closed = 4.0 * s * s;
            const double geometric = t.mu[k - 1][j];
            if (std::abs(closed - geometric) > 1e-12)
                throw std::logic_error("mu closed form disagrees with geometric search");
            t.positive_mu[k - 1][j] = closed;
        }
    }
    return t;
}

std::string Constellation::to_json() const {
    nlohmann::json j;
    j["M"] = M_;
    j["alphas"] = alphas_;
    j["d"] = d_;
    j["points"] = points_;
    std::vector<std::string> labels;
    labels.reserve(M_);
    for (int i = 0; i < M_; ++i) {
        std::string s;
        for (int k = 1; k <= q_; ++k) s += static_cast<char>('0' + label_bit(k, i));
        labels.push_back(s);
    }
    j["labels"] = labels;
    // the closed-form check only holds inside the label region; skip mu outside
    if (validate_region(alphas_).valid) {
        const MuTable t = mu_table(*this);
        std::vector<std::vector<double>> mu_rows;
        for (int k = 0; k < q_; ++k) mu_rows.push_back(t.mu[k]);
        j["mu"] = mu_rows;
    }
    return j.dump(2);
}

}  // namespace hqam
