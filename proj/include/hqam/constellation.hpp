#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqam {

/// Hierarchical M-PAM constellation with binary reflected Gray code labels.
///
/// The geometry is parameterized by the distance ratios alpha_k = d_{k+1}/d_1
/// and normalized to unit average symbol energy. Points are kept in ascending
/// order; the label of the j-th point is the Gray code of j.
class Constellation {
public:
    /// Builds a unit-energy constellation. Throws std::invalid_argument on a
    /// dimension mismatch or when `alphas` lies outside the BRGC region.
    static Constellation build(const std::vector<double>& alphas, int M);

    /// Same as build() but skips the region check (useful for plotting the
    /// geometry outside the valid region). Labels may then lose the Gray
    /// property and points may cross.
    static Constellation build_unchecked(const std::vector<double>& alphas, int M);

    int M() const { return M_; }
    int q() const { return q_; }
    const std::vector<double>& alphas() const { return alphas_; }
    const std::vector<double>& d() const { return d_; }
    const std::vector<double>& points() const { return points_; }

    /// Label bit of point j at bit position k (1-based, k=1 is the MSB).
    int label_bit(int k, int j) const { return (labels_[j] >> (q_ - k)) & 1; }
    /// Full label of point j as a q-bit word, MSB = bit position 1.
    std::uint32_t label(int j) const { return labels_[j]; }
    /// Index of the point carrying the given label word.
    int point_of_label(std::uint32_t word) const { return label_to_point_[word]; }

    /// JSON dump: {M, alphas, d, points, labels, mu}.
    std::string to_json() const;

private:
    Constellation() = default;

    int M_ = 0;
    int q_ = 0;
    std::vector<double> alphas_;
    std::vector<double> d_;
    std::vector<double> points_;
    std::vector<std::uint32_t> labels_;         // labels_[j] = gray(j)
    std::vector<int> label_to_point_;
};

struct RegionReport {
    bool valid = false;
    std::string violation;  // empty when valid
};

/// Checks alpha_k >= sum_{j>k} alpha_j for all k, sum alpha_k <= 1 and
/// alpha_{q-1} >= 0. Reports the first violated inequality.
RegionReport validate_region(const std::vector<double>& alphas);

/// Per-(k,j) L-value mean scales of the consistent Gaussian model.
///
/// mu[k][j] carries the sign of the k-th label bit of x_j (+ for bit 0);
/// positive_mu[k][j], j = 0..M_k-1, lists the M/2^k distinct magnitudes used
/// by the all-zero-codeword analysis, and xi[k] = 2^k/M is the weight of each
/// mixture component.
struct MuTable {
    int M = 0;
    int q = 0;
    std::vector<std::vector<double>> mu;           // [k-1][j], signed
    std::vector<std::vector<double>> positive_mu;  // [k-1][j], j < M_k
    std::vector<double> xi;                        // [k-1] = 1/M_k

    int Mk(int k) const { return M >> k; }
};

/// Builds the mu table. The magnitudes are computed both from the generic
/// closed form and from a geometric nearest-competitor search; the two must
/// agree to 1e-12 or the function throws std::logic_error.
MuTable mu_table(const Constellation& c);

/// Index of the closest point to x_j whose k-th label bit is flipped.
/// Ties break toward the smaller index.
int nearest_competitor(const Constellation& c, int k, int j);

}  // namespace hqam
