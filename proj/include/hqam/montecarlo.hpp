#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hqam/bounds.hpp"
#include "hqam/constellation.hpp"
#include "hqam/convcode.hpp"
#include "hqam/mux.hpp"
#include "hqam/rng.hpp"

namespace hqam {

/// End-to-end simulation setup. Blocks are simulated with independent,
/// counter-derived RNG streams, so results are reproducible bit-for-bit for a
/// fixed master seed regardless of worker scheduling.
struct SimConfig {
    ConvCode code = ConvCode::from_octal("5,7");
    std::optional<DMuxPattern> pattern;            // deterministic D-MUX
    bool use_random_mux = false;                   // R-MUX / S-interleaver baselines
    RandomMuxKind rmux_kind = RandomMuxKind::SInterleaver;
    std::vector<std::vector<double>> rmux_probs;   // n x q, R-MUX only
    std::optional<PuncturePattern> punct;          // punctured baseline
    Constellation constellation = Constellation::build({}, 2);
    ChannelModel channel = ChannelModel::awgn(1.0);
    std::size_t N_c = 24000;      // info/coded block length (zero tail included)
    std::size_t min_error_bits = 100;
    std::size_t max_blocks = 200000;
    std::uint64_t seed = 1;
    bool all_zero_info = false;
    bool uncoded = false;         // bypass code+mux, map info bits directly
    int jobs = 0;                 // 0 = library default
};

/// Instantaneous SNR draw: the AWGN channel returns gamma_bar, Nakagami-m a
/// Gamma(m, gamma_bar/m) variate (one per transmitted symbol).
double sample_snr(const ChannelModel& ch, Rng& rng);

struct BlockTransmission {
    std::vector<std::uint8_t> info;
    std::vector<std::vector<double>> llrs;  // n x N_c, at the decoder input
};

/// Runs the transmitter, channel and demapper chain for one block (no
/// decoding). `block` indexes the per-block RNG stream.
BlockTransmission transmit_block(const SimConfig& cfg, std::uint64_t block);

/// Full chain for one block; returns the number of info-bit errors (the
/// zero-tail columns are excluded from the count).
std::size_t simulate_block(const SimConfig& cfg, std::uint64_t block);

struct BerPoint {
    double gamma_bar_dB = 0.0;
    std::size_t errors = 0;
    std::size_t bits = 0;
    std::size_t blocks = 0;
    double ber = 0.0;
    double ci_low = 0.0;   // 95% normal-approximation interval
    double ci_high = 0.0;
};

/// BER sweep over an SNR grid (dB). Each point stops after
/// cfg.min_error_bits accumulated bit errors or cfg.max_blocks blocks.
/// Blocks run in parallel; the block schedule is deterministic.
std::vector<BerPoint> run_ber_sweep(const SimConfig& cfg,
                                    const std::vector<double>& gamma_bar_dB);

/// CSV: gamma_dB, ber, ci_low, ci_high, bits, errors, config_hash.
std::string ber_sweep_csv(const std::vector<BerPoint>& points, std::uint64_t config_hash);

std::uint64_t config_hash(const SimConfig& cfg);

inline double db_to_linear(double dB) { return std::pow(10.0, dB / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace hqam
