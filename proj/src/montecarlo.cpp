#include "hqam/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hqam/lvalues.hpp"

namespace hqam {

double sample_snr(const ChannelModel& ch, Rng& rng) {
    if (!ch.fading) return ch.gamma_bar;
    return rng.next_gamma(ch.m, ch.gamma_bar / ch.m);
}

namespace {

// sub-stream tags for per-block seed derivation
enum : std::uint64_t { kInfo = 1, kNoise = 2, kMux = 3, kPi = 100 };

void validate(const SimConfig& cfg) {
    if (cfg.channel.gamma_bar <= 0.0) throw std::invalid_argument("SNR must be positive");
    if (cfg.uncoded) {
        if (cfg.constellation.M() != 2)
            throw std::invalid_argument("uncoded bypass supports 2-PAM only");
        return;
    }
    const int q = cfg.constellation.q();
    const int n = cfg.code.n();
    if (cfg.punct) {
        if (cfg.punct->n != n) throw std::invalid_argument("puncture pattern n mismatch");
        if (!cfg.use_random_mux)
            throw std::invalid_argument("punctured runs use the random-mux baselines");
        const std::size_t survivors = cfg.N_c / cfg.punct->period * cfg.punct->survivors_per_period();
        if (cfg.N_c % cfg.punct->period != 0)
            throw std::invalid_argument("N_c must be a multiple of the puncture period");
        if (survivors % q != 0)
            throw std::invalid_argument("surviving bits must divide evenly over the streams");
        return;
    }
    if (cfg.use_random_mux) {
        if ((n * cfg.N_c) % q != 0) throw std::invalid_argument("n*N_c must be a multiple of q");
        return;
    }
    if (!cfg.pattern) throw std::invalid_argument("no D-MUX pattern configured");
    if (cfg.pattern->n != n || cfg.pattern->q != q)
        throw std::invalid_argument("pattern dimensions do not match code/constellation");
    if (cfg.N_c % cfg.pattern->J != 0)
        throw std::invalid_argument("N_c must be a multiple of the D-MUX period");
}

std::vector<std::uint8_t> draw_info(const SimConfig& cfg, std::uint64_t block) {
    std::vector<std::uint8_t> info(cfg.N_c, 0);
    if (!cfg.all_zero_info) {
        Rng rng(mix_seed(cfg.seed, block * 8 + kInfo));
        for (auto& b : info) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
    }
    if (!cfg.uncoded) {
        const int tail = cfg.code.constraint_length() - 1;
        for (int i = 0; i < tail && i < static_cast<int>(info.size()); ++i)
            info[info.size() - 1 - i] = 0;
    }
    return info;
}

/// Maps stream-bit matrix columns to symbols, runs the channel and demaps.
/// streams: q x N_s bits; returns q x N_s L-values.
std::vector<std::vector<double>> channel_and_demap(const std::vector<std::vector<std::uint8_t>>& u,
                                                   const SimConfig& cfg, std::uint64_t block) {
    const int q = cfg.constellation.q();
    const std::size_t N_s = u[0].size();
    std::vector<std::vector<double>> l(q, std::vector<double>(N_s));
    Rng rng(mix_seed(cfg.seed, block * 8 + kNoise));
    for (std::size_t t = 0; t < N_s; ++t) {
        std::uint32_t word = 0;
        for (int k = 0; k < q; ++k) word = (word << 1) | u[k][t];
        const double x = cfg.constellation.points()[cfg.constellation.point_of_label(word)];
        const double gamma = sample_snr(cfg.channel, rng);
        const double y = x + rng.next_normal() / std::sqrt(2.0 * gamma);
        const std::vector<double> lv = maxlog_llr(y, gamma, cfg.constellation);
        for (int k = 0; k < q; ++k) l[k][t] = lv[k];
    }
    return l;
}

}  // namespace

BlockTransmission transmit_block(const SimConfig& cfg, std::uint64_t block) {
    validate(cfg);
    BlockTransmission tx;
    tx.info = draw_info(cfg, block);
    const int q = cfg.constellation.q();
    const int n = cfg.code.n();

    auto C = encode(cfg.code, tx.info);

    if (cfg.punct || cfg.use_random_mux) {
        // serialize (optionally punctured) coded bits, then the randomized
        // mux places each bit on a (stream, slot) pair
        std::vector<std::uint8_t> serial;
        int n_eff = n;
        if (cfg.punct) {
            serial = puncture(C, *cfg.punct);
            n_eff = 1;
        } else {
            serial.resize(n * cfg.N_c);
            for (std::size_t t = 0; t < cfg.N_c; ++t)
                for (int p = 0; p < n; ++p) serial[p + t * n] = C[p][t];
        }
        const std::size_t total = serial.size();
        std::vector<std::vector<double>> probs;
        if (cfg.rmux_kind == RandomMuxKind::RMux && !cfg.punct) probs = cfg.rmux_probs;
        const auto a = random_mux_baseline(cfg.punct ? RandomMuxKind::SInterleaver : cfg.rmux_kind,
                                           n_eff, q, total / n_eff, probs,
                                           mix_seed(cfg.seed, block * 8 + kMux));
        std::vector<std::vector<std::uint8_t>> u(q, std::vector<std::uint8_t>(a.N_s));
        for (std::size_t i = 0; i < total; ++i) {
            const std::uint64_t slot = a.slot_of[i];
            u[slot / a.N_s][slot % a.N_s] = serial[i];
        }
        auto l = channel_and_demap(u, cfg, block);
        std::vector<double> serial_l(total);
        for (std::size_t i = 0; i < total; ++i) {
            const std::uint64_t slot = a.slot_of[i];
            serial_l[i] = l[slot / a.N_s][slot % a.N_s];
        }
        if (cfg.punct) {
            tx.llrs = depuncture(serial_l, *cfg.punct);
        } else {
            tx.llrs.assign(n, std::vector<double>(cfg.N_c));
            for (std::size_t t = 0; t < cfg.N_c; ++t)
                for (int p = 0; p < n; ++p) tx.llrs[p][t] = serial_l[p + t * n];
        }
        return tx;
    }

    auto O = apply_dmux(C, *cfg.pattern);
    const std::size_t N_s = O[0].size();
    std::vector<std::vector<std::uint8_t>> u(q);
    std::vector<Interleaver> pis;
    pis.reserve(q);
    for (int k = 0; k < q; ++k) {
        pis.emplace_back(N_s, mix_seed(cfg.seed, block * 8 + kPi + k));
        u[k] = pis[k].interleave(O[k]);
    }
    auto l = channel_and_demap(u, cfg, block);
    std::vector<std::vector<double>> l_streams(q);
    for (int k = 0; k < q; ++k) l_streams[k] = pis[k].deinterleave(l[k]);
    tx.llrs = demux_llrs(l_streams, *cfg.pattern);
    return tx;
}

std::size_t simulate_block(const SimConfig& cfg, std::uint64_t block) {
    if (cfg.uncoded) {
        // 2-PAM hard-decision bypass; BER = Q(sqrt(2*gamma)) on AWGN
        const auto info = draw_info(cfg, block);
        Rng rng(mix_seed(cfg.seed, block * 8 + kNoise));
        std::size_t errors = 0;
        for (std::uint8_t b : info) {
            const double x = b ? 1.0 : -1.0;
            const double gamma = sample_snr(cfg.channel, rng);
            const double y = x + rng.next_normal() / std::sqrt(2.0 * gamma);
            if ((y >= 0.0) != (b != 0)) ++errors;
        }
        return errors;
    }
    const auto tx = transmit_block(cfg, block);
    const Trellis tr(cfg.code);
    const auto decoded = viterbi_decode(tr, tx.llrs);
    const std::size_t payload = cfg.N_c - (cfg.code.constraint_length() - 1);
    std::size_t errors = 0;
    for (std::size_t t = 0; t < payload; ++t)
        if (decoded[t] != tx.info[t]) ++errors;
    return errors;
}

std::vector<BerPoint> run_ber_sweep(const SimConfig& cfg,
                                    const std::vector<double>& gamma_bar_dB) {
    validate(cfg);
#ifdef _OPENMP
    if (cfg.jobs > 0) omp_set_num_threads(cfg.jobs);
#endif
    std::vector<BerPoint> out;
    out.reserve(gamma_bar_dB.size());
    const std::size_t payload =
        cfg.uncoded ? cfg.N_c : cfg.N_c - (cfg.code.constraint_length() - 1);
    // fixed wave size keeps the stop rule independent of thread count
    constexpr std::size_t kWave = 32;

    for (double dB : gamma_bar_dB) {
        SimConfig point_cfg = cfg;
        point_cfg.channel = cfg.channel.at(db_to_linear(dB));
        point_cfg.seed = mix_seed(cfg.seed, std::hash<double>{}(dB));
        BerPoint pt;
        pt.gamma_bar_dB = dB;
        std::uint64_t block = 0;
        while (pt.errors < cfg.min_error_bits && pt.blocks < cfg.max_blocks) {
            const std::size_t wave =
                std::min<std::size_t>(kWave, cfg.max_blocks - pt.blocks);
            std::size_t wave_errors = 0;
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : wave_errors) schedule(dynamic)
#endif
            for (long long i = 0; i < static_cast<long long>(wave); ++i)
                wave_errors += simulate_block(point_cfg, block + i);
            pt.errors += wave_errors;
            pt.blocks += wave;
            block += wave;
        }
        pt.bits = pt.blocks * payload;
        pt.ber = pt.bits ? static_cast<double>(pt.errors) / pt.bits : 0.0;
        const double se = std::sqrt(std::max(pt.ber * (1.0 - pt.ber), 0.0) / pt.bits);
        pt.ci_low = std::max(0.0, pt.ber - 1.96 * se);
        pt.ci_high = pt.ber + 1.96 * se;
        out.push_back(pt);
    }
    return out;
}

std::uint64_t config_hash(const SimConfig& cfg) {
    // FNV-1a over the resolved configuration text
    std::ostringstream os;
    for (auto g : cfg.code.generators()) os << g << ",";
    os << "|" << (cfg.pattern ? cfg.pattern->to_text() : "-") << "|" << cfg.use_random_mux << "|"
       << static_cast<int>(cfg.rmux_kind) << "|" << (cfg.punct ? cfg.punct->period : 0) << "|M"
       << cfg.constellation.M();
    for (double a : cfg.constellation.alphas()) os << "," << a;
    os << "|f" << cfg.channel.fading << "," << cfg.channel.m << "|N" << cfg.N_c << "|s" << cfg.seed
       << "|z" << cfg.all_zero_info << "|u" << cfg.uncoded;
    std::uint64_t h = 1469598103934665603ULL;
    for (char ch : os.str()) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ULL;
    }
    return h;
}

std::string ber_sweep_csv(const std::vector<BerPoint>& points, std::uint64_t hash) {
    std::ostringstream os;
    os << "gamma_dB,ber,ci_low,ci_high,bits,errors,config_hash\n";
    os.precision(12);
    for (const auto& p : points)
        os << p.gamma_bar_dB << "," << p.ber << "," << p.ci_low << "," << p.ci_high << ","
           << p.bits << "," << p.errors << "," << std::hex << hash << std::dec << "\n";
    return os.str();
}

}  // namespace hqam
