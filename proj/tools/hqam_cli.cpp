// Command line front end: constellation dumps, weight spectra, union-bound
// sweeps, Monte Carlo BER sweeps and full design searches, with CSV/JSON
// output suitable for plotting scripts.
//
// Exit codes: 0 success, 2 configuration error, 3 a numerical validity
// warning was escalated by --strict.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hqam/bounds.hpp"
#include "hqam/constellation.hpp"
#include "hqam/convcode.hpp"
#include "hqam/montecarlo.hpp"
#include "hqam/mux.hpp"
#include "hqam/optimizer.hpp"
#include "hqam/spectrum.hpp"
#include "json.hpp"

using namespace hqam;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

struct Manifest {
    std::string command;
    json config = json::object();
    std::vector<std::string> outputs;

    json to_json() const {
        json j;
        j["tool"] = "hqam";
        j["version"] = kVersion;
        j["command"] = command;
        j["config"] = config;
        j["outputs"] = outputs;
        j["config_hash"] = fnv1a(config.dump());
        return j;
    }
};

/// Writes `text` to the path or stdout ("-"). Prepends a commented manifest
/// hash so every artifact can be traced to its configuration.
void emit(const std::string& path, const std::string& text, const Manifest& man, bool csv) {
    std::string payload;
    if (csv)
        payload = "# manifest_hash=" + std::to_string(fnv1a(man.config.dump())) + "\n" + text;
    else
        payload = text;
    if (path.empty() || path == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream f(path);
    if (!f) throw CLI::ValidationError("output", "cannot open " + path);
    f << payload;
}

void write_manifest(const std::string& path, const Manifest& man) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw CLI::ValidationError("manifest", "cannot open " + path);
    f << man.to_json().dump(2) << "\n";
}

Constellation build_constellation(int M, const std::string& alphas_text, bool unchecked) {
    const auto a = alphas_text.empty() ? std::vector<double>{} : parse_csv_doubles(alphas_text);
    return unchecked ? Constellation::build_unchecked(a, M) : Constellation::build(a, M);
}

ChannelModel build_channel(const std::string& channel, double m, double gamma_bar) {
    if (channel == "awgn") return ChannelModel::awgn(gamma_bar);
    if (channel == "nakagami") {
        if (m <= 0.0) throw CLI::ValidationError("--m", "fading needs m > 0");
        return ChannelModel::nakagami(m, gamma_bar);
    }
    throw CLI::ValidationError("--channel", "unknown channel " + channel);
}

std::vector<double> snr_grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (double v = lo; v <= hi + 1e-9; v += step) g.push_back(v);
    return g;
}

// the optimal n=2, q=3 multiplexer text, the worked-example multiplexer
// and the randomized baseline routing table
const char* kMux23Text = "1,2,3/3,2,1";
const char* kExampleMuxText = "1,2,2/1,3,3";
const std::vector<std::vector<double>> kRmuxProbs23 = {
    {0.0, 1.0 / 3.0, 2.0 / 3.0}, {2.0 / 3.0, 1.0 / 3.0, 0.0}};

struct BoundSystem {
    std::string name;
    WeightSpectrum spectrum;
    Constellation constellation = Constellation::build({}, 2);
};

std::string bound_sweep_csv(const std::vector<BoundSystem>& systems, const ChannelModel& ch0,
                            const std::vector<double>& snrs_dB, int k_c, bool* any_warning) {
    std::ostringstream os;
    os << "system,gamma_dB,ub,last_shell,valid\n";
    os.precision(12);
    for (const auto& sys : systems)
        for (double dB : snrs_dB) {
            const auto r =
                union_bound(sys.spectrum, sys.constellation, ch0.at(db_to_linear(dB)), k_c);
            if (r.validity_warning && any_warning) *any_warning = true;
            os << sys.name << "," << dB << "," << r.ub << "," << r.last_shell << ","
               << (r.validity_warning ? 0 : 1) << "\n";
        }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HQAM-BICM design and analysis toolkit"};
    app.require_subcommand(1);
    bool strict = false;
    int jobs = 0;
    if (const char* env = std::getenv("HQAM_JOBS")) jobs = std::atoi(env);
    app.add_flag("--strict", strict, "escalate numerical validity warnings to exit code 3");
    app.add_option("--jobs", jobs, "worker thread cap (default: HQAM_JOBS env or all cores)");
    std::string manifest_path;
    app.add_option("--manifest", manifest_path, "write a run manifest JSON to this path");

    // ---- constellation ----
    auto* c_cmd = app.add_subcommand("constellation", "dump an HPAM constellation");
    int c_M = 8;
    std::string c_alphas, c_out = "-";
    bool c_unchecked = false;
    c_cmd->add_option("--M", c_M, "constellation size");
    c_cmd->add_option("--alphas", c_alphas, "comma separated distance ratios");
    c_cmd->add_flag("--unchecked", c_unchecked, "skip the label-region check");
    c_cmd->add_option("-o,--output", c_out, "output path (- for stdout)");

    // ---- spectrum ----
    auto* s_cmd = app.add_subcommand("spectrum", "weight spectrum of a code + multiplexer");
    std::string s_code = "5,7", s_mux, s_punct, s_out = "-";
    int s_q = 0, s_wmax = 30;
    bool s_example2 = false, s_expected = false;
    std::string s_probs;
    s_cmd->add_option("--code", s_code, "octal generators, e.g. 5,7");
    s_cmd->add_option("--mux", s_mux, "assign matrix '1,2,3/3,2,1' or 'identity'");
    s_cmd->add_option("--q", s_q, "stream count (with --mux identity: 1 = scalar spectrum)");
    s_cmd->add_option("--wmax", s_wmax, "truncation depth");
    s_cmd->add_option("--punct", s_punct, "puncture pattern, e.g. 10,11,01");
    s_cmd->add_flag("--example2", s_example2,
                    "shorthand for --code 5,7 --mux '" + std::string(kExampleMuxText) +
                        "' --wmax 5");
    s_cmd->add_flag("--expected", s_expected, "expected spectrum of a randomized mux");
    s_cmd->add_option("--probs", s_probs, "row-major n*q routing probabilities for --expected");
    s_cmd->add_option("-o,--output", s_out, "output path");

    // ---- bound ----
    auto* b_cmd = app.add_subcommand("bound", "union bound sweep");
    std::string b_code = "5,7", b_mux = "2,2/1,1", b_alphas, b_channel = "awgn", b_out = "-";
    std::string b_snrs = "6,7,8,9,10,11,12", b_preset, b_baseline;
    double b_m = 1.0;
    int b_M = 4, b_wmax = 125;
    b_cmd->add_option("--code", b_code, "octal generators");
    b_cmd->add_option("--mux", b_mux, "assign matrix");
    b_cmd->add_option("--M", b_M, "constellation size");
    b_cmd->add_option("--alphas", b_alphas, "distance ratios");
    b_cmd->add_option("--channel", b_channel, "awgn | nakagami");
    b_cmd->add_option("--m", b_m, "Nakagami shape");
    b_cmd->add_option("--snr", b_snrs, "comma separated average SNRs [dB]");
    b_cmd->add_option("--wmax", b_wmax, "truncation depth");
    b_cmd->add_option("--baseline", b_baseline,
                      "add a baseline system: sinterleaver | rmux | punctured");
    b_cmd->add_option("--preset", b_preset, "fig3-awgn | fig3-fading | fig6-awgn | fig6-fading | "
                                            "fig7-awgn | fig8-fading");
    b_cmd->add_option("-o,--output", b_out, "output path");

    // ---- simulate ----
    auto* m_cmd = app.add_subcommand("simulate", "Monte Carlo BER sweep");
    std::string m_code = "5,7", m_mux = "2,2/1,1", m_alphas, m_channel = "awgn", m_out = "-";
    std::string m_snrs = "4,5,6,7,8", m_preset, m_baseline, m_punct;
    double m_m = 1.0;
    int m_M = 4;
    std::size_t m_Nc = 24000, m_min_err = 100, m_max_blocks = 200000;
    std::uint64_t m_seed = 1;
    bool m_uncoded = false;
    m_cmd->add_option("--code", m_code, "octal generators");
    m_cmd->add_option("--mux", m_mux, "assign matrix");
    m_cmd->add_option("--M", m_M, "constellation size");
    m_cmd->add_option("--alphas", m_alphas, "distance ratios");
    m_cmd->add_option("--channel", m_channel, "awgn | nakagami");
    m_cmd->add_option("--m", m_m, "Nakagami shape");
    m_cmd->add_option("--snr", m_snrs, "comma separated average SNRs [dB]");
    m_cmd->add_option("--Nc", m_Nc, "coded block length");
    m_cmd->add_option("--min-errors", m_min_err, "bit errors per point before stopping");
    m_cmd->add_option("--max-blocks", m_max_blocks, "block cap per point");
    m_cmd->add_option("--seed", m_seed, "master seed");
    m_cmd->add_flag("--uncoded", m_uncoded, "uncoded 2-PAM reference");
    m_cmd->add_option("--baseline", m_baseline, "sinterleaver | rmux | punctured");
    m_cmd->add_option("--punct", m_punct, "puncture pattern for --baseline punctured");
    m_cmd->add_option("--preset", m_preset, "fig6-awgn | fig6-fading | fig7-awgn | fig8-fading");
    m_cmd->add_option("-o,--output", m_out, "output path");

    // ---- optimize ----
    auto* o_cmd = app.add_subcommand("optimize", "joint multiplexer + constellation search");
    std::string o_code = "5,7", o_channel = "awgn", o_snrs = "10,11,12,13,14,15", o_preset;
    std::string o_out = "-";
    double o_m = 1.0, o_grid = 0.01, o_target = 0.0;
    int o_M = 8, o_wmax = 30, o_J = 0;
    bool o_table = false;
    o_cmd->add_option("--code", o_code, "octal generators");
    o_cmd->add_option("--M", o_M, "constellation size");
    o_cmd->add_option("--channel", o_channel, "awgn | nakagami");
    o_cmd->add_option("--m", o_m, "Nakagami shape");
    o_cmd->add_option("--snr", o_snrs, "average SNRs [dB], one design card each");
    o_cmd->add_option("--wmax", o_wmax, "truncation depth");
    o_cmd->add_option("--grid-step", o_grid, "alpha grid step");
    o_cmd->add_option("--J", o_J, "multiplexer period (default q)");
    o_cmd->add_option("--target-ub", o_target,
                      "fading only: freeze the design where the minimized bound hits this value");
    o_cmd->add_flag("--table", o_table, "include the full ranked design table");
    o_cmd->add_option("--preset", o_preset, "fig4-awgn | fig4-fading | fig5-awgn | fig5-fading");
    o_cmd->add_option("-o,--output", o_out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    bool warning = false;
    Manifest man;
    try {
        if (*c_cmd) {
            man.command = "constellation";
            man.config = {{"M", c_M}, {"alphas", c_alphas}, {"unchecked", c_unchecked}};
            if (!c_unchecked && !c_alphas.empty()) {
                const auto rep = validate_region(parse_csv_doubles(c_alphas));
                if (!rep.valid) {
                    std::cerr << "error: alphas outside the labeling region: " << rep.violation
                              << "\n";
                    return 2;
                }
            }
            const auto c = build_constellation(c_M, c_alphas, c_unchecked);
            emit(c_out, c.to_json() + "\n", man, false);
            man.outputs.push_back(c_out);
        } else if (*s_cmd) {
            man.command = "spectrum";
            if (s_example2) {
                s_code = "5,7";
                s_mux = kExampleMuxText;
                s_q = 3;
                s_wmax = 5;
            }
            man.config = {{"code", s_code}, {"mux", s_mux},   {"q", s_q},
                          {"wmax", s_wmax}, {"punct", s_punct}, {"expected", s_expected}};
            const auto code = ConvCode::from_octal(s_code);
            const Trellis tr(code);
            std::optional<PuncturePattern> P;
            if (!s_punct.empty()) P = PuncturePattern::parse(s_punct, code.n());
            WeightSpectrum spec;
            if (s_expected) {
                if (s_probs.empty()) throw CLI::ValidationError("--probs", "required");
                const auto flat = parse_csv_doubles(s_probs);
                if (s_q <= 0 || flat.size() % s_q != 0)
                    throw CLI::ValidationError("--probs", "need n*q values and --q");
                std::vector<std::vector<double>> probs;
                for (std::size_t i = 0; i < flat.size(); i += s_q)
                    probs.emplace_back(flat.begin() + i, flat.begin() + i + s_q);
                spec = expected_ewds(tr, probs, s_wmax, P ? &*P : nullptr);
            } else if (s_mux.empty() || s_mux == "identity") {
                spec = scalar_spectrum(tr, s_wmax, P ? &*P : nullptr);
            } else {
                if (s_q <= 0) throw CLI::ValidationError("--q", "required with --mux");
                spec = compute_ewds(tr, DMuxPattern::parse(s_mux, s_q), s_wmax);
            }
            if (spec.below_free_distance) {
                std::cerr << "warning: wmax is below the free distance, spectrum is empty\n";
                warning = true;
            }
            emit(s_out, spec.to_csv(), man, true);
            man.outputs.push_back(s_out);
        } else if (*b_cmd) {
            man.command = "bound";
            const bool fading_preset = b_preset.find("fading") != std::string::npos;
            if (!b_preset.empty() && fading_preset && b_channel == "awgn" &&
                b_cmd->count("--channel"))
                throw CLI::ValidationError("--preset", "fading preset with an awgn channel flag");
            std::string csv;
            if (b_preset == "fig3-awgn" || b_preset == "fig3-fading") {
                // UB versus alpha_1 for every n=q=2 multiplexer class
                const auto code = ConvCode::from_octal("5,7");
                const Trellis tr(code);
                const auto ch = b_preset == "fig3-awgn"
                                    ? ChannelModel::awgn(db_to_linear(10.0))
                                    : ChannelModel::nakagami(2.0, db_to_linear(15.0));
                const auto patterns = enumerate_canonical(2, 2, 2);
                std::ostringstream os;
                os << "mux,alpha1,ub,last_shell,valid\n";
                os.precision(12);
                for (const auto& p : patterns) {
                    const auto spec = compute_ewds(tr, p, 125);
                    for (double a = 0.0; a <= 0.5 + 1e-9; a += 0.01) {
                        const auto c = Constellation::build({a}, 4);
                        const auto r = union_bound(spec, c, ch, code.k_c());
                        warning = warning || r.validity_warning;
                        os << p.to_text() << "," << a << "," << r.ub << "," << r.last_shell << ","
                           << (r.validity_warning ? 0 : 1) << "\n";
                    }
                }
                csv = os.str();
                man.config = {{"preset", b_preset}};
            } else if (!b_preset.empty() && b_preset != "fig6-awgn" && b_preset != "fig6-fading" &&
                       b_preset != "fig7-awgn" && b_preset != "fig8-fading") {
                throw CLI::ValidationError("--preset", "unknown preset " + b_preset);
            } else if (!b_preset.empty()) {
                const auto code = ConvCode::from_octal("5,7");
                const Trellis tr(code);
                std::vector<BoundSystem> systems;
                ChannelModel ch = ChannelModel::awgn(1.0);
                std::vector<double> snrs;
                if (b_preset == "fig6-awgn" || b_preset == "fig6-fading") {
                    // 1 bit/dimension: optimal design vs 4-PAM baselines
                    const bool fading = b_preset == "fig6-fading";
                    ch = fading ? ChannelModel::nakagami(b_m, 1.0) : ChannelModel::awgn(1.0);
                    snrs = snr_grid(fading ? 10.0 : 5.0, fading ? 40.0 : 12.0, 1.0);
                    OptimizeOptions opt;
                    opt.wmax = 125;
                    opt.jobs = jobs;
                    const auto mid = ch.at(db_to_linear(snrs[snrs.size() / 2]));
                    const auto best = optimize(mid, code, 4, opt);
                    systems.push_back({"optimal", compute_ewds(tr, best.pattern, 125),
                                       Constellation::build(best.alphas, 4)});
                    systems.push_back({"bicm-s",
                                       expected_ewds(tr, {{0.5, 0.5}, {0.5, 0.5}}, 125),
                                       Constellation::build({0.5}, 4)});
                } else {
                    // 1.5 bit/dimension: frozen designs vs 8-PAM baselines
                    const bool fading = b_preset == "fig8-fading";
                    ch = fading ? ChannelModel::nakagami(b_m, 1.0) : ChannelModel::awgn(1.0);
                    snrs = snr_grid(fading ? 10.0 : 8.0, fading ? 45.0 : 18.0, 0.5);
                    const char* mux = kMux23Text;
                    std::vector<double> alphas = {0.45, 0.0};
                    if (fading && b_m == 1.0) {
                        mux = "2,3,3/2,1,1";
                        alphas = {0.48, 0.20};
                    } else if (fading && b_m == 2.0) {
                        mux = "2,3,3/2,1,1";
                        alphas = {0.47, 0.17};
                    } else if (fading && b_m == 5.0) {
                        alphas = {0.42, 0.01};
                    }
                    systems.push_back({"optimal",
                                       compute_ewds(tr, DMuxPattern::parse(mux, 3), 30),
                                       Constellation::build(alphas, 8)});
                    const std::vector<std::vector<double>> uni(2, std::vector<double>(3, 1.0 / 3));
                    systems.push_back({"bicm-s", expected_ewds(tr, uni, 30),
                                       Constellation::build({0.5, 0.25}, 8)});
                    systems.push_back({"rmux", expected_ewds(tr, kRmuxProbs23, 30),
                                       Constellation::build({0.5, 0.25}, 8)});
                    if (!fading) {
                        const auto P = PuncturePattern::parse("10,11,01", 2);
                        systems.push_back({"punctured-bicm-s",
                                           expected_ewds(tr, {{0.5, 0.5}, {0.5, 0.5}}, 30, &P),
                                           Constellation::build({0.5}, 4)});
                    }
                }
                csv = bound_sweep_csv(systems, ch, snrs, code.k_c(), &warning);
                man.config = {{"preset", b_preset}, {"m", b_m}};
            } else {
                const auto code = ConvCode::from_octal(b_code);
                const Trellis tr(code);
                const auto c = build_constellation(b_M, b_alphas, false);
                std::vector<BoundSystem> systems;
                if (b_baseline.empty()) {
                    systems.push_back({"dmux",
                                       compute_ewds(tr, DMuxPattern::parse(b_mux, c.q()), b_wmax),
                                       c});
                } else if (b_baseline == "sinterleaver") {
                    const std::vector<std::vector<double>> uni(
                        code.n(), std::vector<double>(c.q(), 1.0 / c.q()));
                    systems.push_back({"bicm-s", expected_ewds(tr, uni, b_wmax), c});
                } else if (b_baseline == "rmux") {
                    if (c.q() != 3 || code.n() != 2)
                        throw CLI::ValidationError("--baseline", "rmux preset table is n=2, q=3");
                    systems.push_back({"rmux", expected_ewds(tr, kRmuxProbs23, b_wmax), c});
                } else if (b_baseline == "punctured") {
                    const auto P = PuncturePattern::parse("10,11,01", code.n());
                    const std::vector<std::vector<double>> uni(
                        code.n(), std::vector<double>(c.q(), 1.0 / c.q()));
                    systems.push_back({"punctured-bicm-s", expected_ewds(tr, uni, b_wmax, &P), c});
                } else {
                    throw CLI::ValidationError("--baseline", "unknown baseline " + b_baseline);
                }
                const auto ch = build_channel(b_channel, b_m, 1.0);
                csv = bound_sweep_csv(systems, ch, parse_csv_doubles(b_snrs), code.k_c(),
                                      &warning);
                man.config = {{"code", b_code},   {"mux", b_mux},     {"M", b_M},
                              {"alphas", b_alphas}, {"channel", b_channel}, {"m", b_m},
                              {"snr", b_snrs},    {"wmax", b_wmax},   {"baseline", b_baseline}};
            }
            emit(b_out, csv, man, true);
            man.outputs.push_back(b_out);
        } else if (*m_cmd) {
            man.command = "simulate";
            SimConfig cfg;
            std::vector<double> snrs = parse_csv_doubles(m_snrs);
            if (!m_preset.empty()) {
                if (m_preset == "fig6-awgn" || m_preset == "fig6-fading") {
                    cfg.code = ConvCode::from_octal("5,7");
                    cfg.pattern = DMuxPattern::parse("2,2/1,1", 2);
                    cfg.constellation = Constellation::build({0.45}, 4);
                    cfg.channel = m_preset == "fig6-fading"
                                      ? ChannelModel::nakagami(m_m, 1.0)
                                      : ChannelModel::awgn(1.0);
                    snrs = snr_grid(m_preset == "fig6-fading" ? 10.0 : 5.0,
                                    m_preset == "fig6-fading" ? 40.0 : 11.0, 1.0);
                } else if (m_preset == "fig7-awgn" || m_preset == "fig8-fading") {
                    cfg.code = ConvCode::from_octal("5,7");
                    const bool fading = m_preset == "fig8-fading";
                    std::string mux = kMux23Text;
                    std::vector<double> alphas = {0.45, 0.0};
                    if (fading && m_m == 1.0) {
                        mux = "2,3,3/2,1,1";
                        alphas = {0.48, 0.20};
                    } else if (fading && m_m == 2.0) {
                        mux = "2,3,3/2,1,1";
                        alphas = {0.47, 0.17};
                    } else if (fading && m_m == 5.0) {
                        alphas = {0.42, 0.01};
                    }
                    cfg.pattern = DMuxPattern::parse(mux, 3);
                    cfg.constellation = Constellation::build(alphas, 8);
                    cfg.channel =
                        fading ? ChannelModel::nakagami(m_m, 1.0) : ChannelModel::awgn(1.0);
                    snrs = snr_grid(fading ? 12.0 : 9.0, fading ? 42.0 : 16.0, 1.0);
                } else {
                    throw CLI::ValidationError("--preset", "unknown preset " + m_preset);
                }
            } else {
                cfg.code = ConvCode::from_octal(m_code);
                cfg.constellation = build_constellation(m_M, m_alphas, false);
                cfg.channel = build_channel(m_channel, m_m, 1.0);
                cfg.uncoded = m_uncoded;
                if (!m_uncoded) {
                    if (m_baseline.empty()) {
                        cfg.pattern = DMuxPattern::parse(m_mux, cfg.constellation.q());
                    } else if (m_baseline == "sinterleaver") {
                        cfg.use_random_mux = true;
                        cfg.rmux_kind = RandomMuxKind::SInterleaver;
                    } else if (m_baseline == "rmux") {
                        cfg.use_random_mux = true;
                        cfg.rmux_kind = RandomMuxKind::RMux;
                        cfg.rmux_probs = kRmuxProbs23;
                    } else if (m_baseline == "punctured") {
                        cfg.use_random_mux = true;
                        cfg.rmux_kind = RandomMuxKind::SInterleaver;
                        cfg.punct = PuncturePattern::parse(
                            m_punct.empty() ? "10,11,01" : m_punct, cfg.code.n());
                    } else {
                        throw CLI::ValidationError("--baseline", "unknown baseline " + m_baseline);
                    }
                }
            }
            cfg.N_c = m_Nc;
            cfg.min_error_bits = m_min_err;
            cfg.max_blocks = m_max_blocks;
            cfg.seed = m_seed;
            cfg.jobs = jobs;
            man.config = {{"preset", m_preset}, {"seed", m_seed},      {"Nc", m_Nc},
                          {"channel", m_channel}, {"m", m_m},          {"baseline", m_baseline},
                          {"uncoded", m_uncoded}, {"min_errors", m_min_err}};
            const auto points = run_ber_sweep(cfg, snrs);
            emit(m_out, ber_sweep_csv(points, config_hash(cfg)), man, true);
            man.outputs.push_back(m_out);
        } else if (*o_cmd) {
            man.command = "optimize";
            const bool fading_preset = o_preset.find("fading") != std::string::npos;
            if (!o_preset.empty() && fading_preset && o_channel == "awgn" &&
                o_cmd->count("--channel"))
                throw CLI::ValidationError("--preset", "fading preset with an awgn channel flag");
            json cards = json::array();
            OptimizeOptions opt;
            opt.jobs = jobs;
            opt.keep_table = o_table;
            if (o_preset == "fig4-awgn" || o_preset == "fig4-fading") {
                opt.wmax = 125;
                const auto code = ConvCode::from_octal("5,7");
                const auto space = build_search_space(code, 4, opt);
                const std::vector<double> ms =
                    o_preset == "fig4-awgn" ? std::vector<double>{0.0}
                                            : std::vector<double>{1.0, 5.0, 20.0};
                for (double m : ms)
                    for (double dB : snr_grid(o_preset == "fig4-awgn" ? 6.0 : 10.0,
                                              o_preset == "fig4-awgn" ? 14.0 : 35.0, 1.0)) {
                        const auto ch = m == 0.0 ? ChannelModel::awgn(db_to_linear(dB))
                                                 : ChannelModel::nakagami(m, db_to_linear(dB));
                        cards.push_back(
                            json::parse(optimize_in_space(ch, space, code.k_c(), opt).to_json()));
                    }
            } else if (o_preset == "fig5-awgn") {
                opt.wmax = 30;
                opt.grid_step = 0.01;
                const auto code = ConvCode::from_octal("5,7");
                const auto space = build_search_space(code, 8, opt);
                for (double dB : snr_grid(10.0, 15.0, 1.0))
                    cards.push_back(json::parse(
                        optimize_in_space(ChannelModel::awgn(db_to_linear(dB)), space,
                                          code.k_c(), opt)
                            .to_json()));
            } else if (o_preset == "fig5-fading") {
                opt.wmax = 30;
                opt.grid_step = 0.01;
                const auto code = ConvCode::from_octal("5,7");
                for (double m : {1.0, 2.0, 5.0})
                    cards.push_back(
                        json::parse(optimize_fading_fixed(m, 1e-7, code, 8, opt).to_json()));
            } else if (!o_preset.empty()) {
                throw CLI::ValidationError("--preset", "unknown preset " + o_preset);
            } else {
                opt.wmax = o_wmax;
                opt.grid_step = o_grid;
                opt.J = o_J;
                const auto code = ConvCode::from_octal(o_code);
                if (o_target > 0.0) {
                    if (o_channel != "nakagami")
                        throw CLI::ValidationError("--target-ub", "needs --channel nakagami");
                    cards.push_back(json::parse(
                        optimize_fading_fixed(o_m, o_target, code, o_M, opt).to_json()));
                } else {
                    const auto space = build_search_space(code, o_M, opt);
                    for (double dB : parse_csv_doubles(o_snrs)) {
                        const auto ch = build_channel(o_channel, o_m, db_to_linear(dB));
                        cards.push_back(
                            json::parse(optimize_in_space(ch, space, code.k_c(), opt).to_json()));
                    }
                }
            }
            for (const auto& card : cards)
                if (card.contains("ub") && card["ub"].get<double>() > 1e-3) warning = true;
            man.config = {{"preset", o_preset}, {"code", o_code},     {"M", o_M},
                          {"channel", o_channel}, {"m", o_m},         {"wmax", o_wmax},
                          {"grid_step", o_grid},  {"target_ub", o_target}};
            emit(o_out, cards.dump(2) + "\n", man, false);
            man.outputs.push_back(o_out);
        }
        write_manifest(manifest_path, man);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (warning && strict) {
        std::cerr << "warning escalated: results outside the trusted bound range\n";
        return 3;
    }
    return 0;
}
