#include "hqam/convcode.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace hqam {

namespace {

std::uint32_t parse_octal(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty generator");
    std::uint32_t v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '7') throw std::invalid_argument("bad octal digit in generator");
        v = v * 8 + static_cast<std::uint32_t>(ch - '0');
    }
    return v;
}

}  // namespace

ConvCode ConvCode::from_octal(const std::vector<std::string>& generators) {
    if (generators.empty()) throw std::invalid_argument("need at least one generator");
    ConvCode c;
    int K = 1;
    for (const auto& g : generators) {
        const std::uint32_t v = parse_octal(g);
        if (v == 0) throw std::invalid_argument("zero generator polynomial");
        c.gens_.push_back(v);
        K = std::max(K, static_cast<int>(std::bit_width(v)));
    }
    c.K_ = K;
    // normalize so bit K-1 is the coefficient of the current input
    return c;
}

ConvCode ConvCode::from_octal(const std::string& generators) {
    std::vector<std::string> parts;
    std::stringstream ss(generators);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return from_octal(parts);
}

Trellis::Trellis(const ConvCode& code) {
    const int K = code.constraint_length();
    num_states_ = 1 << (K - 1);
    n_ = code.n();
    next_.resize(2 * num_states_);
    out_.resize(2 * num_states_);
    outw_.resize(2 * num_states_);
    for (int s = 0; s < num_states_; ++s) {
        for (int b = 0; b < 2; ++b) {
            const std::uint32_t reg = (static_cast<std::uint32_t>(b) << (K - 1)) |
                                      static_cast<std::uint32_t>(s);
            std::uint32_t out = 0;
            for (int p = 0; p < n_; ++p) {
                const int bit = std::popcount(reg & code.generators()[p]) & 1;
                out |= static_cast<std::uint32_t>(bit) << p;
            }
            next_[2 * s + b] = static_cast<int>(reg >> 1);
            out_[2 * s + b] = out;
            outw_[2 * s + b] = std::popcount(out);
        }
    }
}

std::vector<std::vector<std::uint8_t>> encode(const ConvCode& code,
                                              const std::vector<std::uint8_t>& info) {
    const Trellis tr(code);
    const int n = code.n();
    const std::size_t N = info.size();
    std::vector<std::vector<std::uint8_t>> out(n, std::vector<std::uint8_t>(N, 0));
    int state = 0;
    for (std::size_t t = 0; t < N; ++t) {
        const int b = info[t] & 1;
        const std::uint32_t bits = tr.output(state, b);
        for (int p = 0; p < n; ++p) out[p][t] = static_cast<std::uint8_t>((bits >> p) & 1);
        state = tr.next_state(state, b);
    }
    return out;
}

std::optional<int> free_distance(const ConvCode& code, int cap) {
    if (cap < 1) throw std::invalid_argument("cap must be >= 1");
    const Trellis tr(code);
    const int S = tr.num_states();
    // Dijkstra on accumulated output weight from the first diverging branch
    // back to the zero state.
    const int INF = std::numeric_limits<int>::max();
    std::vector<int> dist(S, INF);
    using Node = std::pair<int, int>;  // (weight, state)
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> pq;
    {
        const int s0 = tr.next_state(0, 1);
        const int w0 = tr.output_weight(0, 1);
        if (s0 == 0) return w0 <= cap ? std::optional<int>(w0) : std::nullopt;
        dist[s0] = w0;
        pq.emplace(w0, s0);
    }
    int best = INF;
    while (!pq.empty()) {
        auto [w, s] = pq.top();
        pq.pop();
        if (w > dist[s] || w > cap || w >= best) continue;
        for (int b = 0; b < 2; ++b) {
            const int ns = tr.next_state(s, b);
            const int nw = w + tr.output_weight(s, b);
            if (ns == 0) {
                best = std::min(best, nw);
            } else if (nw < dist[ns]) {
                dist[ns] = nw;
                pq.emplace(nw, ns);
            }
        }
    }
    if (best == INF || best > cap) return std::nullopt;
    return best;
}

std::vector<std::uint8_t> viterbi_decode(const Trellis& tr,
                                         const std::vector<std::vector<double>>& llrs) {
    const int n = tr.n();
    if (static_cast<int>(llrs.size()) != n)
        throw std::invalid_argument("llr row count does not match code outputs");
    const std::size_t N = llrs.empty() ? 0 : llrs[0].size();
    for (const auto& row : llrs)
        if (row.size() != N) throw std::invalid_argument("ragged llr matrix");

    const int S = tr.num_states();
    const double NEG = -std::numeric_limits<double>::infinity();
    std::vector<double> metric(S, NEG), next_metric(S);
    metric[0] = 0.0;  // encoder starts in the zero state
    std::vector<std::uint8_t> from_input(N * S);
    std::vector<int> from_state(N * S);

    for (std::size_t t = 0; t < N; ++t) {
        std::fill(next_metric.begin(), next_metric.end(), NEG);
        for (int s = 0; s < S; ++s) {
            if (metric[s] == NEG) continue;
            for (int b = 0; b < 2; ++b) {
                double m = metric[s];
                for (int p = 1; p <= n; ++p) {
                    const double l = llrs[p - 1][t];
                    m += tr.output_bit(s, b, p) ? -l : l;
                }
                const int ns = tr.next_state(s, b);
                // strictly-greater keeps the first (smaller-state) candidate
                if (m > next_metric[ns]) {
                    next_metric[ns] = m;
                    from_state[t * S + ns] = s;
                    from_input[t * S + ns] = static_cast<std::uint8_t>(b);
                }
            }
        }
        metric.swap(next_metric);
    }

    int state = 0;
    double best = metric.empty() ? 0.0 : metric[0];
    for (int s = 1; s < S; ++s)
        if (metric[s] > best) {
            best = metric[s];
            state = s;
        }

    std::vector<std::uint8_t> decoded(N);
    for (std::size_t t = N; t-- > 0;) {
        decoded[t] = from_input[t * S + state];
        state = from_state[t * S + state];
    }
    return decoded;
}

PuncturePattern PuncturePattern::parse(const std::string& text, int n) {
    PuncturePattern P;
    P.n = n;
    std::vector<std::string> cols;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) cols.push_back(item);
    if (cols.empty()) throw std::invalid_argument("empty puncture pattern");
    P.period = static_cast<int>(cols.size());
    P.keep.assign(static_cast<std::size_t>(n) * P.period, 0);
    for (int t = 0; t < P.period; ++t) {
        if (static_cast<int>(cols[t].size()) != n)
            throw std::invalid_argument("puncture column length does not match n");
        bool any = false;
        for (int p = 0; p < n; ++p) {
            const char ch = cols[t][p];
            if (ch != '0' && ch != '1') throw std::invalid_argument("puncture pattern is not 0/1");
            P.keep[p * P.period + t] = static_cast<std::uint8_t>(ch - '0');
            any = any || ch == '1';
        }
        if (!any) throw std::invalid_argument("puncture pattern deletes a whole column");
    }
    return P;
}

int PuncturePattern::survivors_per_period() const {
    int c = 0;
    for (std::uint8_t k : keep) c += k;
    return c;
}

std::vector<std::uint8_t> puncture(const std::vector<std::vector<std::uint8_t>>& bits,
                                   const PuncturePattern& P) {
    if (static_cast<int>(bits.size()) != P.n)
        throw std::invalid_argument("bit matrix rows do not match pattern");
    const std::size_t N = bits.empty() ? 0 : bits[0].size();
    if (N % P.period != 0) throw std::invalid_argument("block length not a multiple of period");
    std::vector<std::uint8_t> out;
    out.reserve(N / P.period * P.survivors_per_period());
    for (std::size_t t = 0; t < N; ++t)
        for (int p = 0; p < P.n; ++p)
            if (P.kept(p, static_cast<int>(t))) out.push_back(bits[p][t]);
    return out;
}

std::vector<std::vector<double>> depuncture(const std::vector<double>& llrs,
                                            const PuncturePattern& P) {
    const int per = P.survivors_per_period();
    if (llrs.size() % per != 0)
        throw std::invalid_argument("llr stream length not a multiple of survivors per period");
    const std::size_t N = llrs.size() / per * P.period;
    std::vector<std::vector<double>> out(P.n, std::vector<double>(N, 0.0));
    std::size_t idx = 0;
    for (std::size_t t = 0; t < N; ++t)
        for (int p = 0; p < P.n; ++p)
            if (P.kept(p, static_cast<int>(t))) out[p][t] = llrs[idx++];
    return out;
}

}  // namespace hqam
