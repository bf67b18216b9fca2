#include "hqam/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace hqam {

namespace {

using u128 = unsigned __int128;

struct Acc {
    u128 paths = 0;
    u128 insum = 0;     // sum of input Hamming weights over the paths
    double dpaths = 0;  // floating mirrors, used past 128-bit range
    double dinsum = 0;
    bool overflow = false;

    void add(const Acc& o) {
        constexpr u128 kGuard = u128(1) << 126;
        if (paths > kGuard - o.paths || insum > kGuard - o.insum) overflow = true;
        paths += o.paths;
        insum += o.insum;
        dpaths += o.dpaths;
        dinsum += o.dinsum;
        overflow = overflow || o.overflow;
    }
};

// key packs the trellis state (12 bits) and the per-stream weights
// (8 bits each); good for wmax <= 255 and q <= 6
std::uint64_t pack(int state, const int* w, int q) {
    std::uint64_t k = static_cast<std::uint64_t>(state);
    for (int i = 0; i < q; ++i) k |= static_cast<std::uint64_t>(w[i]) << (12 + 8 * i);
    return k;
}

void unpack_w(std::uint64_t key, int* w, int q) {
    for (int i = 0; i < q; ++i) w[i] = static_cast<int>((key >> (12 + 8 * i)) & 0xff);
}

/// Weight-capped first-return path search. `assign[p][c]` routes the output
/// bit of generator p+1 at period column c: 0 drops the bit, 1..q_eff counts
/// it toward that stream. Returns the phase-summed (not yet averaged)
/// accumulators per weight vector.
std::map<std::vector<int>, Acc> search_paths(const Trellis& tr,
                                             const std::vector<std::vector<int>>& assign,
                                             int q_eff, int wmax, std::size_t frontier_cap) {
    const int n = tr.n();
    const int J = static_cast<int>(assign[0].size());
    if (static_cast<int>(assign.size()) != n)
        throw std::invalid_argument("assign rows do not match code outputs");
    if (q_eff > 6 || wmax > 255) throw std::invalid_argument("spectrum search limits exceeded");

    std::map<std::vector<int>, Acc> totals;
    int w[6];

    for (int phase = 0; phase < J; ++phase) {
        std::unordered_map<std::uint64_t, Acc> frontier;
        std::unordered_map<std::uint64_t, Acc> next;
        const std::size_t max_steps = static_cast<std::size_t>(wmax + 2) * tr.num_states() + 64 + J;

        auto extend = [&](int state, const int* wcur, const Acc& acc, int col,
                          std::unordered_map<std::uint64_t, Acc>& out, int bmin) {
            for (int b = bmin; b < 2; ++b) {
                int wn[6];
                std::copy(wcur, wcur + q_eff, wn);
                int total = 0;
                const std::uint32_t bits = tr.output(state, b);
                for (int p = 0; p < n; ++p) {
                    if ((bits >> p) & 1) {
                        const int k = assign[p][col];
                        if (k > 0) ++wn[k - 1];
                    }
                }
                for (int i = 0; i < q_eff; ++i) total += wn[i];
                if (total > wmax) continue;
                Acc a = acc;
                if (b) {
                    constexpr u128 kGuard = u128(1) << 126;
                    if (a.insum > kGuard - a.paths) a.overflow = true;
                    a.insum += a.paths;
                    a.dinsum += a.dpaths;
                }
                const int ns = tr.next_state(state, b);
                if (ns == 0) {
                    totals[std::vector<int>(wn, wn + q_eff)].add(a);
                } else {
                    auto& slot = out[pack(ns, wn, q_eff)];
                    slot.add(a);
                }
            }
        };

        // diverging step: input 1 from the zero state
        {
            Acc seed;
            seed.paths = 1;
            seed.dpaths = 1.0;
            int wz[6] = {0, 0, 0, 0, 0, 0};
            extend(0, wz, seed, phase, frontier, 1);
        }

        std::size_t step = 1;
        while (!frontier.empty()) {
            if (++step > max_steps)
                throw std::runtime_error("spectrum search did not terminate (catastrophic code?)");
            if (frontier.size() > frontier_cap)
                throw std::runtime_error("spectrum search frontier overflow");
            next.clear();
            const int col = static_cast<int>((phase + step - 1) % J);
            for (const auto& [key, acc] : frontier) {
                const int state = static_cast<int>(key & 0xfff);
                unpack_w(key, w, q_eff);
                extend(state, w, acc, col, next, 0);
            }
            frontier.swap(next);
        }
    }
    return totals;
}

Beta average_over_phases(const Acc& acc, int J) {
    Beta b;
    b.value = acc.dinsum / J;
    if (!acc.overflow && acc.insum <= static_cast<u128>(INT64_MAX)) {
        long long num = static_cast<long long>(acc.insum);
        long long den = J;
        const long long g = std::gcd(num, den);
        b.num = num / g;
        b.den = den / g;
        b.value = static_cast<double>(b.num) / static_cast<double>(b.den);
    }
    return b;
}

std::vector<std::vector<int>> drop_assign(const PuncturePattern* punct, int n, int stream_base) {
    // assign matrix sending output p's surviving bits to stream p+stream_base
    const int J = punct ? punct->period : 1;
    std::vector<std::vector<int>> a(n, std::vector<int>(J));
    for (int p = 0; p < n; ++p)
        for (int c = 0; c < J; ++c)
            a[p][c] = (!punct || punct->kept(p, c)) ? (stream_base ? p + 1 : 1) : 0;
    return a;
}

double multinomial_coeff(int total, const std::vector<int>& parts) {
    double v = std::lgamma(total + 1.0);
    for (int p : parts) v -= std::lgamma(p + 1.0);
    return std::exp(v);
}

}  // namespace

double WeightSpectrum::total_weight_marginal(int d) const {
    double s = 0.0;
    for (const auto& [w, b] : entries) {
        int total = 0;
        for (int wk : w) total += wk;
        if (total == d) s += b.value;
    }
    return s;
}

std::string WeightSpectrum::to_csv() const {
    std::vector<std::pair<std::vector<int>, Beta>> rows(entries.begin(), entries.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        const int ta = std::accumulate(a.first.begin(), a.first.end(), 0);
        const int tb = std::accumulate(b.first.begin(), b.first.end(), 0);
        if (ta != tb) return ta < tb;
        return a.first < b.first;
    });
    std::ostringstream os;
    for (int k = 1; k <= q; ++k) os << "w_" << k << ",";
    os << "beta_numerator,beta_denominator\n";
    for (const auto& [w, b] : rows) {
        for (int wk : w) os << wk << ",";
        if (b.exact())
            os << b.num << "," << b.den << "\n";
        else
            os << b.value << ",0\n";
    }
    return os.str();
}

WeightSpectrum compute_ewds(const Trellis& trellis, const DMuxPattern& pattern, int wmax,
                            std::size_t frontier_cap) {
    if (trellis.n() != pattern.n)
        throw std::invalid_argument("pattern n does not match code outputs");
    WeightSpectrum s;
    s.q = pattern.q;
    s.wmax = wmax;
    s.J = pattern.J;
    auto totals = search_paths(trellis, pattern.assign, pattern.q, wmax, frontier_cap);
    for (const auto& [w, acc] : totals) s.entries.emplace(w, average_over_phases(acc, pattern.J));
    s.below_free_distance = s.entries.empty();
    return s;
}

WeightSpectrum scalar_spectrum(const Trellis& trellis, int wmax, const PuncturePattern* punct,
                               std::size_t frontier_cap) {
    WeightSpectrum s;
    s.q = 1;
    s.wmax = wmax;
    s.J = punct ? punct->period : 1;
    auto totals =
        search_paths(trellis, drop_assign(punct, trellis.n(), 0), 1, wmax, frontier_cap);
    for (const auto& [w, acc] : totals) s.entries.emplace(w, average_over_phases(acc, s.J));
    s.below_free_distance = s.entries.empty();
    return s;
}

WeightSpectrum expected_ewds(const Trellis& trellis, const std::vector<std::vector<double>>& probs,
                             int wmax, const PuncturePattern* punct, std::size_t frontier_cap) {
    const int n = trellis.n();
    if (static_cast<int>(probs.size()) != n)
        throw std::invalid_argument("probability table needs n rows");
    const int q = probs.empty() ? 0 : static_cast<int>(probs[0].size());
    for (const auto& row : probs) {
        if (static_cast<int>(row.size()) != q)
            throw std::invalid_argument("ragged probability table");
        double sum = 0.0;
        for (double p : row) {
            if (p < 0.0) throw std::invalid_argument("negative probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("probability row does not sum to 1");
    }

    const int J = punct ? punct->period : 1;
    auto totals = search_paths(trellis, drop_assign(punct, n, 1), n, wmax, frontier_cap);

    bool deterministic = true;
    for (const auto& row : probs)
        for (double p : row) deterministic = deterministic && (p == 0.0 || p == 1.0);

    WeightSpectrum s;
    s.q = q;
    s.wmax = wmax;
    s.J = J;

    for (const auto& [v, acc] : totals) {
        const Beta bv = average_over_phases(acc, J);
        if (deterministic) {
            std::vector<int> w(q, 0);
            for (int p = 0; p < n; ++p)
                for (int k = 0; k < q; ++k)
                    if (probs[p][k] == 1.0) w[k] += v[p];
            auto& slot = s.entries[w];
            if (slot.den == 0 && slot.value == 0.0) {
                slot = bv;
            } else if (slot.exact() && bv.exact()) {
                const long long den = std::lcm(slot.den, bv.den);
                slot.num = slot.num * (den / slot.den) + bv.num * (den / bv.den);
                slot.den = den;
                const long long g = std::gcd(slot.num, slot.den);
                slot.num /= g;
                slot.den /= g;
                slot.value = static_cast<double>(slot.num) / static_cast<double>(slot.den);
            } else {
                slot.den = 0;
                slot.value += bv.value;
            }
            continue;
        }
        // multinomial spread of each output's surviving bits over the streams
        std::map<std::vector<int>, double> dist;
        dist.emplace(std::vector<int>(q, 0), 1.0);
        for (int p = 0; p < n; ++p) {
            if (v[p] == 0) continue;
            std::map<std::vector<int>, double> ndist;
            std::vector<int> parts(q, 0);
            // enumerate compositions of v[p] into q parts
            std::vector<std::pair<std::vector<int>, double>> comps;
            std::function<void(int, int)> rec = [&](int k, int left) {
                if (k == q - 1) {
                    parts[k] = left;
                    double pr = multinomial_coeff(v[p], parts);
                    for (int i = 0; i < q; ++i) {
                        if (parts[i] > 0 && probs[p][i] == 0.0) {
                            pr = 0.0;
                            break;
                        }
                        pr *= std::pow(probs[p][i], parts[i]);
                    }
                    if (pr > 0.0) comps.emplace_back(parts, pr);
                    return;
                }
                for (int c = 0; c <= left; ++c) {
                    parts[k] = c;
                    rec(k + 1, left - c);
                }
            };
            rec(0, v[p]);
            for (const auto& [w0, pr0] : dist)
                for (const auto& [cw, cpr] : comps) {
                    std::vector<int> w = w0;
                    for (int i = 0; i < q; ++i) w[i] += cw[i];
                    ndist[w] += pr0 * cpr;
                }
            dist.swap(ndist);
        }
        for (const auto& [w, pr] : dist) {
            auto& slot = s.entries[w];
            slot.den = 0;
            slot.num = 0;
            slot.value += bv.value * pr;
        }
    }
    s.below_free_distance = s.entries.empty();
    return s;
}

}  // namespace hqam
