#include "hqam/mux.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hqam/rng.hpp"
#include "json.hpp"

namespace hqam {

namespace {

void check_dims(int n, int J, int q) {
    if (n < 1 || J < 1 || q < 1) throw std::invalid_argument("n, J, q must be positive");
    if ((n * J) % q != 0) throw std::invalid_argument("nJ must be a multiple of q");
}

void fill_canonical_times(DMuxPattern& p) {
    // column-major scan; each stream's cells are numbered 1, 2, ... in order
    p.time_fill.assign(p.n, std::vector<int>(p.J, 0));
    std::vector<int> next(p.q + 1, 1);
    for (int c = 0; c < p.J; ++c)
        for (int r = 0; r < p.n; ++r) p.time_fill[r][c] = next[p.assign[r][c]]++;
    for (int k = 1; k <= p.q; ++k)
        if (next[k] != p.slots_per_stream() + 1)
            throw std::invalid_argument("stream " + std::to_string(k) +
                                        " does not receive nJ/q cells per period");
}

}  // namespace

DMuxPattern DMuxPattern::from_assign(const std::vector<std::vector<int>>& assign, int q) {
    if (assign.empty() || assign[0].empty()) throw std::invalid_argument("empty assign matrix");
    DMuxPattern p;
    p.n = static_cast<int>(assign.size());
    p.J = static_cast<int>(assign[0].size());
    p.q = q;
    check_dims(p.n, p.J, q);
    for (const auto& row : assign) {
        if (static_cast<int>(row.size()) != p.J) throw std::invalid_argument("ragged assign matrix");
        for (int k : row)
            if (k < 1 || k > q) throw std::invalid_argument("stream index out of range");
    }
    p.assign = assign;
    fill_canonical_times(p);
    return p;
}

DMuxPattern DMuxPattern::from_entries(
    const std::vector<std::vector<std::pair<int, int>>>& entries, int q) {
    if (entries.empty() || entries[0].empty()) throw std::invalid_argument("empty entry matrix");
    DMuxPattern p;
    p.n = static_cast<int>(entries.size());
    p.J = static_cast<int>(entries[0].size());
    p.q = q;
    check_dims(p.n, p.J, q);
    p.assign.assign(p.n, std::vector<int>(p.J, 0));
    p.time_fill.assign(p.n, std::vector<int>(p.J, 0));
    std::vector<std::vector<bool>> used(q + 1, std::vector<bool>(p.slots_per_stream() + 1, false));
    for (int r = 0; r < p.n; ++r) {
        if (static_cast<int>(entries[r].size()) != p.J)
            throw std::invalid_argument("ragged entry matrix");
        for (int c = 0; c < p.J; ++c) {
            const auto [k, t] = entries[r][c];
            if (k < 1 || k > q) throw std::invalid_argument("stream index out of range");
            if (t < 1 || t > p.slots_per_stream())
                throw std::invalid_argument("time slot out of range");
            if (used[k][t]) throw std::invalid_argument("duplicate (stream, time) entry");
            used[k][t] = true;
            p.assign[r][c] = k;
            p.time_fill[r][c] = t;
        }
    }
    return p;
}

DMuxPattern DMuxPattern::parse(const std::string& text, int q) {
    std::vector<std::vector<int>> assign;
    std::stringstream rows(text);
    std::string row;
    while (std::getline(rows, row, '/')) {
        std::vector<int> r;
        std::stringstream cells(row);
        std::string cell;
        while (std::getline(cells, cell, ',')) r.push_back(std::stoi(cell));
        assign.push_back(std::move(r));
    }
    return from_assign(assign, q);
}

std::string DMuxPattern::to_text() const {
    std::string s;
    for (int r = 0; r < n; ++r) {
        if (r) s += '/';
        for (int c = 0; c < J; ++c) {
            if (c) s += ',';
            s += std::to_string(assign[r][c]);
        }
    }
    return s;
}

std::string DMuxPattern::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["J"] = J;
    j["q"] = q;
    j["pattern"] = to_text();
    nlohmann::json k0 = nlohmann::json::array();
    for (int r = 0; r < n; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < J; ++c) row.push_back({assign[r][c], time_fill[r][c]});
        k0.push_back(row);
    }
    j["K0"] = k0;
    return j.dump(2);
}

DMuxPattern DMuxPattern::rotated(int r) const {
    r = ((r % J) + J) % J;
    std::vector<std::vector<int>> a(n, std::vector<int>(J));
    for (int row = 0; row < n; ++row)
        for (int c = 0; c < J; ++c) a[row][c] = assign[row][(c + r) % J];
    return from_assign(a, q);
}

DMuxPattern DMuxPattern::canonical() const {
    DMuxPattern best = rotated(0);
    for (int r = 1; r < J; ++r) {
        DMuxPattern cand = rotated(r);
        if (cand.assign < best.assign) best = std::move(cand);
    }
    return best;
}

std::vector<std::vector<std::uint8_t>> apply_dmux(
    const std::vector<std::vector<std::uint8_t>>& C, const DMuxPattern& p) {
    if (static_cast<int>(C.size()) != p.n)
        throw std::invalid_argument("coded matrix rows do not match pattern n");
    const std::size_t N_c = C.empty() ? 0 : C[0].size();
    if (N_c % p.J != 0) throw std::invalid_argument("N_c must be a multiple of J");
    const std::size_t N_s = N_c * p.n / p.q;
    const int spp = p.slots_per_stream();
    std::vector<std::vector<std::uint8_t>> O(p.q, std::vector<std::uint8_t>(N_s, 0));
    for (std::size_t tp = 0; tp < N_c; ++tp) {
        const std::size_t tau = tp / p.J;
        const int c = static_cast<int>(tp % p.J);
        for (int r = 0; r < p.n; ++r) {
            const int k = p.assign[r][c];
            const std::size_t t = tau * spp + (p.time_fill[r][c] - 1);
            O[k - 1][t] = C[r][tp];
        }
    }
    return O;
}

std::vector<std::vector<double>> demux_llrs(const std::vector<std::vector<double>>& O,
                                            const DMuxPattern& p) {
    if (static_cast<int>(O.size()) != p.q)
        throw std::invalid_argument("stream matrix rows do not match pattern q");
    const std::size_t N_s = O.empty() ? 0 : O[0].size();
    const int spp = p.slots_per_stream();
    if (N_s % spp != 0) throw std::invalid_argument("N_s must be a multiple of nJ/q");
    const std::size_t N_c = N_s * p.q / p.n;
    std::vector<std::vector<double>> C(p.n, std::vector<double>(N_c, 0.0));
    for (std::size_t tp = 0; tp < N_c; ++tp) {
        const std::size_t tau = tp / p.J;
        const int c = static_cast<int>(tp % p.J);
        for (int r = 0; r < p.n; ++r) {
            const int k = p.assign[r][c];
            const std::size_t t = tau * spp + (p.time_fill[r][c] - 1);
            C[r][tp] = O[k - 1][t];
        }
    }
    return C;
}

std::vector<DMuxPattern> enumerate_canonical(int n, int J, int q) {
    check_dims(n, J, q);
    const int cells = n * J;
    const int per_stream = cells / q;
    std::vector<int> flat(cells, 1);
    std::vector<int> counts(q + 1, 0);
    std::map<std::vector<std::vector<int>>, DMuxPattern> classes;

    // enumerate all balanced assignments; dedupe by canonical rotation
    std::vector<int> stack;
    stack.reserve(cells);
    std::vector<std::vector<int>> assign(n, std::vector<int>(J));
    auto emit = [&]() {
        for (int i = 0; i < cells; ++i) assign[i % n][i / n] = flat[i];
        DMuxPattern p = DMuxPattern::from_assign(assign, q).canonical();
        classes.emplace(p.assign, std::move(p));
    };
    // iterative backtracking over flat cells
    std::vector<int> choice(cells, 0);
    int pos = 0;
    while (pos >= 0) {
        if (pos == cells) {
            emit();
            --pos;
            continue;
        }
        int k = choice[pos] + 1;
        if (choice[pos] > 0) --counts[choice[pos]];
        while (k <= q && counts[k] == per_stream) ++k;
        if (k > q) {
            choice[pos] = 0;
            --pos;
            continue;
        }
        choice[pos] = k;
        ++counts[k];
        flat[pos] = k;
        ++pos;
        if (pos < cells) choice[pos] = 0;
    }

    std::vector<DMuxPattern> out;
    out.reserve(classes.size());
    for (auto& [key, p] : classes) out.push_back(std::move(p));
    return out;
}

Interleaver::Interleaver(std::size_t length, std::uint64_t seed) {
    perm_.resize(length);
    std::iota(perm_.begin(), perm_.end(), 0u);
    Rng rng(seed);
    rng.shuffle(perm_);
}

RandomMuxAssignment random_mux_baseline(RandomMuxKind kind, int n, int q, std::size_t N_c,
                                        const std::vector<std::vector<double>>& probs,
                                        std::uint64_t seed) {
    if ((n * N_c) % q != 0) throw std::invalid_argument("n*N_c must be a multiple of q");
    const std::size_t N_s = n * N_c / q;
    std::vector<std::vector<double>> p = probs;
    if (kind == RandomMuxKind::SInterleaver)
        p.assign(n, std::vector<double>(q, 1.0 / q));
    if (static_cast<int>(p.size()) != n) throw std::invalid_argument("probability table needs n rows");
    std::vector<double> load(q, 0.0);
    for (int r = 0; r < n; ++r) {
        if (static_cast<int>(p[r].size()) != q)
            throw std::invalid_argument("probability table needs q columns");
        double s = 0.0;
        for (int k = 0; k < q; ++k) {
            if (p[r][k] < 0.0) throw std::invalid_argument("negative probability");
            s += p[r][k];
            load[k] += p[r][k] * static_cast<double>(N_c);
        }
        if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("probability row does not sum to 1");
    }
    for (int k = 0; k < q; ++k)
        if (std::abs(load[k] - static_cast<double>(N_s)) > 0.5)
            throw std::invalid_argument("expected stream loads are not balanced");

    Rng rng(seed);
    RandomMuxAssignment a;
    a.n = n;
    a.q = q;
    a.N_c = N_c;
    a.N_s = N_s;
    const std::size_t total = n * N_c;
    std::vector<int> stream(total);
    std::vector<std::size_t> count(q, 0);
    for (std::size_t i = 0; i < total; ++i) {
        const int r = static_cast<int>(i % n);
        const double u = rng.next_unit();
        double acc = 0.0;
        int k = q - 1;
        for (int kk = 0; kk < q; ++kk) {
            acc += p[r][kk];
            if (u <= acc) {
                k = kk;
                break;
            }
        }
        stream[i] = k;
        ++count[k];
    }
    // exactness repair: move randomly chosen bits from over-full to
    // under-full streams until all counts equal N_s
    for (;;) {
        int over = -1, under = -1;
        for (int k = 0; k < q; ++k) {
            if (count[k] > N_s) over = k;
            if (count[k] < N_s) under = k;
        }
        if (over < 0 && under < 0) break;
        for (;;) {
            const std::size_t i = static_cast<std::size_t>(rng.next_below(total));
            if (stream[i] == over) {
                stream[i] = under;
                --count[over];
                ++count[under];
                break;
            }
        }
    }
    // random time slots within each stream
    std::vector<std::vector<std::uint64_t>> slots(q);
    for (int k = 0; k < q; ++k) {
        slots[k].resize(N_s);
        std::iota(slots[k].begin(), slots[k].end(), 0ull);
        rng.shuffle(slots[k]);
    }
    a.slot_of.resize(total);
    std::vector<std::size_t> used(q, 0);
    for (std::size_t i = 0; i < total; ++i) {
        const int k = stream[i];
        a.slot_of[i] = static_cast<std::uint64_t>(k) * N_s + slots[k][used[k]++];
    }
    return a;
}

}  // namespace hqam
