#include "hqam/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hqam/montecarlo.hpp"
#include "json.hpp"

namespace hqam {

namespace {

int ilog2(int M) {
    int q = 0;
    while ((1 << q) < M) ++q;
    return q;
}

/// Enumerates the in-region alpha grid with the given step, q-1 coordinates
/// each a multiple of step.
std::vector<std::vector<double>> alpha_grid(int q, double step) {
    std::vector<std::vector<double>> grid;
    const int dims = q - 1;
    if (dims == 0) {
        grid.push_back({});
        return grid;
    }
    const int steps = static_cast<int>(std::round(1.0 / step));
    std::vector<int> idx(dims, 0);
    std::vector<double> a(dims, 0.0);
    for (;;) {
        for (int i = 0; i < dims; ++i) a[i] = idx[i] * step;
        if (validate_region(a).valid) grid.push_back(a);
        int d = dims - 1;
        while (d >= 0 && ++idx[d] > steps) idx[d--] = 0;
        if (d < 0) break;
    }
    return grid;
}

struct Eval {
    double ub = 0.0;
    double last_shell = 0.0;
};

Eval eval_ub(const WeightSpectrum& spec, const PepEvaluator& pep, int k_c) {
    Eval e;
    int max_total = 0;
    for (const auto& [w, b] : spec.entries) {
        int t = 0;
        for (int wk : w) t += wk;
        max_total = std::max(max_total, t);
    }
    for (const auto& [w, b] : spec.entries) {
        const double term = b.value * std::exp(pep.log_pep(w));
        e.ub += term;
        int t = 0;
        for (int wk : w) t += wk;
        if (t == max_total) e.last_shell += term;
    }
    e.ub /= k_c;
    e.last_shell /= k_c;
    return e;
}

}  // namespace

SearchSpace build_search_space(const ConvCode& code, int M, const OptimizeOptions& opt) {
    SearchSpace s;
    s.M = M;
    const int q = ilog2(M);
    const int J = opt.J > 0 ? opt.J : q;
    s.patterns = enumerate_canonical(code.n(), J, q);
    const Trellis tr(code);
    s.spectra.resize(s.patterns.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
#endif
    for (long long i = 0; i < static_cast<long long>(s.patterns.size()); ++i)
        s.spectra[i] = compute_ewds(tr, s.patterns[i], opt.wmax);
    s.alpha_grid = alpha_grid(q, opt.grid_step);
    if (s.alpha_grid.empty()) throw std::invalid_argument("empty alpha grid");
    return s;
}

DesignResult optimize_in_space(const ChannelModel& ch, const SearchSpace& space, int k_c,
                               const OptimizeOptions& opt) {
#ifdef _OPENMP
    if (opt.jobs > 0) omp_set_num_threads(opt.jobs);
#endif
    const std::size_t A = space.alpha_grid.size();
    const std::size_t P = space.patterns.size();
    std::vector<Eval> evals(A * P);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
#endif
    for (long long a = 0; a < static_cast<long long>(A); ++a) {
        const Constellation c = Constellation::build(space.alpha_grid[a], space.M);
        const PepEvaluator pep(c, ch);
        for (std::size_t p = 0; p < P; ++p)
            evals[a * P + p] = eval_ub(space.spectra[p], pep, k_c);
    }
    // sequential argmin: deterministic tie-break toward smaller
    // (pattern index, alphas)
    std::size_t best_a = 0, best_p = 0;
    double best = evals[0].ub;
    for (std::size_t p = 0; p < P; ++p)
        for (std::size_t a = 0; a < A; ++a) {
            const double ub = evals[a * P + p].ub;
            if (ub < best ||
                (ub == best && std::make_pair(p, space.alpha_grid[a]) <
                                   std::make_pair(best_p, space.alpha_grid[best_a]))) {
                best = ub;
                best_a = a;
                best_p = p;
            }
        }

    DesignResult r;
    r.gamma_bar_dB = linear_to_db(ch.gamma_bar);
    r.channel = ch;
    r.pattern_index = static_cast<int>(best_p);
    r.pattern = space.patterns[best_p];
    r.pattern_text = r.pattern.to_text();
    r.alphas = space.alpha_grid[best_a];
    r.ub = best;
    r.last_shell = evals[best_a * P + best_p].last_shell;
    r.wmax = opt.wmax;
    r.grid_step = opt.grid_step;
    if (opt.keep_table) {
        for (std::size_t p = 0; p < P; ++p)
            for (std::size_t a = 0; a < A; ++a)
                r.table.push_back({static_cast<int>(p), space.alpha_grid[a], evals[a * P + p].ub});
        std::sort(r.table.begin(), r.table.end(), [](const RankedDesign& x, const RankedDesign& y) {
            if (x.ub != y.ub) return x.ub < y.ub;
            return std::make_pair(x.pattern_index, x.alphas) <
                   std::make_pair(y.pattern_index, y.alphas);
        });
    }
    return r;
}

DesignResult optimize(const ChannelModel& ch, const ConvCode& code, int M,
                      const OptimizeOptions& opt) {
    const SearchSpace space = build_search_space(code, M, opt);
    return optimize_in_space(ch, space, code.k_c(), opt);
}

DesignResult optimize_reference(const ChannelModel& ch, const ConvCode& code, int M,
                                OptimizeOptions opt) {
    opt.parallel = false;
    const SearchSpace space = build_search_space(code, M, opt);
    return optimize_in_space(ch, space, code.k_c(), opt);
}

DesignResult optimize_fading_fixed(double m, double target_ub, const ConvCode& code, int M,
                                   const OptimizeOptions& opt, double lo_dB, double hi_dB) {
    const SearchSpace space = build_search_space(code, M, opt);
    auto min_ub = [&](double dB) {
        return optimize_in_space(ChannelModel::nakagami(m, db_to_linear(dB)), space, code.k_c(),
                                 opt);
    };
    DesignResult lo = min_ub(lo_dB);
    DesignResult hi = min_ub(hi_dB);
    if (lo.ub < target_ub || hi.ub > target_ub)
        throw std::runtime_error("target UB not bracketed by the SNR range");
    for (int it = 0; it < 40 && hi_dB - lo_dB > 1e-3; ++it) {
        const double mid = 0.5 * (lo_dB + hi_dB);
        DesignResult r = min_ub(mid);
        if (r.ub > target_ub)
            lo_dB = mid;
        else
            hi_dB = mid;
    }
    return min_ub(0.5 * (lo_dB + hi_dB));
}

std::string DesignResult::to_json() const {
    nlohmann::json j;
    j["channel"] = channel.fading ? "nakagami" : "awgn";
    if (channel.fading) j["m"] = channel.m;
    j["gamma_dB"] = gamma_bar_dB;
    j["mux"] = pattern_text;
    j["alphas"] = alphas;
    j["ub"] = ub;
    j["last_shell"] = last_shell;
    j["wmax"] = wmax;
    j["grid_step"] = grid_step;
    if (!table.empty()) {
        nlohmann::json t = nlohmann::json::array();
        for (const auto& e : table) {
            nlohmann::json row;
            row["pattern_index"] = e.pattern_index;
            row["alphas"] = e.alphas;
            row["ub"] = e.ub;
            t.push_back(row);
        }
        j["table"] = t;
    }
    return j.dump(2);
}

}  // namespace hqam
