#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hqam {

/// Periodic deterministic multiplexer between the n encoder outputs and the
/// q modulator bit streams.
///
/// `assign[p][c]` is the stream index (1..q) that encoder output p+1 feeds at
/// column c of the period; `time_fill[p][c]` is the within-period slot
/// (1..nJ/q) of that bit in its stream. Each stream owns exactly nJ/q cells
/// per period.
struct DMuxPattern {
    int n = 0;
    int J = 0;
    int q = 0;
    std::vector<std::vector<int>> assign;     // n x J stream indices
    std::vector<std::vector<int>> time_fill;  // n x J within-period slots

    int slots_per_stream() const { return n * J / q; }

    /// Builds a pattern from stream indices only; time slots are filled
    /// canonically in column-major scan order per stream.
    static DMuxPattern from_assign(const std::vector<std::vector<int>>& assign, int q);

    /// Builds a pattern with explicit (stream, time) entries, matching the
    /// matrix notation K_tau with tau = 0.
    static DMuxPattern from_entries(const std::vector<std::vector<std::pair<int, int>>>& entries,
                                    int q);

    /// Parses "2,2/1,1" style text (rows of comma-separated stream indices).
    static DMuxPattern parse(const std::string& text, int q);

    std::string to_text() const;
    /// JSON export with the expanded first-period (k, t) pairs.
    std::string to_json() const;

    bool operator==(const DMuxPattern& other) const {
        return n == other.n && J == other.J && q == other.q && assign == other.assign;
    }

    /// Rotates the assign columns left by r and refits the canonical
    /// time_fill.
    DMuxPattern rotated(int r) const;

    /// Lexicographically smallest cyclic column rotation of the assign
    /// matrix; patterns are equivalent iff their canonical forms are equal.
    DMuxPattern canonical() const;
};

/// Applies the D-MUX to an n x N_c coded-bit matrix, producing q x N_s.
std::vector<std::vector<std::uint8_t>> apply_dmux(
    const std::vector<std::vector<std::uint8_t>>& C, const DMuxPattern& pattern);

/// Routes a q x N_s L-value matrix back to the n x N_c layout (exact inverse
/// of apply_dmux on positions).
std::vector<std::vector<double>> demux_llrs(const std::vector<std::vector<double>>& O,
                                            const DMuxPattern& pattern);

/// One representative per equivalence class of balanced n x J stream
/// assignments under cyclic column rotation, sorted lexicographically.
std::vector<DMuxPattern> enumerate_canonical(int n, int J, int q);

/// Seeded uniform random permutation; deinterleave is the exact inverse.
class Interleaver {
public:
    Interleaver(std::size_t length, std::uint64_t seed);

    std::size_t length() const { return perm_.size(); }
    const std::vector<std::uint32_t>& permutation() const { return perm_; }

    template <typename T>
    std::vector<T> interleave(const std::vector<T>& x) const {
        std::vector<T> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[perm_[i]] = x[i];
        return y;
    }

    template <typename T>
    std::vector<T> deinterleave(const std::vector<T>& y) const {
        std::vector<T> x(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[perm_[i]];
        return x;
    }

private:
    std::vector<std::uint32_t> perm_;
};

enum class RandomMuxKind { RMux, SInterleaver };

/// Per-bit stream assignment for the randomized baselines. The result maps
/// the coded bit (p, t') at flat index p + t' * n to a (stream, slot) pair
/// encoded as stream * N_s + slot; every stream receives exactly N_s bits.
///
/// For the R-MUX, `probs[p][k]` is the probability that a bit of encoder
/// output p+1 goes to stream k+1; rows must sum to 1 and the expected loads
/// must equal N_s per stream. The S-interleaver uses uniform probabilities.
struct RandomMuxAssignment {
    int n = 0;
    int q = 0;
    std::size_t N_c = 0;
    std::size_t N_s = 0;
    std::vector<std::uint64_t> slot_of;  // [p + t' * n] -> k * N_s + t

    int stream_of(int p, std::size_t t) const {
        return static_cast<int>(slot_of[p + t * n] / N_s);
    }
};

RandomMuxAssignment random_mux_baseline(RandomMuxKind kind, int n, int q, std::size_t N_c,
                                        const std::vector<std::vector<double>>& probs,
                                        std::uint64_t seed);

}  // namespace hqam
