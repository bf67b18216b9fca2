#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hqam {

/// Feedforward convolutional code with one input per step (k_c = 1) and n
/// outputs, given by octal generator polynomials, e.g. {"5","7"} for the
/// constraint-length-3 code (5,7)_8.
class ConvCode {
public:
    /// Parses a comma-separated octal generator string, e.g. "5,7".
    static ConvCode from_octal(const std::string& generators);
    static ConvCode from_octal(const std::vector<std::string>& generators);

    int k_c() const { return 1; }
    int n() const { return static_cast<int>(gens_.size()); }
    int constraint_length() const { return K_; }
    const std::vector<std::uint32_t>& generators() const { return gens_; }

private:
    std::vector<std::uint32_t> gens_;  // bit K-1 = coefficient of the current input
    int K_ = 1;
};

/// Trellis of a ConvCode: 2^(K-1) states, two branches per state.
/// Transition state s with input b uses register r = (b << (K-1)) | s;
/// next state = r >> 1, output bit p = parity(r & g_p).
class Trellis {
public:
    explicit Trellis(const ConvCode& code);

    int num_states() const { return num_states_; }
    int n() const { return n_; }
    int next_state(int state, int input) const { return next_[2 * state + input]; }
    /// Output bits packed LSB-first: bit p-1 = output of generator p.
    std::uint32_t output(int state, int input) const { return out_[2 * state + input]; }
    int output_bit(int state, int input, int p) const {
        return (out_[2 * state + input] >> (p - 1)) & 1;
    }
    /// Total Hamming weight of the branch output.
    int output_weight(int state, int input) const { return outw_[2 * state + input]; }

private:
    int num_states_;
    int n_;
    std::vector<int> next_;
    std::vector<std::uint32_t> out_;
    std::vector<int> outw_;
};

/// Encodes k_c x N info bits (row-major, here a single row) into n x N coded
/// bits. The encoder starts in the zero state; callers append K-1 zero
/// columns themselves when they need zero-tail termination.
/// info[t] in {0,1}; result[p][t] for p = 0..n-1.
std::vector<std::vector<std::uint8_t>> encode(const ConvCode& code,
                                              const std::vector<std::uint8_t>& info);

/// Minimum total output weight over nonzero remerging paths, or nullopt if it
/// exceeds `cap`.
std::optional<int> free_distance(const ConvCode& code, int cap = 64);

/// Soft-input Viterbi decoding over the full block (no traceback window).
/// llrs[p][t] is the L-value of coded bit (p+1, t+1); positive favors bit 0.
/// Branch metric: sum over branch bits of (-1)^bit * L. Ties break toward the
/// lexicographically smaller state sequence.
std::vector<std::uint8_t> viterbi_decode(const Trellis& trellis,
                                         const std::vector<std::vector<double>>& llrs);

/// Periodic puncturing pattern: n rows, `period` columns, 0 = puncture.
struct PuncturePattern {
    int n = 0;
    int period = 0;
    std::vector<std::uint8_t> keep;  // row-major [p * period + t]

    /// Parses a column-major 0/1 string, columns separated by commas,
    /// e.g. "10,11,01" for the rate-3/4 pattern of the (5,7) code.
    static PuncturePattern parse(const std::string& text, int n);

    int survivors_per_period() const;
    bool kept(int p, int t) const { return keep[p * period + (t % period)] != 0; }
};

/// Serializes the surviving bits of an n x N coded matrix, column by column.
std::vector<std::uint8_t> puncture(const std::vector<std::vector<std::uint8_t>>& bits,
                                   const PuncturePattern& P);

/// Expands a serialized L-value stream back to n x N, writing 0 (erasure) at
/// punctured slots. N is recovered from the stream length and the pattern.
std::vector<std::vector<double>> depuncture(const std::vector<double>& llrs,
                                            const PuncturePattern& P);

}  // namespace hqam
