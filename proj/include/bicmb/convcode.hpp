#pragma once

// Rate-1/n feed-forward convolutional codes: trellis construction,
// encoding, soft-metric Viterbi decoding, and exhaustive enumeration of
// error events (detours from the all-zero path) up to weight/length
// bounds.
//
// Register convention: the newest input bit occupies the most significant
// generator tap; the state holds the previous K-1 input bits, newest
// first. Under this convention the octal pair (133,171) with K=7 is the
// familiar industry-standard code. Per trellis step the coded stream
// carries one output bit per generator, in generator order.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bicmb/bits.hpp"

namespace bicmb {

struct CodeSpec {
    std::vector<std::uint32_t> generators;  // tap masks, parsed from octal
    int constraint_length = 0;              // K

    int n_out() const { return static_cast<int>(generators.size()); }
};

// Throws std::invalid_argument if the spec is malformed: K < 2, fewer than
// two generators, a zero generator, taps outside the K-bit window, or no
// generator tapping the newest bit (the code would not be delay-free).
void validate(const CodeSpec& spec);

// Parses "K=7 g=133,171" (generators in octal). Token order is free.
CodeSpec parse_code_spec(const std::string& text);
std::string format_code_spec(const CodeSpec& spec);

struct Transition {
    std::uint32_t next_state = 0;
    std::uint32_t out_bits = 0;  // bit j = output of generator j
    int out_weight = 0;
};

struct Trellis {
    CodeSpec spec;
    int num_states = 0;
    // transitions[state][input]
    std::vector<std::array<Transition, 2>> transitions;

    int n_out() const { return spec.n_out(); }
};

Trellis build_trellis(const CodeSpec& spec);

// Encodes info_bits from the all-zero state; with terminate set, appends
// K-1 zero tail bits so the encoder ends in the all-zero state.
Bits encode(const CodeSpec& spec, const Bits& info_bits, bool terminate);

// Per-coded-bit soft metric: cost of deciding that bit 0 / 1.
using BitMetric = std::array<double, 2>;

// ML sequence decoder for a zero-tail terminated trellis (starts and ends
// in state 0). Returns the full input sequence, one bit per trellis step,
// tail included. Cost ties are broken toward input bit 0, then toward the
// lower-indexed predecessor state, so decodes are bit-reproducible.
// Throws on non-finite metrics or a metric count that is not a whole
// number of trellis steps.
Bits viterbi_decode(const Trellis& trellis, const std::vector<BitMetric>& metrics);

// Total path cost of the decoded sequence under the same metrics; used by
// optimality checks.
double path_cost(const Trellis& trellis, const Bits& input_bits,
                 const std::vector<BitMetric>& metrics);

struct ErrorEvent {
    Bits input_bits;  // first bit is 1; length L (trailing zeros drive remerge)
    Bits coded_bits;  // length n_out * L
    int length = 0;   // trellis steps from divergence to first remerge
    int d_hamming = 0;
};

struct EnumerationBounds {
    int max_dh = 0;
    int max_len = 0;
};

struct EventEnumeration {
    CodeSpec code;
    EnumerationBounds bounds;
    std::vector<ErrorEvent> events;  // sorted by (d_H, L, coded_bits)
    // Every error event with d_H <= complete_to_weight is provably in
    // `events`: any detour longer than max_len has weight above this.
    int complete_to_weight = 0;
};

// Enumerates every error event with d_H <= max_dh and L <= max_len,
// exactly once, sorted by (d_H, L, coded_bits). Two distinct input paths
// with identical coded output would indicate a broken code and raise
// std::runtime_error, as does exceeding max_events.
EventEnumeration enumerate_error_events(const Trellis& trellis, int max_dh, int max_len,
                                        std::size_t max_events = 1u << 22);

// Minimum weight over all detours strictly longer than max_len steps
// (finite for non-catastrophic codes). A detour longer than
// max_len + num_states must contain a nonzero-weight cycle whose removal
// keeps its length above max_len, so the minimum is reached within
// max_len + num_states steps and a bounded dynamic program is exact.
int min_event_weight_beyond(const Trellis& trellis, int max_len);

// Smallest max_len such that every detour longer than it has weight
// > max_dh, i.e. enumeration at (max_dh, max_len) is complete to max_dh.
int choose_max_len(const Trellis& trellis, int max_dh, int cap = 4096);

// Minimum d_H over all error events, via Dijkstra on the detour graph
// with branch weights equal to output Hamming weights (independent of the
// event enumeration). Rejects catastrophic codes (a zero-output cycle
// outside state 0) with std::runtime_error.
int free_distance(const Trellis& trellis);

bool is_catastrophic(const Trellis& trellis);

// CSV with header: event_id,d_H,L,input_bits,coded_bits
std::string events_to_csv(const EventEnumeration& e);

}  // namespace bicmb
