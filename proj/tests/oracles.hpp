#pragma once

// Independent test oracles. Each one deliberately takes a different
// algorithmic route from the library code it checks:
//  - error events by brute force over all input sequences,
//  - free distance by a step-indexed dynamic program (the library uses
//    Dijkstra),
//  - ML decoding by exhaustive search over terminated input sequences,
//  - 2x2 singular values from the quadratic formula on H^H H,
//  - the Gaussian tail function for AWGN BER.

#include <complex>
#include <vector>

#include "bicmb/convcode.hpp"
#include "bicmb/mimo.hpp"

namespace oracle {

struct Event {
    bicmb::Bits input_bits;
    bicmb::Bits coded_bits;
    int length = 0;
    int d_hamming = 0;
};

// Every detour with L <= max_input_len and d_H <= max_dh, found by trying
// all input sequences starting with a 1 and tracking the state walk.
// Sorted like the library enumeration: (d_H, L, coded_bits).
std::vector<Event> brute_force_events(const bicmb::CodeSpec& spec, int max_dh,
                                      int max_input_len);

// Minimum event weight via a forward DP over path length. Any
// minimum-weight event can be shortened past a repeated state without
// gaining weight, so scanning lengths up to num_states + 1 is exhaustive.
int free_distance_dp(const bicmb::CodeSpec& spec);

// Cost of the best zero-terminated input sequence under the given
// metrics, by trying all of them. Only feasible for short blocks.
double exhaustive_best_cost(const bicmb::Trellis& trellis,
                            const std::vector<bicmb::BitMetric>& metrics);

// Singular values of a 2x2 complex matrix from the closed-form
// eigenvalues of H^H H, descending.
std::pair<double, double> singular_values_2x2(const bicmb::CMatrix& h);

// Gaussian tail probability Q(x).
double q_function(double x);

}  // namespace oracle
