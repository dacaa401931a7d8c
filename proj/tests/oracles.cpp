#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

std::vector<Event> brute_force_events(const bicmb::CodeSpec& spec, int max_dh,
                                      int max_input_len) {
    const bicmb::Trellis trellis = bicmb::build_trellis(spec);
    const int n = spec.n_out();
    std::vector<Event> found;

    for (int len = 1; len <= max_input_len; ++len) {
        // All inputs of this length with the first bit set.
        const std::uint64_t count = 1ull << (len - 1);
        for (std::uint64_t pattern = 0; pattern < count; ++pattern) {
            bicmb::Bits input(static_cast<std::size_t>(len));
            input[0] = 1;
            for (int i = 1; i < len; ++i)
                input[static_cast<std::size_t>(i)] =
                    static_cast<std::uint8_t>((pattern >> (i - 1)) & 1);

            // Walk the trellis; a valid event first returns to state 0 at
            // exactly the last step.
            std::uint32_t state = 0;
            bicmb::Bits coded;
            coded.reserve(static_cast<std::size_t>(len) * n);
            bool valid = true;
            int weight = 0;
            for (int step = 0; step < len; ++step) {
                const auto& tr = trellis.transitions[state][input[static_cast<std::size_t>(step)]];
                for (int j = 0; j < n; ++j) coded.push_back((tr.out_bits >> j) & 1);
                weight += tr.out_weight;
                state = tr.next_state;
                if (state == 0 && step + 1 != len) {
                    valid = false;
                    break;
                }
            }
            if (!valid || state != 0 || weight > max_dh) continue;
            found.push_back({std::move(input), std::move(coded), len, weight});
        }
    }

    std::sort(found.begin(), found.end(), [](const Event& a, const Event& b) {
        if (a.d_hamming != b.d_hamming) return a.d_hamming < b.d_hamming;
        if (a.length != b.length) return a.length < b.length;
        return a.coded_bits < b.coded_bits;
    });
    for (std::size_t i = 1; i < found.size(); ++i)
        if (found[i].coded_bits == found[i - 1].coded_bits)
            throw std::runtime_error("oracle: duplicate coded sequence from distinct inputs");
    return found;
}

int free_distance_dp(const bicmb::CodeSpec& spec) {
    const bicmb::Trellis trellis = bicmb::build_trellis(spec);
    const int ns = trellis.num_states;
    const int inf = std::numeric_limits<int>::max() / 2;
    // A minimum-weight event visits no nonzero state twice (weights are
    // nonnegative and cutting a loop keeps a valid event), so its length
    // is at most ns + 1 steps.
    const int horizon = ns + 1;

    std::vector<int> best(static_cast<std::size_t>(ns), inf);
    int best_event = inf;
    {
        const auto& tr = trellis.transitions[0][1];
        if (tr.next_state == 0)
            best_event = tr.out_weight;
        else
            best[tr.next_state] = tr.out_weight;
    }
    for (int len = 2; len <= horizon; ++len) {
        std::vector<int> next(static_cast<std::size_t>(ns), inf);
        for (int s = 1; s < ns; ++s) {
            if (best[static_cast<std::size_t>(s)] >= inf) continue;
            for (std::uint32_t u = 0; u < 2; ++u) {
                const auto& tr = trellis.transitions[s][u];
                const int w = best[static_cast<std::size_t>(s)] + tr.out_weight;
                if (tr.next_state == 0)
                    best_event = std::min(best_event, w);
                else
                    next[tr.next_state] = std::min(next[tr.next_state], w);
            }
        }
        best.swap(next);
    }
    if (best_event >= inf) throw std::runtime_error("oracle: no event found");
    return best_event;
}

double exhaustive_best_cost(const bicmb::Trellis& trellis,
                            const std::vector<bicmb::BitMetric>& metrics) {
    const int n = trellis.n_out();
    const int steps = static_cast<int>(metrics.size()) / n;
    if (steps > 24) throw std::invalid_argument("oracle: block too long for exhaustive search");
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t pattern = 0; pattern < (1ull << steps); ++pattern) {
        std::uint32_t state = 0;
        double cost = 0.0;
        for (int step = 0; step < steps; ++step) {
            const auto& tr = trellis.transitions[state][(pattern >> step) & 1];
            for (int j = 0; j < n; ++j)
                cost += metrics[static_cast<std::size_t>(step * n + j)][(tr.out_bits >> j) & 1];
            state = tr.next_state;
        }
        if (state == 0) best = std::min(best, cost);  // terminated paths only
    }
    return best;
}

std::pair<double, double> singular_values_2x2(const bicmb::CMatrix& h) {
    const double a = std::norm(h(0, 0)) + std::norm(h(1, 0));
    const double d = std::norm(h(0, 1)) + std::norm(h(1, 1));
    const std::complex<double> b = std::conj(h(0, 0)) * h(0, 1) + std::conj(h(1, 0)) * h(1, 1);
    const double tr = a + d;
    const double det = a * d - std::norm(b);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double l1 = 0.5 * (tr + disc);
    const double l2 = std::max(0.0, 0.5 * (tr - disc));
    return {std::sqrt(l1), std::sqrt(l2)};
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace oracle
