#include "bicmb/convcode.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace bicmb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int popcount32(std::uint32_t x) { return std::popcount(x); }

}  // namespace

void validate(const CodeSpec& spec) {
    const int k = spec.constraint_length;
    if (k < 2) throw std::invalid_argument("code: constraint length K must be >= 2");
    if (k > 24) throw std::invalid_argument("code: constraint length K too large");
    if (spec.n_out() < 2) throw std::invalid_argument("code: need at least 2 generators");
    const std::uint32_t window = (k == 32) ? ~0u : ((1u << k) - 1u);
    bool newest_tap = false;
    for (auto g : spec.generators) {
        if (g == 0) throw std::invalid_argument("code: zero generator");
        if ((g & ~window) != 0)
            throw std::invalid_argument("code: generator taps outside the K-bit window");
        if (g & (1u << (k - 1))) newest_tap = true;
    }
    if (!newest_tap)
        throw std::invalid_argument("code: no generator taps the newest bit (not delay-free)");
}

CodeSpec parse_code_spec(const std::string& text) {
    CodeSpec spec;
    std::istringstream in(text);
    std::string tok;
    bool have_k = false, have_g = false;
    while (in >> tok) {
        if (tok.rfind("K=", 0) == 0) {
            spec.constraint_length = std::stoi(tok.substr(2));
            have_k = true;
        } else if (tok.rfind("g=", 0) == 0) {
            std::istringstream gl(tok.substr(2));
            std::string item;
            while (std::getline(gl, item, ',')) {
                if (item.empty()) throw std::invalid_argument("code: empty generator");
                std::size_t pos = 0;
                unsigned long v = std::stoul(item, &pos, 8);
                if (pos != item.size())
                    throw std::invalid_argument("code: bad octal generator '" + item + "'");
                spec.generators.push_back(static_cast<std::uint32_t>(v));
            }
            have_g = true;
        } else {
            throw std::invalid_argument("code: unknown token '" + tok + "'");
        }
    }
    if (!have_k || !have_g)
        throw std::invalid_argument("code: expected \"K=<int> g=<octal>,<octal>[,...]\"");
    validate(spec);
    return spec;
}

std::string format_code_spec(const CodeSpec& spec) {
    std::ostringstream out;
    out << "K=" << spec.constraint_length << " g=";
    for (std::size_t i = 0; i < spec.generators.size(); ++i) {
        if (i) out << ',';
        out << std::oct << spec.generators[i] << std::dec;
    }
    return out.str();
}

Trellis build_trellis(const CodeSpec& spec) {
    validate(spec);
    const int k = spec.constraint_length;
    const int n = spec.n_out();
    Trellis t;
    t.spec = spec;
    t.num_states = 1 << (k - 1);
    t.transitions.resize(t.num_states);
    for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(t.num_states); ++s) {
        for (std::uint32_t u = 0; u < 2; ++u) {
            // Register window: newest bit in the MSB, then the state.
            const std::uint32_t window = (u << (k - 1)) | s;
            Transition tr;
            tr.out_bits = 0;
            for (int j = 0; j < n; ++j)
                tr.out_bits |= static_cast<std::uint32_t>(popcount32(window & spec.generators[j]) & 1)
                               << j;
            tr.out_weight = popcount32(tr.out_bits);
            tr.next_state = (u << (k - 2)) | (s >> 1);
            if (k == 2) tr.next_state = u;
            t.transitions[s][u] = tr;
        }
    }
    return t;
}

Bits encode(const CodeSpec& spec, const Bits& info_bits, bool terminate) {
    if (info_bits.empty()) throw std::invalid_argument("encode: empty input");
    const Trellis t = build_trellis(spec);
    const int n = spec.n_out();
    Bits in = info_bits;
    if (terminate) in.insert(in.end(), spec.constraint_length - 1, 0);
    Bits out;
    out.reserve(in.size() * n);
    std::uint32_t state = 0;
    for (auto u : in) {
        const Transition& tr = t.transitions[state][u & 1];
        for (int j = 0; j < n; ++j) out.push_back((tr.out_bits >> j) & 1);
        state = tr.next_state;
    }
    return out;
}

double path_cost(const Trellis& trellis, const Bits& input_bits,
                 const std::vector<BitMetric>& metrics) {
    const int n = trellis.n_out();
    if (metrics.size() != input_bits.size() * static_cast<std::size_t>(n))
        throw std::invalid_argument("path_cost: metric/input length mismatch");
    double cost = 0.0;
    std::uint32_t state = 0;
    for (std::size_t step = 0; step < input_bits.size(); ++step) {
        const Transition& tr = trellis.transitions[state][input_bits[step] & 1];
        for (int j = 0; j < n; ++j) cost += metrics[step * n + j][(tr.out_bits >> j) & 1];
        state = tr.next_state;
    }
    return cost;
}

Bits viterbi_decode(const Trellis& trellis, const std::vector<BitMetric>& metrics) {
    const int n = trellis.n_out();
    if (metrics.empty() || metrics.size() % static_cast<std::size_t>(n) != 0)
        throw std::invalid_argument("viterbi: metric count is not a whole number of trellis steps");
    for (const auto& m : metrics)
        if (!std::isfinite(m[0]) || !std::isfinite(m[1]))
            throw std::invalid_argument("viterbi: non-finite metric");

    const std::size_t steps = metrics.size() / n;
    const int ns = trellis.num_states;

    std::vector<double> cost(ns, kInf), next_cost(ns);
    cost[0] = 0.0;
    // survivor[step * ns + s] = (pred_state << 1) | input_bit
    std::vector<std::uint32_t> survivor(steps * ns);

    for (std::size_t step = 0; step < steps; ++step) {
        std::fill(next_cost.begin(), next_cost.end(), kInf);
        for (int s = 0; s < ns; ++s) {
            if (cost[s] == kInf) continue;
            for (std::uint32_t u = 0; u < 2; ++u) {
                const Transition& tr = trellis.transitions[s][u];
                double c = cost[s];
                for (int j = 0; j < n; ++j) c += metrics[step * n + j][(tr.out_bits >> j) & 1];
                const std::uint32_t ns_idx = tr.next_state;
                const std::uint32_t tag = (static_cast<std::uint32_t>(s) << 1) | u;
                double& best = next_cost[ns_idx];
                std::uint32_t& surv = survivor[step * ns + ns_idx];
                if (c < best) {
                    best = c;
                    surv = tag;
                } else if (c == best) {
                    // Documented tie rule: input bit 0 first, then the
                    // lower-indexed predecessor.
                    const std::uint32_t cur_u = surv & 1, cur_p = surv >> 1;
                    if (u < cur_u || (u == cur_u && static_cast<std::uint32_t>(s) < cur_p))
                        surv = tag;
                }
            }
        }
        std::swap(cost, next_cost);
    }
    if (cost[0] == kInf) throw std::runtime_error("viterbi: no terminated path");

    Bits input(steps);
    std::uint32_t s = 0;
    for (std::size_t step = steps; step-- > 0;) {
        const std::uint32_t tag = survivor[step * ns + s];
        input[step] = static_cast<std::uint8_t>(tag & 1);
        s = tag >> 1;
    }
    return input;
}

namespace {

struct SearchNode {
    std::uint32_t state;
    int length;
    int weight;
    Bits input;
    Bits coded;
};

}  // namespace

EventEnumeration enumerate_error_events(const Trellis& trellis, int max_dh, int max_len,
                                        std::size_t max_events) {
    if (max_dh < 1 || max_len < 1)
        throw std::invalid_argument("enumerate: bounds must be >= 1");
    const int n = trellis.n_out();

    EventEnumeration result;
    result.code = trellis.spec;
    result.bounds = {max_dh, max_len};

    // Depth-first walk of detours: leave state 0 with input 1, never touch
    // state 0 again until the final merge step, prune on weight and length.
    std::vector<ErrorEvent> events;
    SearchNode root;
    {
        const Transition& tr = trellis.transitions[0][1];
        root.state = tr.next_state;
        root.length = 1;
        root.weight = tr.out_weight;
        root.input = {1};
        root.coded.reserve(static_cast<std::size_t>(max_len) * n);
        for (int j = 0; j < n; ++j) root.coded.push_back((tr.out_bits >> j) & 1);
    }

    std::vector<SearchNode> stack;
    if (root.weight <= max_dh) stack.push_back(std::move(root));
    while (!stack.empty()) {
        SearchNode node = std::move(stack.back());
        stack.pop_back();
        if (node.state == 0) {
            ErrorEvent ev;
            ev.input_bits = std::move(node.input);
            ev.coded_bits = std::move(node.coded);
            ev.length = node.length;
            ev.d_hamming = node.weight;
            events.push_back(std::move(ev));
            if (events.size() > max_events)
                throw std::runtime_error(
                    "enumerate: event cap exceeded (" + std::to_string(max_events) +
                    "); tighten max_dh/max_len or raise the cap");
            continue;
        }
        if (node.length >= max_len) continue;
        for (std::uint32_t u = 0; u < 2; ++u) {
            const Transition& tr = trellis.transitions[node.state][u];
            const int w = node.weight + tr.out_weight;
            if (w > max_dh) continue;
            SearchNode child;
            child.state = tr.next_state;
            child.length = node.length + 1;
            child.weight = w;
            child.input = node.input;
            child.input.push_back(static_cast<std::uint8_t>(u));
            child.coded = node.coded;
            for (int j = 0; j < n; ++j) child.coded.push_back((tr.out_bits >> j) & 1);
            stack.push_back(std::move(child));
        }
    }

    std::sort(events.begin(), events.end(), [](const ErrorEvent& a, const ErrorEvent& b) {
        if (a.d_hamming != b.d_hamming) return a.d_hamming < b.d_hamming;
        if (a.length != b.length) return a.length < b.length;
        return a.coded_bits < b.coded_bits;
    });
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].coded_bits == events[i - 1].coded_bits)
            throw std::runtime_error("enumerate: two input paths share one coded sequence");

    result.events = std::move(events);
    const int beyond = min_event_weight_beyond(trellis, max_len);
    result.complete_to_weight = (beyond > max_dh) ? max_dh : std::min(max_dh, beyond - 1);
    return result;
}

int min_event_weight_beyond(const Trellis& trellis, int max_len) {
    if (is_catastrophic(trellis))
        throw std::runtime_error("code is catastrophic: zero-output cycle outside state 0");
    const int ns = trellis.num_states;
    const int horizon = max_len + ns + 1;
    const int inf = std::numeric_limits<int>::max() / 2;

    // best[s] = min weight of a partial detour of the current length
    // ending in nonzero state s.
    std::vector<int> best(ns, inf), next(ns);
    {
        const Transition& tr = trellis.transitions[0][1];
        if (tr.next_state != 0) best[tr.next_state] = tr.out_weight;
    }
    int best_event = inf;
    for (int len = 2; len <= horizon; ++len) {
        std::fill(next.begin(), next.end(), inf);
        for (int s = 1; s < ns; ++s) {
            if (best[s] >= inf) continue;
            for (std::uint32_t u = 0; u < 2; ++u) {
                const Transition& tr = trellis.transitions[s][u];
                const int w = best[s] + tr.out_weight;
                if (tr.next_state == 0) {
                    if (len > max_len) best_event = std::min(best_event, w);
                } else if (w < next[tr.next_state]) {
                    next[tr.next_state] = w;
                }
            }
        }
        std::swap(best, next);
    }
    return best_event;
}

int choose_max_len(const Trellis& trellis, int max_dh, int cap) {
    for (int len = 1; len <= cap; ++len)
        if (min_event_weight_beyond(trellis, len) > max_dh) return len;
    throw std::runtime_error("choose_max_len: no completeness certificate below cap");
}

bool is_catastrophic(const Trellis& trellis) {
    // Cycle test on the zero-output subgraph restricted to nonzero states:
    // peel off nodes with no remaining zero-output successor; whatever
    // survives lies on a zero-output cycle.
    const int ns = trellis.num_states;
    std::vector<char> alive(ns, 1);
    alive[0] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int s = 1; s < ns; ++s) {
            if (!alive[s]) continue;
            bool has_zero_succ = false;
            for (std::uint32_t u = 0; u < 2; ++u) {
                const Transition& tr = trellis.transitions[s][u];
                if (tr.out_weight == 0 && alive[tr.next_state]) has_zero_succ = true;
            }
            if (!has_zero_succ) {
                alive[s] = 0;
                changed = true;
            }
        }
    }
    for (int s = 1; s < ns; ++s)
        if (alive[s]) return true;
    return false;
}

int free_distance(const Trellis& trellis) {
    if (is_catastrophic(trellis))
        throw std::runtime_error("code is catastrophic: zero-output cycle outside state 0");
    const int ns = trellis.num_states;
    const int inf = std::numeric_limits<int>::max() / 2;
    std::vector<int> dist(ns + 1, inf);  // index ns = merged back to state 0
    using Item = std::pair<int, int>;    // (weight, state)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    {
        const Transition& tr = trellis.transitions[0][1];
        const int target = (tr.next_state == 0) ? ns : static_cast<int>(tr.next_state);
        dist[target] = tr.out_weight;
        pq.push({tr.out_weight, target});
    }
    while (!pq.empty()) {
        auto [w, s] = pq.top();
        pq.pop();
        if (w > dist[s]) continue;
        if (s == ns) return w;
        for (std::uint32_t u = 0; u < 2; ++u) {
            const Transition& tr = trellis.transitions[s][u];
            const int t = (tr.next_state == 0) ? ns : static_cast<int>(tr.next_state);
            const int nw = w + tr.out_weight;
            if (nw < dist[t]) {
                dist[t] = nw;
                pq.push({nw, t});
            }
        }
    }
    throw std::runtime_error("free_distance: state 0 unreachable");
}

std::string events_to_csv(const EventEnumeration& e) {
    std::ostringstream out;
    out << "event_id,d_H,L,input_bits,coded_bits\n";
    for (std::size_t i = 0; i < e.events.size(); ++i) {
        const ErrorEvent& ev = e.events[i];
        out << i << ',' << ev.d_hamming << ',' << ev.length << ',' << to_bitstring(ev.input_bits)
            << ',' << to_bitstring(ev.coded_bits) << '\n';
    }
    return out.str();
}

}  // namespace bicmb
