#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bicmb/convcode.hpp"
#include "oracles.hpp"

using namespace bicmb;

namespace {

CodeSpec code_5_7() { return parse_code_spec("K=3 g=5,7"); }
CodeSpec code_133_171() { return parse_code_spec("K=7 g=133,171"); }

// Hard-decision metrics: cost 0 for the received bit value, 1 otherwise.
std::vector<BitMetric> hard_metrics(const Bits& received) {
    std::vector<BitMetric> m(received.size());
    for (std::size_t i = 0; i < received.size(); ++i)
        m[i] = received[i] ? BitMetric{1.0, 0.0} : BitMetric{0.0, 1.0};
    return m;
}

Bits random_bits(std::mt19937_64& rng, std::size_t n) {
    Bits b(n);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng() & 1);
    return b;
}

}  // namespace

TEST_CASE("code spec parsing and validation") {
    const CodeSpec spec = code_133_171();
    CHECK(spec.constraint_length == 7);
    CHECK(spec.generators == std::vector<std::uint32_t>{0133, 0171});
    CHECK(format_code_spec(spec) == "K=7 g=133,171");

    CHECK_THROWS_AS(parse_code_spec("K=3 g=5"), std::invalid_argument);       // n_out < 2
    CHECK_THROWS_AS(parse_code_spec("K=3 g=15,7"), std::invalid_argument);    // tap outside window
    CHECK_THROWS_AS(parse_code_spec("K=3 g=0,7"), std::invalid_argument);     // zero generator
    CHECK_THROWS_AS(parse_code_spec("K=3 g=1,3"), std::invalid_argument);     // not delay-free
    CHECK_THROWS_AS(parse_code_spec("K=1 g=1,1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_code_spec("g=5,7"), std::invalid_argument);
    CHECK_THROWS_AS(parse_code_spec("K=3 g=5,7 bogus"), std::invalid_argument);
}

TEST_CASE("trellis structure") {
    const Trellis t = build_trellis(code_5_7());
    CHECK(t.num_states == 4);
    // (state 00, input 1) -> outputs (1,1)
    CHECK(t.transitions[0][1].out_bits == 0b11);
    // linearity anchor: zero state, zero input
    CHECK(t.transitions[0][0].out_bits == 0);
    CHECK(t.transitions[0][0].next_state == 0);

    const Trellis big = build_trellis(code_133_171());
    CHECK(big.num_states == 64);
    int transitions = 0;
    std::vector<int> indegree(64, 0);
    for (const auto& per_state : big.transitions)
        for (const auto& tr : per_state) {
            ++transitions;
            ++indegree[tr.next_state];
        }
    CHECK(transitions == 128);
    for (int d : indegree) CHECK(d == 2);  // exactly 2 incoming per state
}

TEST_CASE("encode examples") {
    const CodeSpec spec = code_5_7();
    CHECK(encode(spec, {1, 0, 0}, false) == Bits{1, 1, 0, 1, 1, 1});
    CHECK(encode(spec, {1, 0, 1}, false) == Bits{1, 1, 0, 1, 0, 0});
    CHECK(encode(spec, {0, 0, 0, 0}, false) == Bits(8, 0));
    // termination appends K-1 tail steps and returns to state 0
    CHECK(encode(spec, {1}, true).size() == 2 * 3);
    CHECK_THROWS_AS(encode(spec, {}, false), std::invalid_argument);
}

TEST_CASE("encode linearity") {
    std::mt19937_64 rng(123);
    for (const char* text : {"K=3 g=5,7", "K=4 g=15,17", "K=7 g=133,171"}) {
        const CodeSpec spec = parse_code_spec(text);
        for (int it = 0; it < 50; ++it) {
            const Bits a = random_bits(rng, 24);
            const Bits b = random_bits(rng, 24);
            CHECK(encode(spec, xor_bits(a, b), false) ==
                  xor_bits(encode(spec, a, false), encode(spec, b, false)));
        }
    }
}

TEST_CASE("viterbi noiseless round trips") {
    const CodeSpec spec = code_5_7();
    const Trellis t = build_trellis(spec);

    const Bits coded = encode(spec, {1, 0, 0}, true);
    const Bits decoded = viterbi_decode(t, hard_metrics(coded));
    CHECK(Bits(decoded.begin(), decoded.begin() + 3) == Bits{1, 0, 0});
    CHECK(Bits(decoded.begin() + 3, decoded.end()) == Bits{0, 0});  // tail

    // all-zero codeword
    const Bits zeros = viterbi_decode(t, hard_metrics(Bits(12, 0)));
    CHECK(zeros == Bits(6, 0));
}

TEST_CASE("viterbi corrects single flips of the weight-5 codeword") {
    const CodeSpec spec = code_5_7();
    const Trellis t = build_trellis(spec);
    const Bits coded = encode(spec, {1, 0, 0}, true);
    for (std::size_t flip = 0; flip < coded.size(); ++flip) {
        Bits corrupted = coded;
        corrupted[flip] ^= 1;
        const Bits decoded = viterbi_decode(t, hard_metrics(corrupted));
        CHECK(Bits(decoded.begin(), decoded.begin() + 3) == Bits{1, 0, 0});
    }
}

TEST_CASE("viterbi rejects bad metrics") {
    const Trellis t = build_trellis(code_5_7());
    std::vector<BitMetric> m(5, BitMetric{0.0, 1.0});  // not a whole step
    CHECK_THROWS_AS(viterbi_decode(t, m), std::invalid_argument);
    m.assign(6, BitMetric{0.0, 1.0});
    m[2][0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(viterbi_decode(t, m), std::invalid_argument);
}

TEST_CASE("viterbi cost matches exhaustive minimum on random metrics") {
    std::mt19937_64 rng(77);
    const Trellis t = build_trellis(code_5_7());
    for (int it = 0; it < 200; ++it) {
        const int steps = 4 + static_cast<int>(rng() % 5);  // 4..8
        std::vector<BitMetric> m(static_cast<std::size_t>(steps) * 2);
        for (auto& bm : m) {
            bm[0] = static_cast<double>(rng() % 1000) / 250.0;
            bm[1] = static_cast<double>(rng() % 1000) / 250.0;
        }
        const Bits decoded = viterbi_decode(t, m);
        CHECK(path_cost(t, decoded, m) == doctest::Approx(oracle::exhaustive_best_cost(t, m))
                                              .epsilon(1e-12));
    }
}

TEST_CASE("event enumeration matches the (5,7) examples") {
    const Trellis t = build_trellis(code_5_7());
    const EventEnumeration e = enumerate_error_events(t, 5, 12);
    REQUIRE(!e.events.empty());
    CHECK(e.events[0].d_hamming == 5);
    CHECK(e.events[0].coded_bits == Bits{1, 1, 0, 1, 1, 1});
    int weight5 = 0;
    for (const auto& ev : e.events) weight5 += (ev.d_hamming == 5);
    CHECK(weight5 == 1);
    CHECK(e.complete_to_weight == 5);

    const EventEnumeration empty = enumerate_error_events(t, 4, choose_max_len(t, 4));
    CHECK(empty.events.empty());
    CHECK(empty.complete_to_weight == 4);
}

TEST_CASE("enumeration equals brute force for small codes") {
    for (const char* text : {"K=2 g=3,1", "K=3 g=5,7", "K=3 g=5,7,7", "K=4 g=15,17"}) {
        const CodeSpec spec = parse_code_spec(text);
        const Trellis t = build_trellis(spec);
        const EventEnumeration lib = enumerate_error_events(t, 8, 10);
        const auto brute = oracle::brute_force_events(spec, 8, 10);
        REQUIRE(lib.events.size() == brute.size());
        for (std::size_t i = 0; i < brute.size(); ++i) {
            CHECK(lib.events[i].coded_bits == brute[i].coded_bits);
            CHECK(lib.events[i].input_bits == brute[i].input_bits);
            CHECK(lib.events[i].length == brute[i].length);
            CHECK(lib.events[i].d_hamming == brute[i].d_hamming);
        }
    }
}

TEST_CASE("enumerated events re-encode consistently and are sorted") {
    const CodeSpec spec = code_133_171();
    const Trellis t = build_trellis(spec);
    const EventEnumeration e = enumerate_error_events(t, 12, choose_max_len(t, 12));
    REQUIRE(!e.events.empty());
    for (std::size_t i = 0; i < e.events.size(); ++i) {
        const ErrorEvent& ev = e.events[i];
        CHECK(encode(spec, ev.input_bits, false) == ev.coded_bits);
        CHECK(static_cast<long long>(weight(ev.coded_bits)) == ev.d_hamming);
        CHECK(ev.input_bits[0] == 1);
        if (i) {
            const ErrorEvent& prev = e.events[i - 1];
            const auto key = std::tuple(ev.d_hamming, ev.length, ev.coded_bits);
            const auto pkey = std::tuple(prev.d_hamming, prev.length, prev.coded_bits);
            CHECK(pkey < key);
        }
    }
}

TEST_CASE("enumeration event cap errors out instead of truncating") {
    const Trellis t = build_trellis(code_5_7());
    CHECK_THROWS_AS(enumerate_error_events(t, 20, 40, 16), std::runtime_error);
    CHECK_THROWS_AS(enumerate_error_events(t, 0, 10), std::invalid_argument);
}

TEST_CASE("free distance: examples and oracle agreement") {
    CHECK(free_distance(build_trellis(code_5_7())) == 5);
    CHECK(free_distance(build_trellis(code_133_171())) == 10);
    CHECK(free_distance(build_trellis(parse_code_spec("K=2 g=3,1"))) == 3);

    for (const char* text : {"K=2 g=3,1", "K=3 g=5,7", "K=3 g=5,7,7", "K=4 g=15,17",
                             "K=7 g=133,171"}) {
        const CodeSpec spec = parse_code_spec(text);
        CHECK(free_distance(build_trellis(spec)) == oracle::free_distance_dp(spec));
    }
}

TEST_CASE("free distance equals the minimum enumerated weight") {
    for (const char* text : {"K=3 g=5,7", "K=4 g=15,17"}) {
        const Trellis t = build_trellis(parse_code_spec(text));
        const int dfree = free_distance(t);
        const EventEnumeration e = enumerate_error_events(t, dfree + 4, choose_max_len(t, dfree + 4));
        CHECK(e.events.front().d_hamming == dfree);
    }
}

TEST_CASE("catastrophic codes are rejected") {
    // 6 = 110, 3 = 011 share the factor 11: classic catastrophic pair.
    const CodeSpec bad = parse_code_spec("K=3 g=6,3");
    const Trellis t = build_trellis(bad);
    CHECK(is_catastrophic(t));
    CHECK_THROWS_AS(free_distance(t), std::runtime_error);
    CHECK_FALSE(is_catastrophic(build_trellis(code_133_171())));
}

TEST_CASE("completeness bound tracks the length limit") {
    const Trellis t = build_trellis(code_5_7());
    // With a tiny length bound the enumeration cannot be complete at
    // weight 8: longer events of weight <= 8 exist.
    const EventEnumeration cut = enumerate_error_events(t, 8, 4);
    CHECK(cut.complete_to_weight < 8);
    CHECK(cut.complete_to_weight == min_event_weight_beyond(t, 4) - 1);
    // choose_max_len returns the smallest complete length bound.
    const int len = choose_max_len(t, 8);
    CHECK(min_event_weight_beyond(t, len) > 8);
    CHECK(min_event_weight_beyond(t, len - 1) <= 8);
}

TEST_CASE("event CSV export") {
    const Trellis t = build_trellis(code_5_7());
    const EventEnumeration e = enumerate_error_events(t, 5, 10);
    const std::string csv = events_to_csv(e);
    CHECK(csv == "event_id,d_H,L,input_bits,coded_bits\n0,5,3,100,110111\n");
}
