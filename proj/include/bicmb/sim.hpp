#pragma once

// Monte Carlo link simulation of the beamformed, bit-interleaved coded
// chain: encode -> interleave -> modulate -> per-stream singular-value
// scaling + AWGN -> max-log bit metrics -> deinterleave -> Viterbi ->
// error counting, swept over SNR, plus the diversity-order fit on the
// resulting BER curve.
//
// Determinism contract: every frame is seeded by
// frame_seed(master_seed, snr_index, frame_index) and frames are
// aggregated in fixed-size chunks with exact integer sums, so results are
// identical for any worker count.

#include <cstdint>
#include <string>
#include <vector>

#include "bicmb/convcode.hpp"
#include "bicmb/interleaver.hpp"
#include "bicmb/mimo.hpp"

namespace bicmb {

struct SimConfig {
    CodeSpec code;
    InterleaverSpec interleaver;
    std::string constellation = "qpsk";
    int nt = 2;
    int nr = 2;
    int num_streams = 2;           // S <= min(Nt, Nr)
    std::vector<double> snr_db;    // ascending; +inf = noiseless sentinel
    long long info_bits_per_frame = 1024;
    long long max_frames = 100000;
    long long target_bit_errors = 500;
    std::uint64_t master_seed = 0;
    bool bypass_channel = false;   // skip fading: sigma_s = 1 for all streams
    bool uncoded = false;          // calibration mode: no code, hard demap
};

// Throws std::invalid_argument when the pieces do not fit together
// (stream counts, constellation width vs B, frame length vs period, ...).
void validate_sim_config(const SimConfig& cfg);

struct FrameResult {
    long long bit_errors = 0;
    bool frame_error = false;
};

// One quasi-static frame: H (and everything else) is drawn from the
// frame's own seed, so the result depends only on
// (master_seed, snr_index, frame_index).
FrameResult run_frame(const SimConfig& cfg, double snr_db, int snr_index,
                      long long frame_index);

struct BerPoint {
    double snr_db = 0.0;
    long long bits = 0;
    long long bit_errors = 0;
    long long frames = 0;
    long long frame_errors = 0;
    double ber = 0.0;
    double fer = 0.0;
};

struct BerCurve {
    std::vector<BerPoint> points;
};

// Simulates each SNR point until target_bit_errors or max_frames,
// whichever comes first (checked at chunk granularity). `workers` is
// advisory; it cannot change the curve.
BerCurve sweep_snr(const SimConfig& cfg, int workers = 1);

struct DiversityEstimate {
    double slope = 0.0;     // d log10(BER) / d SNR_dB
    double order = 0.0;     // -10 * slope
    double residual = 0.0;  // RMS residual of the fit
    double window_lo = 0.0;
    double window_hi = 0.0;
    int points_used = 0;
};

// Least-squares fit of log10(BER) against SNR_dB over the window, using
// only points with at least 100 bit errors (the statistical floor).
// Throws std::runtime_error with fewer than 3 qualifying points.
DiversityEstimate estimate_diversity(const BerCurve& curve, double window_lo_db,
                                     double window_hi_db);

// CSV: snr_db,bits,bit_errors,frames,frame_errors,ber,fer
std::string curve_to_csv(const BerCurve& curve);

}  // namespace bicmb
