#include "bicmb/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bicmb/rng.hpp"

namespace bicmb {

namespace {

constexpr long long kChunkFrames = 64;  // stop-rule granularity, worker-independent

struct SimContext {
    Trellis trellis;
    InterleaverMap map;
    Constellation constel;

    explicit SimContext(const SimConfig& cfg)
        : trellis(cfg.uncoded ? Trellis{} : build_trellis(cfg.code)),
          map(build_map(cfg.interleaver)),
          constel(make_constellation(cfg.constellation)) {}
};

double noise_n0(const SimConfig& cfg, double snr_db) {
    if (std::isinf(snr_db)) return 0.0;  // noiseless sentinel
    return cfg.num_streams / std::pow(10.0, snr_db / 10.0);
}

FrameResult run_frame_ctx(const SimConfig& cfg, const SimContext& ctx, double snr_db,
                          int snr_index, long long frame_index) {
    std::mt19937_64 rng(frame_seed(cfg.master_seed, static_cast<std::uint64_t>(snr_index),
                                   static_cast<std::uint64_t>(frame_index)));
    const double n0 = noise_n0(cfg, snr_db);
    const double noise_scale = std::sqrt(n0 / 2.0);

    Bits info(static_cast<std::size_t>(cfg.info_bits_per_frame));
    for (auto& b : info) b = static_cast<std::uint8_t>(rng() & 1);

    if (cfg.uncoded) {
        // Calibration mode: modulate the raw bits over the unit-gain channel
        // and hard-demap.
        auto x = modulate(info, ctx.constel);
        for (auto& y : x)
            if (noise_scale > 0.0) {
                auto [g1, g2] = gaussian_pair(rng);
                y += cplx(g1, g2) * noise_scale;
            }
        Bits decided = hard_demap(x, ctx.constel);
        FrameResult r;
        for (std::size_t i = 0; i < info.size(); ++i) r.bit_errors += (info[i] != decided[i]);
        r.frame_error = r.bit_errors > 0;
        return r;
    }

    const int s_count = cfg.num_streams;
    const int bps = ctx.constel.bits_per_symbol;
    Bits coded = encode(cfg.code, info, true);
    const long long n_coded = static_cast<long long>(coded.size());
    const long long times = n_coded / (static_cast<long long>(s_count) * bps);

    // Interleave: scatter coded bits into per-stream label arrays.
    std::vector<Bits> labels(s_count, Bits(static_cast<std::size_t>(times) * bps));
    for (long long i = 0; i < n_coded; ++i) {
        const Slot slot = ctx.map.slot_at(i);
        labels[slot.stream][static_cast<std::size_t>(slot.time) * bps + slot.bit_slot] = coded[i];
    }

    // Quasi-static channel: one draw per frame, held for the whole codeword.
    std::vector<double> sigma(s_count, 1.0);
    if (!cfg.bypass_channel) {
        const CMatrix h = sample_channel(cfg.nt, cfg.nr, rng);
        const SvdResult svd = svd_decompose(h);
        for (int s = 0; s < s_count; ++s) sigma[s] = svd.sigma[s];
    }

    // Per-stream scalar subchannels with AWGN, then max-log metrics.
    std::vector<std::vector<BitMetric>> symbol_metrics(
        s_count, std::vector<BitMetric>(static_cast<std::size_t>(times) * bps));
    for (int s = 0; s < s_count; ++s) {
        const auto x = modulate(labels[s], ctx.constel);
        for (long long t = 0; t < times; ++t) {
            cplx y = sigma[s] * x[static_cast<std::size_t>(t)];
            if (noise_scale > 0.0) {
                auto [g1, g2] = gaussian_pair(rng);
                y += cplx(g1, g2) * noise_scale;
            }
            const auto bm = bit_metrics(y, sigma[s], ctx.constel);
            for (int b = 0; b < bps; ++b)
                symbol_metrics[s][static_cast<std::size_t>(t) * bps + b] = bm[b];
        }
    }

    // Deinterleave metrics back into coded-bit order and decode.
    std::vector<BitMetric> metrics(static_cast<std::size_t>(n_coded));
    for (long long i = 0; i < n_coded; ++i) {
        const Slot slot = ctx.map.slot_at(i);
        metrics[static_cast<std::size_t>(i)] =
            symbol_metrics[slot.stream][static_cast<std::size_t>(slot.time) * bps + slot.bit_slot];
    }
    const Bits decoded = viterbi_decode(ctx.trellis, metrics);

    FrameResult r;
    for (std::size_t i = 0; i < info.size(); ++i) r.bit_errors += (info[i] != decoded[i]);
    r.frame_error = r.bit_errors > 0;
    return r;
}

}  // namespace

void validate_sim_config(const SimConfig& cfg) {
    if (cfg.num_streams < 1 || cfg.num_streams > std::min(cfg.nt, cfg.nr))
        throw std::invalid_argument("sim: need 1 <= S <= min(Nt, Nr)");
    if (cfg.info_bits_per_frame < 1)
        throw std::invalid_argument("sim: info_bits_per_frame must be >= 1");
    if (cfg.max_frames < 1) throw std::invalid_argument("sim: max_frames must be >= 1");
    if (cfg.target_bit_errors < 1)
        throw std::invalid_argument("sim: target_bit_errors must be >= 1");
    const Constellation c = make_constellation(cfg.constellation);
    if (cfg.uncoded) {
        if (cfg.info_bits_per_frame % c.bits_per_symbol != 0)
            throw std::invalid_argument("sim: uncoded frame length must be a multiple of B");
        if (cfg.num_streams != 1)
            throw std::invalid_argument("sim: uncoded calibration mode is single-stream");
        return;
    }
    validate(cfg.code);
    if (cfg.interleaver.mode != InterleaverMode::single_carrier)
        throw std::invalid_argument("sim: only single-carrier interleavers are simulated");
    if (cfg.interleaver.num_streams != cfg.num_streams)
        throw std::invalid_argument("sim: interleaver S differs from configured stream count");
    if (cfg.interleaver.bits_per_symbol != c.bits_per_symbol)
        throw std::invalid_argument("sim: interleaver B differs from constellation width");
    const long long coded =
        cfg.code.n_out() * (cfg.info_bits_per_frame + cfg.code.constraint_length - 1);
    if (coded % cfg.interleaver.period != 0)
        throw std::invalid_argument(
            "sim: coded frame length " + std::to_string(coded) +
            " is not a whole number of interleaver periods (P=" +
            std::to_string(cfg.interleaver.period) + ")");
}

FrameResult run_frame(const SimConfig& cfg, double snr_db, int snr_index,
                      long long frame_index) {
    validate_sim_config(cfg);
    SimContext ctx(cfg);
    return run_frame_ctx(cfg, ctx, snr_db, snr_index, frame_index);
}

BerCurve sweep_snr(const SimConfig& cfg, int workers) {
    validate_sim_config(cfg);
    if (cfg.snr_db.empty()) throw std::invalid_argument("sweep: snr_db list is empty");
    if (!std::is_sorted(cfg.snr_db.begin(), cfg.snr_db.end()))
        throw std::invalid_argument("sweep: snr_db list must be ascending");
    if (workers < 1) workers = 1;
    SimContext ctx(cfg);

    BerCurve curve;
    for (std::size_t snr_index = 0; snr_index < cfg.snr_db.size(); ++snr_index) {
        const double snr = cfg.snr_db[snr_index];
        BerPoint pt;
        pt.snr_db = snr;
        long long done = 0;
        while (pt.bit_errors < cfg.target_bit_errors && done < cfg.max_frames) {
            const long long batch = std::min(kChunkFrames, cfg.max_frames - done);
            std::vector<long long> errs(static_cast<std::size_t>(workers), 0);
            std::vector<long long> ferrs(static_cast<std::size_t>(workers), 0);
            auto work = [&](int w) {
                for (long long f = done + w; f < done + batch; f += workers) {
                    FrameResult r =
                        run_frame_ctx(cfg, ctx, snr, static_cast<int>(snr_index), f);
                    errs[static_cast<std::size_t>(w)] += r.bit_errors;
                    ferrs[static_cast<std::size_t>(w)] += r.frame_error ? 1 : 0;
                }
            };
            if (workers == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(static_cast<std::size_t>(workers));
                for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
                for (auto& th : pool) th.join();
            }
            // Exact integer merge in fixed order: worker count cannot
            // change the totals.
            for (int w = 0; w < workers; ++w) {
                pt.bit_errors += errs[static_cast<std::size_t>(w)];
                pt.frame_errors += ferrs[static_cast<std::size_t>(w)];
            }
            done += batch;
        }
        pt.frames = done;
        pt.bits = done * cfg.info_bits_per_frame;
        pt.ber = static_cast<double>(pt.bit_errors) / static_cast<double>(pt.bits);
        pt.fer = static_cast<double>(pt.frame_errors) / static_cast<double>(pt.frames);
        curve.points.push_back(pt);
    }
    return curve;
}

DiversityEstimate estimate_diversity(const BerCurve& curve, double window_lo_db,
                                     double window_hi_db) {
    std::vector<std::pair<double, double>> pts;  // (snr_db, log10 ber)
    for (const BerPoint& p : curve.points)
        if (p.snr_db >= window_lo_db && p.snr_db <= window_hi_db && p.bit_errors >= 100 &&
            p.ber > 0.0 && std::isfinite(p.snr_db))
            pts.push_back({p.snr_db, std::log10(p.ber)});
    if (pts.size() < 3)
        throw std::runtime_error("diversity fit: need at least 3 points with >= 100 bit errors "
                                 "in the window, have " + std::to_string(pts.size()));

    double sx = 0, sy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
    }
    const double n = static_cast<double>(pts.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) throw std::runtime_error("diversity fit: SNR points are all equal");

    DiversityEstimate est;
    est.slope = sxy / sxx;
    est.order = -10.0 * est.slope;
    est.window_lo = window_lo_db;
    est.window_hi = window_hi_db;
    est.points_used = static_cast<int>(pts.size());
    double ssr = 0.0;
    for (auto& [x, y] : pts) {
        const double pred = my + est.slope * (x - mx);
        ssr += (y - pred) * (y - pred);
    }
    est.residual = std::sqrt(ssr / n);
    return est;
}

std::string curve_to_csv(const BerCurve& curve) {
    std::ostringstream out;
    out << "snr_db,bits,bit_errors,frames,frame_errors,ber,fer\n";
    char buf[64];
    for (const BerPoint& p : curve.points) {
        if (std::isinf(p.snr_db)) {
            out << "inf";
        } else {
            std::snprintf(buf, sizeof buf, "%.10g", p.snr_db);
            out << buf;
        }
        out << ',' << p.bits << ',' << p.bit_errors << ',' << p.frames << ','
            << p.frame_errors << ',';
        std::snprintf(buf, sizeof buf, "%.10e", p.ber);
        out << buf << ',';
        std::snprintf(buf, sizeof buf, "%.10e", p.fer);
        out << buf << '\n';
    }
    return out.str();
}

}  // namespace bicmb
