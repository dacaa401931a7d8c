// bicmb: interleaver design-criteria workbench for bit-interleaved coded
// multiple beamforming.
//
// Subcommands:
//   enumerate  list convolutional-code error events up to weight/length bounds
//   verify     check an interleaver against the design criteria over all events/phases
//   search     look for an interleaver that satisfies the criteria
//   simulate   Monte Carlo BER sweep of the beamformed link, diversity fit
//
// Exit codes: 0 success/pass, 1 usage or runtime error, 2 criteria
// violations found.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "bicmb/convcode.hpp"
#include "bicmb/interleaver.hpp"
#include "bicmb/report.hpp"
#include "bicmb/runconfig.hpp"
#include "bicmb/sim.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

std::string first_line(const std::string& text) {
    const auto pos = text.find('\n');
    return pos == std::string::npos ? text : text.substr(0, pos);
}

std::string dir_of(const std::string& path) {
    const auto pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

struct Bounds {
    int max_dh = 0;
    int max_len = 0;
};

// Default bounds: weight up to d_free + 4 with a length making the
// enumeration provably complete at that weight. Callers reject 0 before
// this runs; -1 means unset.
Bounds resolve_bounds(const bicmb::Trellis& trellis, int max_dh_opt, int max_len_opt) {
    Bounds b;
    b.max_dh = max_dh_opt > 0 ? max_dh_opt : bicmb::free_distance(trellis) + 4;
    b.max_len = max_len_opt > 0 ? max_len_opt : bicmb::choose_max_len(trellis, b.max_dh);
    return b;
}

int cmd_enumerate(const std::string& code_text, int max_dh, int max_len,
                  const std::string& out_path) {
    const bicmb::CodeSpec spec = bicmb::parse_code_spec(code_text);
    const bicmb::Trellis trellis = bicmb::build_trellis(spec);
    if (max_dh == 0 || max_len == 0)
        throw std::invalid_argument("enumerate: bounds must be >= 1");
    const Bounds bounds = resolve_bounds(trellis, max_dh, max_len);
    const bicmb::EventEnumeration events =
        bicmb::enumerate_error_events(trellis, bounds.max_dh, bounds.max_len);
    const int dfree = bicmb::free_distance(trellis);

    std::cout << "code: " << bicmb::format_code_spec(spec) << "\n";
    std::cout << "d_free=" << dfree << " events=" << events.events.size()
              << " complete_to_weight=" << events.complete_to_weight
              << " max_dh=" << bounds.max_dh << " max_len=" << bounds.max_len << "\n";
    const std::string csv = bicmb::events_to_csv(events);
    if (!out_path.empty()) {
        write_file(out_path, csv);
        std::cout << "events written to " << out_path << "\n";
    } else {
        std::cout << csv;
    }
    return 0;
}

int cmd_verify(const std::string& code_text, const std::string& interleaver_path,
               const std::string& mode, int max_dh, int max_len, const std::string& out_path) {
    const bicmb::CodeSpec spec = bicmb::parse_code_spec(code_text);
    const bicmb::Trellis trellis = bicmb::build_trellis(spec);
    const bicmb::InterleaverSpec il_spec =
        bicmb::parse_interleaver_spec(first_line(read_file(interleaver_path)));
    if (!mode.empty()) {
        const bool want_ofdm = (mode == "ofdm");
        if (want_ofdm != (il_spec.mode == bicmb::InterleaverMode::ofdm))
            throw std::invalid_argument("verify: --mode " + mode +
                                        " does not match the interleaver file");
    }
    const bicmb::InterleaverMap map = bicmb::build_map(il_spec);
    if (max_dh == 0 || max_len == 0) throw std::invalid_argument("verify: bounds must be >= 1");
    const Bounds bounds = resolve_bounds(trellis, max_dh, max_len);
    const bicmb::EventEnumeration events =
        bicmb::enumerate_error_events(trellis, bounds.max_dh, bounds.max_len);

    const bicmb::CriteriaReport report = bicmb::verify(map, events);

    json j;
    j["version"] = bicmb::kToolVersion;
    j["command"] = "verify";
    j["code"] = json{{"text", bicmb::format_code_spec(spec)}};
    j["interleaver"] = json{{"text", bicmb::format_interleaver_spec(il_spec)}};
    j["enumeration"] = json{{"max_dh", bounds.max_dh},
                            {"max_len", bounds.max_len},
                            {"event_count", events.events.size()},
                            {"complete_to_weight", events.complete_to_weight}};
    j["report"] = bicmb::report_to_json(report);

    std::cout << bicmb::format_report_table(report);
    if (!out_path.empty()) {
        write_file(out_path, j.dump(2) + "\n");
        std::cout << "report written to " << out_path << "\n";
    }
    std::cout << (report.pass() ? "PASS" : "FAIL") << "\n";
    return report.pass() ? 0 : 2;
}

int cmd_search(const std::string& code_text, const std::string& template_path, int budget,
               std::uint64_t seed, int max_dh, int max_len, const std::string& out_path) {
    const bicmb::CodeSpec spec = bicmb::parse_code_spec(code_text);
    const bicmb::Trellis trellis = bicmb::build_trellis(spec);
    const bicmb::InterleaverSpec tmpl =
        bicmb::parse_interleaver_spec(first_line(read_file(template_path)));
    if (budget < 1) throw std::invalid_argument("search: budget must be >= 1");
    if (max_dh == 0 || max_len == 0) throw std::invalid_argument("search: bounds must be >= 1");
    const Bounds bounds = resolve_bounds(trellis, max_dh, max_len);
    const bicmb::EventEnumeration events =
        bicmb::enumerate_error_events(trellis, bounds.max_dh, bounds.max_len);

    const bicmb::SearchResult result = bicmb::search_interleaver(tmpl, events, budget, seed);

    json j = bicmb::search_result_to_json(result);
    j["version"] = bicmb::kToolVersion;
    j["command"] = "search";
    j["code"] = json{{"text", bicmb::format_code_spec(spec)}};

    if (result.found) {
        const std::string map_text = bicmb::format_interleaver_spec(result.map.spec) + "\n";
        std::cout << "found a compliant interleaver (candidate " << result.candidate_index
                  << " of " << result.candidates_tried << " tried)\n";
        if (result.report.structural_note)
            std::cout << "note: " << *result.report.structural_note << "\n";
        if (!out_path.empty()) {
            write_file(out_path, map_text);
            std::cout << "interleaver written to " << out_path << "\n";
        } else {
            std::cout << map_text;
        }
        return 0;
    }
    std::cout << "no compliant interleaver within budget " << budget << "; best candidate "
              << result.candidate_index << " has " << result.best_violations << " violations\n";
    std::cout << bicmb::format_report_table(result.report);
    if (!out_path.empty()) {
        write_file(out_path, j.dump(2) + "\n");
        std::cout << "failure report written to " << out_path << "\n";
    }
    return 2;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed, int workers,
                 const std::string& out_prefix, const std::string& compare_path) {
    bicmb::RunConfig cfg = bicmb::parse_run_config(read_file(config_path), dir_of(config_path));
    cfg.sim.master_seed = seed;
    bicmb::validate_sim_config(cfg.sim);

    const std::string csv_path = out_prefix + ".csv";
    const std::string json_path = out_prefix + ".json";

    const bicmb::BerCurve curve = bicmb::sweep_snr(cfg.sim, workers);
    write_file(csv_path, bicmb::curve_to_csv(curve));

    json j;
    j["version"] = bicmb::kToolVersion;
    j["command"] = "simulate";
    j["config"] = bicmb::resolved_config_json(cfg);
    j["curve_csv"] = csv_path;

    bool fit_ok = true;
    try {
        const bicmb::DiversityEstimate est =
            bicmb::estimate_diversity(curve, cfg.fit_window_lo, cfg.fit_window_hi);
        j["diversity"] = bicmb::diversity_to_json(est);
        std::cout << "diversity order: " << est.order << " (slope " << est.slope << ", "
                  << est.points_used << " points)\n";
    } catch (const std::exception& e) {
        j["diversity"] = json{{"error", e.what()}};
        fit_ok = false;
    }

    if (!compare_path.empty()) {
        bicmb::RunConfig other = cfg;
        other.sim.interleaver =
            bicmb::parse_interleaver_spec(first_line(read_file(compare_path)));
        bicmb::validate_sim_config(other.sim);
        const bicmb::BerCurve curve2 = bicmb::sweep_snr(other.sim, workers);
        const std::string csv2 = out_prefix + ".compare.csv";
        write_file(csv2, bicmb::curve_to_csv(curve2));
        json cj;
        cj["interleaver"] = json{{"text", bicmb::format_interleaver_spec(other.sim.interleaver)}};
        cj["curve_csv"] = csv2;
        try {
            const bicmb::DiversityEstimate a =
                bicmb::estimate_diversity(curve, cfg.fit_window_lo, cfg.fit_window_hi);
            const bicmb::DiversityEstimate b =
                bicmb::estimate_diversity(curve2, cfg.fit_window_lo, cfg.fit_window_hi);
            cj["diversity"] = bicmb::diversity_to_json(b);
            cj["order_gap"] = a.order - b.order;
            std::cout << "compare diversity order: " << b.order << "\n";
            std::cout << "diversity order gap: " << a.order - b.order << "\n";
        } catch (const std::exception& e) {
            cj["error"] = e.what();
            fit_ok = false;
        }
        j["compare"] = std::move(cj);
    }

    write_file(json_path, j.dump(2) + "\n");
    std::cout << "curve written to " << csv_path << "\n";
    std::cout << "report written to " << json_path << "\n";
    if (!fit_ok) std::cout << "warning: diversity fit unavailable (see report)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BICMB interleaver design-criteria workbench"};
    app.require_subcommand(1);

    std::string code_text, interleaver_path, mode, out_path, config_path, compare_path;
    int max_dh = -1, max_len = -1, budget = 1000;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    std::uint64_t seed = 0;

    auto* enumerate = app.add_subcommand("enumerate", "enumerate error events");
    enumerate->add_option("--code", code_text, "code text, e.g. \"K=7 g=133,171\"")->required();
    enumerate->add_option("--max-dh", max_dh, "weight bound (default d_free + 4)");
    enumerate->add_option("--max-len", max_len, "length bound (default: completeness)");
    enumerate->add_option("--out", out_path, "CSV output path (default stdout)");

    auto* verify = app.add_subcommand("verify", "verify interleaver criteria");
    verify->add_option("--code", code_text, "code text")->required();
    verify->add_option("--interleaver", interleaver_path, "interleaver file")->required();
    verify->add_option("--mode", mode, "sc|ofdm (must match the file)")
        ->check(CLI::IsMember({"sc", "ofdm"}));
    verify->add_option("--max-dh", max_dh, "event weight bound");
    verify->add_option("--max-len", max_len, "event length bound");
    verify->add_option("--out", out_path, "JSON report path");

    auto* search = app.add_subcommand("search", "search for a compliant interleaver");
    search->add_option("--code", code_text, "code text")->required();
    search->add_option("--interleaver", interleaver_path, "template interleaver file")->required();
    search->add_option("--budget", budget, "candidate evaluations (default 1000)");
    search->add_option("--seed", seed, "search seed")->required();
    search->add_option("--max-dh", max_dh, "event weight bound");
    search->add_option("--max-len", max_len, "event length bound");
    search->add_option("--out", out_path, "winning interleaver path");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo BER sweep");
    simulate->add_option("--config", config_path, "run config JSON")->required();
    simulate->add_option("--seed", seed, "master seed")->required();
    simulate->add_option("--workers", workers, "worker threads (cannot change results)");
    simulate->add_option("--out", out_path, "output prefix (default bicmb_run)");
    simulate->add_option("--compare", compare_path, "second interleaver file to compare");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (enumerate->parsed()) return cmd_enumerate(code_text, max_dh, max_len, out_path);
        if (verify->parsed())
            return cmd_verify(code_text, interleaver_path, mode, max_dh, max_len, out_path);
        if (search->parsed())
            return cmd_search(code_text, interleaver_path, budget, seed, max_dh, max_len,
                              out_path);
        if (simulate->parsed()) {
            const std::string prefix = out_path.empty() ? "bicmb_run" : out_path;
            return cmd_simulate(config_path, seed, workers, prefix, compare_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
