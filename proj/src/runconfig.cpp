#include "bicmb/runconfig.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bicmb {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + section);
}

double snr_value(const json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("config: snr_db entries are numbers or \"inf\"");
    }
    return v.get<double>();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_line(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir) {
    json doc = json::parse(json_text);
    if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
    reject_unknown(doc, "top level", {"code", "interleaver", "phy", "sim"});

    RunConfig cfg;
    SimConfig& sim = cfg.sim;

    if (doc.contains("code")) {
        const json& c = doc["code"];
        reject_unknown(c, "code", {"text"});
        sim.code = parse_code_spec(c.at("text").get<std::string>());
    } else {
        sim.code = parse_code_spec("K=7 g=133,171");
    }

    bool have_interleaver = false;
    if (doc.contains("interleaver")) {
        const json& il = doc["interleaver"];
        reject_unknown(il, "interleaver", {"text", "file"});
        if (il.contains("text") == il.contains("file"))
            throw std::invalid_argument("config: interleaver needs exactly one of text/file");
        std::string text;
        if (il.contains("text")) {
            text = il["text"].get<std::string>();
        } else {
            std::string path = il["file"].get<std::string>();
            if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
            text = strip_line(read_file(path));
        }
        sim.interleaver = parse_interleaver_spec(text);
        have_interleaver = true;
    }

    if (doc.contains("phy")) {
        const json& p = doc["phy"];
        reject_unknown(p, "phy", {"constellation", "nt", "nr", "streams", "bypass_channel"});
        if (p.contains("constellation")) sim.constellation = p["constellation"].get<std::string>();
        if (p.contains("nt")) sim.nt = p["nt"].get<int>();
        if (p.contains("nr")) sim.nr = p["nr"].get<int>();
        if (p.contains("streams")) sim.num_streams = p["streams"].get<int>();
        if (p.contains("bypass_channel")) sim.bypass_channel = p["bypass_channel"].get<bool>();
    }

    bool have_fit = false;
    if (doc.contains("sim")) {
        const json& s = doc["sim"];
        reject_unknown(s, "sim",
                       {"snr_db", "info_bits_per_frame", "max_frames", "target_bit_errors",
                        "master_seed", "uncoded", "fit_window_db"});
        if (s.contains("snr_db")) {
            sim.snr_db.clear();
            for (const json& v : s["snr_db"]) sim.snr_db.push_back(snr_value(v));
        }
        if (s.contains("info_bits_per_frame"))
            sim.info_bits_per_frame = s["info_bits_per_frame"].get<long long>();
        if (s.contains("max_frames")) sim.max_frames = s["max_frames"].get<long long>();
        if (s.contains("target_bit_errors"))
            sim.target_bit_errors = s["target_bit_errors"].get<long long>();
        if (s.contains("master_seed")) sim.master_seed = s["master_seed"].get<std::uint64_t>();
        if (s.contains("uncoded")) sim.uncoded = s["uncoded"].get<bool>();
        if (s.contains("fit_window_db")) {
            const json& w = s["fit_window_db"];
            if (!w.is_array() || w.size() != 2)
                throw std::invalid_argument("config: fit_window_db must be [lo, hi]");
            cfg.fit_window_lo = w[0].get<double>();
            cfg.fit_window_hi = w[1].get<double>();
            have_fit = true;
        }
    }
    if (sim.snr_db.empty()) throw std::invalid_argument("config: sim.snr_db is required");

    if (!have_interleaver && !sim.uncoded) {
        // Default: round-robin matched to the constellation and streams,
        // one period per S*B bits times a small factor.
        const Constellation c = make_constellation(sim.constellation);
        InterleaverSpec il;
        il.num_streams = sim.num_streams;
        il.bits_per_symbol = c.bits_per_symbol;
        il.kind = InterleaverKind::round_robin;
        il.period = sim.num_streams * c.bits_per_symbol;
        sim.interleaver = il;
    }
    if (sim.uncoded && !have_interleaver) {
        sim.interleaver = InterleaverSpec{};  // unused in uncoded mode
    }

    if (!have_fit) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double v : sim.snr_db)
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        cfg.fit_window_lo = lo;
        cfg.fit_window_hi = hi;
    }
    return cfg;
}

nlohmann::json resolved_config_json(const RunConfig& cfg) {
    const SimConfig& sim = cfg.sim;
    json snr = json::array();
    for (double v : sim.snr_db) {
        if (std::isinf(v))
            snr.push_back("inf");
        else
            snr.push_back(v);
    }
    json j;
    j["code"] = json{{"text", format_code_spec(sim.code)}};
    j["interleaver"] = json{{"text", format_interleaver_spec(sim.interleaver)}};
    j["phy"] = json{{"constellation", sim.constellation},
                    {"nt", sim.nt},
                    {"nr", sim.nr},
                    {"streams", sim.num_streams},
                    {"bypass_channel", sim.bypass_channel}};
    j["sim"] = json{{"snr_db", snr},
                    {"info_bits_per_frame", sim.info_bits_per_frame},
                    {"max_frames", sim.max_frames},
                    {"target_bit_errors", sim.target_bit_errors},
                    {"master_seed", sim.master_seed},
                    {"uncoded", sim.uncoded},
                    {"fit_window_db", json::array({cfg.fit_window_lo, cfg.fit_window_hi})}};
    return j;
}

}  // namespace bicmb
