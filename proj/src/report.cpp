#include "bicmb/report.hpp"

#include <sstream>

namespace bicmb {

using nlohmann::json;

json slot_to_json(const Slot& slot, InterleaverMode mode) {
    json j{{"stream", slot.stream}, {"time", slot.time}, {"bit_slot", slot.bit_slot}};
    if (mode == InterleaverMode::ofdm) j["subcarrier"] = slot.subcarrier;
    return j;
}

json violation_to_json(const Violation& v, InterleaverMode mode) {
    json j{{"event_id", v.event_id}, {"phase", v.phase}, {"criterion", v.criterion}};
    if (const auto* pw = std::get_if<PairWitness>(&v.witness)) {
        j["witness"] = json{{"type", "pair"},
                            {"bit_offset", pw->bit_offset},
                            {"a", slot_to_json(pw->a, mode)},
                            {"b", slot_to_json(pw->b, mode)}};
    } else {
        const auto& aw = std::get<AlphaWitness>(v.witness);
        j["witness"] = json{{"type", "alpha"}, {"alpha", aw.alpha}};
    }
    return j;
}

json report_to_json(const CriteriaReport& report) {
    json j;
    j["mode"] = report.mode == InterleaverMode::ofdm ? "ofdm" : "sc";
    j["pass"] = report.pass();
    j["criteria_checked"] = report.criteria_checked;
    j["criteria_failed"] = report.criteria_failed;
    j["events_checked"] = report.events_checked;
    j["phases_checked"] = report.phases_checked;
    j["complete_to_weight"] = report.complete_to_weight;
    j["empty_enumeration"] = report.empty_enumeration;
    j["violation_count"] = report.violations.size();
    json vs = json::array();
    for (const Violation& v : report.violations) vs.push_back(violation_to_json(v, report.mode));
    j["violations"] = std::move(vs);
    if (report.structural_note) j["structural_note"] = *report.structural_note;
    return j;
}

json search_result_to_json(const SearchResult& result) {
    json j;
    j["found"] = result.found;
    j["candidates_tried"] = result.candidates_tried;
    j["candidate_index"] = result.candidate_index;
    j["interleaver"] = format_interleaver_spec(result.map.spec);
    j["violations"] = result.best_violations;
    j["report"] = report_to_json(result.report);
    return j;
}

json diversity_to_json(const DiversityEstimate& est) {
    return json{{"slope", est.slope},
                {"order", est.order},
                {"residual", est.residual},
                {"window_db", json::array({est.window_lo, est.window_hi})},
                {"points_used", est.points_used}};
}

std::string criterion_name(InterleaverMode mode, int criterion) {
    if (criterion == 1) return "consecutive coded bits on different symbols";
    if (mode == InterleaverMode::ofdm && criterion == 2)
        return "consecutive coded bits on different subcarriers";
    return "alpha_s >= 1 for every stream";
}

std::string format_report_table(const CriteriaReport& report) {
    std::ostringstream out;
    out << "criteria report (mode=" << (report.mode == InterleaverMode::ofdm ? "ofdm" : "sc")
        << ")\n";
    out << "  events checked: " << report.events_checked << " (complete to weight "
        << report.complete_to_weight << ")\n";
    out << "  phases checked: " << report.phases_checked << "\n";
    if (report.empty_enumeration)
        out << "  warning: event enumeration is empty; pass is vacuous\n";
    for (int c : report.criteria_checked) {
        long long count = 0;
        for (const Violation& v : report.violations) count += (v.criterion == c);
        out << "  criterion " << c << " (" << criterion_name(report.mode, c)
            << "): " << (count == 0 ? "PASS" : "FAIL");
        if (count) out << " (" << count << " violations)";
        out << "\n";
    }
    std::size_t shown = 0;
    for (const Violation& v : report.violations) {
        if (shown == 10) {
            out << "  ... " << (report.violations.size() - shown) << " more violations\n";
            break;
        }
        out << "  violation: event " << v.event_id << " phase " << v.phase << " criterion "
            << v.criterion;
        if (const auto* pw = std::get_if<PairWitness>(&v.witness)) {
            out << " bits (" << pw->bit_offset << "," << pw->bit_offset + 1 << ")";
        } else {
            const auto& aw = std::get<AlphaWitness>(v.witness);
            out << " alpha=[";
            for (std::size_t i = 0; i < aw.alpha.size(); ++i)
                out << (i ? "," : "") << aw.alpha[i];
            out << "]";
        }
        out << "\n";
        ++shown;
    }
    if (report.structural_note) out << "  note: " << *report.structural_note << "\n";
    return out.str();
}

}  // namespace bicmb
