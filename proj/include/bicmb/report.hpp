#pragma once

// JSON and plain-text rendering of criteria reports, search results and
// diversity estimates. JSON keys come out alphabetically ordered, so
// identical inputs give byte-identical reports.

#include <string>

#include "json.hpp"

#include "bicmb/interleaver.hpp"
#include "bicmb/sim.hpp"

namespace bicmb {

inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json slot_to_json(const Slot& slot, InterleaverMode mode);
nlohmann::json violation_to_json(const Violation& v, InterleaverMode mode);
nlohmann::json report_to_json(const CriteriaReport& report);
nlohmann::json search_result_to_json(const SearchResult& result);
nlohmann::json diversity_to_json(const DiversityEstimate& est);

std::string criterion_name(InterleaverMode mode, int criterion);

// Human-readable summary table of a criteria report.
std::string format_report_table(const CriteriaReport& report);

}  // namespace bicmb
