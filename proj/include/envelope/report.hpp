#ifndef ENVELOPE_REPORT_HPP
#define ENVELOPE_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "envelope/dataset.hpp"
#include "envelope/ga.hpp"
#include "envelope/model_selection.hpp"
#include "envelope/objective.hpp"
#include "envelope/region.hpp"
#include "envelope/simulation.hpp"

namespace envelope {

// JSON views of the core result types. nlohmann::json keeps keys sorted, so
// serialized reports are byte-stable for identical inputs.
nlohmann::json to_json(const HyperRectangle& b);
nlohmann::json to_json(const RegionUnion& r);
RegionUnion region_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GARun& run, bool include_history = false);
nlohmann::json to_json(const RegionEstimate& est);
nlohmann::json to_json(const FitResult& fr);
nlohmann::json to_json(const CVReport& rep);
nlohmann::json to_json(const sim::MonteCarloReport& rep);
nlohmann::json to_json(const sim::Oracle1DResult& r);

// Atomic-enough file write with trailing newline; throws on I/O failure.
void write_text_file(const std::string& path, const std::string& contents);
void write_json_file(const std::string& path, const nlohmann::json& j);

// fitness_history.csv contents: one row per (penalty weight, generation).
std::string fitness_history_csv(const std::vector<std::pair<double, const GARun*>>& runs);

} // namespace envelope

#endif // ENVELOPE_REPORT_HPP
