#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "edcsel/bekk.hpp"
#include "edcsel/diagnostics.hpp"
#include "edcsel/estimator.hpp"
#include "edcsel/markov.hpp"
#include "edcsel/selection.hpp"

namespace edcsel {

// Shortest round-trip-exact decimal rendering; keeps CSV output
// byte-stable across runs.
std::string fmt_double(double v);

// Path CSV: header "x1,..,xm", one row per observation.
void write_path_csv(const PathSample& path, const std::string& file);
PathSample read_path_csv(const std::string& file);

// Symbol sequences: single-column CSV of integer symbols.
void write_sequence_csv(const std::vector<int>& seq, const std::string& file);
std::vector<int> read_sequence_csv(const std::string& file);

// BEKK parameters as a flat JSON object {m, k1, k2, theta: [..]} in the
// documented packing order.
nlohmann::json bekk_params_to_json(const BekkParams& params);
BekkParams bekk_params_from_json(const nlohmann::json& j);

nlohmann::json markov_spec_to_json(const MarkovSpec& spec);
MarkovSpec markov_spec_from_json(const nlohmann::json& j);

nlohmann::json fit_result_to_json(const FitResult& r);
nlohmann::json selection_report_to_json(const SelectionReport& r);

void write_trace_csv(const DiagnosticTrace& trace, const std::string& file);

nlohmann::json load_json_file(const std::string& file);
void write_json_file(const nlohmann::json& j, const std::string& file);

} // namespace edcsel
