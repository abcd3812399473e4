#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "efviz/analysis.hpp"
#include "efviz/predictors.hpp"
#include "efviz/solver.hpp"

namespace efviz {

/// Shortest representation that parses back to the same double; "nan",
/// "inf" and "-inf" for non-finite values.
std::string format_double(double x);

/// Fixed column order of the diagnostics CSV.
const std::vector<std::string>& diagnostics_columns();

void write_diagnostics_csv(std::ostream& out, const DiagnosticSeries& series);

/// Plain JSON echo of a config (enough to rebuild it by hand).
nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// Run summary: regime, e0, E_w0, l, T1_star (null when undefined),
/// termination and tau_b (null unless the run stopped early), plus extras.
nlohmann::json run_summary(const RunResult& result, const RegimeReport& regime);

/// Non-finite numbers become null in JSON.
nlohmann::json json_number(double x);

struct RunManifest {
    nlohmann::json config;
    std::string version;
    std::string termination;
    std::vector<std::filesystem::path> outputs;
    double wall_clock_seconds = 0.0;
    int exit_code = 0;
    std::string error;

    nlohmann::json to_json() const;
};

/// Writes text to a file, creating parent directories. Throws
/// std::runtime_error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace efviz
