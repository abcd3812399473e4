#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "efviz/scenario.hpp"

namespace efviz {

enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_numerical_failure = 3,
    exit_invariant_failure = 4,
};

/// EFVIZ_OUT_DIR when set and non-empty, otherwise `requested`.
std::filesystem::path resolve_out_dir(const std::filesystem::path& requested);

struct ConvergenceLevel {
    int n = 0;
    double dt = 0.0;
    double dx = 0.0;
    /// Manufactured runs: max over steps of the max-norm error against the
    /// exact solution. Otherwise: max-norm difference to the next finer level
    /// at the coarse final time (absent for the finest level).
    std::optional<double> error;
    std::optional<double> order;
};

/// Runs `levels` levels, each with n -> 2n + 1 and dt halved. Throws
/// ConfigError for levels < 2.
std::vector<ConvergenceLevel> convergence_study(const ScenarioConfig& base, int levels);

struct InvariantRow {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    /// Rows that do not apply to the scenario are reported but never fail.
    bool applicable = true;
    std::string note;
};

/// Runs the scenario and evaluates every invariant that applies to it.
std::vector<InvariantRow> verify_invariants(const ScenarioConfig& cfg);

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

/// "key=v1,v2;key2=w1,w2". Throws ConfigError on malformed input.
std::vector<SweepAxis> parse_sweep_grid(const std::string& text);

int cmd_run(const std::string& source, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_convergence(const std::string& source, int levels, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_sweep(const std::string& source, const std::string& grid, int workers, const std::filesystem::path& out_dir,
              std::ostream& log);
int cmd_verify(const std::string& source, const std::filesystem::path& out_dir, std::ostream& log);
/// Writes t, u, u_closed_form, rel_err (closed form only for p = 1, 5).
int cmd_lane_emden(double p, double dt, double t_max, const std::filesystem::path& out_dir, std::ostream& log);

} // namespace efviz
