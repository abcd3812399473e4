#pragma once

#include <optional>
#include <string>
#include <vector>

#include "efviz/analysis.hpp"
#include "efviz/history.hpp"
#include "efviz/scenario.hpp"
#include "efviz/trajectory.hpp"

namespace efviz {

/// Mutable state of one run: fields at steps m - 1 and m plus the history
/// feeding the memory term. Owned by exactly one run.
struct RunState {
    std::size_t step = 0;
    double tau = 0.0;
    double dt = 0.0;
    Field prev;
    Field curr;
    HistoryStore history;
    std::optional<ModalMemory> modal;
};

enum class Termination { horizon_reached, blowup_detected, nan_detected };

std::string to_string(Termination t);

struct RunResult {
    ScenarioConfig config;
    Termination termination = Termination::horizon_reached;
    /// Time of the last accepted step.
    double tau_end = 0.0;
    /// Threshold crossing time (blowup_detected) or time of the non-finite
    /// step (nan_detected).
    std::optional<double> tau_b;
    /// Sup norm of the stepped field at every accepted step.
    std::vector<double> sup_norms;
    /// Solution history in w-variables (v-form runs are converted).
    Trajectory trajectory;
    /// Diagnostics at every record_every-th step and at the last step.
    DiagnosticSeries diagnostics;
};

/// Sets up steps 0 and 1. The first step is a second-order Taylor start using
/// the equation at tau = 0 to supply the second time derivative.
RunState initialize(const ScenarioConfig& cfg);

/// Memory integral at the state's current time via the configured path.
Field current_memory(const RunState& state, const ScenarioConfig& cfg);

/// Advances the state by one leapfrog step. Returns false (state untouched)
/// when the new field has non-finite entries.
bool step(RunState& state, const ScenarioConfig& cfg);

/// Runs to tau_max or until the sup norm exceeds blowup_threshold.
RunResult run(const ScenarioConfig& cfg);

/// u(t, x) = sqrt(t) w(ln t, x), linear in tau between steps. Throws
/// std::domain_error for t < 1 or t beyond the run.
std::vector<Field> pullback_to_t(const RunResult& result, const std::vector<double>& t);

/// Manufactured target and its source term at tau (w-form).
Field manufactured_solution(const ScenarioConfig& cfg, double tau);
Field manufactured_source(const ScenarioConfig& cfg, double tau);

} // namespace efviz
