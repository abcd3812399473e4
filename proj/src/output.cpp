#include "efviz/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace efviz {

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

const std::vector<std::string>& diagnostics_columns()
{
    static const std::vector<std::string> cols = {"tau",    "sup_norm", "A",       "J",       "dJ",
                                                  "d2J",    "E_w",      "kinetic", "elastic", "history",
                                                  "mass",   "potential", "L",      "F",       "lemma1_residual"};
    return cols;
}

void write_diagnostics_csv(std::ostream& out, const DiagnosticSeries& series)
{
    const auto& cols = diagnostics_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : series) {
        const double v[] = {r.tau,           r.sup_norm,       r.A,         r.J,          r.dJ,
                            r.d2J,           r.E_w,            r.parts.kinetic, r.parts.elastic, r.parts.history,
                            r.parts.mass,    r.parts.potential, r.L,        r.F,          r.lemma1_residual};
        for (std::size_t i = 0; i < std::size(v); ++i)
            out << (i ? "," : "") << format_double(v[i]);
        out << '\n';
    }
}

nlohmann::json json_number(double x)
{
    if (!std::isfinite(x))
        return nullptr;
    return x;
}

namespace {

nlohmann::json profile_json(const InitialProfile& p)
{
    nlohmann::json j;
    switch (p.shape) {
    case InitialProfile::Shape::zero: j["shape"] = "zero"; break;
    case InitialProfile::Shape::sine:
        j["shape"] = "sine";
        j["amplitude"] = p.amplitude;
        j["mode"] = p.mode;
        break;
    case InitialProfile::Shape::nodal:
        j["shape"] = "nodal";
        j["amplitude"] = p.amplitude;
        j["values"] = p.values;
        break;
    }
    return j;
}

std::string memory_name(MemoryPath m)
{
    switch (m) {
    case MemoryPath::automatic: return "auto";
    case MemoryPath::recurrence: return "recurrence";
    case MemoryPath::full_history: return "full_history";
    }
    return "auto";
}

} // namespace

nlohmann::json config_to_json(const ScenarioConfig& cfg)
{
    nlohmann::json j;
    j["name"] = cfg.name;
    j["p"] = cfg.p;
    j["form"] = to_string(cfg.form);
    j["power_mode"] = to_string(cfg.power_mode);
    j["memory"] = memory_name(cfg.memory);
    j["tau_max"] = cfg.tau_max;
    j["dt"] = cfg.time_step();
    j["dt_auto"] = !cfg.dt.has_value();
    j["cfl_safety"] = cfg.cfl_safety;
    j["blowup_threshold"] = cfg.blowup_threshold;
    j["record_every"] = cfg.record_every;
    j["grid"] = {{"r1", cfg.grid.r1()}, {"r2", cfg.grid.r2()}, {"n", cfg.grid.n()}};
    nlohmann::json k;
    if (cfg.kernel.is_null()) {
        k["type"] = "null";
    } else if (cfg.kernel.family() == KernelFamily::exponential_sum) {
        k["type"] = "expsum";
        k["terms"] = nlohmann::json::array();
        for (const auto& t : cfg.kernel.terms())
            k["terms"].push_back({t.amplitude, t.rate});
    } else {
        k["type"] = "table";
        k["s"] = cfg.kernel.sample_times();
        k["mu"] = cfg.kernel.sample_values();
    }
    j["kernel"] = k;
    j["initial"] = {{"u0", profile_json(cfg.u0)},
                    {"u1", profile_json(cfg.u1)},
                    {"scale", cfg.data_scale},
                    {"scale_to_zero_energy", cfg.scale_to_zero_energy}};
    j["model"] = {{"mass_term", cfg.model.mass_term}, {"nonlinear", cfg.model.nonlinear}};
    j["manufactured"] = {{"enabled", cfg.manufactured.enabled}, {"amplitude", cfg.manufactured.amplitude}};
    return j;
}

nlohmann::json run_summary(const RunResult& result, const RegimeReport& regime)
{
    const ScenarioConfig& cfg = result.config;
    nlohmann::json j;
    j["regime"] = to_string(regime.regime);
    j["e0"] = json_number(regime.e0);
    j["E_w0"] = json_number(regime.E_w0);
    j["E_w0_cross_term"] = json_number(regime.E_w0_cross_term);
    j["eps_E"] = regime.eps_E;
    j["narrow"] = regime.narrow;
    j["l"] = cfg.kernel.admissibility();
    j["T1_star"] = nullptr;
    j["T1_star_t"] = nullptr;
    if (regime.e0 > 0.0) {
        const auto [u0, u1] = initial_data(cfg);
        const T1Star t = t1_star(u0, u1, cfg.p, cfg.grid);
        j["T1_star"] = json_number(t.tau_bound);
        j["T1_star_t"] = json_number(t.t_image);
    }
    j["termination"] = to_string(result.termination);
    j["tau_b"] = result.tau_b ? json_number(*result.tau_b) : nlohmann::json(nullptr);
    j["tau_end"] = result.tau_end;
    j["steps"] = result.trajectory.size() ? result.trajectory.size() - 1 : 0;
    j["dt"] = cfg.time_step();
    j["dx"] = cfg.grid.dx();
    j["data_scale"] = cfg.data_scale;
    return j;
}

nlohmann::json RunManifest::to_json() const
{
    nlohmann::json j;
    j["config"] = config;
    j["version"] = version;
    j["termination"] = termination;
    j["outputs"] = nlohmann::json::array();
    for (const auto& p : outputs)
        j["outputs"].push_back(p.string());
    j["wall_clock_seconds"] = wall_clock_seconds;
    j["exit_code"] = exit_code;
    if (!error.empty())
        j["error"] = error;
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

} // namespace efviz
