#include "efviz/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "efviz/analysis.hpp"
#include "efviz/config.hpp"
#include "efviz/errors.hpp"
#include "efviz/lane_emden.hpp"
#include "efviz/output.hpp"
#include "efviz/predictors.hpp"
#include "efviz/solver.hpp"

namespace efviz {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start)
{
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::string safe_name(const std::string& name)
{
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
    return out.empty() ? "run" : out;
}

double max_abs_diff(const Field& a, const Field& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

struct RunFiles {
    RunManifest manifest;
    int code = exit_ok;
};

// Runs one config and writes CSV, summary and manifest under `dir/stem.*`.
RunFiles run_and_write(const ScenarioConfig& cfg, const std::filesystem::path& dir, const std::string& stem)
{
    const auto start = clock_type::now();
    RunFiles out;
    out.manifest.config = config_to_json(cfg);
    out.manifest.version = EFVIZ_VERSION;
    const RunResult result = run(cfg);
    const RegimeReport regime = classify_regime(cfg);

    std::ostringstream csv;
    write_diagnostics_csv(csv, result.diagnostics);
    const auto csv_path = dir / (stem + ".csv");
    const auto summary_path = dir / (stem + ".summary.json");
    const auto manifest_path = dir / (stem + ".manifest.json");
    write_text_file(csv_path, csv.str());
    write_text_file(summary_path, run_summary(result, regime).dump(2) + "\n");

    out.manifest.termination = to_string(result.termination);
    if (result.termination == Termination::nan_detected) {
        out.code = exit_numerical_failure;
        out.manifest.error = "non-finite values at tau = " + format_double(result.tau_b.value_or(result.tau_end));
    }
    out.manifest.exit_code = out.code;
    out.manifest.outputs = {csv_path, summary_path, manifest_path};
    out.manifest.wall_clock_seconds = seconds_since(start);
    write_text_file(manifest_path, out.manifest.to_json().dump(2) + "\n");
    return out;
}

InvariantRow make_row(std::string name, double measured, double tolerance, bool pass)
{
    InvariantRow r;
    r.name = std::move(name);
    r.measured = measured;
    r.tolerance = tolerance;
    r.pass = pass;
    return r;
}

template <class F>
int guarded(std::ostream& log, F&& body)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const HypothesisError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_numerical_failure;
    }
}

} // namespace

std::filesystem::path resolve_out_dir(const std::filesystem::path& requested)
{
    if (const char* env = std::getenv("EFVIZ_OUT_DIR"); env && *env)
        return env;
    return requested;
}

std::vector<ConvergenceLevel> convergence_study(const ScenarioConfig& base, int levels)
{
    if (levels < 2)
        throw ConfigError("convergence: at least 2 levels are needed");
    std::vector<ScenarioConfig> cfgs;
    ScenarioConfig c = base;
    c.record_every = std::max(c.record_every, 1);
    const double ratio = c.time_step() / c.grid.dx();
    for (int l = 0; l < levels; ++l) {
        if (c.dt)
            c.dt = ratio * c.grid.dx();
        cfgs.push_back(c);
        c.grid = c.grid.refined();
    }

    std::vector<RunResult> results;
    results.reserve(cfgs.size());
    for (const auto& cfg : cfgs) {
        results.push_back(run(cfg));
        if (results.back().termination == Termination::nan_detected)
            throw std::runtime_error("convergence: non-finite values at n = " + std::to_string(cfg.grid.n()));
    }

    std::vector<ConvergenceLevel> out(cfgs.size());
    for (std::size_t l = 0; l < cfgs.size(); ++l) {
        out[l].n = cfgs[l].grid.n();
        out[l].dt = cfgs[l].time_step();
        out[l].dx = cfgs[l].grid.dx();
    }
    if (base.manufactured.enabled) {
        for (std::size_t l = 0; l < cfgs.size(); ++l) {
            const Trajectory& tr = results[l].trajectory;
            double err = 0.0;
            for (std::size_t m = 0; m < tr.size(); ++m)
                err = std::max(err, max_abs_diff(tr.frames[m], manufactured_solution(cfgs[l], tr.tau(m))));
            out[l].error = err;
        }
    } else {
        for (std::size_t l = 0; l + 1 < cfgs.size(); ++l) {
            const Trajectory& coarse = results[l].trajectory;
            const Trajectory& fine = results[l + 1].trajectory;
            const std::size_t m = std::min(coarse.size() - 1, (fine.size() - 1) / 2);
            const Field& a = coarse.frames[m];
            const Field& b = fine.frames[2 * m];
            double err = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i)
                err = std::max(err, std::abs(a[i] - b[2 * i + 1]));
            out[l].error = err;
        }
    }
    for (std::size_t l = 1; l < out.size(); ++l)
        if (out[l].error && out[l - 1].error && *out[l].error > 0.0)
            out[l].order = std::log2(*out[l - 1].error / *out[l].error);
    return out;
}

std::vector<InvariantRow> verify_invariants(const ScenarioConfig& cfg)
{
    std::vector<InvariantRow> rows;
    const RunResult result = run(cfg);
    const RegimeReport regime = classify_regime(cfg);
    const DiagnosticSeries full = diagnose(result.trajectory, cfg.kernel);
    const double dt = cfg.time_step();
    const double dx = cfg.grid.dx();
    // Discretization error grows without bound near blow-up; energy-type checks
    // stop at three quarters of the blow-up time.
    const double horizon = result.tau_b ? 0.75 * *result.tau_b : result.tau_end;

    {
        InvariantRow r = make_row("kernel_admissible", cfg.kernel.admissibility(), 0.0, cfg.kernel.admissibility() > 0.0);
        r.note = "l > 0";
        rows.push_back(r);
    }
    {
        double worst = 0.0;
        for (const auto& d : full) {
            const double scale = 1.0 + std::abs(d.parts.kinetic) + std::abs(d.parts.elastic) +
                                 std::abs(d.parts.history) + std::abs(d.parts.mass) + std::abs(d.parts.potential);
            const double sum = d.parts.kinetic + d.parts.elastic + d.parts.history - d.parts.mass - d.parts.potential;
            if (std::isfinite(scale))
                worst = std::max(worst, std::abs(2.0 * d.E_w - sum) / scale);
        }
        rows.push_back(make_row("energy_parts_sum", worst, 1e-14, worst <= 1e-14));
    }
    {
        double worst = 0.0;
        const double k = 0.25 * (cfg.p - 1.0);
        for (const auto& d : full)
            if (d.A > 0.0 && std::isfinite(d.J))
                worst = std::max(worst, std::abs(d.J - std::pow(d.A, -k)) / std::abs(d.J));
        rows.push_back(make_row("J_from_A", worst, 1e-14, worst <= 1e-14));
    }
    {
        const double coef = 1.0 - cfg.kernel.damped_mass(result.tau_end);
        InvariantRow r = make_row("elastic_coefficient_ge_l", coef - cfg.kernel.admissibility(), 0.0,
                       coef >= cfg.kernel.admissibility() - 1e-14);
        rows.push_back(r);
    }
    // Energy checks are relative to the size of the energy parts at each sample;
    // near blow-up the parts grow by many orders of magnitude.
    const auto magnitude = [](const DiagnosticRow& d) {
        return 1.0 + std::abs(d.parts.kinetic) + std::abs(d.parts.elastic) + std::abs(d.parts.history) +
               std::abs(d.parts.mass) + std::abs(d.parts.potential);
    };
    const double energy_tol = 10.0 * (dt * dt + dx * dx);
    {
        double worst = 0.0;
        for (std::size_t m = 0; m + 1 < full.size() && full[m + 1].tau <= horizon; ++m) {
            const double jump = full[m + 1].E_w - full[m].E_w;
            worst = std::max(worst, jump / std::max(magnitude(full[m]), magnitude(full[m + 1])));
        }
        InvariantRow r = make_row("energy_nonincreasing", worst, energy_tol, worst <= energy_tol);
        if (cfg.manufactured.enabled) {
            r.applicable = false;
            r.pass = true;
            r.note = "forced run, not asserted";
        }
        rows.push_back(r);
    }
    {
        // Provable coefficient (p-1)/(2(p+1)).
        const double coef = 0.5 * (cfg.p - 1.0) / (cfg.p + 1.0);
        const double e_start = full.front().E_w;
        double worst = 0.0;
        for (const auto& d : full) {
            if (d.tau > horizon)
                break;
            const double excess = d.E_w - (e_start - coef * (cfg.p + 1.0) * d.L);
            worst = std::max(worst, excess / (magnitude(d) + magnitude(full.front())));
        }
        InvariantRow r = make_row("energy_potential_bound", worst, energy_tol, worst <= energy_tol);
        if (cfg.manufactured.enabled) {
            r.applicable = false;
            r.pass = true;
            r.note = "forced run, not asserted";
        }
        rows.push_back(r);
    }
    {
        double worst = 0.0;
        for (const auto& d : full)
            if (d.tau <= horizon && std::isfinite(d.lemma1_residual))
                worst = std::max(worst, d.lemma1_residual);
        const double tol = 2.0 * dt;
        rows.push_back(make_row("memory_identity_residual", worst, tol, worst <= tol));
    }
    {
        InvariantRow r = make_row("theorem31_blowup_time", 0.0, 0.0, true);
        if (regime.regime == Regime::theorem31) {
            const auto [u0, u1] = initial_data(cfg);
            const double t1 = t1_star(u0, u1, cfg.p, cfg.grid).tau_bound;
            r.tolerance = 1.1 * t1;
            r.measured = result.tau_b.value_or(std::numeric_limits<double>::infinity());
            r.pass = result.termination == Termination::blowup_detected && r.measured <= r.tolerance;
            if (result.termination == Termination::horizon_reached)
                r.note = "no blow-up before tau_max";
        } else {
            r.applicable = false;
            r.note = "regime is " + to_string(regime.regime);
        }
        rows.push_back(r);

        InvariantRow c = make_row("theorem31_concavity", 0.0, 0.99, true);
        if (regime.regime == Regime::theorem31) {
            std::vector<double> tau;
            std::vector<double> A;
            for (const auto& d : full) {
                tau.push_back(d.tau);
                A.push_back(d.A);
            }
            const ConcavityReport cr = concavity_series(tau, A, cfg.p);
            c.measured = cr.fraction_concave;
            c.pass = cr.fraction_concave >= 0.99 && cr.fraction_decreasing >= 0.99;
        } else {
            c.applicable = false;
            c.note = "regime is " + to_string(regime.regime);
        }
        rows.push_back(c);
    }
    {
        InvariantRow r = make_row("theorem41_lower_bound", 0.0, 0.98, true);
        if (regime.regime == Regime::theorem41) {
            const double A0 = full.front().A;
            double worst = std::numeric_limits<double>::infinity();
            for (const auto& d : full) {
                if (result.tau_b && d.tau >= *result.tau_b)
                    break;
                worst = std::min(worst, d.A / theorem41_lower_bound(A0, regime.E_w0, cfg.p, d.tau));
            }
            r.measured = worst;
            r.pass = worst >= 0.98;
        } else {
            r.applicable = false;
            r.note = "regime is " + to_string(regime.regime);
        }
        rows.push_back(r);
    }
    return rows;
}

std::vector<SweepAxis> parse_sweep_grid(const std::string& text)
{
    std::vector<SweepAxis> axes;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
        if (part.find_first_not_of(" \t") == std::string::npos)
            continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos)
            throw ConfigError("sweep grid: expected key=v1,v2 in '" + part + "'");
        SweepAxis axis;
        const auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        axis.key = trim(part.substr(0, eq));
        std::stringstream vs(part.substr(eq + 1));
        std::string v;
        while (std::getline(vs, v, ','))
            if (!trim(v).empty())
                axis.values.push_back(trim(v));
        if (axis.key.empty() || axis.values.empty())
            throw ConfigError("sweep grid: empty key or value list in '" + part + "'");
        axes.push_back(std::move(axis));
    }
    if (axes.empty())
        throw ConfigError("sweep grid: no axes given");
    return axes;
}

int cmd_run(const std::string& source, const std::filesystem::path& out_dir, std::ostream& log)
{
    return guarded(log, [&] {
        const ScenarioConfig cfg = parse_config(source);
        const RunFiles files = run_and_write(cfg, out_dir, safe_name(cfg.name));
        log << cfg.name << ": " << files.manifest.termination << '\n';
        for (const auto& p : files.manifest.outputs)
            log << "  " << p.string() << '\n';
        return files.code;
    });
}

int cmd_convergence(const std::string& source, int levels, const std::filesystem::path& out_dir, std::ostream& log)
{
    return guarded(log, [&] {
        const auto start = clock_type::now();
        const ScenarioConfig cfg = parse_config(source);
        const auto table = convergence_study(cfg, levels);
        std::ostringstream csv;
        csv << "level,n,dx,dt,error,order\n";
        for (std::size_t l = 0; l < table.size(); ++l) {
            const auto& r = table[l];
            csv << l << ',' << r.n << ',' << format_double(r.dx) << ',' << format_double(r.dt) << ','
                << (r.error ? format_double(*r.error) : "") << ',' << (r.order ? format_double(*r.order) : "")
                << '\n';
        }
        const std::string stem = safe_name(cfg.name) + ".convergence";
        const auto csv_path = out_dir / (stem + ".csv");
        const auto manifest_path = out_dir / (stem + ".manifest.json");
        write_text_file(csv_path, csv.str());
        RunManifest m;
        m.config = config_to_json(cfg);
        m.version = EFVIZ_VERSION;
        m.termination = "completed";
        m.outputs = {csv_path, manifest_path};
        m.wall_clock_seconds = seconds_since(start);
        write_text_file(manifest_path, m.to_json().dump(2) + "\n");
        log << csv.str();
        return int(exit_ok);
    });
}

int cmd_sweep(const std::string& source, const std::string& grid, int workers, const std::filesystem::path& out_dir,
              std::ostream& log)
{
    return guarded(log, [&] {
        const text::Table base = load_config_table(source);
        const auto axes = parse_sweep_grid(grid);

        std::vector<std::vector<std::pair<std::string, std::string>>> points{{}};
        for (const auto& axis : axes) {
            std::vector<std::vector<std::pair<std::string, std::string>>> next;
            for (const auto& pt : points)
                for (const auto& v : axis.values) {
                    auto q = pt;
                    q.emplace_back(axis.key, v);
                    next.push_back(std::move(q));
                }
            points = std::move(next);
        }

        // Build every config up front so configuration errors surface before any run.
        std::vector<ScenarioConfig> cfgs;
        for (const auto& pt : points) {
            text::Table t = base;
            for (const auto& [k, v] : pt)
                set_override(t, k, v);
            cfgs.push_back(config_from_table(t));
        }

        std::vector<int> codes(cfgs.size(), exit_ok);
        std::vector<std::string> errors(cfgs.size());
        std::atomic<std::size_t> next{0};
        const auto work = [&] {
            for (std::size_t i = next++; i < cfgs.size(); i = next++) {
                char label[32];
                std::snprintf(label, sizeof label, "point_%03zu", i);
                try {
                    codes[i] = run_and_write(cfgs[i], out_dir / label, safe_name(cfgs[i].name)).code;
                } catch (const std::exception& e) {
                    codes[i] = exit_numerical_failure;
                    errors[i] = e.what();
                }
            }
        };
        const int n_workers = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(cfgs.size(), 1)));
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();

        int code = exit_ok;
        for (std::size_t i = 0; i < points.size(); ++i) {
            log << "point_" << (i < 10 ? "00" : i < 100 ? "0" : "") << i << ':';
            for (const auto& [k, v] : points[i])
                log << ' ' << k << '=' << v;
            log << " -> " << (codes[i] == exit_ok ? "ok" : "failed");
            if (!errors[i].empty())
                log << " (" << errors[i] << ')';
            log << '\n';
            if (codes[i] != exit_ok)
                code = codes[i];
        }
        return code;
    });
}

int cmd_verify(const std::string& source, const std::filesystem::path& out_dir, std::ostream& log)
{
    return guarded(log, [&] {
        const ScenarioConfig cfg = parse_config(source);
        const auto rows = verify_invariants(cfg);
        nlohmann::json j = nlohmann::json::array();
        bool ok = true;
        for (const auto& r : rows) {
            const char* status = !r.applicable ? "SKIP" : r.pass ? "PASS" : "FAIL";
            log << status << ' ' << r.name << " measured=" << format_double(r.measured)
                << " tolerance=" << format_double(r.tolerance);
            if (!r.note.empty())
                log << " (" << r.note << ')';
            log << '\n';
            ok = ok && r.pass;
            j.push_back({{"name", r.name},
                         {"measured", json_number(r.measured)},
                         {"tolerance", json_number(r.tolerance)},
                         {"pass", r.pass},
                         {"applicable", r.applicable},
                         {"note", r.note}});
        }
        write_text_file(out_dir / (safe_name(cfg.name) + ".verify.json"), j.dump(2) + "\n");
        return ok ? int(exit_ok) : int(exit_invariant_failure);
    });
}

int cmd_lane_emden(double p, double dt, double t_max, const std::filesystem::path& out_dir, std::ostream& log)
{
    return guarded(log, [&] {
        LaneEmdenProblem prob;
        prob.p = p;
        prob.dt = dt;
        prob.t_max = t_max;
        std::vector<LaneEmdenSample> samples;
        try {
            samples = solve_lane_emden(prob);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        const bool exact = p == 1.0 || p == 5.0;
        std::ostringstream csv;
        csv << "t,u,u_closed_form,rel_err\n";
        double worst = 0.0;
        for (const auto& s : samples) {
            csv << format_double(s.t) << ',' << format_double(s.u) << ',';
            if (exact) {
                const double e = lane_emden_closed_form(p, s.t);
                const double rel = std::abs(s.u - e) / std::abs(e);
                worst = std::max(worst, rel);
                csv << format_double(e) << ',' << format_double(rel);
            } else {
                csv << ',';
            }
            csv << '\n';
        }
        const auto path = out_dir / ("lane_emden_p" + format_double(p) + ".csv");
        write_text_file(path, csv.str());
        log << path.string() << '\n';
        if (exact)
            log << "max relative error " << format_double(worst) << '\n';
        return int(exit_ok);
    });
}

} // namespace efviz
