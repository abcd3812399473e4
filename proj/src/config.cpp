#include "efviz/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "efviz/errors.hpp"
#include "efviz/predictors.hpp"

namespace efviz {

namespace {

using text::Table;
using text::Value;

struct Preset {
    const char* name;
    const char* body;
};

// Shared by all presets: p = 3 on (0, 1) with mu(s) = 0.25 e^{-s}.
constexpr const char* common = R"(p = 3
tau_max = 1.0
[grid]
r1 = 0.0
r2 = 1.0
n = 100
[kernel]
type = "expsum"
terms = [[0.25, 1.0]]
)";

const Preset presets[] = {
    {"small_data", R"(name = "small_data"
tau_max = 2.0
[initial]
u0 = {shape = "sine", amplitude = 0.1}
u1 = {shape = "sine", amplitude = 0.05}
)"},
    {"theorem31", R"(name = "theorem31"
[initial]
u0 = {shape = "sine", amplitude = 1.0}
u1 = {shape = "sine", amplitude = 0.5}
scale_to_zero_energy = true
)"},
    {"theorem41", R"(name = "theorem41"
[initial]
u0 = {shape = "sine", amplitude = 6.0}
u1 = {shape = "sine", amplitude = 3.0}
)"},
    {"manufactured", R"(name = "manufactured"
[manufactured]
enabled = true
amplitude = 1.0
)"},
    {"zero", R"(name = "zero"
[initial]
u0 = {shape = "zero"}
u1 = {shape = "zero"}
)"},
};

[[noreturn]] void bad(const Value& v, const std::string& msg) { throw ConfigError(msg, v.line); }

void check_keys(const Table& t, std::string_view where, std::initializer_list<const char*> allowed)
{
    for (const auto& [key, value] : t) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!ok) {
            std::string msg = "unknown key '";
            if (!where.empty())
                msg += std::string(where) + ".";
            throw ConfigError(msg + key + "'", value.line);
        }
    }
}

const Value* find(const Table& t, const char* key)
{
    auto it = t.find(key);
    return it == t.end() ? nullptr : &it->second;
}

int integer(const Value& v, const std::string& what)
{
    const double x = v.number(what);
    if (x != std::floor(x) || std::abs(x) > 1e9)
        bad(v, what + ": expected an integer");
    return static_cast<int>(x);
}

void merge_into(Table& base, const Table& over)
{
    for (const auto& [key, value] : over) {
        auto it = base.find(key);
        if (it != base.end() && it->second.is_table() && value.is_table())
            merge_into(std::get<Table>(it->second.data), std::get<Table>(value.data));
        else
            base[key] = value;
    }
}

RelaxationKernel read_kernel(const Value& v)
{
    const Table& t = v.table("kernel");
    check_keys(t, "kernel", {"type", "terms", "s", "mu"});
    std::string type = "expsum";
    if (const Value* ty = find(t, "type"))
        type = ty->string("kernel.type");
    try {
        if (type == "null" || type == "none")
            return RelaxationKernel();
        if (type == "expsum") {
            const Value* terms = find(t, "terms");
            if (!terms)
                bad(v, "kernel.terms: required for an expsum kernel");
            std::vector<ExpTerm> out;
            for (const Value& term : terms->array("kernel.terms")) {
                const auto& pair = term.array("kernel.terms entry");
                if (pair.size() != 2)
                    bad(term, "kernel.terms: each term is [amplitude, rate]");
                out.push_back({pair[0].number("kernel amplitude"), pair[1].number("kernel rate")});
            }
            return RelaxationKernel::exponential_sum(std::move(out));
        }
        if (type == "table") {
            const Value* s = find(t, "s");
            const Value* mu = find(t, "mu");
            if (!s || !mu)
                bad(v, "kernel: a table kernel needs both s and mu");
            std::vector<double> sv;
            std::vector<double> mv;
            for (const Value& x : s->array("kernel.s"))
                sv.push_back(x.number("kernel.s entry"));
            for (const Value& x : mu->array("kernel.mu"))
                mv.push_back(x.number("kernel.mu entry"));
            return RelaxationKernel::tabulated(std::move(sv), std::move(mv));
        }
    } catch (const AdmissibilityError& e) {
        throw ConfigError(std::string("kernel: ") + e.what(), v.line);
    }
    bad(v, "kernel.type: expected \"expsum\", \"table\" or \"null\", got \"" + type + "\"");
}

InitialProfile read_profile(const Value& v, const std::string& where)
{
    const Table& t = v.table(where);
    check_keys(t, where, {"shape", "amplitude", "mode", "values"});
    InitialProfile p;
    const std::string shape = find(t, "shape") ? find(t, "shape")->string(where + ".shape") : "zero";
    if (shape == "zero") {
        p.shape = InitialProfile::Shape::zero;
    } else if (shape == "sine") {
        p.shape = InitialProfile::Shape::sine;
        p.amplitude = 1.0;
    } else if (shape == "nodal") {
        p.shape = InitialProfile::Shape::nodal;
        p.amplitude = 1.0;
        const Value* values = find(t, "values");
        if (!values)
            bad(v, where + ".values: required for nodal data");
        for (const Value& x : values->array(where + ".values"))
            p.values.push_back(x.number(where + ".values entry"));
    } else {
        bad(v, where + ".shape: expected \"zero\", \"sine\" or \"nodal\", got \"" + shape + "\"");
    }
    if (const Value* a = find(t, "amplitude"))
        p.amplitude = a->number(where + ".amplitude");
    if (const Value* m = find(t, "mode"))
        p.mode = integer(*m, where + ".mode");
    return p;
}

Table parse_source_text(std::string_view text)
{
    Table t = text::parse(text);
    const Value* preset = find(t, "preset");
    if (!preset)
        return t;
    const std::string name = preset->string("preset");
    Table base = text::parse(common);
    merge_into(base, text::parse(preset_text(name)));
    t.erase("preset");
    merge_into(base, t);
    return base;
}

} // namespace

std::vector<std::string> preset_names()
{
    std::vector<std::string> out;
    for (const auto& p : presets)
        out.emplace_back(p.name);
    return out;
}

std::string preset_text(std::string_view name)
{
    for (const auto& p : presets)
        if (name == p.name)
            return p.body;
    std::string known;
    for (const auto& p : presets)
        known += (known.empty() ? "" : ", ") + std::string(p.name);
    throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

Table config_table_from_text(std::string_view text) { return parse_source_text(text); }

Table load_config_table(const std::string& source)
{
    constexpr std::string_view tag = "preset:";
    if (source.rfind(tag, 0) == 0)
        return parse_source_text("preset = \"" + source.substr(tag.size()) + "\"\n");
    std::ifstream in(source);
    if (!in)
        throw ConfigError("cannot open config file '" + source + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_source_text(ss.str());
}

ScenarioConfig config_from_table(const Table& t)
{
    check_keys(t, "",
               {"name", "p", "form", "power_mode", "tau_max", "dt", "cfl_safety", "blowup_threshold",
                "record_every", "memory", "grid", "kernel", "initial", "model", "manufactured"});
    ScenarioConfig cfg;
    if (const Value* v = find(t, "name"))
        cfg.name = v->string("name");
    if (const Value* v = find(t, "p"))
        cfg.p = v->number("p");
    if (!(cfg.p > 1.0))
        throw ConfigError("p: must satisfy p > 1", find(t, "p") ? find(t, "p")->line : 0);
    if (const Value* v = find(t, "form")) {
        const std::string& f = v->string("form");
        if (f == "w" || f == "w_form")
            cfg.form = Form::w_form;
        else if (f == "v" || f == "v_form")
            cfg.form = Form::v_form;
        else
            bad(*v, "form: expected \"w_form\" or \"v_form\"");
    }
    if (const Value* v = find(t, "power_mode")) {
        const std::string& m = v->string("power_mode");
        if (m == "odd")
            cfg.power_mode = PowerMode::odd;
        else if (m == "positive_part")
            cfg.power_mode = PowerMode::positive_part;
        else
            bad(*v, "power_mode: expected \"odd\" or \"positive_part\"");
    }
    if (const Value* v = find(t, "memory")) {
        const std::string& m = v->string("memory");
        if (m == "auto")
            cfg.memory = MemoryPath::automatic;
        else if (m == "recurrence")
            cfg.memory = MemoryPath::recurrence;
        else if (m == "full_history")
            cfg.memory = MemoryPath::full_history;
        else
            bad(*v, "memory: expected \"auto\", \"recurrence\" or \"full_history\"");
    }
    if (const Value* v = find(t, "tau_max"))
        cfg.tau_max = v->number("tau_max");
    if (const Value* v = find(t, "dt")) {
        if (v->is_string()) {
            if (v->string("dt") != "auto")
                bad(*v, "dt: expected a number or \"auto\"");
        } else {
            cfg.dt = v->number("dt");
        }
    }
    if (const Value* v = find(t, "cfl_safety"))
        cfg.cfl_safety = v->number("cfl_safety");
    if (const Value* v = find(t, "blowup_threshold"))
        cfg.blowup_threshold = v->number("blowup_threshold");
    if (const Value* v = find(t, "record_every"))
        cfg.record_every = integer(*v, "record_every");

    if (const Value* g = find(t, "grid")) {
        const Table& gt = g->table("grid");
        check_keys(gt, "grid", {"r1", "r2", "n"});
        double r1 = 0.0;
        double r2 = 1.0;
        int n = 100;
        if (const Value* v = find(gt, "r1"))
            r1 = v->number("grid.r1");
        if (const Value* v = find(gt, "r2"))
            r2 = v->number("grid.r2");
        if (const Value* v = find(gt, "n"))
            n = integer(*v, "grid.n");
        try {
            cfg.grid = Grid1D(r1, r2, n);
        } catch (const std::invalid_argument& e) {
            bad(*g, std::string("grid: ") + e.what());
        }
    }
    if (const Value* k = find(t, "kernel"))
        cfg.kernel = read_kernel(*k);

    if (const Value* iv = find(t, "initial")) {
        const Table& it = iv->table("initial");
        check_keys(it, "initial", {"u0", "u1", "scale", "scale_to_zero_energy"});
        if (const Value* v = find(it, "u0"))
            cfg.u0 = read_profile(*v, "initial.u0");
        if (const Value* v = find(it, "u1"))
            cfg.u1 = read_profile(*v, "initial.u1");
        if (const Value* v = find(it, "scale"))
            cfg.data_scale = v->number("initial.scale");
        if (const Value* v = find(it, "scale_to_zero_energy"))
            cfg.scale_to_zero_energy = v->boolean("initial.scale_to_zero_energy");
    }
    if (const Value* mv = find(t, "model")) {
        const Table& mt = mv->table("model");
        check_keys(mt, "model", {"mass_term", "nonlinear"});
        if (const Value* v = find(mt, "mass_term"))
            cfg.model.mass_term = v->boolean("model.mass_term");
        if (const Value* v = find(mt, "nonlinear"))
            cfg.model.nonlinear = v->boolean("model.nonlinear");
    }
    if (const Value* mv = find(t, "manufactured")) {
        const Table& mt = mv->table("manufactured");
        check_keys(mt, "manufactured", {"enabled", "amplitude"});
        if (const Value* v = find(mt, "enabled"))
            cfg.manufactured.enabled = v->boolean("manufactured.enabled");
        if (const Value* v = find(mt, "amplitude"))
            cfg.manufactured.amplitude = v->number("manufactured.amplitude");
    }

    cfg.validate();
    if (cfg.scale_to_zero_energy) {
        ScenarioConfig unit = cfg;
        unit.data_scale = 1.0;
        try {
            cfg.data_scale = bisect_zero_energy_scale(unit);
        } catch (const HypothesisError& e) {
            throw ConfigError(std::string("initial.scale_to_zero_energy: ") + e.what());
        }
    }
    return cfg;
}

ScenarioConfig parse_config_text(std::string_view text) { return config_from_table(parse_source_text(text)); }

ScenarioConfig parse_config(const std::string& source) { return config_from_table(load_config_table(source)); }

ScenarioConfig preset_config(std::string_view name) { return parse_config("preset:" + std::string(name)); }

void set_override(Table& table, std::string_view dotted_key, std::string_view value_text)
{
    Table parsed = text::parse("__v = " + std::string(value_text) + "\n");
    Value v = parsed.at("__v");
    v.line = 0;
    Table* t = &table;
    std::string key(dotted_key);
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty())
            throw ConfigError("override: malformed key '" + key + "'");
        if (dot == std::string::npos) {
            (*t)[part] = std::move(v);
            return;
        }
        auto [it, _] = t->try_emplace(part, Value{Table{}, 0});
        if (!it->second.is_table())
            throw ConfigError("override: '" + part + "' in '" + key + "' is not a table");
        t = &std::get<Table>(it->second.data);
        start = dot + 1;
    }
}

} // namespace efviz
