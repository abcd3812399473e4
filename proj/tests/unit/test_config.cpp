#include <doctest.h>

#include <string>

#include "efviz/config.hpp"
#include "efviz/errors.hpp"

using namespace efviz;

namespace {

const char* minimal = R"(p = 3
tau_max = 2
dt = "auto"
[grid]
r1 = 0
r2 = 1
n = 100
[kernel]
type = "expsum"
terms = [[0.25, 1.0]]
)";

int error_line(const std::string& text)
{
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string error_text(const std::string& text)
{
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("minimal config")
{
    const auto c = parse_config_text(minimal);
    CHECK(c.p == 3.0);
    CHECK(c.tau_max == 2.0);
    CHECK(c.grid.n() == 100);
    CHECK(c.time_step() == doctest::Approx(0.5 * c.grid.dx()).epsilon(1e-15));
    CHECK(c.kernel.admissibility() == doctest::Approx(0.5));
}

TEST_CASE("inline kernel table and nodal data")
{
    const auto c = parse_config_text(R"(
p = 2.5   # comment
form = "v_form"
power_mode = "positive_part"
kernel = { type = "table", s = [0, 1, 2], mu = [0.3, 0.1, 0.0] }
[grid]
n = 3
[initial]
u0 = { shape = "nodal", values = [0, 1, 2, 1, 0] }
u1 = { shape = "sine", amplitude = 0.5, mode = 2 }
[model]
mass_term = false
)");
    CHECK(c.form == Form::v_form);
    CHECK(c.power_mode == PowerMode::positive_part);
    CHECK(c.kernel.family() == KernelFamily::tabulated);
    CHECK(c.u0.values.size() == 5);
    CHECK(c.u1.mode == 2);
    CHECK_FALSE(c.model.mass_term);
}

TEST_CASE("validation errors name the field")
{
    std::string bad = minimal;
    bad.replace(bad.find("0.25"), 4, "0.6");
    CHECK(error_text(bad).find("kernel") != std::string::npos);
    CHECK(error_text(bad).find("l =") != std::string::npos);
    CHECK(error_line(bad) > 0);

    std::string lowp = minimal;
    lowp.replace(0, 5, "p = 0.5");
    CHECK(error_text(lowp).find("p: must satisfy p > 1") != std::string::npos);

    CHECK(error_text(std::string(minimal) + "[grid]\n").find("defined twice") != std::string::npos);
    CHECK(error_text("p = 3\nfoo = 1\n").find("unknown key 'foo'") != std::string::npos);
    CHECK(error_line("p = 3\nfoo = 1\n") == 2);
    CHECK(error_text("[grid]\nnn = 5\n").find("unknown key 'grid.nn'") != std::string::npos);
    CHECK(error_text("dt = 1.0\n").find("dt:") != std::string::npos);
    CHECK(error_text("[initial]\nu0 = {shape = \"nodal\", values = [1, 0, 0, 0, 0]}\n[grid]\nn = 3\n")
              .find("vanish") != std::string::npos);
    CHECK(error_text("p = \"three\"\n").find("expected a number") != std::string::npos);
}

TEST_CASE("syntax errors carry line numbers")
{
    CHECK(error_line("p = 3\n\ntau_max = \n") == 3);
    CHECK(error_line("p = 3\n[grid\n") == 2);
    CHECK(error_line("p = 3 4\n") == 1);
    CHECK(error_line("name = \"abc\n") == 1);
    CHECK(error_line("p = 3\np = 4\n") == 2);
    CHECK(error_line("kernel = { type = \"expsum\", terms = [[0.25, 1.0]\n") >= 1);
}

TEST_CASE("presets and overrides")
{
    for (const auto& name : preset_names())
        CHECK_NOTHROW(preset_config(name));
    const auto t31 = preset_config("theorem31");
    CHECK(t31.scale_to_zero_energy);
    CHECK(t31.data_scale == doctest::Approx(5.0646).epsilon(1e-3));
    CHECK_THROWS_AS(preset_config("nope"), ConfigError);

    auto table = config_table_from_text("preset = \"small_data\"\n[grid]\nn = 40\n");
    CHECK(config_from_table(table).grid.n() == 40);
    CHECK(config_from_table(table).kernel.admissibility() == doctest::Approx(0.5));
    set_override(table, "grid.n", "60");
    set_override(table, "p", "5");
    const auto c = config_from_table(table);
    CHECK(c.grid.n() == 60);
    CHECK(c.p == 5.0);
    set_override(table, "grid.bogus", "1");
    CHECK_THROWS_AS(config_from_table(table), ConfigError);
}
