#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "efviz/config_text.hpp"
#include "efviz/scenario.hpp"

namespace efviz {

/// Reads a scenario file. A source of the form "preset:NAME" loads a built-in
/// preset instead. Throws ConfigError (syntax errors carry the line number,
/// validation errors name the field).
ScenarioConfig parse_config(const std::string& source);
ScenarioConfig parse_config_text(std::string_view text);

/// Raw table of a source, with its `preset` (if any) merged underneath.
text::Table load_config_table(const std::string& source);
text::Table config_table_from_text(std::string_view text);

/// Builds and validates a config. Unknown keys are errors. When
/// scale_to_zero_energy is set the data scale is replaced by the bisected
/// zero-energy factor.
ScenarioConfig config_from_table(const text::Table& table);

/// Sets a dotted key ("grid.n") to a value written in config syntax ("200").
void set_override(text::Table& table, std::string_view dotted_key, std::string_view value_text);

std::vector<std::string> preset_names();
/// Config text of a built-in preset. Throws ConfigError for unknown names.
std::string preset_text(std::string_view name);
ScenarioConfig preset_config(std::string_view name);

} // namespace efviz
