#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace efviz::text {

struct Value;
using Array = std::vector<Value>;
/// Keys in insertion-independent (sorted) order; `line` of each entry is kept
/// in the value itself.
using Table = std::map<std::string, Value>;

/// Parsed value of the small TOML subset used by scenario files: numbers,
/// booleans, strings, arrays (nesting allowed), inline tables and [tables].
struct Value {
    std::variant<double, bool, std::string, Array, Table> data;
    int line = 0;

    bool is_number() const { return std::holds_alternative<double>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }
    bool is_table() const { return std::holds_alternative<Table>(data); }

    /// Typed accessors; throw ConfigError naming `what` and the line.
    double number(std::string_view what) const;
    bool boolean(std::string_view what) const;
    const std::string& string(std::string_view what) const;
    const Array& array(std::string_view what) const;
    const Table& table(std::string_view what) const;
};

/// Parses a whole document into its root table. Syntax errors throw
/// ConfigError carrying the line number.
Table parse(std::string_view source);

} // namespace efviz::text
