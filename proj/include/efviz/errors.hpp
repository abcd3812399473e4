#pragma once

#include <stdexcept>
#include <string>

namespace efviz {

/// Malformed or invalid configuration. `line()` is 0 when the error is not
/// tied to a position in the source text.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Input data does not satisfy the hypotheses a prediction relies on.
class HypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace efviz
