#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace levyma {

// Parses the TOML subset used by experiment configs into a JSON tree:
// tables, arrays of tables, dotted keys, basic and literal strings, integers,
// floats, booleans, arrays and inline tables. Dates and multi-line strings are
// not supported. Throws ConfigError with a line number on malformed input.
nlohmann::json parse_toml(const std::string& text);

}  // namespace levyma
