#pragma once

#include <map>
#include <string>
#include <vector>

#include "qsync/harness.hpp"

namespace qsync {

/// One value of the configuration language: a number, a quoted string, a
/// boolean or a bracketed list of those.
struct ConfigValue {
  enum class Kind { Number, String, Bool, List };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string text;  ///< string payload, or the raw token for numbers
  bool flag = false;
  std::vector<ConfigValue> items;
};

/// Parsed but not yet interpreted configuration. Keys are dotted paths
/// ("coupling.mu", "node.1.n_bath"); event tables are kept in file order.
struct ConfigTable {
  struct Entry {
    ConfigValue value;
    int line = 0;
  };
  std::map<std::string, Entry> entries;
  std::vector<std::map<std::string, Entry>> events;
};

struct PlotOptions {
  std::vector<std::string> columns;  ///< empty picks the pair metrics
};

struct LoadedConfig {
  ScenarioConfig scenario;
  PlotOptions plot;
};

/// Parses one value literal (used for command-line overrides as well).
ConfigValue parse_config_value(const std::string& text);

ConfigTable parse_config_table(const std::string& text, const std::string& origin = "config");

/// Applies `key = value` on top of a parsed table, as if it were in the file.
void override_config(ConfigTable& table, const std::string& key, const std::string& value);

/// Interprets a table: unknown keys, missing required fields and out-of-range
/// values raise ConfigError naming the key and its line.
LoadedConfig interpret_config(const ConfigTable& table, const std::string& origin = "config");

LoadedConfig parse_config_string(const std::string& text, const std::string& origin = "config");
LoadedConfig parse_config_file(const std::string& path);
ConfigTable read_config_table(const std::string& path);

}  // namespace qsync
