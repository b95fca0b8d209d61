#pragma once
#include <array>
#include <map>
#include <string>
#include <vector>

namespace gw {

// Value of the strict config subset: numbers, double-quoted strings, and
// (possibly nested) arrays of those.
struct ConfigValue {
  enum class Kind { number, string, array };
  Kind kind = Kind::number;
  double number = 0.0;
  std::string text;
  std::vector<ConfigValue> items;

  static ConfigValue make_number(double v);
  static ConfigValue make_string(std::string s);
  static ConfigValue make_array(std::vector<ConfigValue> v);
};

// Flat map from dotted field path ("numeric.gamma") to value.
using ConfigMap = std::map<std::string, ConfigValue>;

// Parses the strict configuration syntax: [table] headers, `key = value`
// lines, # comments, numbers, strings, single-line arrays. Anything else
// (booleans, inline tables, duplicate keys or tables, multi-line values)
// throws ConfigError carrying the offending field path.
ConfigMap parse_config(const std::string& text);

// Sorted `path = value` lines with %.17g numbers; equal maps canonicalize to
// identical bytes, so this is the hashable form.
std::string canonicalize(const ConfigMap& cfg);

// short_digest of the canonical form plus the toolkit version string; names
// the per-run output directory and the cache entry.
std::string config_digest(const ConfigMap& cfg);

// Schema-checked experiment description. Fields not present in the file take
// the defaults below, and `effective` echoes every field actually in force.
struct ExperimentConfig {
  std::string command;  // trace | weyl | residue | spectrum | cover | zeta | signed
  std::string group = "line";
  std::string op = "neg_laplace";
  std::string weight = "gaussian";
  std::vector<double> weight_scales;
  double gamma = 2.0;
  std::vector<long> points = {4096};
  std::vector<double> half_widths;  // default depends on the group
  long count = 0;
  long k_min = -1;
  long k_max = -1;
  long seed = 1234;
  std::vector<double> z_values = {3.0, 1.1};       // zeta
  std::vector<double> s_values;                    // residue; default {2, e, 10}
  double eps = 0.5;                                // cover
  std::vector<std::array<double, 2>> region;       // cover box; default unit box

  ConfigMap effective;  // fully defaulted flat map used for digest and echo
};

// Validates the raw map against the per-command schema: unknown fields,
// wrong types, and out-of-range values (e.g. gamma <= 0) all throw
// ConfigError with the field path. `command_hint` must match an explicit
// experiment.command if both are present.
ExperimentConfig validate_config(const ConfigMap& raw, const std::string& command_hint = "");

}  // namespace gw
