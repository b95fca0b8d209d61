#include "gw/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "gw/digest.hpp"
#include "gw/errors.hpp"
#include "gw/version.hpp"

namespace gw {
namespace {

bool bare_key_ok(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

bool table_name_ok(const std::string& s) {
  if (s.empty() || s.front() == '.' || s.back() == '.') return false;
  std::string part;
  for (char c : s + ".") {
    if (c == '.') {
      if (!bare_key_ok(part)) return false;
      part.clear();
    } else {
      part += c;
    }
  }
  return true;
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Recursive value parser over s[pos..]; `where` names the field for errors.
ConfigValue parse_value(const std::string& s, std::size_t& pos, const std::string& where);

void skip_ws(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

ConfigValue parse_string(const std::string& s, std::size_t& pos, const std::string& where) {
  ++pos;  // opening quote
  std::string out;
  while (pos < s.size()) {
    const char c = s[pos];
    if (c == '\\') {
      if (pos + 1 >= s.size()) throw ConfigError(where, "unterminated escape in string");
      const char e = s[pos + 1];
      if (e == '"' || e == '\\')
        out += e;
      else
        throw ConfigError(where, std::string("unsupported escape \\") + e);
      pos += 2;
      continue;
    }
    if (c == '"') {
      ++pos;
      return ConfigValue::make_string(out);
    }
    out += c;
    ++pos;
  }
  throw ConfigError(where, "unterminated string");
}

ConfigValue parse_array(const std::string& s, std::size_t& pos, const std::string& where) {
  ++pos;  // opening bracket
  std::vector<ConfigValue> items;
  skip_ws(s, pos);
  if (pos < s.size() && s[pos] == ']') {
    ++pos;
    return ConfigValue::make_array(std::move(items));
  }
  while (true) {
    items.push_back(parse_value(s, pos, where));
    skip_ws(s, pos);
    if (pos >= s.size()) throw ConfigError(where, "unterminated array");
    if (s[pos] == ',') {
      ++pos;
      skip_ws(s, pos);
      continue;
    }
    if (s[pos] == ']') {
      ++pos;
      return ConfigValue::make_array(std::move(items));
    }
    throw ConfigError(where, "expected ',' or ']' in array");
  }
}

ConfigValue parse_value(const std::string& s, std::size_t& pos, const std::string& where) {
  skip_ws(s, pos);
  if (pos >= s.size()) throw ConfigError(where, "missing value");
  const char c = s[pos];
  if (c == '"') return parse_string(s, pos, where);
  if (c == '[') return parse_array(s, pos, where);
  std::size_t end = pos;
  while (end < s.size() && s[end] != ',' && s[end] != ']' &&
         !std::isspace(static_cast<unsigned char>(s[end])))
    ++end;
  const std::string token = s.substr(pos, end - pos);
  if (token == "true" || token == "false")
    throw ConfigError(where, "booleans are not part of the config subset");
  char* stop = nullptr;
  const double v = std::strtod(token.c_str(), &stop);
  if (stop == token.c_str() || *stop != '\0')
    throw ConfigError(where, "expected a number, string, or array, got '" + token + "'");
  pos = end;
  return ConfigValue::make_number(v);
}

void check_path_clash(const ConfigMap& cfg, const std::string& path) {
  auto conflicts = [](const std::string& a, const std::string& b) {
    return a.size() > b.size() && a.compare(0, b.size(), b) == 0 && a[b.size()] == '.';
  };
  for (const auto& [key, _] : cfg) {
    if (key == path) throw ConfigError(path, "duplicate key");
    if (conflicts(key, path) || conflicts(path, key))
      throw ConfigError(path, "conflicts with existing field " + key);
  }
}

// --- schema helpers -------------------------------------------------------

struct FieldReader {
  ConfigMap remaining;

  explicit FieldReader(const ConfigMap& raw) : remaining(raw) {}

  bool has(const std::string& path) const { return remaining.count(path) > 0; }

  ConfigValue take(const std::string& path) {
    auto it = remaining.find(path);
    const ConfigValue v = it->second;
    remaining.erase(it);
    return v;
  }

  std::string take_string(const std::string& path, const std::string& fallback) {
    if (!has(path)) return fallback;
    const ConfigValue v = take(path);
    if (v.kind != ConfigValue::Kind::string) throw ConfigError(path, "expected a string");
    return v.text;
  }

  double take_number(const std::string& path, double fallback) {
    if (!has(path)) return fallback;
    const ConfigValue v = take(path);
    if (v.kind != ConfigValue::Kind::number) throw ConfigError(path, "expected a number");
    return v.number;
  }

  long take_long(const std::string& path, long fallback) {
    const double v = take_number(path, static_cast<double>(fallback));
    if (v != std::floor(v) || std::abs(v) > 1e15)
      throw ConfigError(path, "expected an integer");
    return static_cast<long>(v);
  }

  std::vector<double> take_number_array(const std::string& path, std::vector<double> fallback) {
    if (!has(path)) return fallback;
    const ConfigValue v = take(path);
    if (v.kind != ConfigValue::Kind::array) throw ConfigError(path, "expected an array");
    std::vector<double> out;
    for (const auto& item : v.items) {
      if (item.kind != ConfigValue::Kind::number)
        throw ConfigError(path, "expected an array of numbers");
      out.push_back(item.number);
    }
    return out;
  }

  void finish() const {
    if (!remaining.empty())
      throw ConfigError(remaining.begin()->first, "unknown field");
  }
};

ConfigValue number_array(const std::vector<double>& v) {
  std::vector<ConfigValue> items;
  for (double x : v) items.push_back(ConfigValue::make_number(x));
  return ConfigValue::make_array(std::move(items));
}

ConfigValue long_array(const std::vector<long>& v) {
  std::vector<ConfigValue> items;
  for (long x : v) items.push_back(ConfigValue::make_number(static_cast<double>(x)));
  return ConfigValue::make_array(std::move(items));
}

const std::set<std::string> kCommands = {"trace",  "weyl", "residue", "spectrum",
                                         "cover",  "zeta", "signed"};

std::string default_op(const std::string& group) {
  if (group == "plane_aniso") return "quartic_mixed";
  if (group == "heisenberg") return "sublaplacian";
  return "neg_laplace";
}

std::string default_weight(const std::string& group) {
  return group == "heisenberg" ? "bump" : "gaussian";
}

std::vector<double> default_half_widths(const std::string& group) {
  if (group == "plane_aniso") return {8.0, 0.65};
  if (group == "heisenberg") return {4.0, 4.0, 8.0};
  return {16.0 * M_PI};
}

void check_pair(const std::string& group, const std::string& op, const std::string& weight) {
  const bool ok =
      (group == "line" &&
       ((op == "neg_laplace" &&
         (weight == "gaussian" || weight == "odd_gaussian" || weight == "bump")) ||
        (op == "divform_2_sin" && weight == "gaussian"))) ||
      (group == "plane_aniso" && op == "quartic_mixed" && weight == "gaussian") ||
      (group == "heisenberg" && op == "sublaplacian" && weight == "bump");
  if (!ok) {
    if (group != "line" && group != "plane_aniso" && group != "heisenberg")
      throw ConfigError("group.name", "unsupported group '" + group + "'");
    if ((group == "line" && op != "neg_laplace" && op != "divform_2_sin") ||
        (group == "plane_aniso" && op != "quartic_mixed") ||
        (group == "heisenberg" && op != "sublaplacian"))
      throw ConfigError("operator.name", "operator '" + op + "' unsupported on " + group);
    throw ConfigError("function.name", "weight '" + weight + "' unsupported for " + group +
                                           "/" + op);
  }
}

int group_dim(const std::string& group) {
  if (group == "line") return 1;
  if (group == "plane" || group == "graded_plane") return 2;
  if (group == "heisenberg") return 3;
  throw ConfigError("group.name", "unsupported group '" + group + "'");
}

}  // namespace

ConfigValue ConfigValue::make_number(double v) {
  ConfigValue c;
  c.kind = Kind::number;
  c.number = v;
  return c;
}

ConfigValue ConfigValue::make_string(std::string s) {
  ConfigValue c;
  c.kind = Kind::string;
  c.text = std::move(s);
  return c;
}

ConfigValue ConfigValue::make_array(std::vector<ConfigValue> v) {
  ConfigValue c;
  c.kind = Kind::array;
  c.items = std::move(v);
  return c;
}

ConfigMap parse_config(const std::string& text) {
  ConfigMap cfg;
  std::set<std::string> tables;
  std::string prefix;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string line = text.substr(start, nl == std::string::npos ? nl : nl - start);
    start = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where, "unterminated table header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!table_name_ok(name)) throw ConfigError(where, "invalid table name '" + name + "'");
      if (!tables.insert(name).second) throw ConfigError(name, "duplicate table");
      prefix = name;
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (!table_name_ok(key)) throw ConfigError(where, "invalid key '" + key + "'");
    const std::string path = prefix.empty() ? key : prefix + "." + key;

    std::size_t pos = eq + 1;
    const ConfigValue value = parse_value(line, pos, path);
    skip_ws(line, pos);
    if (pos != line.size()) throw ConfigError(path, "trailing characters after value");

    check_path_clash(cfg, path);
    cfg.emplace(path, value);
  }
  return cfg;
}

namespace {

std::string render_value(const ConfigValue& v) {
  switch (v.kind) {
    case ConfigValue::Kind::number:
      return format_double(v.number);
    case ConfigValue::Kind::string: {
      std::string out = "\"";
      for (char c : v.text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      out += '"';
      return out;
    }
    case ConfigValue::Kind::array: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += render_value(v.items[i]);
      }
      out += "]";
      return out;
    }
  }
  return {};
}

}  // namespace

std::string canonicalize(const ConfigMap& cfg) {
  std::string out;
  for (const auto& [path, value] : cfg) out += path + " = " + render_value(value) + "\n";
  return out;
}

std::string config_digest(const ConfigMap& cfg) {
  return short_digest(canonicalize(cfg) + "toolkit = \"" + kToolkitVersion + "\"\n");
}

ExperimentConfig validate_config(const ConfigMap& raw, const std::string& command_hint) {
  FieldReader reader(raw);
  ExperimentConfig out;

  out.command = reader.take_string("experiment.command", command_hint);
  if (out.command.empty()) throw ConfigError("experiment.command", "missing command");
  if (!command_hint.empty() && out.command != command_hint)
    throw ConfigError("experiment.command",
                      "config says '" + out.command + "' but the command line says '" +
                          command_hint + "'");
  if (!kCommands.count(out.command))
    throw ConfigError("experiment.command", "unknown command '" + out.command + "'");

  out.group = reader.take_string("group.name", "line");
  ConfigMap& eff = out.effective;
  eff.emplace("experiment.command", ConfigValue::make_string(out.command));
  eff.emplace("group.name", ConfigValue::make_string(out.group));

  const bool spectral = out.command == "weyl" || out.command == "spectrum" ||
                        out.command == "signed" || out.command == "zeta";

  if (spectral) {
    out.op = reader.take_string("operator.name", default_op(out.group));
    out.weight = reader.take_string("function.name", default_weight(out.group));
    out.weight_scales = reader.take_number_array("function.scales", {});
    for (double s : out.weight_scales)
      if (!(s > 0.0)) throw ConfigError("function.scales", "scales must be positive");
    out.gamma = reader.take_number("numeric.gamma", 2.0);
    if (!(out.gamma > 0.0)) throw ConfigError("numeric.gamma", "gamma must be positive");
    const auto pts = reader.take_number_array("numeric.points", {4096.0});
    out.points.clear();
    for (double p : pts) {
      if (p != std::floor(p) || p < 2.0)
        throw ConfigError("numeric.points", "points must be integers >= 2");
      out.points.push_back(static_cast<long>(p));
    }
    out.half_widths =
        reader.take_number_array("numeric.half_widths", default_half_widths(out.group));
    for (double h : out.half_widths)
      if (!(h > 0.0)) throw ConfigError("numeric.half_widths", "half widths must be positive");
    out.count = reader.take_long("numeric.count", 0);
    if (out.count < 0) throw ConfigError("numeric.count", "count must be >= 0");
    out.k_min = reader.take_long("numeric.k_min", -1);
    out.k_max = reader.take_long("numeric.k_max", -1);
    if (out.k_min < -1 || out.k_max < -1)
      throw ConfigError("numeric.k_min", "window indices must be >= -1");
    out.seed = reader.take_long("numeric.seed", 1234);
    if (out.seed < 0) throw ConfigError("numeric.seed", "seed must be >= 0");

    if (out.command == "zeta") {
      if (out.group != "line" || out.op != "neg_laplace" || out.weight != "gaussian")
        throw ConfigError("experiment.command",
                          "zeta requires group line, operator neg_laplace, function gaussian");
      out.z_values = reader.take_number_array("zeta.z", {3.0, 1.1});
      if (out.z_values.empty()) throw ConfigError("zeta.z", "need at least one z");
      for (double z : out.z_values)
        if (!(z > 1.0)) throw ConfigError("zeta.z", "the trace identity requires z > 1");
      eff.emplace("zeta.z", number_array(out.z_values));
    } else if (out.command == "signed") {
      if (out.group != "line" || out.op != "neg_laplace")
        throw ConfigError("experiment.command",
                          "signed requires group line and operator neg_laplace");
      check_pair(out.group, out.op, out.weight);
    } else {
      check_pair(out.group, out.op, out.weight);
    }

    eff.emplace("operator.name", ConfigValue::make_string(out.op));
    eff.emplace("function.name", ConfigValue::make_string(out.weight));
    eff.emplace("function.scales", number_array(out.weight_scales));
    eff.emplace("numeric.gamma", ConfigValue::make_number(out.gamma));
    eff.emplace("numeric.points", long_array(out.points));
    eff.emplace("numeric.half_widths", number_array(out.half_widths));
    eff.emplace("numeric.count", ConfigValue::make_number(static_cast<double>(out.count)));
    eff.emplace("numeric.k_min", ConfigValue::make_number(static_cast<double>(out.k_min)));
    eff.emplace("numeric.k_max", ConfigValue::make_number(static_cast<double>(out.k_max)));
    eff.emplace("numeric.seed", ConfigValue::make_number(static_cast<double>(out.seed)));
  } else if (out.command == "trace" || out.command == "residue") {
    out.op = reader.take_string("operator.name", default_op(out.group));
    if (!((out.group == "line" && out.op == "neg_laplace") ||
          (out.group == "plane_aniso" && out.op == "quartic_mixed") ||
          (out.group == "heisenberg" && out.op == "sublaplacian"))) {
      if (out.group != "line" && out.group != "plane_aniso" && out.group != "heisenberg")
        throw ConfigError("group.name", "unsupported group '" + out.group + "'");
      throw ConfigError("operator.name", "operator '" + out.op + "' unsupported on " + out.group);
    }
    eff.emplace("operator.name", ConfigValue::make_string(out.op));
    if (out.command == "residue") {
      out.s_values = reader.take_number_array("residue.s", {2.0, M_E, 10.0});
      if (out.s_values.empty()) throw ConfigError("residue.s", "need at least one s");
      for (double s : out.s_values)
        if (!(s > 0.0) || s == 1.0)
          throw ConfigError("residue.s", "scaling parameters must be positive and != 1");
      eff.emplace("residue.s", number_array(out.s_values));
    }
  } else {  // cover
    const int dim = group_dim(out.group);
    out.eps = reader.take_number("cover.eps", 0.5);
    if (!(out.eps > 0.0)) throw ConfigError("cover.eps", "eps must be positive");
    if (reader.has("cover.bounds")) {
      const ConfigValue v = reader.take("cover.bounds");
      if (v.kind != ConfigValue::Kind::array)
        throw ConfigError("cover.bounds", "expected an array of [lo, hi] pairs");
      for (const auto& item : v.items) {
        if (item.kind != ConfigValue::Kind::array || item.items.size() != 2 ||
            item.items[0].kind != ConfigValue::Kind::number ||
            item.items[1].kind != ConfigValue::Kind::number)
          throw ConfigError("cover.bounds", "expected an array of [lo, hi] pairs");
        const double lo = item.items[0].number, hi = item.items[1].number;
        if (!(lo < hi)) throw ConfigError("cover.bounds", "need lo < hi in every pair");
        out.region.push_back({lo, hi});
      }
    } else {
      out.region.assign(static_cast<std::size_t>(dim), {0.0, 1.0});
    }
    if (static_cast<int>(out.region.size()) != dim)
      throw ConfigError("cover.bounds", "expected " + std::to_string(dim) +
                                            " axis pairs for group " + out.group);
    eff.emplace("cover.eps", ConfigValue::make_number(out.eps));
    std::vector<ConfigValue> pairs;
    for (const auto& ab : out.region)
      pairs.push_back(ConfigValue::make_array(
          {ConfigValue::make_number(ab[0]), ConfigValue::make_number(ab[1])}));
    eff.emplace("cover.bounds", ConfigValue::make_array(std::move(pairs)));
  }

  reader.finish();
  return out;
}

}  // namespace gw
