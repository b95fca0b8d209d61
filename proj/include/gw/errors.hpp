#pragma once
#include <stdexcept>
#include <string>
#include <utility>

namespace gw {

// Schema/configuration problem. Carries the offending field path so the CLI
// can report it and exit with the schema-violation status.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field_path, const std::string& what)
      : std::runtime_error(field_path + ": " + what), field_path_(std::move(field_path)) {}
  const std::string& field_path() const { return field_path_; }

private:
  std::string field_path_;
};

// Numeric failure inside a pipeline stage (quadrature nonconvergence,
// indefinite matrix, iterative solver breakdown, ...).
class NumericError : public std::runtime_error {
public:
  NumericError(std::string stage, const std::string& what)
      : std::runtime_error("[" + stage + "] " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

}  // namespace gw
