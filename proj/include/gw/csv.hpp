#pragma once
#include <string>
#include <vector>

namespace gw {

// Joins plain fields (no embedded commas/newlines) into one CSV row with
// trailing newline.
std::string csv_join(const std::vector<std::string>& fields);

// Whole-file helpers; failures throw std::runtime_error with the path.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Log-log scatter of a nonincreasing positive sequence as a standalone SVG
// document; deterministic bytes for identical input.
std::string spectrum_svg(const std::vector<double>& mu, const std::string& title);

}  // namespace gw
