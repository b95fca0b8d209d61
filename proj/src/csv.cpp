#include "gw/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gw {

std::string csv_join(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) row += ',';
    row += fields[i];
  }
  row += '\n';
  return row;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string spectrum_svg(const std::vector<double>& mu, const std::string& title) {
  const int width = 640, height = 420, pad = 50;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (mu[k] <= 0.0) continue;
    xs.push_back(std::log10(static_cast<double>(k) + 1.0));
    ys.push_back(std::log10(mu[k]));
  }
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"420\" fill=\"white\"/>\n";
  svg += "<text x=\"20\" y=\"24\" font-family=\"monospace\" font-size=\"13\">" + title +
         "</text>\n";
  if (!xs.empty()) {
    double x0 = xs.front(), x1 = xs.front(), y0 = ys.front(), y1 = ys.front();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      x0 = std::min(x0, xs[i]);
      x1 = std::max(x1, xs[i]);
      y0 = std::min(y0, ys[i]);
      y1 = std::max(y1, ys[i]);
    }
    if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
    if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
    svg += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.2\" points=\"";
    char buf[64];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double px = pad + (xs[i] - x0) / (x1 - x0) * (width - 2 * pad);
      const double py = height - pad - (ys[i] - y0) / (y1 - y0) * (height - 2 * pad);
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px, py);
      svg += buf;
    }
    svg += "\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2 - 30) + "\" y=\"" +
           std::to_string(height - 12) +
           "\" font-family=\"monospace\" font-size=\"12\">log10 k</text>\n";
    svg += "<text x=\"12\" y=\"" + std::to_string(height / 2) +
           "\" font-family=\"monospace\" font-size=\"12\">log10 mu</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace gw
