#include "wrom/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wrom::harness {

namespace {

constexpr const char* kHeader = "N,absolute,absolute_max,relative,relative_max,relative_ratio_of_means,failures";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits = 2) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double parse_double(const std::string& field) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0') throw std::invalid_argument("csv: bad number '" + field + "'");
  return v;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void write_csv(std::ostream& out, const ErrorTable& table) {
  out << kHeader << '\n';
  for (const auto& r : table.rows) {
    out << r.n << ',' << fmt(r.absolute) << ',' << fmt(r.absolute_max) << ',' << fmt(r.relative) << ','
        << fmt(r.relative_max) << ',' << fmt(r.relative_ratio_of_means) << ',' << r.failures << '\n';
  }
}

ErrorTable read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::invalid_argument("csv: unexpected header");
  ErrorTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 7) throw std::invalid_argument("csv: expected 7 fields in '" + line + "'");
    ErrorRow r;
    r.n = std::stoi(fields[0]);
    r.absolute = parse_double(fields[1]);
    r.absolute_max = parse_double(fields[2]);
    r.relative = parse_double(fields[3]);
    r.relative_max = parse_double(fields[4]);
    r.relative_ratio_of_means = parse_double(fields[5]);
    r.failures = std::stoi(fields[6]);
    table.rows.push_back(r);
  }
  return table;
}

std::vector<Series> table_series(const ErrorTable& table, const std::string& prefix) {
  std::vector<Series> s = {{prefix + "absolute", {}, {}},
                           {prefix + "absolute max", {}, {}},
                           {prefix + "relative", {}, {}},
                           {prefix + "relative max", {}, {}}};
  for (const auto& r : table.rows) {
    const double values[] = {r.absolute, r.absolute_max, r.relative, r.relative_max};
    for (int k = 0; k < 4; ++k) {
      s[k].x.push_back(r.n);
      s[k].y.push_back(values[k]);
    }
  }
  return s;
}

void write_svg(std::ostream& out, const std::vector<Series>& series, const std::string& caption) {
  const double width = 720, height = 480;
  const double left = 80, right = 200, top = 30, bottom = 80;
  const double pw = width - left - right, ph = height - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      if (std::isfinite(s.y[i]) && s.y[i] > 0) {
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (!std::isfinite(ymin)) ymin = 1e-1, ymax = 1;
  const double dmin = std::floor(std::log10(ymin));
  double dmax = std::ceil(std::log10(ymax));
  if (dmax == dmin) dmax = dmin + 1;

  const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return top + (dmax - std::log10(y)) / (dmax - dmin) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(dmin); d <= static_cast<int>(dmax); ++d) {
    const double y = py(std::pow(10.0, d));
    out << "<line x1=\"" << left << "\" y1=\"" << fixed(y) << "\" x2=\"" << left + pw << "\" y2=\"" << fixed(y)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  const int xticks = static_cast<int>(std::min(10.0, xmax - xmin));
  for (int t = 0; t <= xticks; ++t) {
    const double x = xmin + (xmax - xmin) * t / std::max(1, xticks);
    out << "<text x=\"" << fixed(px(x)) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
        << fixed(x, std::abs(x - std::round(x)) < 1e-9 ? 0 : 1) << "</text>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << top + ph + 34 << "\" text-anchor=\"middle\">N</text>\n";
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">" << escape(caption)
      << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    std::string points;
    const auto flush = [&]() {
      if (!points.empty()) {
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"" << points
            << "\"/>\n";
        points.clear();
      }
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(std::isfinite(s.y[i]) && s.y[i] > 0)) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fixed(px(s.x[i]), 3) + ',' + fixed(py(s.y[i]), 3);
    }
    flush();
    const double ly = top + 10 + 18 * static_cast<double>(k);
    out << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly
        << "\" stroke=\"" << colour << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

void emit(const std::filesystem::path& dir, const std::string& stem, const ErrorTable& table,
          const std::string& caption) {
  if (table.rows.empty()) throw std::invalid_argument("emit: empty table");
  std::filesystem::create_directories(dir);
  const auto open = [&](const std::string& ext) {
    std::ofstream f(dir / (stem + ext));
    if (!f) throw std::runtime_error("cannot write " + (dir / (stem + ext)).string());
    return f;
  };
  {
    auto f = open(".csv");
    write_csv(f, table);
    if (!f) throw std::runtime_error("write failed for " + stem + ".csv");
  }
  {
    auto f = open(".svg");
    write_svg(f, table_series(table), caption);
  }
  {
    auto f = open(".json");
    f << table.metadata.dump(2) << '\n';
  }
}

}  // namespace wrom::harness
