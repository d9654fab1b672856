#include "ddqn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ddqn::svg {

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series, int width,
                       int height) {
  if (series.empty()) throw std::invalid_argument("line_chart: need at least one series");
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (const Series& s : series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("line_chart: series x/y length mismatch");
    if (s.x.empty()) throw std::invalid_argument("line_chart: empty series");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
        throw std::invalid_argument("line_chart: non-finite data");
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        first = false;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  }
  const double xspan = (xmax > xmin) ? xmax - xmin : 1.0;
  const double yspan = (ymax > ymin) ? ymax - ymin : 1.0;
  const double margin = 56.0;
  const double plot_w = width - 2 * margin;
  const double plot_h = height - 2 * margin;
  auto px = [&](double x) { return margin + (x - xmin) / xspan * plot_w; };
  auto py = [&](double y) { return height - margin - (y - ymin) / yspan * plot_h; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2.0 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << escape_xml(title) << "</text>\n";
  // axes
  out << "<line x1=\"" << num(margin) << "\" y1=\"" << num(height - margin) << "\" x2=\""
      << num(width - margin) << "\" y2=\"" << num(height - margin)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << num(margin) << "\" y1=\"" << num(margin) << "\" x2=\"" << num(margin)
      << "\" y2=\"" << num(height - margin) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  // tick labels at the extremes
  out << "<text x=\"" << num(margin) << "\" y=\"" << num(height - margin + 16)
      << "\" font-size=\"11\">" << num(xmin) << "</text>\n";
  out << "<text x=\"" << num(width - margin) << "\" y=\"" << num(height - margin + 16)
      << "\" text-anchor=\"end\" font-size=\"11\">" << num(xmax) << "</text>\n";
  out << "<text x=\"" << num(margin - 6) << "\" y=\"" << num(height - margin)
      << "\" text-anchor=\"end\" font-size=\"11\">" << num(ymin) << "</text>\n";
  out << "<text x=\"" << num(margin - 6) << "\" y=\"" << num(margin + 4)
      << "\" text-anchor=\"end\" font-size=\"11\">" << num(ymax) << "</text>\n";
  out << "<text x=\"" << width / 2.0 << "\" y=\"" << num(height - 12.0)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape_xml(x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << height / 2.0 << "\" font-size=\"12\" transform=\"rotate(-90 16 "
      << height / 2.0 << ")\" text-anchor=\"middle\">" << escape_xml(y_label) << "</text>\n";

  double legend_y = margin + 8.0;
  for (const Series& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out << ' ';
      out << num(px(s.x[i])) << ',' << num(py(s.y[i]));
    }
    out << "\"/>\n";
    out << "<text x=\"" << num(width - margin - 150) << "\" y=\"" << num(legend_y)
        << "\" font-size=\"12\" fill=\"" << s.color << "\">" << escape_xml(s.label)
        << "</text>\n";
    legend_y += 16.0;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace ddqn::svg
