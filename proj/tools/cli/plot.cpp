#include "cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace cpflow::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 60.0;
constexpr double kFloor = 1e-18;  // residuals below this are drawn at the floor

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string emit_plot(const FlowTrace& trace, const std::string& title) {
  if (trace.empty()) throw Error("emit_plot: empty trace");

  std::vector<double> xs, ys;
  for (const auto& s : trace.samples) {
    xs.push_back(s.time);
    ys.push_back(std::log10(std::max(s.residual_norm, kFloor)));
  }
  const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
  const auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
  const double x0 = *xmin_it, x1 = *xmax_it;
  double y0 = std::floor(*ymin_it), y1 = std::ceil(*ymax_it);
  if (y1 <= y0) y1 = y0 + 1.0;

  const double pw = kWidth - 2 * kMargin, ph = kHeight - 2 * kMargin;
  auto px = [&](double x) { return x1 > x0 ? kMargin + (x - x0) / (x1 - x0) * pw : kMargin + pw / 2; };
  auto py = [&](double y) { return kMargin + (y1 - y) / (y1 - y0) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
         "</text>\n";
  svg += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(kMargin + ph) + "\" x2=\"" + fmt(kMargin + pw) + "\" y2=\"" +
         fmt(kMargin + ph) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(kMargin) + "\" x2=\"" + fmt(kMargin) + "\" y2=\"" +
         fmt(kMargin + ph) + "\" stroke=\"black\"/>\n";

  // Decade ticks on the log axis.
  const int step = std::max(1, static_cast<int>((y1 - y0) / 8.0 + 0.999));
  for (int e = static_cast<int>(y0); e <= static_cast<int>(y1); e += step) {
    svg += "<text x=\"" + fmt(kMargin - 6) + "\" y=\"" + fmt(py(e) + 4) +
           "\" text-anchor=\"end\" font-size=\"10\">1e" + std::to_string(e) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(kMargin) + "\" y=\"" + fmt(kMargin + ph + 16) + "\" font-size=\"10\">" + fmt_g(x0) +
         "</text>\n";
  svg += "<text x=\"" + fmt(kMargin + pw) + "\" y=\"" + fmt(kMargin + ph + 16) +
         "\" text-anchor=\"end\" font-size=\"10\">" + fmt_g(x1) + "</text>\n";
  svg += "<text x=\"" + fmt(kMargin + pw / 2) + "\" y=\"" + fmt(kHeight - 12) +
         "\" text-anchor=\"middle\" font-size=\"12\">time</text>\n";

  if (xs.size() == 1) {
    svg += "<circle cx=\"" + fmt(px(xs[0])) + "\" cy=\"" + fmt(py(ys[0])) + "\" r=\"3\" fill=\"steelblue\"/>\n";
  } else {
    svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (k) svg += ' ';
      svg += fmt(px(xs[k])) + "," + fmt(py(ys[k]));
    }
    svg += "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_plot(const std::filesystem::path& path, const FlowTrace& trace, const std::string& title) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << emit_plot(trace, title);
}

}  // namespace cpflow::cli
