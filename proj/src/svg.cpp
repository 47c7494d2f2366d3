#include "wsbm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace wsbm {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 64, kRight = 24, kTop = 40, kBottom = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string failure_plot_svg(const std::vector<SweepRow>& rows) {
  // series keyed by (K, n); map keeps the legend order stable
  std::map<std::pair<int, long>, std::vector<std::pair<double, double>>>
      series;
  double cmax = 1.25;
  for (const SweepRow& r : rows) {
    if (!r.error.empty() || !std::isfinite(r.C)) continue;
    series[{r.K, r.n}].push_back({r.C, r.failure_rate});
    cmax = std::max(cmax, r.C);
  }
  cmax *= 1.05;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto sx = [&](double c) { return kLeft + c / cmax * plot_w; };
  const auto sy = [&](double f) { return kTop + (1.0 - f) * plot_h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) +
         " " + num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) +
         "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">failure rate vs threshold statistic C</text>\n";

  // axes
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" +
         num(kWidth - kRight) + "\" y2=\"" + num(sy(0)) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" +
         num(kLeft) + "\" y2=\"" + num(sy(1)) + "\" stroke=\"black\"/>\n";

  // y ticks every 0.25
  for (int i = 0; i <= 4; ++i) {
    const double f = 0.25 * i;
    svg += "<line x1=\"" + num(kLeft - 4) + "\" y1=\"" + num(sy(f)) +
           "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(sy(f)) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(sy(f)) + "\" x2=\"" +
           num(kWidth - kRight) + "\" y2=\"" + num(sy(f)) +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(sy(f) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           num(f) + "</text>\n";
  }

  // x ticks: smallest 1-2-5 step that keeps the count at 8 or fewer
  double step = 0.1;
  while (cmax / step > 8.0) {
    if (cmax / (2.0 * step) <= 8.0)
      step *= 2.0;
    else if (cmax / (5.0 * step) <= 8.0)
      step *= 5.0;
    else
      step *= 10.0;
  }
  for (double c = 0.0; c <= cmax + 1e-12; c += step) {
    svg += "<line x1=\"" + num(sx(c)) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" +
           num(sx(c)) + "\" y2=\"" + num(sy(0) + 4) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(sx(c)) + "\" y=\"" + num(sy(0) + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           num(c) + "</text>\n";
  }

  // axis labels
  svg += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" +
         num(kHeight - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">C</text>\n";
  svg += "<text x=\"16\" y=\"" + num(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 16 " +
         num(kTop + plot_h / 2) + ")\">failure rate</text>\n";

  // recovery threshold
  if (cmax > 1.0) {
    svg += "<line x1=\"" + num(sx(1)) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" +
           num(sx(1)) + "\" y2=\"" + num(sy(1)) +
           "\" stroke=\"#aa0000\" stroke-dasharray=\"6 4\"/>\n";
    svg += "<text x=\"" + num(sx(1) + 4) + "\" y=\"" + num(kTop + 12) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#aa0000\">C = 1</text>\n";
  }

  int color = 0;
  double legend_y = kTop + 10;
  for (auto& [key, pts] : series) {
    std::sort(pts.begin(), pts.end());
    const char* stroke = kPalette[color % 8];
    if (pts.size() > 1) {
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) +
             "\" points=\"";
      for (const auto& [c, f] : pts)
        svg += num(sx(c)) + "," + num(sy(f)) + " ";
      svg += "\"/>\n";
    }
    for (const auto& [c, f] : pts)
      svg += "<circle cx=\"" + num(sx(c)) + "\" cy=\"" + num(sy(f)) +
             "\" r=\"3.5\" fill=\"" + stroke + "\"/>\n";
    svg += "<rect x=\"" + num(kWidth - kRight - 120) + "\" y=\"" +
           num(legend_y - 8) + "\" width=\"10\" height=\"10\" fill=\"" +
           stroke + "\"/>\n";
    svg += "<text x=\"" + num(kWidth - kRight - 104) + "\" y=\"" +
           num(legend_y + 1) +
           "\" font-family=\"sans-serif\" font-size=\"11\">K=" +
           std::to_string(key.first) + ", n=" + std::to_string(key.second) +
           "</text>\n";
    legend_y += 16;
    ++color;
  }

  svg += "</svg>\n";
  return svg;
}

void write_failure_plot(const std::string& path,
                        const std::vector<SweepRow>& rows) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << failure_plot_svg(rows);
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace wsbm
