#include "gonosim/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "gonosim/numeric.hpp"

namespace gonosim {
namespace {

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string rgb(int r, int g, int b) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string text_at(double x, double y, const std::string& s, int size = 12,
                    const char* anchor = "start") {
  return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-size=\"" + std::to_string(size) +
         "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
}

std::string line_at(double x1, double y1, double x2, double y2, const std::string& stroke,
                    const char* extra = "") {
  return "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" +
         fmt(y2) + "\" stroke=\"" + stroke + "\" " + extra + "/>\n";
}

struct Panel {
  double px, py, pw, ph;      // pixel rectangle
  double x0, x1, y0, y1;      // data rectangle
  double X(double x) const { return px + (x - x0) / (x1 - x0) * pw; }
  double Y(double y) const { return py + ph - (y - y0) / (y1 - y0) * ph; }
};

std::string polyline(const Panel& p, const std::vector<std::pair<double, double>>& pts,
                     const std::string& stroke, const char* extra = "") {
  if (pts.empty()) return "";
  std::string s = "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"1.5\" " +
                  extra + " points=\"";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) s += ' ';
    s += fmt(p.X(pts[k].first)) + ',' + fmt(p.Y(pts[k].second));
  }
  return s + "\"/>\n";
}

std::string frame(const Panel& p, const std::string& title) {
  std::string s = "<rect x=\"" + fmt(p.px) + "\" y=\"" + fmt(p.py) + "\" width=\"" + fmt(p.pw) +
                  "\" height=\"" + fmt(p.ph) + "\" fill=\"none\" stroke=\"#404040\"/>\n";
  s += text_at(p.px, p.py - 10, title, 14);
  return s;
}

}  // namespace

std::string trajectory_svg(const Trajectory<double>& traj) {
  std::string s =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"920\" height=\"440\" "
      "viewBox=\"0 0 920 440\">\n<rect width=\"920\" height=\"440\" fill=\"white\"/>\n";

  const Panel phase{60, 40, 380, 340, 0, 4, 0, 1};
  s += frame(phase, "ratio orbit (alpha, beta)");
  for (int t = 0; t <= 4; ++t) {
    s += line_at(phase.X(t), phase.Y(0), phase.X(t), phase.Y(0) + 4, "#404040");
    s += text_at(phase.X(t), phase.Y(0) + 18, std::to_string(t), 11, "middle");
  }
  for (double t : {0.0, 0.5, 1.0}) {
    s += line_at(phase.X(0) - 4, phase.Y(t), phase.X(0), phase.Y(t), "#404040");
    s += text_at(phase.X(0) - 8, phase.Y(t) + 4, fmt(t), 11, "end");
  }
  // Absorbing sub-rectangle [0,2] x [0,1].
  s += "<rect x=\"" + fmt(phase.X(0)) + "\" y=\"" + fmt(phase.Y(1)) + "\" width=\"" +
       fmt(phase.X(2) - phase.X(0)) + "\" height=\"" + fmt(phase.Y(0) - phase.Y(1)) +
       "\" fill=\"#f2f7ff\" stroke=\"#8fb4e0\" stroke-dasharray=\"4 3\"/>\n";
  std::vector<std::pair<double, double>> rpts;
  rpts.reserve(traj.reduced.size());
  for (const auto& r : traj.reduced) rpts.emplace_back(r.alpha, r.beta);
  s += polyline(phase, rpts, "#1f77b4");
  if (!rpts.empty()) {
    s += "<circle cx=\"" + fmt(phase.X(rpts.front().first)) + "\" cy=\"" +
         fmt(phase.Y(rpts.front().second)) + "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    s += "<circle cx=\"" + fmt(phase.X(rpts.back().first)) + "\" cy=\"" +
         fmt(phase.Y(rpts.back().second)) + "\" r=\"3\" fill=\"#d62728\"/>\n";
  }
  s += "<circle cx=\"" + fmt(phase.X(0)) + "\" cy=\"" + fmt(phase.Y(0)) +
       "\" r=\"3\" fill=\"#2ca02c\"/>\n";
  s += text_at(phase.X(0) + 6, phase.Y(0) - 6, "origin = equilibrium ratios", 11);

  const std::size_t n = traj.states.size();
  const double denom = n > 1 ? double(n - 1) : 1.0;
  const Panel series{520, 40, 380, 340, 0, denom, 0, 1};
  s += frame(series, "coordinates vs step");
  s += text_at(series.px + series.pw / 2, series.py + series.ph + 28, "step", 11, "middle");
  for (double t : {0.0, 0.5, 1.0}) {
    s += line_at(series.X(0) - 4, series.Y(t), series.X(0), series.Y(t), "#404040");
    s += text_at(series.X(0) - 8, series.Y(t) + 4, fmt(t), 11, "end");
  }
  const char* names[4] = {"x", "y", "u", "v"};
  const char* colors[4] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  const auto target = equilibrium<double>();
  for (int c = 0; c < 4; ++c) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(n);
    for (std::size_t m = 0; m < n; ++m) {
      const auto& st = traj.states[m];
      const double vals[4] = {st.x, st.y, st.u, st.v};
      pts.emplace_back(double(m), vals[c]);
    }
    s += polyline(series, pts, colors[c]);
    s += text_at(series.px + series.pw - 70 + 18 * c, series.py + 16, names[c], 12);
    s += line_at(series.px + series.pw - 78 + 18 * c, series.py + 12,
                 series.px + series.pw - 72 + 18 * c, series.py + 12, colors[c]);
  }
  std::vector<std::pair<double, double>> dpts;
  dpts.reserve(n);
  for (std::size_t m = 0; m < n; ++m)
    dpts.emplace_back(double(m), l1_distance(traj.states[m], target) / 2.0);
  s += polyline(series, dpts, "#7f7f7f", "stroke-dasharray=\"5 3\"");
  s += text_at(series.px + 8, series.py + 16, "dashed: L1 distance to equilibrium / 2", 11);

  s += text_at(60, 425, std::string("stop: ") + to_string(traj.stop_reason) + ", steps: " +
                            std::to_string(traj.steps_taken), 12);
  return s + "</svg>\n";
}

std::string heatmap_svg(const Heatmap& h) {
  const std::size_t n = h.grid;
  const double cs = 360.0 / double(n + 1);
  const double ox = 80, oy = 40;

  std::size_t tmax = 1;
  for (const auto& c : h.cells)
    if (c.iterations) tmax = std::max(tmax, *c.iterations);

  std::string s =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" height=\"470\" "
      "viewBox=\"0 0 560 470\">\n<rect width=\"560\" height=\"470\" fill=\"white\"/>\n";
  s += text_at(ox, 24, "iterations to reach eps=" + format_scalar(h.eps) + " (slice " +
                           h.slice_label + ", budget " + std::to_string(h.max_iter) + ")", 14);

  for (const auto& c : h.cells) {
    std::string color = "#202020";
    if (c.iterations) {
      const double t = double(*c.iterations) / double(tmax);
      color = rgb(int(std::lround(40 + 200 * t)), int(std::lround(210 - 150 * t)), 70);
    }
    const double X = ox + double(c.i) * cs;
    const double Y = oy + 360.0 - double(c.j + 1) * cs;
    s += "<rect x=\"" + fmt(X) + "\" y=\"" + fmt(Y) + "\" width=\"" + fmt(cs) + "\" height=\"" +
         fmt(cs) + "\" fill=\"" + color + "\"/>\n";
  }

  s += "<rect x=\"" + fmt(ox) + "\" y=\"" + fmt(oy) + "\" width=\"362\" height=\"360\" "
       "fill=\"none\" stroke=\"#404040\"/>\n";
  s += text_at(ox + 180, oy + 388, "x frequency (index/" + std::to_string(n) + ")", 12, "middle");
  s += text_at(22, oy + 180, "u", 12, "middle");
  for (std::size_t t = 0; t <= n; t += std::max<std::size_t>(1, n / 5)) {
    s += text_at(ox + (double(t) + 0.5) * cs, oy + 374, std::to_string(t), 10, "middle");
    s += text_at(ox - 6, oy + 360 - (double(t) + 0.5) * cs + 4, std::to_string(t), 10, "end");
  }

  // Color legend, ten ramp stops plus the non-converged swatch.
  const double lx = 470, ly = oy + 20;
  s += text_at(lx, ly - 8, "iterations", 11);
  for (int k = 0; k < 10; ++k) {
    const double t = k / 9.0;
    s += "<rect x=\"" + fmt(lx) + "\" y=\"" + fmt(ly + 22.0 * k) +
         "\" width=\"18\" height=\"22\" fill=\"" +
         rgb(int(std::lround(40 + 200 * t)), int(std::lround(210 - 150 * t)), 70) + "\"/>\n";
  }
  s += text_at(lx + 24, ly + 12, "1", 10);
  s += text_at(lx + 24, ly + 216, std::to_string(tmax), 10);
  s += "<rect x=\"" + fmt(lx) + "\" y=\"" + fmt(ly + 240) +
       "\" width=\"18\" height=\"22\" fill=\"#202020\"/>\n";
  s += text_at(lx + 24, ly + 254, "not reached", 10);

  return s + "</svg>\n";
}

}  // namespace gonosim
