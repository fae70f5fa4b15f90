#include "msvsim/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace msvsim {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string px(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("0");
}

std::string label(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("?");
}

double number(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw PlotError("non-numeric CSV field '" + s + "'");
  return v;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  static Range of(const std::vector<double>& xs) {
    if (xs.empty()) return {};
    auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    Range r{*mn, *mx};
    if (r.hi == r.lo) {
      r.lo -= 0.5;
      r.hi += 0.5;
    }
    return r;
  }
};

// Affine data -> pixel transform for the plot area.
struct Frame {
  Range x;
  Range y;
  double px_x(double v) const { return kLeft + (v - x.lo) / (x.hi - x.lo) * kPlotW; }
  double px_y(double v) const { return kTop + kPlotH - (v - y.lo) / (y.hi - y.lo) * kPlotH; }
};

class Document {
 public:
  Document() {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(kWidth) << "\" height=\""
         << px(kHeight) << "\" viewBox=\"0 0 " << px(kWidth) << ' ' << px(kHeight) << "\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  void axes(const Frame& f, const std::string& x_label, const std::string& y_label,
            const std::string& title) {
    out_ << "<g stroke=\"black\" stroke-width=\"1\">\n"
         << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(kTop + kPlotH) << "\" x2=\""
         << px(kLeft + kPlotW) << "\" y2=\"" << px(kTop + kPlotH) << "\"/>\n"
         << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(kTop) << "\" x2=\"" << px(kLeft)
         << "\" y2=\"" << px(kTop + kPlotH) << "\"/>\n</g>\n";
    out_ << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i) {
      const double xv = f.x.lo + (f.x.hi - f.x.lo) * i / 4.0;
      const double yv = f.y.lo + (f.y.hi - f.y.lo) * i / 4.0;
      out_ << "<text x=\"" << px(f.px_x(xv)) << "\" y=\"" << px(kTop + kPlotH + 16)
           << "\" text-anchor=\"middle\">" << label(xv) << "</text>\n"
           << "<text x=\"" << px(kLeft - 6) << "\" y=\"" << px(f.px_y(yv) + 4)
           << "\" text-anchor=\"end\">" << label(yv) << "</text>\n";
    }
    text(kLeft + kPlotW / 2, kHeight - 10, x_label, "middle");
    out_ << "<text x=\"14\" y=\"" << px(kTop + kPlotH / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
         << px(kTop + kPlotH / 2) << ")\">" << y_label << "</text>\n";
    text(kLeft + kPlotW / 2, kTop - 10, title, "middle");
    out_ << "</g>\n";
  }

  void polyline(const Frame& f, const std::vector<double>& xs, const std::vector<double>& ys,
                const char* color, double width) {
    out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << px(width)
         << "\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
      out_ << (i ? " " : "") << px(f.px_x(xs[i])) << ',' << px(f.px_y(ys[i]));
    out_ << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    out_ << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << px(w)
         << "\" height=\"" << px(h) << "\" fill=\"" << fill << "\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2) {
    out_ << "<line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x2) << "\" y2=\""
         << px(y2) << "\" stroke=\"black\"/>\n";
  }

  void text(double x, double y, const std::string& s, const char* anchor = "start") {
    out_ << "<text x=\"" << px(x) << "\" y=\"" << px(y) << "\" text-anchor=\"" << anchor << "\">"
         << s << "</text>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

// One polyline per distinct value of `group`, in order of first appearance.
std::string line_plot(const CsvTable& t, const std::string& group, const std::string& xcol,
                      const std::string& ycol, const std::string& title) {
  const auto gi = t.column(group), xi = t.column(xcol), yi = t.column(ycol);
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
  std::vector<double> all_x, all_y;
  for (const auto& row : t.rows) {
    if (!series.contains(row[gi])) order.push_back(row[gi]);
    auto& [xs, ys] = series[row[gi]];
    xs.push_back(number(row[xi]));
    ys.push_back(number(row[yi]));
    all_x.push_back(xs.back());
    all_y.push_back(ys.back());
  }
  const Frame f{Range::of(all_x), Range::of(all_y)};
  Document doc;
  doc.axes(f, xcol, ycol, title);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& [xs, ys] = series[order[k]];
    doc.polyline(f, xs, ys, kPalette[k % std::size(kPalette)], 1.0);
  }
  if (order.size() <= std::size(kPalette)) {
    for (std::size_t k = 0; k < order.size(); ++k)
      doc.text(kLeft + kPlotW - 80, kTop + 14 + 14 * static_cast<double>(k),
               group + " " + order[k]);
  }
  return doc.finish();
}

std::string diverging_color(double v, double scale) {
  // Blue below zero, red above, white at zero.
  const double s = scale > 0.0 ? std::clamp(v / scale, -1.0, 1.0) : 0.0;
  const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(s))));
  char buf[8];
  if (s >= 0.0)
    std::snprintf(buf, sizeof buf, "#ff%02x%02x", fade, fade);
  else
    std::snprintf(buf, sizeof buf, "#%02x%02xff", fade, fade);
  return buf;
}

std::string heatmap(const CsvTable& t) {
  const auto vi = t.column("voltage_v"), di = t.column("duration_s"), ri = t.column("onoff_ratio");
  std::set<double> volts, durs;
  std::map<std::pair<double, double>, double> cells;
  for (const auto& row : t.rows) {
    const double v = number(row[vi]), d = number(row[di]);
    volts.insert(v);
    durs.insert(d);
    cells[{v, d}] = number(row[ri]);
  }
  const std::vector<double> vs(volts.begin(), volts.end()), ds(durs.begin(), durs.end());
  double scale = 0.0;
  for (const auto& [key, r] : cells) scale = std::max(scale, std::abs(std::log10(r)));

  Document doc;
  const double cw = kPlotW / static_cast<double>(ds.size());
  const double ch = kPlotH / static_cast<double>(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j)
      if (auto it = cells.find({vs[i], ds[j]}); it != cells.end())
        doc.rect(kLeft + cw * static_cast<double>(j),
                 kTop + kPlotH - ch * static_cast<double>(i + 1), cw, ch,
                 diverging_color(std::log10(it->second), scale));
  doc.line(kLeft, kTop + kPlotH, kLeft + kPlotW, kTop + kPlotH);
  doc.line(kLeft, kTop, kLeft, kTop + kPlotH);
  for (std::size_t j = 0; j < ds.size(); ++j)
    doc.text(kLeft + cw * (static_cast<double>(j) + 0.5), kTop + kPlotH + 16, label(ds[j]), "middle");
  for (std::size_t i = 0; i < vs.size(); ++i)
    doc.text(kLeft - 6, kTop + kPlotH - ch * (static_cast<double>(i) + 0.5) + 4, label(vs[i]), "end");
  doc.text(kLeft + kPlotW / 2, kHeight - 10, "duration_s", "middle");
  doc.text(kLeft + kPlotW / 2, kTop - 10, "ON/OFF ratio (log scale)", "middle");
  return doc.finish();
}

std::string bar_chart(const CsvTable& t) {
  const auto ri = t.column("rule"), mi = t.column("mean"), si = t.column("std");
  std::vector<double> tops{0.0};
  for (const auto& row : t.rows) tops.push_back(number(row[mi]) + number(row[si]));
  const Frame f{Range{0.0, static_cast<double>(t.rows.size())}, Range::of(tops)};
  Document doc;
  doc.axes(f, "rule", "epochs to goal", "mean epochs to goal");
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const double m = number(t.rows[k][mi]), s = number(t.rows[k][si]);
    const double x0 = f.px_x(static_cast<double>(k) + 0.2), x1 = f.px_x(static_cast<double>(k) + 0.8);
    doc.rect(x0, f.px_y(m), x1 - x0, f.px_y(0.0) - f.px_y(m), kPalette[k % std::size(kPalette)]);
    const double xc = (x0 + x1) / 2;
    doc.line(xc, f.px_y(m - s), xc, f.px_y(m + s));
    doc.text(xc, f.px_y(0.0) - 4, t.rows[k][ri], "middle");
  }
  return doc.finish();
}

std::string text_table(const CsvTable& t) {
  Document doc;
  double y = kTop + 10;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    std::string value = t.rows.empty() ? std::string() : t.rows.front()[c];
    doc.text(kLeft, y, t.header[c] + " = " + value);
    y += 18;
  }
  return doc.finish();
}

}  // namespace

std::string render_svg(const CsvTable& table) {
  try {
    if (table.has_columns({"trial", "epoch", "filtered_reward"}))
      return line_plot(table, "trial", "epoch", "filtered_reward", "filtered reward per epoch");
    if (table.has_columns({"rule", "lr_hidden", "mean_epochs"}))
      return line_plot(table, "rule", "lr_hidden", "mean_epochs", "learning-rate sweep");
    if (table.has_columns({"voltage_v", "duration_s", "onoff_ratio"})) return heatmap(table);
    if (table.has_columns({"rule", "mean", "std"})) return bar_chart(table);
    if (table.has_columns({"t", "nu", "p_one_sided", "p_two_sided"})) return text_table(table);
  } catch (const std::out_of_range& e) {
    throw PlotError(e.what());
  }
  throw PlotError("unrecognized CSV header");
}

}  // namespace msvsim
