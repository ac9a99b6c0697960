#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "csv_util.hpp"
#include "fislab/error.hpp"
#include "fislab/metrics.hpp"

namespace fislab::report {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::size_t Table::column_index(const std::string& column) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == column) return j;
  }
  throw Error(ErrorKind::invalid_argument,
              "table " + name + " has no column '" + column + "'");
}

double Table::number(std::size_t row, std::size_t col) const {
  return std::strtod(rows[row][col].c_str(), nullptr);
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (j) out.push_back(',');
    out += csvutil::quote_if_needed(columns[j]);
  }
  out.push_back('\n');
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out.push_back(',');
      out += csvutil::quote_if_needed(row[j]);
    }
    out.push_back('\n');
  }
  return out;
}

nlohmann::ordered_json Table::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj;
    for (std::size_t j = 0; j < columns.size(); ++j) obj[columns[j]] = row[j];
    arr.push_back(std::move(obj));
  }
  return arr;
}

Table Table::from_csv(const std::string& name, const std::string& text) {
  Table t;
  t.name = name;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = csvutil::split_line(line, line_no);
    if (line_no == 1) {
      t.columns = std::move(cells);
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  if (t.columns.empty()) {
    throw Error(ErrorKind::parse, "table " + name + " has no header");
  }
  return t;
}

namespace {

constexpr const char* kDataCutColor = "#1f77b4";
constexpr const char* kFeatureCutColor = "#ff7f0e";
constexpr const char* kAccentColor = "#d62728";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

/// Minimal chart frame: linear scales, axis lines, ticks, labels, legend.
class Canvas {
 public:
  Canvas(std::string title, std::string x_label, std::string y_label)
      : title_(std::move(title)), x_label_(std::move(x_label)),
        y_label_(std::move(y_label)) {}

  void set_x_range(double lo, double hi) { fit_range(lo, hi, x_lo_, x_hi_); }
  void set_y_range(double lo, double hi) { fit_range(lo, hi, y_lo_, y_hi_); }

  double sx(double x) const {
    return kLeft + (x - x_lo_) / (x_hi_ - x_lo_) * plot_width();
  }
  double sy(double y) const {
    return kTop + plot_height() - (y - y_lo_) / (y_hi_ - y_lo_) * plot_height();
  }

  void circle(double x, double y, double r, const std::string& color) {
    body_ << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\""
          << num(r) << "\" fill=\"" << color << "\" fill-opacity=\"0.85\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& color, double width = 1.5) {
    if (pts.size() < 2) return;
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
          << num(width) << "\" points=\"";
    for (const auto& [x, y] : pts) body_ << num(sx(x)) << ',' << num(sy(y)) << ' ';
    body_ << "\"/>\n";
  }

  void raw_rect(double px, double py, double w, double h, const std::string& fill,
                const std::string& stroke = "none") {
    body_ << "<rect x=\"" << num(px) << "\" y=\"" << num(py) << "\" width=\""
          << num(w) << "\" height=\"" << num(h) << "\" fill=\"" << fill
          << "\" stroke=\"" << stroke << "\"/>\n";
  }

  void raw_line(double x1, double y1, double x2, double y2, const std::string& color,
                double width = 1.0, bool dashed = false) {
    body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\""
          << num(x2) << "\" y2=\"" << num(y2) << "\" stroke=\"" << color
          << "\" stroke-width=\"" << num(width) << "\"";
    if (dashed) body_ << " stroke-dasharray=\"5,4\"";
    body_ << "/>\n";
  }

  void vline(double x, const std::string& color) {
    raw_line(sx(x), kTop, sx(x), kTop + plot_height(), color, 1.5, true);
  }

  void hline(double y, const std::string& color) {
    raw_line(kLeft, sy(y), kLeft + plot_width(), sy(y), color, 1.0, true);
  }

  void legend(const std::vector<std::pair<std::string, std::string>>& entries) {
    double y = kTop + 14.0;
    for (const auto& [label, color] : entries) {
      const double x = kLeft + plot_width() - 150.0;
      raw_rect(x, y - 8, 10, 10, color);
      body_ << "<text x=\"" << num(x + 16) << "\" y=\"" << num(y + 1)
            << "\" font-size=\"12\" fill=\"#333\">" << xml_escape(label)
            << "</text>\n";
      y += 18.0;
    }
  }

  double plot_left() const { return kLeft; }
  double plot_top() const { return kTop; }
  double plot_width() const { return kWidth - kLeft - kRight; }
  double plot_height() const { return kHeight - kTop - kBottom; }
  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  double y_lo() const { return y_lo_; }
  double y_hi() const { return y_hi_; }

  std::string render() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
        << kHeight << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
           "font-size=\"15\" fill=\"#111\">"
        << xml_escape(title_) << "</text>\n";
    // axes
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_height() << "\" x2=\""
        << kLeft + plot_width() << "\" y2=\"" << kTop + plot_height()
        << "\" stroke=\"#333\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
        << "\" y2=\"" << kTop + plot_height() << "\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= kTicks; ++i) {
      const double fx = x_lo_ + (x_hi_ - x_lo_) * i / kTicks;
      const double px = sx(fx);
      out << "<line x1=\"" << num(px) << "\" y1=\"" << kTop + plot_height()
          << "\" x2=\"" << num(px) << "\" y2=\"" << kTop + plot_height() + 5
          << "\" stroke=\"#333\"/>\n";
      out << "<text x=\"" << num(px) << "\" y=\"" << kTop + plot_height() + 20
          << "\" text-anchor=\"middle\" font-size=\"11\" fill=\"#333\">"
          << tick_label(fx) << "</text>\n";
      const double fy = y_lo_ + (y_hi_ - y_lo_) * i / kTicks;
      const double py = sy(fy);
      out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(py) << "\" x2=\"" << kLeft
          << "\" y2=\"" << num(py) << "\" stroke=\"#333\"/>\n";
      out << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py + 4)
          << "\" text-anchor=\"end\" font-size=\"11\" fill=\"#333\">" << tick_label(fy)
          << "</text>\n";
    }
    out << "<text x=\"" << kLeft + plot_width() / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-size=\"13\" fill=\"#111\">"
        << xml_escape(x_label_) << "</text>\n";
    out << "<text x=\"18\" y=\"" << kTop + plot_height() / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" fill=\"#111\" transform=\""
        << "rotate(-90 18 " << kTop + plot_height() / 2 << ")\">"
        << xml_escape(y_label_) << "</text>\n";
    out << body_.str();
    out << "</svg>\n";
    return out.str();
  }

 private:
  static void fit_range(double lo, double hi, double& out_lo, double& out_hi) {
    if (hi <= lo) {
      const double pad = std::max(1e-6, std::fabs(lo) * 0.1 + 0.1);
      out_lo = lo - pad;
      out_hi = hi + pad;
      return;
    }
    const double pad = (hi - lo) * 0.06;
    out_lo = lo - pad;
    out_hi = hi + pad;
  }

  static constexpr int kWidth = 720;
  static constexpr int kHeight = 480;
  static constexpr double kLeft = 70.0;
  static constexpr double kRight = 24.0;
  static constexpr double kTop = 40.0;
  static constexpr double kBottom = 56.0;
  static constexpr int kTicks = 5;

  std::string title_;
  std::string x_label_;
  std::string y_label_;
  double x_lo_ = 0.0;
  double x_hi_ = 1.0;
  double y_lo_ = 0.0;
  double y_hi_ = 1.0;
  std::ostringstream body_;
};

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

std::string scatter_chart_svg(const Table& t, std::size_t index_id) {
  const std::string index_name = kStabilityIndexNames[index_id];
  const std::size_t c_alg = t.column_index("algorithm");
  const std::size_t c_auc = t.column_index("mean_auc");
  const std::size_t c_idx = t.column_index("index");
  const std::size_t c_val = t.column_index("value");

  std::vector<std::pair<double, double>> data_pts;
  std::vector<std::pair<double, double>> feat_pts;
  double x_lo = 1.0, x_hi = 0.0, y_lo = 1e300, y_hi = -1e300;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.cell(r, c_idx) != index_name) continue;
    const double x = t.number(r, c_auc);
    const double y = t.number(r, c_val);
    (t.cell(r, c_alg) == "feature_cut" ? feat_pts : data_pts).emplace_back(x, y);
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  Canvas canvas("AUC vs " + index_name, "AUC", index_name);
  if (data_pts.empty() && feat_pts.empty()) return canvas.render();
  // Keep the AUC = 0.8 reference line inside the frame.
  canvas.set_x_range(std::min(x_lo, 0.78), std::max(x_hi, 0.82));
  canvas.set_y_range(y_lo, y_hi);
  canvas.vline(0.8, kAccentColor);
  for (const auto& [x, y] : data_pts) canvas.circle(x, y, 3.4, kDataCutColor);
  for (const auto& [x, y] : feat_pts) canvas.circle(x, y, 3.4, kFeatureCutColor);
  canvas.legend({{"data_cut", kDataCutColor}, {"feature_cut", kFeatureCutColor}});
  return canvas.render();
}

std::string difference_chart_svg(const Table& t, std::size_t index_id) {
  const std::string index_name = kStabilityIndexNames[index_id];
  const std::size_t c_auc = t.column_index("auc");
  const std::size_t c_val = t.column_index(index_name);
  std::vector<std::pair<double, double>> pts;
  double y_lo = 0.0, y_hi = 0.0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    pts.emplace_back(t.number(r, c_auc), t.number(r, c_val));
    y_lo = std::min(y_lo, pts.back().second);
    y_hi = std::max(y_hi, pts.back().second);
  }
  Canvas canvas("Stability difference (feature_cut - data_cut): " + index_name, "AUC",
                index_name + " difference");
  if (pts.empty()) return canvas.render();
  std::sort(pts.begin(), pts.end());
  canvas.set_x_range(pts.front().first, pts.back().first);
  canvas.set_y_range(y_lo, y_hi);
  canvas.hline(0.0, "#888888");
  canvas.polyline(pts, kFeatureCutColor, 2.0);
  for (const auto& [x, y] : pts) canvas.circle(x, y, 3.0, kFeatureCutColor);
  return canvas.render();
}

std::string adjacency_chart_svg(const Table& t) {
  const std::size_t c_exp = t.column_index("experiment");
  const std::size_t c_auc = t.column_index("mean_auc");
  const std::size_t c_ratio = t.column_index("ratio");
  std::vector<std::pair<double, double>> data_pts;
  std::vector<std::pair<double, double>> feat_pts;
  double x_lo = 1e300, x_hi = -1e300;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double x = t.number(r, c_auc);
    const double y = t.number(r, c_ratio);
    const std::string& exp = t.cell(r, c_exp);
    if (exp == "reference") {
      data_pts.emplace_back(x, y);
      feat_pts.emplace_back(x, y);
    } else if (exp == "data_cut") {
      data_pts.emplace_back(x, y);
    } else {
      feat_pts.emplace_back(x, y);
    }
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
  }
  Canvas canvas("Adjacent-rank significance ratio", "AUC", "significant ratio");
  if (data_pts.empty() && feat_pts.empty()) return canvas.render();
  std::sort(data_pts.begin(), data_pts.end());
  std::sort(feat_pts.begin(), feat_pts.end());
  canvas.set_x_range(x_lo, x_hi);
  canvas.set_y_range(0.0, 1.0);
  canvas.polyline(data_pts, kDataCutColor, 1.5);
  canvas.polyline(feat_pts, kFeatureCutColor, 1.5);
  for (const auto& [x, y] : data_pts) canvas.circle(x, y, 3.2, kDataCutColor);
  for (const auto& [x, y] : feat_pts) canvas.circle(x, y, 3.2, kFeatureCutColor);
  canvas.legend({{"data_cut", kDataCutColor}, {"feature_cut", kFeatureCutColor}});
  return canvas.render();
}

std::string box_chart_svg(const Table& t, const std::string& experiment,
                          const std::string& title) {
  const std::size_t c_exp = t.column_index("experiment");
  const std::size_t c_rank = t.column_index("rank_position");
  const std::size_t c_lo = t.column_index("lo_whisker");
  const std::size_t c_q1 = t.column_index("q1");
  const std::size_t c_med = t.column_index("median");
  const std::size_t c_q3 = t.column_index("q3");
  const std::size_t c_hi = t.column_index("hi_whisker");
  const std::size_t c_out = t.column_index("outliers");

  struct Box {
    double rank, lo, q1, med, q3, hi;
    std::vector<double> outliers;
  };
  // Chart the deepest cut: the smallest recorded size for this experiment.
  const std::size_t c_size = t.column_index("size");
  double min_size = 1e300;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.cell(r, c_exp) == experiment) {
      min_size = std::min(min_size, t.number(r, c_size));
    }
  }
  std::vector<Box> boxes;
  double y_lo = 1e300, y_hi = -1e300;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.cell(r, c_exp) != experiment || t.number(r, c_size) != min_size) continue;
    Box b{t.number(r, c_rank), t.number(r, c_lo), t.number(r, c_q1),
          t.number(r, c_med), t.number(r, c_q3), t.number(r, c_hi), {}};
    for (const auto& s : split_list(t.cell(r, c_out), ';')) {
      b.outliers.push_back(std::strtod(s.c_str(), nullptr));
    }
    y_lo = std::min({y_lo, b.lo});
    y_hi = std::max({y_hi, b.hi});
    for (double v : b.outliers) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
    boxes.push_back(std::move(b));
  }
  Canvas canvas(title, "feature rank (1 = most important)", "Gini importance");
  if (boxes.empty()) return canvas.render();
  std::sort(boxes.begin(), boxes.end(),
            [](const Box& a, const Box& b) { return a.rank < b.rank; });
  canvas.set_x_range(boxes.front().rank - 0.5, boxes.back().rank + 0.5);
  canvas.set_y_range(std::min(y_lo, 0.0), y_hi);
  const double slot = canvas.plot_width() /
                      (canvas.x_hi() - canvas.x_lo());
  const double half = std::min(12.0, 0.32 * slot);
  for (const auto& b : boxes) {
    const double cx = canvas.sx(b.rank);
    canvas.raw_line(cx, canvas.sy(b.lo), cx, canvas.sy(b.q1), "#333");
    canvas.raw_line(cx, canvas.sy(b.q3), cx, canvas.sy(b.hi), "#333");
    canvas.raw_line(cx - half * 0.6, canvas.sy(b.lo), cx + half * 0.6, canvas.sy(b.lo),
                    "#333");
    canvas.raw_line(cx - half * 0.6, canvas.sy(b.hi), cx + half * 0.6, canvas.sy(b.hi),
                    "#333");
    canvas.raw_rect(cx - half, canvas.sy(b.q3), 2 * half,
                    canvas.sy(b.q1) - canvas.sy(b.q3), "#9ecae1", "#333");
    canvas.raw_line(cx - half, canvas.sy(b.med), cx + half, canvas.sy(b.med),
                    "#08306b", 2.0);
    for (double v : b.outliers) {
      canvas.circle(b.rank, v, 2.0, "#111111");
    }
  }
  return canvas.render();
}

namespace {

// Three-stop color ramp, dark violet -> teal -> yellow.
std::string ramp_color(double f) {
  f = std::clamp(f, 0.0, 1.0);
  const double stops[3][3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
  double rgb[3];
  if (f < 0.5) {
    const double u = f / 0.5;
    for (int i = 0; i < 3; ++i) rgb[i] = stops[0][i] + (stops[1][i] - stops[0][i]) * u;
  } else {
    const double u = (f - 0.5) / 0.5;
    for (int i = 0; i < 3; ++i) rgb[i] = stops[1][i] + (stops[2][i] - stops[1][i]) * u;
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(rgb[0]),
                static_cast<int>(rgb[1]), static_cast<int>(rgb[2]));
  return buf;
}

}  // namespace

std::string heatmap_chart_svg(const Table& t) {
  const std::size_t c_gap = t.column_index("gap");
  const std::size_t c_k = t.column_index("k");
  const std::size_t c_p = t.column_index("probability");
  std::set<double> gap_set;
  std::set<double> k_set;
  std::map<std::pair<double, double>, double> values;
  double p_max = 0.0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double gap = t.number(r, c_gap);
    const double k = t.number(r, c_k);
    const double p = t.number(r, c_p);
    gap_set.insert(gap);
    k_set.insert(k);
    values[{gap, k}] = p;
    p_max = std::max(p_max, p);
  }
  const std::vector<double> gaps(gap_set.begin(), gap_set.end());
  const std::vector<double> ks(k_set.begin(), k_set.end());
  Canvas canvas("Essential-sample probability", "sample budget k",
                "importance gap");
  if (gaps.empty() || ks.empty()) return canvas.render();
  canvas.set_x_range(-0.5, static_cast<double>(ks.size()) - 0.5);
  canvas.set_y_range(-0.5, static_cast<double>(gaps.size()) - 0.5);
  const double cw = canvas.plot_width() / static_cast<double>(ks.size());
  const double ch = canvas.plot_height() / static_cast<double>(gaps.size());
  for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      const auto it = values.find({gaps[gi], ks[ki]});
      const double p = it == values.end() ? 0.0 : it->second;
      const double px = canvas.plot_left() + cw * static_cast<double>(ki);
      const double py = canvas.plot_top() + canvas.plot_height() -
                        ch * static_cast<double>(gi + 1);
      canvas.raw_rect(px, py, cw, ch, ramp_color(p_max > 0 ? p / p_max : 0.0));
    }
  }
  // Tick labels along each axis (subset when dense).
  const std::size_t k_stride = std::max<std::size_t>(1, ks.size() / 8);
  for (std::size_t ki = 0; ki < ks.size(); ki += k_stride) {
    canvas.raw_line(canvas.plot_left() + cw * (static_cast<double>(ki) + 0.5),
                    canvas.plot_top() + canvas.plot_height(),
                    canvas.plot_left() + cw * (static_cast<double>(ki) + 0.5),
                    canvas.plot_top() + canvas.plot_height() + 4, "#333");
  }
  std::ostringstream extra;
  extra << "<text x=\"600\" y=\"36\" font-size=\"11\" fill=\"#333\">p max = "
        << tick_label(p_max) << "</text>";
  std::string svg = canvas.render();
  const std::size_t pos = svg.rfind("</svg>");
  // Per-cell axis annotation; gap rows bottom-to-top, k columns left-to-right.
  std::ostringstream labels;
  for (std::size_t ki = 0; ki < ks.size(); ki += k_stride) {
    labels << "<text x=\"" << num(canvas.plot_left() + cw * (static_cast<double>(ki) + 0.5))
           << "\" y=\"" << num(canvas.plot_top() + canvas.plot_height() + 18)
           << "\" text-anchor=\"middle\" font-size=\"10\" fill=\"#333\">"
           << tick_label(ks[ki]) << "</text>\n";
  }
  const std::size_t g_stride = std::max<std::size_t>(1, gaps.size() / 8);
  for (std::size_t gi = 0; gi < gaps.size(); gi += g_stride) {
    labels << "<text x=\"" << num(canvas.plot_left() - 6) << "\" y=\""
           << num(canvas.plot_top() + canvas.plot_height() -
                  ch * (static_cast<double>(gi) + 0.5) + 4)
           << "\" text-anchor=\"end\" font-size=\"10\" fill=\"#333\">"
           << tick_label(gaps[gi]) << "</text>\n";
  }
  for (int i = 0; i < 20; ++i) {
    labels << "<rect x=\"" << num(640.0 + i * 2.5) << "\" y=\"44\" width=\"2.5\" "
           << "height=\"10\" fill=\"" << ramp_color(i / 19.0) << "\"/>\n";
  }
  labels << extra.str();
  svg.insert(pos, labels.str());
  return svg;
}

std::string sufficiency_chart_svg(const Table& t) {
  const std::size_t c_frac = t.column_index("fraction");
  const std::size_t c_auc = t.column_index("mean_auc");
  const std::size_t c_skip = t.column_index("skipped");
  std::vector<std::pair<double, double>> pts;
  double y_lo = 1e300, y_hi = -1e300;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.cell(r, c_skip) == "1") continue;
    pts.emplace_back(t.number(r, c_frac), t.number(r, c_auc));
    y_lo = std::min(y_lo, pts.back().second);
    y_hi = std::max(y_hi, pts.back().second);
  }
  Canvas canvas("Data-sufficiency probe", "sample fraction", "AUC");
  if (pts.empty()) return canvas.render();
  std::sort(pts.begin(), pts.end());
  canvas.set_x_range(pts.front().first, pts.back().first);
  canvas.set_y_range(y_lo, y_hi);
  canvas.polyline(pts, kDataCutColor, 2.0);
  for (const auto& [x, y] : pts) canvas.circle(x, y, 3.2, kDataCutColor);
  return canvas.render();
}

}  // namespace fislab::report
