#include <algorithm>
#include <cstdio>

#include "tdabc/report.hpp"

namespace tdabc {

namespace {

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
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

std::string header(double width, double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width) + "\" height=\"" +
         fixed(height) + "\" viewBox=\"0 0 " + fixed(width) + ' ' + fixed(height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle",
                 const char* extra = "") {
  return "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" text-anchor=\"" + anchor + "\"" + extra +
         ">" + escape(s) + "</text>\n";
}

}  // namespace

std::string confusion_svg(const ConfusionMatrix& m, const std::vector<std::string>& labels,
                          const std::string& title) {
  const double cell = 56.0, left = 110.0, top = 70.0;
  const double n = static_cast<double>(m.size());
  std::string out = header(left + n * cell + 20.0, top + n * cell + 40.0);
  out += text((left + n * cell) / 2.0 + 10.0, 22.0, title, "middle", " font-weight=\"bold\"");
  out += text(left + n * cell / 2.0, 44.0, "predicted");
  out += text(16.0, top + n * cell / 2.0, "true", "middle",
              (" transform=\"rotate(-90 16 " + fixed(top + n * cell / 2.0) + ")\"").c_str());
  for (std::size_t r = 0; r < m.size(); ++r) {
    long row_total = 0;
    for (long v : m[r]) row_total += v;
    const std::string name = r < labels.size() ? labels[r] : std::to_string(r);
    out += text(left - 6.0, top + (static_cast<double>(r) + 0.5) * cell + 4.0, name, "end");
    out += text(left + (static_cast<double>(r) + 0.5) * cell, top - 8.0, name);
    for (std::size_t c = 0; c < m[r].size(); ++c) {
      // Shade by the share of the true class, as a row-normalized heatmap.
      const double share = row_total > 0 ? static_cast<double>(m[r][c]) / static_cast<double>(row_total) : 0.0;
      const int g = 255 - static_cast<int>(share * 200.0 + 0.5);
      const int b = 255 - static_cast<int>(share * 90.0 + 0.5);
      const double x = left + static_cast<double>(c) * cell, y = top + static_cast<double>(r) * cell;
      out += "<rect x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" width=\"" + fixed(cell) + "\" height=\"" +
             fixed(cell) + "\" fill=\"rgb(" + std::to_string(g) + ',' + std::to_string(g) + ',' +
             std::to_string(b) + ")\" stroke=\"#888\"/>\n";
      out += text(x + cell / 2.0, y + cell / 2.0 + 4.0, std::to_string(m[r][c]), "middle",
                  share > 0.6 ? " fill=\"white\"" : "");
    }
  }
  return out + "</svg>\n";
}

std::string barcode_svg(const DiagramSet& diagrams, const std::string& title) {
  std::vector<PersistenceInterval> all = diagrams.all();
  double scale = diagrams.max_eps;
  for (const auto& i : all) scale = std::max({scale, i.birth, i.infinite() ? 0.0 : i.death});
  if (scale <= 0.0) scale = 1.0;
  const double bar = 4.0, gap = 2.0, left = 60.0, width = 600.0, top = 40.0, dim_gap = 18.0;

  std::string body;
  double y = top;
  for (std::size_t d = 0; d < diagrams.size(); ++d) {
    if (diagrams[d].empty()) continue;
    body += text(left - 8.0, y + 10.0, "H" + std::to_string(d), "end");
    for (const auto& i : diagrams[d]) {
      const double x0 = left + width * i.birth / scale;
      const double x1 = left + width * (i.infinite() ? 1.0 : i.death / scale);
      body += "<rect x=\"" + fixed(x0) + "\" y=\"" + fixed(y) + "\" width=\"" + fixed(std::max(x1 - x0, 0.5)) +
              "\" height=\"" + fixed(bar) + "\" fill=\"" + (i.infinite() ? "#c0392b" : "#2c6fbb") + "\"/>\n";
      y += bar + gap;
    }
    y += dim_gap;
  }
  std::string out = header(left + width + 30.0, y + 30.0);
  out += text(left + width / 2.0, 22.0, title, "middle", " font-weight=\"bold\"");
  out += body;
  out += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(y) + "\" x2=\"" + fixed(left + width) + "\" y2=\"" +
         fixed(y) + "\" stroke=\"black\"/>\n";
  out += text(left, y + 16.0, "0");
  out += text(left + width, y + 16.0, format_number(scale));
  return out + "</svg>\n";
}

}  // namespace tdabc
