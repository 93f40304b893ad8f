#include "cardio/svg.hpp"

#include <algorithm>
#include <sstream>

namespace cardio {

namespace {

constexpr int kPlotLeft = 60;
constexpr int kPlotTop = 50;
constexpr int kPlotHeight = 300;
constexpr int kGroupWidth = 90;
constexpr int kBarWidth = 30;
constexpr int kBottomMargin = 70;
constexpr std::array<std::string_view, 2> kBarColors = {"#4472c4", "#ed7d31"};

std::optional<Ratio> metric_of(const ConfusionMatrix& cm, Metric m) {
  switch (m) {
    case Metric::accuracy: return accuracy(cm);
    case Metric::precision: return precision(cm);
    case Metric::recall: return recall(cm);
    case Metric::f_measure: return f_measure(cm);
  }
  return std::nullopt;
}

// Fixed-point with one decimal, from integer tenths; avoids locale and float text.
std::string tenths(long v) {
  std::string sign = v < 0 ? "-" : "";
  if (v < 0) v = -v;
  return sign + std::to_string(v / 10) + (v % 10 ? "." + std::to_string(v % 10) : "");
}

// Height in tenths of a pixel for ratio r on the plot scale, rounded half up.
long bar_tenths(const Ratio& r) {
  const auto scaled = static_cast<unsigned long long>(kPlotHeight) * 10ULL;
  __extension__ typedef unsigned __int128 u128;
  return static_cast<long>((2 * static_cast<u128>(r.num) * scaled + r.den) / (2 * static_cast<u128>(r.den)));
}

std::string escape(std::string_view s) {
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

}  // namespace

std::string_view name(Metric m) {
  switch (m) {
    case Metric::accuracy: return "accuracy";
    case Metric::precision: return "precision";
    case Metric::recall: return "recall";
    case Metric::f_measure: return "f_measure";
  }
  return "?";
}

std::string_view title(Metric m) {
  switch (m) {
    case Metric::accuracy: return "Accuracy";
    case Metric::precision: return "Precision";
    case Metric::recall: return "Recall";
    case Metric::f_measure: return "F-Measure";
  }
  return "?";
}

std::string chart_file_name(Metric m) { return std::string(name(m)) + ".svg"; }

std::string bar_chart_svg(const ComparisonTable& table, Metric metric) {
  const int groups = static_cast<int>(table.rows.size());
  const int plot_width = std::max(1, groups) * kGroupWidth;
  const int width = kPlotLeft + plot_width + 150;
  const int height = kPlotTop + kPlotHeight + kBottomMargin;
  const int baseline = kPlotTop + kPlotHeight;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "  <title>Comparison results of " << escape(title(metric)) << "</title>\n";
  if (!table.run.empty()) {
    os << "  <desc>\n";
    for (const auto& [k, v] : table.run) os << "    " << escape(k) << ": " << escape(v) << '\n';
    os << "  </desc>\n";
  }
  os << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
  os << "  <text x=\"" << kPlotLeft + plot_width / 2 << "\" y=\"25\" text-anchor=\"middle\" font-size=\"16\">"
     << escape(title(metric)) << "</text>\n";

  // y grid and ticks every 0.1
  for (int t = 0; t <= 10; ++t) {
    const int y = baseline - kPlotHeight * t / 10;
    os << "  <line x1=\"" << kPlotLeft << "\" y1=\"" << y << "\" x2=\"" << kPlotLeft + plot_width
       << "\" y2=\"" << y << "\" stroke=\"" << (t == 0 ? "#000000" : "#dddddd") << "\"/>\n";
    os << "  <text x=\"" << kPlotLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
       << (t == 10 ? "1.0" : "0." + std::to_string(t)) << "</text>\n";
  }
  os << "  <line x1=\"" << kPlotLeft << "\" y1=\"" << kPlotTop << "\" x2=\"" << kPlotLeft
     << "\" y2=\"" << baseline << "\" stroke=\"#000000\"/>\n";

  for (int g = 0; g < groups; ++g) {
    const auto& row = table.rows[static_cast<std::size_t>(g)];
    const int group_x = kPlotLeft + g * kGroupWidth;
    os << "  <g class=\"group\" data-classifier=\"" << escape(label(row.method)) << "\">\n";
    for (std::size_t p = 0; p < kAllProtocols.size(); ++p) {
      const int x = group_x + 15 + static_cast<int>(p) * kBarWidth;
      const auto& cm = row.at(kAllProtocols[p]);
      const auto value = cm ? metric_of(*cm, metric) : std::nullopt;
      if (!value) {
        os << "    <text x=\"" << x + kBarWidth / 2 << "\" y=\"" << baseline - 4
           << "\" text-anchor=\"middle\" font-size=\"9\">n/a</text>\n";
        continue;
      }
      const long h = bar_tenths(*value);
      const long top = static_cast<long>(baseline) * 10 - h;
      os << "    <rect x=\"" << x << "\" y=\"" << tenths(top) << "\" width=\"" << kBarWidth
         << "\" height=\"" << tenths(h) << "\" fill=\"" << kBarColors[p] << "\"/>\n";
      os << "    <text x=\"" << x + kBarWidth / 2 << "\" y=\"" << tenths(top - 30)
         << "\" text-anchor=\"middle\" font-size=\"9\">" << value->rounded(3) << "</text>\n";
    }
    os << "    <text x=\"" << group_x + kGroupWidth / 2 << "\" y=\"" << baseline + 18
       << "\" text-anchor=\"middle\">" << escape(label(row.method)) << "</text>\n";
    os << "  </g>\n";
  }

  // legend
  const int lx = kPlotLeft + plot_width + 20;
  for (std::size_t p = 0; p < kAllProtocols.size(); ++p) {
    const int ly = kPlotTop + 10 + static_cast<int>(p) * 20;
    os << "  <rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"12\" height=\"12\" fill=\""
       << kBarColors[p] << "\"/>\n";
    os << "  <text x=\"" << lx + 18 << "\" y=\"" << ly + 10 << "\">" << escape(label(kAllProtocols[p]))
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace cardio
