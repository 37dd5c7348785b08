#include "pppo/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace pppo::svg {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finalize() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Round tick spacing to 1/2/5 x 10^k.
double tick_step(double span, int target_ticks) {
  const double raw = span / std::max(target_ticks, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step = 10.0;
  if (norm <= 1.0) step = 1.0;
  else if (norm <= 2.0) step = 2.0;
  else if (norm <= 5.0) step = 5.0;
  return step * mag;
}

}  // namespace

LinePlot::LinePlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void LinePlot::add_line(Series series) { series_.push_back(std::move(series)); }

void LinePlot::add_band(Band band) { bands_.push_back(std::move(band)); }

void LinePlot::write(std::ostream& os) const {
  Range xr, yr;
  for (const Series& s : series_) {
    for (double v : s.x) xr.include(v);
    for (double v : s.y) yr.include(v);
  }
  for (const Band& b : bands_) {
    for (double v : b.x) xr.include(v);
    for (double v : b.lo) yr.include(v);
    for (double v : b.hi) yr.include(v);
  }
  xr.finalize();
  yr.finalize();

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  const auto py = [&](double y) {
    return kMarginTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes box and ticks
  os << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
     << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  const double xs = tick_step(xr.hi - xr.lo, 8);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi + 1e-9; t += xs) {
    const double x = px(t);
    os << "<line x1=\"" << x << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << x << "\" y2=\""
       << kMarginTop + plot_h + 5 << "\" stroke=\"#444\"/>\n"
       << "<text x=\"" << x << "\" y=\"" << kMarginTop + plot_h + 20
       << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">" << fmt(t)
       << "</text>\n";
  }
  const double ys = tick_step(yr.hi - yr.lo, 6);
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi + 1e-9; t += ys) {
    const double y = py(t);
    os << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kMarginLeft
       << "\" y2=\"" << y << "\" stroke=\"#444\"/>\n"
       << "<text x=\"" << kMarginLeft - 9 << "\" y=\"" << y + 4
       << "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt(t)
       << "</text>\n"
       << "<line x1=\"" << kMarginLeft << "\" y1=\"" << y << "\" x2=\"" << kMarginLeft + plot_w
       << "\" y2=\"" << y << "\" stroke=\"#eee\"/>\n";
  }

  for (const Band& b : bands_) {
    if (b.x.empty()) continue;
    os << "<polygon fill=\"" << b.color << "\" fill-opacity=\"" << b.opacity
       << "\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < b.x.size(); ++i) os << px(b.x[i]) << ',' << py(b.hi[i]) << ' ';
    for (std::size_t i = b.x.size(); i-- > 0;) os << px(b.x[i]) << ',' << py(b.lo[i]) << ' ';
    os << "\"/>\n";
  }

  for (const Series& s : series_) {
    if (s.x.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << s.width
       << "\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    os << "\"/>\n";
  }

  // legend for labelled series
  double ly = kMarginTop + 14;
  for (const Series& s : series_) {
    if (s.label.empty()) continue;
    os << "<line x1=\"" << kMarginLeft + 12 << "\" y1=\"" << ly << "\" x2=\"" << kMarginLeft + 36
       << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << kMarginLeft + 42 << "\" y=\"" << ly + 4
       << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label << "</text>\n";
    ly += 18;
  }

  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" font-size=\"16\" text-anchor=\"middle\""
     << " font-family=\"sans-serif\">" << title_ << "</text>\n"
     << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
     << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">" << x_label_
     << "</text>\n"
     << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
     << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\""
     << " transform=\"rotate(-90 18 " << kMarginTop + plot_h / 2 << ")\">" << y_label_
     << "</text>\n</svg>\n";
}

}  // namespace pppo::svg
