#pragma once

// Minimal self-contained SVG line-plot writer for the training-curve images.
// CSV files are the canonical artifact; these plots are conveniences.

#include <iosfwd>
#include <string>
#include <vector>

namespace pppo::svg {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  double width = 1.5;
  std::string label;
};

struct Band {
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
  std::string color = "#1f77b4";
  double opacity = 0.25;
};

class LinePlot {
 public:
  LinePlot(std::string title, std::string x_label, std::string y_label);

  void add_line(Series series);
  void add_band(Band band);
  void write(std::ostream& os) const;

 private:
  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  std::vector<Band> bands_;
};

}  // namespace pppo::svg
