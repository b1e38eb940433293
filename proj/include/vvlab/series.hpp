#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vvlab {

// A named scalar time series. `bound` names the estimate it monitors, if any.
struct DiagSeries {
  std::string name;
  std::vector<double> times;
  std::vector<double> values;
  std::optional<std::string> bound;

  void push(double t, double v) {
    times.push_back(t);
    values.push_back(v);
  }
  std::size_t size() const { return values.size(); }
};

}  // namespace vvlab
