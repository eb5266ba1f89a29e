#include "eventforge/event.hpp"

#include <sstream>
#include <stdexcept>

#include "eventforge/pose.hpp"

#include <cmath>

namespace eventforge {

void SensorGeometry::validate() const {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("sensor geometry must be at least 1x1, got " + std::to_string(width) +
                                "x" + std::to_string(height));
  }
}

std::string StreamReport::describe(const SensorGeometry& geometry) const {
  if (ok()) return "stream valid";
  std::ostringstream os;
  if (out_of_bounds > 0) {
    os << out_of_bounds << " event(s) outside the " << geometry.width << "x" << geometry.height
       << " sensor, first at index " << *first_out_of_bounds;
  }
  if (regressions > 0) {
    if (out_of_bounds > 0) os << "; ";
    os << regressions << " timestamp regression(s), first at index " << *first_regression;
  }
  return os.str();
}

StreamReport validate_stream(std::span<const Event> stream, const SensorGeometry& geometry) {
  StreamReport report;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (!geometry.contains(stream[i])) {
      if (report.out_of_bounds++ == 0) report.first_out_of_bounds = i;
    }
    if (i > 0 && stream[i].t < stream[i - 1].t) {
      if (report.regressions++ == 0) report.first_regression = i;
    }
  }
  return report;
}

std::optional<std::size_t> first_unsorted(std::span<const Event> stream) noexcept {
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (stream[i].t < stream[i - 1].t) return i;
  }
  return std::nullopt;
}

bool PoseVector::finite() const noexcept {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace eventforge
