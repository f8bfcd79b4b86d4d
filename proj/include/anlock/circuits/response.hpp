#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "anlock/core/error.hpp"

namespace anlock {

enum class Axis { FrequencyHzLog, TimeS };
enum class Spacing { Log, Linear };
enum class YUnit { Decibel, Volt };

inline std::string_view to_string(Axis a) {
  return a == Axis::FrequencyHzLog ? "frequency_hz_log" : "time_s";
}
inline std::string_view to_string(Spacing s) {
  return s == Spacing::Log ? "log" : "linear";
}
inline std::string_view to_string(YUnit u) {
  return u == YUnit::Decibel ? "dB" : "volts";
}

inline Axis parse_axis(std::string_view s) {
  if (s == "frequency_hz_log") return Axis::FrequencyHzLog;
  if (s == "time_s") return Axis::TimeS;
  throw ParseError("unknown axis '" + std::string(s) + "'");
}
inline Spacing parse_spacing(std::string_view s) {
  if (s == "log") return Spacing::Log;
  if (s == "linear") return Spacing::Linear;
  throw ParseError("unknown spacing '" + std::string(s) + "'");
}

/// Points at which a response is sampled.
struct SamplingGrid {
  Axis axis = Axis::FrequencyHzLog;
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 0;
  Spacing spacing = Spacing::Log;

  static SamplingGrid log_frequency(double start, double stop,
                                    std::size_t count = 200) {
    return {Axis::FrequencyHzLog, start, stop, count, Spacing::Log};
  }
  static SamplingGrid linear_time(double stop, std::size_t count = 2000) {
    return {Axis::TimeS, 0.0, stop, count, Spacing::Linear};
  }

  void validate() const {
    if (count < 2) throw InvalidGrid("sampling grid needs at least 2 points");
    if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop))
      throw InvalidGrid("sampling grid requires finite start < stop");
    if (spacing == Spacing::Log && start <= 0.0)
      throw InvalidGrid("log-spaced grid requires a positive start");
  }

  std::vector<double> points() const {
    validate();
    std::vector<double> xs(count);
    const double last = static_cast<double>(count - 1);
    if (spacing == Spacing::Log) {
      const double a = std::log10(start);
      const double b = std::log10(stop);
      for (std::size_t i = 0; i < count; ++i)
        xs[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / last);
    } else {
      for (std::size_t i = 0; i < count; ++i)
        xs[i] = start + (stop - start) * static_cast<double>(i) / last;
    }
    xs.front() = start;
    xs.back() = stop;
    return xs;
  }

  friend bool operator==(const SamplingGrid&, const SamplingGrid&) = default;
};

/// Ordered samples of one output observable.
class ResponseCurve {
 public:
  ResponseCurve() = default;
  ResponseCurve(Axis axis, YUnit unit, std::vector<double> x, std::vector<double> y)
      : axis_(axis), unit_(unit), x_(std::move(x)), y_(std::move(y)) {
    validate();
  }

  Axis axis() const { return axis_; }
  YUnit unit() const { return unit_; }
  std::span<const double> x() const { return x_; }
  std::span<const double> y() const { return y_; }
  std::size_t size() const { return x_.size(); }

  void validate() const {
    if (x_.size() != y_.size()) throw InvalidGrid("curve x/y length mismatch");
    if (x_.size() < 2) throw InvalidGrid("curve needs at least 2 points");
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]))
        throw DegenerateModel("curve contains a non-finite sample");
      if (i > 0 && !(x_[i] > x_[i - 1]))
        throw InvalidGrid("curve x values must be strictly increasing");
    }
  }

  /// CSV with header `x,y`, 12 significant digits.
  void write_csv(std::ostream& os) const {
    os << "x,y\n" << std::setprecision(12);
    for (std::size_t i = 0; i < x_.size(); ++i) os << x_[i] << ',' << y_[i] << '\n';
  }

  std::string to_csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
  }

  friend bool operator==(const ResponseCurve&, const ResponseCurve&) = default;

 private:
  Axis axis_ = Axis::FrequencyHzLog;
  YUnit unit_ = YUnit::Decibel;
  std::vector<double> x_;
  std::vector<double> y_;
};

/// Magnitudes below 1e-10 (-200 dB) are clamped.
inline double to_db(double magnitude) {
  return 20.0 * std::log10(std::max(magnitude, 1e-10));
}

inline void require_same_support(const ResponseCurve& a, const ResponseCurve& b) {
  if (a.size() != b.size() || a.axis() != b.axis())
    throw InvalidGrid("curves sampled on different grids");
}

/// Sum of squared sample differences.
inline double squared_distance(const ResponseCurve& expected, const ResponseCurve& observed) {
  require_same_support(expected, observed);
  double acc = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = expected.y()[i] - observed.y()[i];
    acc += d * d;
  }
  return acc;
}

inline double squared_norm(const ResponseCurve& c) {
  double acc = 0.0;
  for (double v : c.y()) acc += v * v;
  return acc;
}

/// ||expected - observed|| / ||expected||.
inline double relative_l2(const ResponseCurve& expected, const ResponseCurve& observed) {
  const double norm = squared_norm(expected);
  const double diff = squared_distance(expected, observed);
  if (norm == 0.0) return diff == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(diff / norm);
}

}  // namespace anlock
