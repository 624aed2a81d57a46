#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace chaoskit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed or open interval on the extended real line.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
  bool operator==(const Interval&) const = default;
};

enum class RecurrenceSource { closed_form, stieltjes, lanczos, multiple_discretization };

std::string_view to_string(RecurrenceSource source);

/// Three-term recurrence coefficients of a monic orthogonal family:
///   phi_{k+1}(t) = (t - alpha_k) phi_k(t) - beta_k phi_{k-1}(t),
/// with phi_{-1} = 0, phi_0 = 1 and beta_0 = 1 for normalized measures.
struct RecurrenceCoefficients {
  std::vector<double> alpha;
  std::vector<double> beta;
  RecurrenceSource source = RecurrenceSource::closed_form;

  std::size_t size() const { return alpha.size(); }
};

}  // namespace chaoskit
