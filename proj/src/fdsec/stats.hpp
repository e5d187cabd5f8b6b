#pragma once

#include <vector>

namespace fdsec {

/// Sample mean with a two-sided Student-t confidence interval.
struct Summary {
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;   // sample (n - 1) deviation, 0 for n < 2
  double std_error = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Empty input gives count 0 and NaN fields. A single value or constant
/// input gives a degenerate interval at the mean.
Summary summarize_values(const std::vector<double>& values, double confidence = 0.95);

/// Ordinary least-squares slope of y on x and its standard error.
struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  int count = 0;
};

/// Needs at least three points with two distinct x values; InvalidArgument otherwise.
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fdsec
