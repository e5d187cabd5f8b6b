#include "fdsec/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "fdsec/error.hpp"

namespace fdsec {

Summary summarize_values(const std::vector<double>& values, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) fail(ErrorCode::InvalidArgument, "confidence must lie in (0, 1)");
  Summary s;
  s.count = static_cast<int>(values.size());
  if (s.count == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.mean = s.stddev = s.std_error = s.lower = s.upper = nan;
    return s;
  }
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.count;
  s.lower = s.upper = s.mean;
  if (s.count < 2) return s;

  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / (s.count - 1));
  s.std_error = s.stddev / std::sqrt(double(s.count));
  if (s.std_error == 0.0) return s;

  boost::math::students_t dist(s.count - 1);
  const double t = boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
  s.lower = s.mean - t * s.std_error;
  s.upper = s.mean + t * s.std_error;
  return s;
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) fail(ErrorCode::InvalidArgument, "fit_slope: length mismatch");
  const int n = static_cast<int>(x.size());
  if (n < 3) fail(ErrorCode::InvalidArgument, "fit_slope: need at least three points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorCode::InvalidArgument, "fit_slope: x values are all equal");
  SlopeFit f;
  f.count = n;
  f.slope = sxy / sxx;
  const double intercept = my - f.slope * mx;
  double sse = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - intercept - f.slope * x[i];
    sse += r * r;
  }
  f.std_error = std::sqrt(sse / (n - 2) / sxx);
  return f;
}

}  // namespace fdsec
