#pragma once

#include <cmath>
#include <vector>

#include "sobq/common.hpp"

namespace sobq {

/// Natural cubic spline on a uniform grid [x0, x0 + (n-1)h]; evaluates to 0
/// outside the sample range.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(double x0, double h, std::vector<double> y) : x0_(x0), h_(h), y_(std::move(y)) {
    const int n = static_cast<int>(y_.size());
    m_.assign(n, 0.0);
    if (n < 3 || h_ <= 0.0) return;
    // tridiagonal system for second derivatives (natural ends)
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (int i = 1; i < n - 1; ++i) d[i] = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (h_ * h_);
    std::vector<double> cp(n, 0.0), dp(n, 0.0);
    double diag = 4.0;
    cp[1] = 1.0 / diag;
    dp[1] = d[1] / diag;
    for (int i = 2; i < n - 1; ++i) {
      double mlt = 4.0 - cp[i - 1];
      cp[i] = 1.0 / mlt;
      dp[i] = (d[i] - dp[i - 1]) / mlt;
    }
    for (int i = n - 2; i >= 1; --i) m_[i] = dp[i] - cp[i] * m_[i + 1];
  }

  double operator()(double x) const {
    const int n = static_cast<int>(y_.size());
    if (n == 0) return 0.0;
    double s = (x - x0_) / h_;
    if (s < 0.0 || s > n - 1) return 0.0;
    int i = static_cast<int>(s);
    if (i >= n - 1) i = n - 2;
    double a = s - i;
    double b = 1.0 - a;
    return b * y_[i] + a * y_[i + 1] +
           (h_ * h_ / 6.0) * ((b * b * b - b) * m_[i] + (a * a * a - a) * m_[i + 1]);
  }

 private:
  double x0_ = 0.0;
  double h_ = 1.0;
  std::vector<double> y_;
  std::vector<double> m_;
};

}  // namespace sobq
