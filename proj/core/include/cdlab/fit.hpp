#pragma once

#include <cmath>
#include <vector>

#include "cdlab/errors.hpp"

namespace cdlab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInputError("fit_linear: bad input");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw InvalidInputError("fit_linear: degenerate abscissae");
  return {(n * sxy - sx * sy) / denom, (sy * sxx - sx * sxy) / denom};
}

inline LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) throw InvalidInputError("fit_loglog: nonpositive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_linear(lx, ly);
}

}  // namespace cdlab
