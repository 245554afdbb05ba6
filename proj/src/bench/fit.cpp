#include "sleec/bench/fit.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace sleec::bench {

const char* fit_model_name(FitModel m) {
  switch (m) {
    case FitModel::Linear: return "linear";
    case FitModel::Exponential: return "exponential";
    case FitModel::LogLog: return "loglog";
    case FitModel::Quadratic: return "quadratic";
  }
  return "?";
}

namespace {

double r_squared(const std::vector<double>& y, const std::vector<double>& predicted) {
  double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_res += (y[i] - predicted[i]) * (y[i] - predicted[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  if (ss_tot == 0) return ss_res == 0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

/// Ordinary least squares for y = a*x + b; returns (a, b).
std::pair<double, double> ols(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  const double a = denom != 0 ? (n * sxy - sx * sy) / denom : 0.0;
  const double b = (sy - a * sx) / n;
  return {a, b};
}

FitReport fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  FitReport rep;
  rep.model = FitModel::Linear;
  auto [a, b] = ols(x, y);
  std::vector<double> predicted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) predicted[i] = a * x[i] + b;
  rep.ok = true;
  rep.parameters = {a, b};
  rep.r_squared = r_squared(y, predicted);
  return rep;
}

FitReport fit_exponential(const std::vector<double>& x, const std::vector<double>& y) {
  FitReport rep;
  rep.model = FitModel::Exponential;
  for (double v : y) {
    if (v <= 0) {
      rep.error = "NONPOSITIVE_VALUES";
      return rep;
    }
  }
  std::vector<double> ln_y(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) ln_y[i] = std::log(y[i]);
  auto [a, b] = ols(x, ln_y);
  std::vector<double> predicted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) predicted[i] = a * x[i] + b;
  rep.ok = true;
  rep.parameters = {a, b};
  rep.r_squared = r_squared(ln_y, predicted);  // transformed space
  return rep;
}

FitReport fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  FitReport rep;
  rep.model = FitModel::LogLog;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) {
      rep.error = "NONPOSITIVE_VALUES";
      return rep;
    }
  }
  std::vector<double> ln_x(x.size()), ln_y(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ln_x[i] = std::log(x[i]);
    ln_y[i] = std::log(y[i]);
  }
  auto [alpha, b] = ols(ln_x, ln_y);
  std::vector<double> predicted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) predicted[i] = alpha * ln_x[i] + b;
  rep.ok = true;
  rep.parameters = {alpha, b};
  rep.exponent = alpha;
  rep.r_squared = r_squared(ln_y, predicted);  // transformed space
  return rep;
}

FitReport fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  FitReport rep;
  rep.model = FitModel::Quadratic;
  // normal equations for y = a*x^2 + b*x + c, solved by Gaussian elimination
  double s[5] = {0, 0, 0, 0, 0};  // sum of x^0..x^4
  double t[3] = {0, 0, 0};        // sum of y*x^0..x^2
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = 1;
    for (int k = 0; k <= 4; ++k) {
      s[k] += p;
      if (k <= 2) t[k] += y[i] * p;
      p *= x[i];
    }
  }
  double m[3][4] = {
      {s[4], s[3], s[2], t[2]},
      {s[3], s[2], s[1], t[1]},
      {s[2], s[1], s[0], t[0]},
  };
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::fabs(m[row][col]) > std::fabs(m[pivot][col])) pivot = row;
    std::swap(m[col], m[pivot]);
    if (std::fabs(m[col][col]) < 1e-300) {
      rep.error = "SINGULAR";
      return rep;
    }
    for (int row = 0; row < 3; ++row) {
      if (row == col) continue;
      const double f = m[row][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[row][k] -= f * m[col][k];
    }
  }
  const double a = m[0][3] / m[0][0];
  const double b = m[1][3] / m[1][1];
  const double c = m[2][3] / m[2][2];
  std::vector<double> predicted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) predicted[i] = a * x[i] * x[i] + b * x[i] + c;
  rep.ok = true;
  rep.parameters = {a, b, c};
  rep.r_squared = r_squared(y, predicted);
  return rep;
}

}  // namespace

std::vector<FitReport> fit_models(const std::vector<DataPoint>& points) {
  std::set<double> distinct;
  for (const auto& p : points) distinct.insert(p.x);
  if (distinct.size() < 3)
    throw std::invalid_argument("fit_models needs at least 3 distinct x values");
  std::vector<double> x(points.size()), y(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    x[i] = points[i].x;
    y[i] = points[i].y;
  }
  return {fit_linear(x, y), fit_exponential(x, y), fit_loglog(x, y), fit_quadratic(x, y)};
}

nlohmann::json FitReport::to_json() const {
  nlohmann::json j{{"model", fit_model_name(model)}, {"ok", ok}};
  if (!ok) {
    j["error"] = error;
    return j;
  }
  j["parameters"] = parameters;
  j["r_squared"] = r_squared;
  if (model == FitModel::LogLog) j["exponent"] = exponent;
  return j;
}

}  // namespace sleec::bench
