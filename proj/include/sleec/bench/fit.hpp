#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace sleec::bench {

enum class FitModel { Linear, Exponential, LogLog, Quadratic };

const char* fit_model_name(FitModel m);

/// Least-squares fit of one model family. R² is computed in the original
/// y-space for linear/quadratic and in the transformed (log) space for
/// exponential/log-log. `exponent` is the log-log α. Models that need a log
/// transform report NONPOSITIVE_VALUES instead of parameters when some
/// x or y is not positive.
struct FitReport {
  FitModel model = FitModel::Linear;
  bool ok = false;
  std::string error;               // NONPOSITIVE_VALUES when a transform fails
  std::vector<double> parameters;  // linear: a,b; exp: a,b; loglog: alpha,b; quad: a,b,c
  double r_squared = 0;
  double exponent = 0;  // log-log only

  nlohmann::json to_json() const;
};

struct DataPoint {
  double x = 0;
  double y = 0;
};

/// Fits all four model families. Needs at least 3 distinct x values.
std::vector<FitReport> fit_models(const std::vector<DataPoint>& points);

}  // namespace sleec::bench
