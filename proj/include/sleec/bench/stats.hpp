#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sleec::bench {

/// Summary statistics over a latency sample (milliseconds in reports).
/// Percentiles use the nearest-rank method; std and skewness are population
/// moments; Bowley skewness is (Q3 + Q1 - 2*Q2) / (Q3 - Q1) and is null when
/// Q3 == Q1.
struct OverheadStats {
  std::size_t count = 0;
  double mean = 0;
  double min = 0;
  double max = 0;
  double p75 = 0;
  double p99 = 0;
  double stddev = 0;
  double skewness = 0;  // classical (moment) skewness; 0 for constant samples
  std::optional<double> bowley;

  nlohmann::json to_json() const;
};

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value.
double percentile_nearest_rank(std::vector<double> sorted_ascending, double p);

OverheadStats compute_stats(const std::vector<double>& samples);

}  // namespace sleec::bench
