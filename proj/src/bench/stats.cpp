#include "sleec/bench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sleec::bench {

double percentile_nearest_rank(std::vector<double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of empty sample");
  const std::size_t n = sorted.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return sorted[rank - 1];
}

OverheadStats compute_stats(const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("compute_stats needs at least one sample");
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());

  OverheadStats s;
  s.count = sorted.size();
  s.min = sorted.front();
  s.max = sorted.back();
  s.p75 = percentile_nearest_rank(sorted, 75);
  s.p99 = percentile_nearest_rank(sorted, 99);

  double sum = 0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(s.count);

  double m2 = 0, m3 = 0;
  for (double v : sorted) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(s.count);
  m3 /= static_cast<double>(s.count);
  s.stddev = std::sqrt(m2);
  s.skewness = s.stddev > 0 ? m3 / (s.stddev * s.stddev * s.stddev) : 0.0;

  const double q1 = percentile_nearest_rank(sorted, 25);
  const double q2 = percentile_nearest_rank(sorted, 50);
  const double q3 = percentile_nearest_rank(sorted, 75);
  if (q3 > q1)
    s.bowley = (q3 + q1 - 2 * q2) / (q3 - q1);
  // q3 == q1: Bowley undefined, reported as null

  return s;
}

nlohmann::json OverheadStats::to_json() const {
  nlohmann::json j{
      {"count", count},   {"mean", mean},       {"min", min},
      {"max", max},       {"p75", p75},         {"p99", p99},
      {"std", stddev},    {"skewness", skewness},
  };
  if (bowley)
    j["bowley_skewness"] = *bowley;
  else
    j["bowley_skewness"] = nullptr;
  return j;
}

}  // namespace sleec::bench
