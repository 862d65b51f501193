#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "natfert/cohort.hpp"
#include "natfert/error.hpp"
#include "natfert/parameters.hpp"

namespace natfert {

// Age-specific fertility rates on a single-year grid, births per woman-year.
// The canonical grid is ages 10..49 (40 bins), the summary statistic used
// throughout the inference pipeline.
struct AsfrSchedule {
  int age_min = kMinReproAgeYears;
  std::vector<double> rates;

  static AsfrSchedule zeros() {
    return {kMinReproAgeYears, std::vector<double>(kAgeBins, 0.0)};
  }

  int age_at(std::size_t bin) const { return age_min + static_cast<int>(bin); }

  bool same_grid(const AsfrSchedule& other) const {
    return age_min == other.age_min && rates.size() == other.rates.size();
  }

  bool operator==(const AsfrSchedule&) const = default;
};

inline AsfrSchedule schedule_from_cohort(const CohortResult& result) {
  if (result.n_women <= 0) {
    throw Error("schedule_from_cohort: empty cohort");
  }
  AsfrSchedule schedule = AsfrSchedule::zeros();
  for (int a = 0; a < kAgeBins; ++a) {
    schedule.rates[a] = static_cast<double>(result.births_by_age[a]) /
                        result.exposure_by_age[a];
  }
  return schedule;
}

// Euclidean distance between two schedules on the same grid. An optional
// per-bin weight vector supports sensitivity analyses; weights must match
// the grid length.
inline double distance(const AsfrSchedule& a, const AsfrSchedule& b,
                       std::span<const double> weights = {}) {
  if (!a.same_grid(b)) {
    throw Error("distance: schedules are on different age grids");
  }
  if (!weights.empty() && weights.size() != a.rates.size()) {
    throw Error("distance: weight vector does not match the age grid");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rates.size(); ++i) {
    const double d = a.rates[i] - b.rates[i];
    sum += weights.empty() ? d * d : weights[i] * d * d;
  }
  return std::sqrt(sum);
}

}  // namespace natfert
