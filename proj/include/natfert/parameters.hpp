#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "natfert/error.hpp"

namespace natfert {

inline constexpr int kMonthsPerYear = 12;
inline constexpr int kMaxAgeMonths = 600;   // exact age 50, exclusive bound
inline constexpr int kMinReproAgeYears = 10;
inline constexpr int kMaxReproAgeYears = 50;
inline constexpr int kGestationMonths = 9;
inline constexpr int kAgeBins = 40;         // single-year bins, ages 10..49
inline constexpr int kNumParams = 5;

// Model parameter vector theta = (mu_m, sigma_m, phi_1, phi_2, delta).
// mu_m / sigma_m are the natural-scale mean and standard deviation of the
// marriage-age distribution in months; phi_1 / phi_2 weight the two interior
// Bernstein bases of the fecundability curve; delta is the post-partum
// amenorrhea duration in whole months.
struct ParameterVector {
  double mu_m = 0.0;
  double sigma_m = 0.0;
  double phi_1 = 0.0;
  double phi_2 = 0.0;
  double delta = 0.0;

  static constexpr std::array<const char*, kNumParams> names() {
    return {"mu_m", "sigma_m", "phi_1", "phi_2", "delta"};
  }

  double operator[](int i) const {
    switch (i) {
      case 0: return mu_m;
      case 1: return sigma_m;
      case 2: return phi_1;
      case 3: return phi_2;
      case 4: return delta;
    }
    throw Error("ParameterVector: index out of range");
  }

  double& operator[](int i) {
    switch (i) {
      case 0: return mu_m;
      case 1: return sigma_m;
      case 2: return phi_1;
      case 3: return phi_2;
      case 4: return delta;
    }
    throw Error("ParameterVector: index out of range");
  }

  std::array<double, kNumParams> to_array() const {
    return {mu_m, sigma_m, phi_1, phi_2, delta};
  }

  static ParameterVector from_array(const std::array<double, kNumParams>& a) {
    return {a[0], a[1], a[2], a[3], a[4]};
  }

  bool operator==(const ParameterVector&) const = default;
};

inline bool is_whole_month(double delta) {
  return std::fabs(delta - std::round(delta)) < 1e-9;
}

// Checks the invariants the simulator relies on; throws on violation.
inline void validate_for_simulation(const ParameterVector& p) {
  if (!(p.mu_m > 0.0)) throw Error("invalid parameters: mu_m must be > 0");
  if (!(p.sigma_m >= 0.0)) throw Error("invalid parameters: sigma_m must be >= 0");
  if (!(p.phi_1 >= 0.0)) throw Error("invalid parameters: phi_1 must be >= 0");
  if (!(p.phi_2 >= 0.0)) throw Error("invalid parameters: phi_2 must be >= 0");
  if (!(p.delta >= 0.0)) throw Error("invalid parameters: delta must be >= 0");
  if (!is_whole_month(p.delta)) {
    throw Error("invalid parameters: delta must be a whole number of months");
  }
}

// Pulls an arbitrary (e.g. regression-adjusted) theta back to values the
// simulator accepts: non-negative weights, positive marriage-age moments,
// delta rounded to whole months.
inline ParameterVector clamp_for_simulation(const ParameterVector& p) {
  ParameterVector out = p;
  out.mu_m = std::max(out.mu_m, 1.0);
  out.sigma_m = std::max(out.sigma_m, 0.0);
  out.phi_1 = std::max(out.phi_1, 0.0);
  out.phi_2 = std::max(out.phi_2, 0.0);
  out.delta = std::round(std::max(out.delta, 0.0));
  return out;
}

// Age pattern of fecundability: phi(x) = phi_1 * 3 xs (1-xs)^2
//                                      + phi_2 * 3 xs^2 (1-xs),
// with xs = (x - 10) / 40 the age scaled onto [0, 1]. The two terms are the
// interior Bernstein bases of degree 3, so the curve vanishes at ages 10 and
// 50 for any weights. Values are clamped to [0, 1] after evaluation.
struct FecundabilityCurve {
  double phi_1 = 0.0;
  double phi_2 = 0.0;

  double at_years(double age_years) const {
    if (age_years < kMinReproAgeYears || age_years > kMaxReproAgeYears) {
      return 0.0;
    }
    const double xs = (age_years - kMinReproAgeYears) /
                      (kMaxReproAgeYears - kMinReproAgeYears);
    const double one_minus = 1.0 - xs;
    const double value = phi_1 * 3.0 * xs * one_minus * one_minus +
                         phi_2 * 3.0 * xs * xs * one_minus;
    return std::clamp(value, 0.0, 1.0);
  }

  double at_month(int age_months) const {
    return at_years(static_cast<double>(age_months) / kMonthsPerYear);
  }

  // Per-month lookup table for the simulation loop, indexed by age in months.
  std::vector<double> monthly_table() const {
    std::vector<double> table(kMaxAgeMonths);
    for (int m = 0; m < kMaxAgeMonths; ++m) table[m] = at_month(m);
    return table;
  }
};

inline double fecundability_at(const FecundabilityCurve& curve, int age_months) {
  return curve.at_month(age_months);
}

}  // namespace natfert
