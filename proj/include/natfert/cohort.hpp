#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "natfert/error.hpp"
#include "natfert/parallel.hpp"
#include "natfert/parameters.hpp"
#include "natfert/rng.hpp"

// Monthly reproductive life-course simulation, from birth to exact age 50
// (months 0..599).
//
// Timing convention, anchored on the conception trial at the start of an
// exposed month t:
//   - gestation occupies months t+1 .. t+9, the birth is recorded in month
//     t+9 (so a trial in month 590 yields the last recordable birth, 599);
//   - amenorrhea occupies the delta months t+10 .. t+9+delta;
//   - exposure resumes in month t+10+delta.
// Hence consecutive births are at least 9 + delta + 1 months apart. A woman
// is exposed in a month iff she is married and neither pregnant nor
// amenorrheic, and exactly one uniform draw is consumed per exposed month.

namespace natfert {

struct WomanTrajectory {
  int marriage_age_months = 0;
  std::vector<int> birth_ages_months;
};

struct CohortResult {
  std::array<std::int64_t, kAgeBins> births_by_age{};
  std::array<double, kAgeBins> exposure_by_age{};
  std::int64_t n_women = 0;

  std::int64_t total_births() const {
    std::int64_t total = 0;
    for (auto b : births_by_age) total += b;
    return total;
  }
};

// Marriage age in whole months, drawn from a lognormal law whose natural-scale
// mean and standard deviation are mu_m and sigma_m (log-scale location/scale by
// moment matching). Draws rounding outside [1, 600) are rejected and redrawn.
template <class Rng>
int draw_marriage_age(double mu_m, double sigma_m, Rng& rng) {
  if (!(mu_m > 0.0)) throw Error("draw_marriage_age: mu_m must be > 0");
  if (!(sigma_m >= 0.0)) throw Error("draw_marriage_age: sigma_m must be >= 0");
  const double ratio = sigma_m / mu_m;
  const double log_var = std::log1p(ratio * ratio);
  const double log_mu = std::log(mu_m) - 0.5 * log_var;
  const double log_sd = std::sqrt(log_var);
  constexpr int kMaxRejections = 1000;
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const double value = std::exp(log_mu + log_sd * rng.next_normal());
    const long month = std::lround(value);
    if (month >= 1 && month < kMaxAgeMonths) return static_cast<int>(month);
  }
  throw Error(
      "draw_marriage_age: degenerate prior, 1000 consecutive draws fell "
      "outside [1, 600) months");
}

// Core monthly walk given a precomputed per-month fecundability table.
// Consumes one uniform per exposed month; suitable for driving with a
// scripted RNG in tests.
template <class Rng>
WomanTrajectory simulate_woman_from_marriage(std::span<const double> phi_by_month,
                                             int delta_months,
                                             int marriage_month, Rng& rng) {
  WomanTrajectory traj;
  traj.marriage_age_months = marriage_month;
  int t = marriage_month;
  while (t < kMaxAgeMonths) {
    if (rng.next_double() < phi_by_month[static_cast<std::size_t>(t)]) {
      const int birth = t + kGestationMonths;
      if (birth < kMaxAgeMonths) traj.birth_ages_months.push_back(birth);
      t = birth + 1 + delta_months;
    } else {
      ++t;
    }
  }
  return traj;
}

template <class Rng>
WomanTrajectory simulate_woman(const ParameterVector& params, Rng& rng) {
  validate_for_simulation(params);
  const FecundabilityCurve curve{params.phi_1, params.phi_2};
  const auto phi = curve.monthly_table();
  const int marriage = draw_marriage_age(params.mu_m, params.sigma_m, rng);
  return simulate_woman_from_marriage(
      phi, static_cast<int>(std::llround(params.delta)), marriage, rng);
}

// Stream feeding woman `index` of a cohort keyed by `cohort_seed`. Exposed so
// tests can replay individual trajectories out of an aggregated run.
inline rng::Stream cohort_woman_rng(std::uint64_t cohort_seed,
                                    std::uint64_t index) {
  return rng::Stream(
      rng::derive_key(rng::derive_key(cohort_seed, rng::kTagWoman), index));
}

// Aggregates n_women independent trajectories. Deterministic in
// (params, n_women, master_seed) for any thread count: per-woman streams are
// derived from the seed and the woman index, and chunk tallies are integers.
inline CohortResult simulate_cohort(const ParameterVector& params,
                                    std::int64_t n_women,
                                    std::uint64_t master_seed,
                                    int threads = 1) {
  if (n_women < 0) throw Error("simulate_cohort: n_women must be >= 0");
  validate_for_simulation(params);
  CohortResult result;
  result.n_women = n_women;
  // Each woman contributes one woman-year per single-year bin: no mortality
  // and no censoring before age 50.
  result.exposure_by_age.fill(static_cast<double>(n_women));
  if (n_women == 0) return result;

  const FecundabilityCurve curve{params.phi_1, params.phi_2};
  const auto phi = curve.monthly_table();
  const int delta = static_cast<int>(std::llround(params.delta));
  const double mu = params.mu_m;
  const double sigma = params.sigma_m;

  const int n_threads = resolve_threads(threads);
  const std::size_t n_chunks =
      std::min<std::size_t>(static_cast<std::size_t>(n_threads) * 4,
                            static_cast<std::size_t>(n_women));
  const std::size_t chunk_size =
      (static_cast<std::size_t>(n_women) + n_chunks - 1) / n_chunks;
  std::vector<std::array<std::int64_t, kAgeBins>> chunk_births(
      n_chunks, std::array<std::int64_t, kAgeBins>{});

  parallel_for(n_chunks, threads, [&](std::size_t c) {
    auto& bins = chunk_births[c];
    const std::size_t begin = c * chunk_size;
    const std::size_t end =
        std::min<std::size_t>(begin + chunk_size,
                              static_cast<std::size_t>(n_women));
    for (std::size_t w = begin; w < end; ++w) {
      auto rng = cohort_woman_rng(master_seed, w);
      const int marriage = draw_marriage_age(mu, sigma, rng);
      int t = marriage;
      while (t < kMaxAgeMonths) {
        if (rng.next_double() < phi[static_cast<std::size_t>(t)]) {
          const int birth = t + kGestationMonths;
          if (birth < kMaxAgeMonths) {
            // Fecundability is zero below age 10, so births always land in
            // bins 10..49.
            ++bins[birth / kMonthsPerYear - kMinReproAgeYears];
          }
          t = birth + 1 + delta;
        } else {
          ++t;
        }
      }
    }
  });

  for (const auto& bins : chunk_births) {
    for (int a = 0; a < kAgeBins; ++a) result.births_by_age[a] += bins[a];
  }
  return result;
}

inline double mean_children_per_woman(const CohortResult& result) {
  if (result.n_women <= 0) {
    throw Error("mean_children_per_woman: empty cohort");
  }
  return static_cast<double>(result.total_births()) /
         static_cast<double>(result.n_women);
}

}  // namespace natfert
