#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "natfert/cohort.hpp"
#include "natfert/error.hpp"
#include "natfert/parallel.hpp"
#include "natfert/parameters.hpp"
#include "natfert/rng.hpp"
#include "natfert/schedule.hpp"

// Rejection ABC: uniform prior sampling, prior-predictive simulation at the
// observed sample size, and distance-based acceptance.

namespace natfert {

struct ParameterRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Independent uniform priors, one closed interval per parameter.
struct Prior {
  ParameterRange mu_m{180.0, 420.0};
  ParameterRange sigma_m{6.0, 120.0};
  ParameterRange phi_1{0.0, 0.6};
  ParameterRange phi_2{0.0, 0.6};
  ParameterRange delta{0.0, 24.0};

  const ParameterRange& range(int i) const {
    switch (i) {
      case 0: return mu_m;
      case 1: return sigma_m;
      case 2: return phi_1;
      case 3: return phi_2;
      case 4: return delta;
    }
    throw Error("Prior: index out of range");
  }

  ParameterRange& range(int i) {
    switch (i) {
      case 0: return mu_m;
      case 1: return sigma_m;
      case 2: return phi_1;
      case 3: return phi_2;
      case 4: return delta;
    }
    throw Error("Prior: index out of range");
  }

  void validate() const {
    const auto names = ParameterVector::names();
    for (int i = 0; i < kNumParams; ++i) {
      if (!(range(i).lo < range(i).hi)) {
        throw ConfigError(std::string("prior: lower bound must be below upper "
                                      "bound for ") +
                          names[i]);
      }
    }
    if (!(mu_m.lo > 0.0)) throw ConfigError("prior: mu_m bounds must be > 0");
    if (!(sigma_m.lo >= 0.0)) throw ConfigError("prior: sigma_m bounds must be >= 0");
    if (!(phi_1.lo >= 0.0) || !(phi_2.lo >= 0.0)) {
      throw ConfigError("prior: fecundability bounds must be >= 0");
    }
    if (!(delta.lo >= 0.0)) throw ConfigError("prior: delta bounds must be >= 0");
  }

  bool contains(const ParameterVector& p) const {
    for (int i = 0; i < kNumParams; ++i) {
      if (p[i] < range(i).lo || p[i] > range(i).hi) return false;
    }
    return true;
  }

  bool operator==(const Prior&) const = default;
};

// n_draws independent draws from the prior box, deterministic in the seed.
// delta is drawn continuously and rounded to whole months.
inline std::vector<ParameterVector> sample_prior(const Prior& prior,
                                                 std::size_t n_draws,
                                                 std::uint64_t master_seed) {
  prior.validate();
  std::vector<ParameterVector> draws(n_draws);
  const std::uint64_t base = rng::derive_key(master_seed, rng::kTagPrior);
  for (std::size_t i = 0; i < n_draws; ++i) {
    rng::Stream stream(rng::derive_key(base, i));
    ParameterVector theta;
    for (int d = 0; d < kNumParams; ++d) {
      const auto& r = prior.range(d);
      theta[d] = r.lo + (r.hi - r.lo) * stream.next_double();
    }
    theta.delta = std::round(theta.delta);
    draws[i] = theta;
  }
  return draws;
}

struct ReferenceEntry {
  ParameterVector theta;
  AsfrSchedule y;
  std::uint64_t seed = 0;  // cohort seed used to simulate y
};

// Prior-predictive sample {(theta_i, y_i)}; every y simulated with the same
// number of marriages so simulator noise matches the observed sample size.
struct ReferenceTable {
  std::vector<ReferenceEntry> entries;
  std::int64_t n_marriages = 0;
};

inline ReferenceTable build_reference_table(const Prior& prior,
                                            std::size_t n_draws,
                                            std::int64_t n_marriages,
                                            std::uint64_t master_seed,
                                            int threads = 1) {
  if (n_draws == 0) throw Error("build_reference_table: n_draws must be > 0");
  if (n_marriages <= 0) {
    throw Error("build_reference_table: n_marriages must be > 0");
  }
  const auto thetas = sample_prior(prior, n_draws, master_seed);
  ReferenceTable table;
  table.n_marriages = n_marriages;
  table.entries.resize(n_draws);
  const std::uint64_t cohort_base =
      rng::derive_key(master_seed, rng::kTagCohort);
  parallel_for(n_draws, threads, [&](std::size_t i) {
    const std::uint64_t cohort_seed = rng::derive_key(cohort_base, i);
    const auto cohort = simulate_cohort(thetas[i], n_marriages, cohort_seed);
    table.entries[i] = {thetas[i], schedule_from_cohort(cohort), cohort_seed};
  });
  return table;
}

struct Acceptance {
  enum class Mode { kThreshold, kQuantile };

  Mode mode = Mode::kQuantile;
  double value = 0.005;

  static Acceptance threshold(double epsilon) {
    return {Mode::kThreshold, epsilon};
  }
  static Acceptance quantile(double q) { return {Mode::kQuantile, q}; }

  void validate() const {
    if (mode == Mode::kQuantile && !(value > 0.0 && value <= 1.0)) {
      throw ConfigError("acceptance: quantile must lie in (0, 1]");
    }
    if (mode == Mode::kThreshold && !(value >= 0.0)) {
      throw ConfigError("acceptance: threshold must be >= 0");
    }
  }
};

struct PosteriorDraw {
  std::size_t table_index = 0;
  ParameterVector theta;
  AsfrSchedule y;
  double distance = 0.0;
};

// Accepted draws sorted by (distance, table index). When `adjusted` is set,
// adjusted_thetas holds the regression-adjusted values parallel to draws;
// clamped_count is the number of adjusted values pulled back to a hard
// physical bound.
struct PosteriorSample {
  std::vector<PosteriorDraw> draws;
  bool adjusted = false;
  std::vector<ParameterVector> adjusted_thetas;
  std::size_t clamped_count = 0;

  const ParameterVector& theta_at(std::size_t i) const {
    return adjusted ? adjusted_thetas[i] : draws[i].theta;
  }

  ParameterVector mean_theta() const {
    if (draws.empty()) throw Error("PosteriorSample: empty sample");
    ParameterVector mean;
    for (std::size_t i = 0; i < draws.size(); ++i) {
      const auto& t = theta_at(i);
      for (int d = 0; d < kNumParams; ++d) mean[d] += t[d];
    }
    for (int d = 0; d < kNumParams; ++d) {
      mean[d] /= static_cast<double>(draws.size());
    }
    return mean;
  }
};

namespace detail {

// skip_index excludes one table row (used by leave-one-out cross-validation).
inline PosteriorSample reject_impl(const ReferenceTable& table,
                                   const AsfrSchedule& y_obs,
                                   const Acceptance& acceptance,
                                   std::span<const double> weights,
                                   std::size_t skip_index) {
  if (table.entries.empty()) throw Error("reject: reference table is empty");
  acceptance.validate();

  std::vector<std::pair<double, std::size_t>> distances;
  distances.reserve(table.entries.size());
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    if (i == skip_index) continue;
    distances.emplace_back(distance(table.entries[i].y, y_obs, weights), i);
  }
  // Ascending by distance, ties broken by table index.
  std::sort(distances.begin(), distances.end());

  std::size_t n_accept = 0;
  if (acceptance.mode == Acceptance::Mode::kThreshold) {
    while (n_accept < distances.size() &&
           distances[n_accept].first < acceptance.value) {
      ++n_accept;
    }
    if (n_accept == 0) {
      throw Error("reject: no simulation met the distance threshold");
    }
  } else {
    n_accept = static_cast<std::size_t>(
        std::ceil(acceptance.value * static_cast<double>(distances.size())));
    n_accept = std::min(std::max<std::size_t>(n_accept, 1), distances.size());
  }

  PosteriorSample sample;
  sample.draws.reserve(n_accept);
  for (std::size_t k = 0; k < n_accept; ++k) {
    const auto [dist, idx] = distances[k];
    sample.draws.push_back(
        {idx, table.entries[idx].theta, table.entries[idx].y, dist});
  }
  return sample;
}

}  // namespace detail

inline PosteriorSample reject(const ReferenceTable& table,
                              const AsfrSchedule& y_obs,
                              const Acceptance& acceptance,
                              std::span<const double> weights = {}) {
  return detail::reject_impl(table, y_obs, acceptance, weights,
                             std::numeric_limits<std::size_t>::max());
}

}  // namespace natfert
