#include "confforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "confforge/error.hpp"
#include "confforge/kernels.hpp"
#include "confforge/parallel.hpp"
#include "confforge/probit.hpp"

namespace confforge {

namespace detail {

void check_coverage_args(std::size_t n_keys, std::size_t n_intervals,
                         std::size_t n_ys) {
  if (n_keys != n_intervals || n_keys != n_ys) {
    throw Error(errc::length_mismatch,
                "keys, intervals and ground truth differ in length");
  }
  if (n_keys == 0) {
    throw Error(errc::empty_input, "no records to cover");
  }
}

}  // namespace detail

double coverage(std::span<const PredictionInterval> intervals,
                std::span<const double> ys) {
  if (intervals.empty()) {
    throw Error(errc::empty_input, "no intervals to cover");
  }
  const std::int64_t covered = kernels::covered_count(intervals, ys);
  return static_cast<double>(covered) /
         static_cast<double>(intervals.size());
}

double sharpness(std::span<const PredictionInterval> intervals) {
  if (intervals.empty()) {
    throw Error(errc::empty_input, "no intervals to measure");
  }
  double total = 0.0;
  for (const auto& iv : intervals) {
    if (iv.unbounded()) {
      return std::numeric_limits<double>::infinity();
    }
    total += iv.width();
  }
  return total / static_cast<double>(intervals.size());
}

std::vector<double> default_confidence_levels(int m) {
  if (m < 1) {
    throw Error(errc::invalid_config, "need at least one confidence level");
  }
  std::vector<double> levels(static_cast<std::size_t>(m));
  for (int b = 0; b < m; ++b) {
    levels[static_cast<std::size_t>(b)] =
        static_cast<double>(b + 1) / static_cast<double>(m + 1);
  }
  return levels;
}

EceInputs ece_inputs(std::span<const RegressionRecord> records) {
  EceInputs in;
  in.abs_residuals.reserve(records.size());
  in.sigmas.reserve(records.size());
  for (const auto& rec : records) {
    if (!rec.has_y()) {
      throw Error(errc::missing_ground_truth,
                  "record '" + rec.id + "' has no y_true");
    }
    double sigma;
    if (const auto* s = std::get_if<SigmaEstimate>(&rec.uncertainty)) {
      sigma = s->sigma;
    } else if (const auto* m =
                   std::get_if<SamplesEstimate>(&rec.uncertainty)) {
      sigma = samples_to_moments(m->values).sigma;
    } else {
      throw Error(errc::unsupported_uncertainty,
                  "record '" + rec.id +
                      "' has no sigma-representable uncertainty for "
                      "calibration error");
    }
    in.abs_residuals.push_back(std::fabs(*rec.y_true - rec.y_hat));
    in.sigmas.push_back(sigma);
  }
  return in;
}

std::vector<double> ece_thresholds(std::span<const double> levels) {
  if (levels.empty()) {
    throw Error(errc::invalid_config, "need at least one confidence level");
  }
  std::vector<double> thresholds(levels.size());
  for (std::size_t b = 0; b < levels.size(); ++b) {
    if (!(levels[b] > 0.0 && levels[b] < 1.0) ||
        (b > 0 && levels[b] <= levels[b - 1])) {
      throw Error(errc::invalid_config,
                  "confidence levels must be strictly increasing in (0, 1)");
    }
    thresholds[b] = probit((1.0 + levels[b]) / 2.0);
  }
  return thresholds;
}

double ece(std::span<const RegressionRecord> records,
           std::span<const double> levels) {
  if (records.empty()) {
    throw Error(errc::empty_input, "no records for calibration error");
  }
  const std::vector<double> thresholds = ece_thresholds(levels);
  const EceInputs in = ece_inputs(records);
  const std::vector<int> hits =
      kernels::first_hit_level(in.abs_residuals, in.sigmas, thresholds);
  return kernels::ece_from_first_hits(hits, levels);
}

namespace {

struct AffineSearch {
  std::vector<double> abs_residuals;
  std::vector<double> sigmas;
  std::vector<double> thresholds;
  std::vector<double> levels;

  // ECE under sigma' = a * sigma + b. Must not throw: called inside
  // parallel loops.
  double ece_at(double a, double b) const {
    const std::size_t m = thresholds.size();
    std::vector<std::int64_t> hist(m + 1, 0);
    for (std::size_t i = 0; i < abs_residuals.size(); ++i) {
      const double scale = a * sigmas[i] + b;
      const double r = abs_residuals[i];
      std::size_t lo = 0;
      std::size_t hi = m;
      while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (r <= thresholds[mid] * scale) {
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      hist[lo] += 1;
    }
    const double n = static_cast<double>(abs_residuals.size());
    double total = 0.0;
    std::int64_t cum = 0;
    for (std::size_t lvl = 0; lvl < m; ++lvl) {
      cum += hist[lvl];
      total += std::fabs(static_cast<double>(cum) / n - levels[lvl]);
    }
    return total / static_cast<double>(m);
  }
};

struct Candidate {
  double a;
  double b;
};

constexpr int kCoarseAPoints = 41;
constexpr int kCoarseBPoints = 21;
constexpr double kLogLo = -2.0;
constexpr double kLogHi = 2.0;

std::vector<Candidate> coarse_grid(double b_max) {
  const double e_step = (kLogHi - kLogLo) / static_cast<double>(kCoarseAPoints - 1);
  const double b_step = b_max / static_cast<double>(kCoarseBPoints - 1);
  std::vector<Candidate> grid;
  grid.reserve(static_cast<std::size_t>(kCoarseAPoints * kCoarseBPoints));
  for (int i = 0; i < kCoarseAPoints; ++i) {
    const double a = std::pow(10.0, kLogLo + static_cast<double>(i) * e_step);
    for (int j = 0; j < kCoarseBPoints; ++j) {
      grid.push_back({a, static_cast<double>(j) * b_step});
    }
  }
  return grid;
}

// A 21 x 21 window around the coarse optimum at 10x resolution; the b
// window clamps at zero.
std::vector<Candidate> refined_grid(int i_star, double b_star, double b_max) {
  const double e_step = (kLogHi - kLogLo) / static_cast<double>(kCoarseAPoints - 1);
  const double b_step = b_max / static_cast<double>(kCoarseBPoints - 1);
  const double e_star = kLogLo + static_cast<double>(i_star) * e_step;
  const double e_lo = e_star - e_step;
  const double e_fine = e_step / 10.0;
  const double b_lo = std::max(0.0, b_star - b_step);
  const double b_fine = b_step / 10.0;
  std::vector<Candidate> grid;
  grid.reserve(21 * 21);
  for (int i = 0; i <= 20; ++i) {
    const double a = std::pow(10.0, e_lo + static_cast<double>(i) * e_fine);
    for (int j = 0; j <= 20; ++j) {
      grid.push_back({a, b_lo + static_cast<double>(j) * b_fine});
    }
  }
  return grid;
}

std::vector<double> grid_eces(const AffineSearch& search,
                              const std::vector<Candidate>& grid,
                              int threads) {
  const std::int64_t n = static_cast<std::int64_t>(grid.size());
  std::vector<double> eces(grid.size());
#pragma omp parallel for num_threads(threads) schedule(static) if (threads > 1)
  for (std::int64_t c = 0; c < n; ++c) {
    const std::size_t idx = static_cast<std::size_t>(c);
    eces[idx] = search.ece_at(grid[idx].a, grid[idx].b);
  }
  return eces;
}

std::vector<double> grid_eces_serial(const AffineSearch& search,
                                     const std::vector<Candidate>& grid) {
  std::vector<double> eces(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    eces[c] = search.ece_at(grid[c].a, grid[c].b);
  }
  return eces;
}

struct Best {
  double ece;
  double a;
  double b;
  std::size_t index;
};

void scan_best(const std::vector<Candidate>& grid,
               const std::vector<double>& eces, Best& best) {
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const double e = eces[c];
    const double a = grid[c].a;
    const double b = grid[c].b;
    const bool better =
        e < best.ece ||
        (e == best.ece && (a < best.a || (a == best.a && b < best.b)));
    if (better) {
      best = {e, a, b, c};
    }
  }
}

AffineFit affine_search_run(std::span<const RegressionRecord> records,
                            std::span<const double> levels, int threads,
                            bool serial) {
  if (records.empty()) {
    throw Error(errc::empty_input, "no records for affine calibration");
  }
  AffineSearch search;
  search.thresholds = ece_thresholds(levels);
  search.levels.assign(levels.begin(), levels.end());
  EceInputs in = ece_inputs(records);
  search.abs_residuals = std::move(in.abs_residuals);
  search.sigmas = std::move(in.sigmas);

  std::vector<double> sorted_res = search.abs_residuals;
  std::sort(sorted_res.begin(), sorted_res.end());
  if (sorted_res.back() == 0.0) {
    throw Error(errc::degenerate_input,
                "all residuals are zero; the affine search is unconstrained");
  }
  const std::size_t n = sorted_res.size();
  const double median =
      (n % 2 == 1) ? sorted_res[n / 2]
                   : 0.5 * (sorted_res[n / 2 - 1] + sorted_res[n / 2]);
  const double b_max = 2.0 * median;

  const int nt = serial ? 1 : (threads > 0 ? threads : effective_threads());
  const std::vector<Candidate> coarse = coarse_grid(b_max);
  const std::vector<double> coarse_eces =
      serial ? grid_eces_serial(search, coarse)
             : grid_eces(search, coarse, nt);

  Best best{std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), 0};
  scan_best(coarse, coarse_eces, best);
  const int i_star = static_cast<int>(best.index) / kCoarseBPoints;
  const double b_star = best.b;

  const std::vector<Candidate> refined = refined_grid(i_star, b_star, b_max);
  const std::vector<double> refined_eces =
      serial ? grid_eces_serial(search, refined)
             : grid_eces(search, refined, nt);
  scan_best(refined, refined_eces, best);

  const double ece_identity = search.ece_at(1.0, 0.0);
  const std::vector<Candidate> identity{{1.0, 0.0}};
  const std::vector<double> identity_ece{ece_identity};
  scan_best(identity, identity_ece, best);

  return {best.a, best.b, ece_identity, best.ece};
}

}  // namespace

AffineFit affine_calibrate(std::span<const RegressionRecord> records,
                           std::span<const double> levels, int threads) {
  return affine_search_run(records, levels, threads, /*serial=*/false);
}

AffineFit affine_calibrate_serial(std::span<const RegressionRecord> records,
                                  std::span<const double> levels) {
  return affine_search_run(records, levels, 0, /*serial=*/true);
}

}  // namespace confforge
