#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "magicmps/experiment.hpp"

namespace magicmps {

enum class SweepAxis { chi, time };

/// |M_n^Sat - M_n_bar| for one averaged point. M_2^Sat is the Haar value;
/// M_1^Sat is the largest M_1_bar over the point's sweep.
struct DeviationPoint {
  std::size_t n_sites = 0;
  std::size_t chi = kInfiniteChi;
  std::optional<std::size_t> t;
  double x = 0.0;  ///< chi or t, whichever the sweep runs over
  double delta_m1 = 0.0;
  double delta_m2 = 0.0;
  double sem1 = 0.0;
  double sem2 = 0.0;
  double sat_m1 = 0.0;
  double sat_m2 = 0.0;
};

/// Groups by N (and by cap for the time axis). Tables with fewer than two rows are rejected.
/// Rows in infinite mode are kept for the saturation reference but have no usable x on the chi axis.
std::vector<DeviationPoint> compute_deviations(std::span<const AveragedPoint> table, SweepAxis axis);

enum class FitModel { log_linear_chi, log_linear_time, linear_n, linear };

std::string to_string(FitModel model);

struct FitResult {
  FitModel model = FitModel::linear;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;

  /// For log-linear models: decay rate -slope and amplitude exp(intercept).
  double rate() const { return -slope; }
  double amplitude() const;
};

struct FitPoint {
  double x = 0.0;
  double y = 0.0;
  double y_err = 0.0;
};

class FitError : public std::invalid_argument {
 public:
  explicit FitError(const std::string& what) : std::invalid_argument(what) {}
};

/// Points must exceed this many standard errors to enter a log-linear fit.
inline constexpr double kNoiseFloorSigmas = 3.0;

/// Time-axis curves relax onto a residual plateau (finite-chi deficit plus estimator
/// noise) rather than to zero; only points above this multiple of the deviation at
/// the last recorded time enter the decay fit.
inline constexpr double kPlateauFloorFactor = 2.0;

/// OLS of ln y on x over points with y > noise_floor and y > 3 * y_err.
FitResult fit_log_linear(std::span<const FitPoint> points, double noise_floor,
                         FitModel model = FitModel::log_linear_chi);

/// OLS of y on x (all points).
FitResult fit_linear(std::span<const FitPoint> points, FitModel model = FitModel::linear);

/// beta_n(N) = lambda_n N + mu_n from (N, beta) pairs.
FitResult fit_beta_vs_n(std::span<const FitPoint> betas);

struct SeriesPoint {
  double t = 0.0;
  double value = 0.0;
};

/// Smallest recorded t from which every later value stays within epsilon of
/// target; nullopt when the series never settles within the recorded range.
std::optional<double> saturation_time(std::span<const SeriesPoint> series, double target, double epsilon);

/// One fit of a deviation curve or of the amplitudes across N.
struct FitRow {
  std::string kind;  ///< "alpha" (vs chi), "gamma" (vs t) or "lambda" (beta vs N)
  int rank = 2;
  std::size_t n_sites = 0;  ///< 0 for lambda rows
  std::size_t chi = kInfiniteChi;
  std::optional<FitResult> fit;
  std::string note;  ///< reason when fit is empty
};

/// Log-linear fits of Delta M_1 and Delta M_2 per curve (time axis: above the
/// plateau floor, see kPlateauFloorFactor), then (chi axis only)
/// lambda fits of beta_n = exp(intercept) against N.
std::vector<FitRow> fit_deviation_curves(std::span<const DeviationPoint> deviations, SweepAxis axis);

}  // namespace magicmps
