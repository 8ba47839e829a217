#include "magicmps/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "magicmps/oracle.hpp"

namespace magicmps {

namespace {

FitResult ordinary_least_squares(const std::vector<double>& xs, const std::vector<double>& ys, FitModel model) {
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("fit needs at least two distinct x values");

  FitResult fit;
  fit.model = model;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points_used = xs.size();
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

}  // namespace

std::string to_string(FitModel model) {
  switch (model) {
    case FitModel::log_linear_chi: return "log-linear-chi";
    case FitModel::log_linear_time: return "log-linear-t";
    case FitModel::linear_n: return "linear-N";
    case FitModel::linear: return "linear";
  }
  return "unknown";
}

double FitResult::amplitude() const { return std::exp(intercept); }

std::vector<DeviationPoint> compute_deviations(std::span<const AveragedPoint> table, SweepAxis axis) {
  if (table.size() < 2) throw std::invalid_argument("deviations need at least two averaged points");

  // Curve key: N for the chi axis, (N, cap) for the time axis.
  using Key = std::pair<std::size_t, std::size_t>;
  auto key_of = [axis](const AveragedPoint& p) {
    return Key{p.n_sites, axis == SweepAxis::time ? p.chi : std::size_t{0}};
  };
  std::map<Key, double> sat_m1;
  for (const auto& p : table) {
    if (axis == SweepAxis::time && !p.t) throw std::invalid_argument("time-axis deviations need time-series rows");
    auto [it, inserted] = sat_m1.try_emplace(key_of(p), p.m1_bar);
    if (!inserted) it->second = std::max(it->second, p.m1_bar);
  }

  std::vector<DeviationPoint> out;
  out.reserve(table.size());
  for (const auto& p : table) {
    DeviationPoint d;
    d.n_sites = p.n_sites;
    d.chi = p.chi;
    d.t = p.t;
    d.x = axis == SweepAxis::time ? static_cast<double>(*p.t) : static_cast<double>(p.chi);
    d.sat_m1 = sat_m1.at(key_of(p));
    d.sat_m2 = m2_haar(p.n_sites);
    d.delta_m1 = std::abs(d.sat_m1 - p.m1_bar);
    d.delta_m2 = std::abs(d.sat_m2 - p.m2_bar);
    d.sem1 = p.sem1;
    d.sem2 = p.sem2;
    out.push_back(d);
  }
  return out;
}

FitResult fit_log_linear(std::span<const FitPoint> points, double noise_floor, FitModel model) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    if (p.y > noise_floor && p.y > kNoiseFloorSigmas * p.y_err && p.y > 0.0 && std::isfinite(p.x)) {
      xs.push_back(p.x);
      ys.push_back(std::log(p.y));
    }
  }
  if (xs.size() < 3) throw FitError("fewer than 3 usable points");
  return ordinary_least_squares(xs, ys, model);
}

FitResult fit_linear(std::span<const FitPoint> points, FitModel model) {
  if (points.size() < 3) throw FitError("fewer than 3 usable points");
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  return ordinary_least_squares(xs, ys, model);
}

FitResult fit_beta_vs_n(std::span<const FitPoint> betas) {
  if (betas.size() < 3) throw FitError("fewer than 3 system sizes");
  return fit_linear(betas, FitModel::linear_n);
}

std::optional<double> saturation_time(std::span<const SeriesPoint> series, double target, double epsilon) {
  if (series.empty()) throw std::invalid_argument("saturation_time needs a nonempty series");
  std::vector<SeriesPoint> sorted(series.begin(), series.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  std::optional<double> t_sat;
  for (std::size_t i = sorted.size(); i-- > 0;) {
    if (std::abs(sorted[i].value - target) > epsilon) break;
    t_sat = sorted[i].t;
  }
  return t_sat;
}

std::vector<FitRow> fit_deviation_curves(std::span<const DeviationPoint> deviations, SweepAxis axis) {
  using Key = std::pair<std::size_t, std::size_t>;
  std::map<Key, std::vector<const DeviationPoint*>> curves;
  for (const auto& d : deviations) {
    const Key key{d.n_sites, axis == SweepAxis::time ? d.chi : std::size_t{0}};
    curves[key].push_back(&d);
  }

  const FitModel model = axis == SweepAxis::chi ? FitModel::log_linear_chi : FitModel::log_linear_time;
  const std::string kind = axis == SweepAxis::chi ? "alpha" : "gamma";
  std::vector<FitRow> rows;
  std::map<int, std::vector<FitPoint>> betas;
  for (int rank : {1, 2}) {
    for (const auto& [key, curve] : curves) {
      std::vector<FitPoint> pts;
      const DeviationPoint* last = curve.front();
      for (const auto* d : curve) {
        if (axis == SweepAxis::chi && d->chi == kInfiniteChi) continue;
        pts.push_back(rank == 1 ? FitPoint{d->x, d->delta_m1, d->sem1} : FitPoint{d->x, d->delta_m2, d->sem2});
        if (d->x > last->x) last = d;
      }
      const double floor =
          axis == SweepAxis::time ? kPlateauFloorFactor * (rank == 1 ? last->delta_m1 : last->delta_m2) : 0.0;
      FitRow row;
      row.kind = kind;
      row.rank = rank;
      row.n_sites = key.first;
      row.chi = key.second;
      try {
        row.fit = fit_log_linear(pts, floor, model);
        if (axis == SweepAxis::chi) {
          betas[rank].push_back({static_cast<double>(key.first), row.fit->amplitude(), 0.0});
        }
      } catch (const FitError& e) {
        row.note = e.what();
      }
      rows.push_back(std::move(row));
    }
  }

  if (axis == SweepAxis::chi) {
    for (int rank : {1, 2}) {
      FitRow row;
      row.kind = "lambda";
      row.rank = rank;
      try {
        row.fit = fit_beta_vs_n(betas[rank]);
      } catch (const FitError& e) {
        row.note = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace magicmps
