#include <rigidplan/measurement.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace rigidplan {

void RssModel::validate() const {
  if (!(ref_distance_m > 0.0)) throw Error("reference distance must be positive");
  if (!(path_loss_exponent > 0.0)) throw Error("path-loss exponent must be positive");
  if (!(shadowing_sigma_db >= 0.0)) throw Error("shadowing deviation must be non-negative");
  if (!std::isfinite(p0_dbm)) throw Error("reference power must be finite");
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a combined word
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SeedStream::SeedStream(std::uint64_t base_seed, std::uint64_t run_index, std::uint64_t purpose)
    : engine_(mix_seed(mix_seed(base_seed, run_index), purpose)) {}

double rss_mean(const RssModel& model, const Vec2& uav_pos, const Vec2& target) {
  const double range = (uav_pos - target).norm();
  if (!(range > 0.0)) throw Error("singular range");
  return model.p0_dbm - 10.0 * model.path_loss_exponent * std::log10(range / model.ref_distance_m);
}

RssMeasurement sample_rss(const RssModel& model, const Vec2& uav_pos, const Vec2& target, SeedStream& rng,
                          int uav_id, double epoch) {
  RssMeasurement m;
  m.uav_id = uav_id;
  m.position = uav_pos;
  m.epoch = epoch;
  m.rss_dbm = rss_mean(model, uav_pos, target);
  if (model.shadowing_sigma_db > 0.0) m.rss_dbm += rng.normal(0.0, model.shadowing_sigma_db);
  return m;
}

namespace {

// Residual form used by the estimator:
//   e_i = offset_i + slope · ln(max(d², d_min²))
// with offset_i = P̂_i − P0 − 10β·log10(s0) and slope = 5β / ln 10.
struct ResidualTerms {
  Eigen::ArrayXd x, y, offset;
  double slope = 0.0;
  double min_sq = 0.0;

  ResidualTerms(std::span<const RssMeasurement> ms, const RssModel& model, double min_range) {
    const auto n = static_cast<Index>(ms.size());
    x.resize(n);
    y.resize(n);
    offset.resize(n);
    const double ref_term = 10.0 * model.path_loss_exponent * std::log10(model.ref_distance_m);
    for (Index i = 0; i < n; ++i) {
      const auto& m = ms[static_cast<std::size_t>(i)];
      x(i) = m.position.x();
      y(i) = m.position.y();
      offset(i) = m.rss_dbm - model.p0_dbm - ref_term;
    }
    slope = 5.0 * model.path_loss_exponent / std::numbers::ln10;
    min_sq = min_range * min_range;
  }

  double cost(double tx, double ty) const {
    return (offset + slope * ((x - tx).square() + (y - ty).square()).max(min_sq).log()).square().sum();
  }
};

}  // namespace

double rss_cost(std::span<const RssMeasurement> measurements, const RssModel& model, const Vec2& target,
                double min_range_m) {
  return ResidualTerms(measurements, model, min_range_m).cost(target.x(), target.y());
}

namespace {

struct Refined {
  TargetEstimate estimate;
  double cost = 0.0;
};

// Gauss–Newton from `start`, accepting only non-increasing steps.
Refined gauss_newton(const ResidualTerms& terms, const Vec2& start, double start_cost, const EstimatorOptions& options) {
  Vec2 r = start;
  double cost = start_cost;
  const Index n = terms.x.size();
  for (int it = 0; it < options.max_iterations; ++it) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jte = Eigen::Vector2d::Zero();
    for (Index i = 0; i < n; ++i) {
      const Vec2 diff(r.x() - terms.x(i), r.y() - terms.y(i));
      const double sq = diff.squaredNorm();
      const double e = terms.offset(i) + terms.slope * std::log(std::max(sq, terms.min_sq));
      // d e / d r = slope · 2 (r − x_i) / d², zero inside the clamp radius
      const Eigen::Vector2d g = sq > terms.min_sq ? Eigen::Vector2d(2.0 * terms.slope * diff / sq)
                                                  : Eigen::Vector2d::Zero();
      jtj += g * g.transpose();
      jte += g * e;
    }
    const Eigen::Vector2d step = -jtj.ldlt().solve(jte);
    if (!step.allFinite() || jtj.determinant() <= 0.0) return {{r, false}, cost};

    double t = 1.0;
    bool accepted = false;
    Vec2 trial = r;
    double trial_cost = cost;
    while (t > 1e-12) {
      trial = r + t * step;
      trial_cost = terms.cost(trial.x(), trial.y());
      if (trial_cost <= cost) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    // No descent along the Gauss–Newton direction: stationary to round-off.
    if (!accepted) return {{r, true}, cost};
    const double moved = (trial - r).norm();
    r = trial;
    cost = trial_cost;
    if (moved < options.step_tolerance_m) return {{r, true}, cost};
  }
  return {{r, false}, cost};
}

}  // namespace

TargetEstimate estimate_target(std::span<const RssMeasurement> measurements, const RssModel& model,
                               const EstimatorOptions& options) {
  if (measurements.size() < 3) throw Error("underdetermined");
  if (options.refine_starts < 1) throw Error("at least one refinement start is required");
  model.validate();
  const ResidualTerms terms(measurements, model, options.min_range_m);

  // Stage 1: grid over the UAV bounding box inflated by the margin.
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  for (const auto& m : measurements) {
    lo_x = std::min(lo_x, m.position.x());
    hi_x = std::max(hi_x, m.position.x());
    lo_y = std::min(lo_y, m.position.y());
    hi_y = std::max(hi_y, m.position.y());
  }
  lo_x -= options.grid_margin_m;
  lo_y -= options.grid_margin_m;
  hi_x += options.grid_margin_m;
  hi_y += options.grid_margin_m;
  const auto nx = static_cast<Index>(std::floor((hi_x - lo_x) / options.grid_cell_m)) + 1;
  const auto ny = static_cast<Index>(std::floor((hi_y - lo_y) / options.grid_cell_m)) + 1;
  const auto node = [&](Index i, Index j) {
    return Vec2(lo_x + static_cast<double>(i) * options.grid_cell_m, lo_y + static_cast<double>(j) * options.grid_cell_m);
  };

  Eigen::MatrixXd grid(nx, ny);
  for (Index i = 0; i < nx; ++i) {
    for (Index j = 0; j < ny; ++j) {
      const Vec2 g = node(i, j);
      grid(i, j) = terms.cost(g.x(), g.y());
    }
  }

  // Stage 2: refine the lowest grid-local minima; the cost surface can hold
  // several basins narrower than a cell apart from the global one.
  std::vector<std::pair<double, Vec2>> starts;
  for (Index i = 0; i < nx; ++i) {
    for (Index j = 0; j < ny; ++j) {
      const double c = grid(i, j);
      bool minimum = true;
      for (Index di = -1; di <= 1 && minimum; ++di) {
        for (Index dj = -1; dj <= 1; ++dj) {
          const Index a = i + di, b = j + dj;
          if ((di != 0 || dj != 0) && a >= 0 && a < nx && b >= 0 && b < ny && grid(a, b) < c) {
            minimum = false;
            break;
          }
        }
      }
      if (minimum) starts.emplace_back(c, node(i, j));
    }
  }
  const auto keep = std::min<std::size_t>(starts.size(), static_cast<std::size_t>(options.refine_starts));
  std::partial_sort(starts.begin(), starts.begin() + static_cast<std::ptrdiff_t>(keep), starts.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });

  Refined best{{starts.front().second, false}, starts.front().first};
  for (std::size_t s = 0; s < keep; ++s) {
    const Refined r = gauss_newton(terms, starts[s].second, starts[s].first, options);
    if (r.cost < best.cost || s == 0) best = r;
  }
  return best.estimate;
}

}  // namespace rigidplan
