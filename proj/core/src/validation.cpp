#include <rigidplan/measurement.hpp>
#include <rigidplan/rigidity.hpp>
#include <rigidplan/svd.hpp>
#include <rigidplan/validation.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace rigidplan {

namespace {

using Rng = std::mt19937_64;

Eigen::VectorXd exact_singular_values(const Eigen::MatrixXd& m) { return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues(); }

Vec2 uniform_point(Rng& rng, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  const double x = u(rng);
  return {x, u(rng)};
}

// vertex_count includes the target.
Framework random_framework(Rng& rng, int vertex_count) {
  std::vector<UavVertex> uavs;
  for (int i = 1; i < vertex_count; ++i) uavs.push_back({uniform_point(rng, 200.0), static_cast<double>(i), 0});
  return build_framework(uavs, uniform_point(rng, 200.0));
}

Framework collinear_framework(Rng& rng, int vertex_count) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double angle = kPi * u(rng);
  const Vec2 dir(std::cos(angle), std::sin(angle));
  const Vec2 origin = uniform_point(rng, 50.0);
  std::vector<UavVertex> uavs;
  for (int i = 1; i < vertex_count; ++i) uavs.push_back({origin + 200.0 * u(rng) * dir, static_cast<double>(i), 0});
  return build_framework(uavs, origin + 200.0 * u(rng) * dir);
}

int random_vertex_count(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

}  // namespace

RankLawStats rank_law_study(int frameworks, std::uint64_t seed, int index_offset) {
  Rng rng(seed);
  RankLawStats stats;
  stats.frameworks = frameworks;
  stats.min_index_ratio = std::numeric_limits<double>::infinity();
  for (int t = 0; t < frameworks; ++t) {
    const Framework f = random_framework(rng, random_vertex_count(rng, 3, 30));
    const Eigen::VectorXd s = exact_singular_values(build_rigidity_matrix(f).entries);
    const Index idx = rigidity_index(f) + index_offset;
    const double tol = 1e-9 * s(0);
    const Index rank = (s.array() > tol).count();
    if (rank != idx) ++stats.rank_mismatches;
    const double at = idx >= 1 && idx <= s.size() ? s(idx - 1) : 0.0;
    const double next = idx < s.size() ? s(idx) : 0.0;
    stats.min_index_ratio = std::min(stats.min_index_ratio, at / s(0));
    stats.max_tail_ratio = std::max(stats.max_tail_ratio, next / s(0));

    const Framework c = collinear_framework(rng, random_vertex_count(rng, 3, 30));
    const Eigen::VectorXd sc = exact_singular_values(build_rigidity_matrix(c).entries);
    const Index cidx = rigidity_index(c) + index_offset;
    const double cat = cidx >= 1 && cidx <= sc.size() ? sc(cidx - 1) : 0.0;
    stats.max_collinear_ratio = std::max(stats.max_collinear_ratio, cat / sc(0));
  }
  return stats;
}

FidelityStats randomized_fidelity_study(int matrices, std::uint64_t seed) {
  Rng rng(seed);
  FidelityStats stats;
  stats.matrices = matrices;
  for (int t = 0; t < matrices; ++t) {
    const Framework f = random_framework(rng, random_vertex_count(rng, 3, 30));
    const RigidityMatrix R = build_rigidity_matrix(f);
    const Index idx = rigidity_index(f);
    const double exact = exact_singular_values(R.entries)(idx - 1);
    const double approx = randomized_svd(R.entries, idx, rng()).S(idx - 1);
    stats.max_relative_error = std::max(stats.max_relative_error, std::abs(approx - exact) / exact);
  }
  return stats;
}

TaylorStats smooth_taylor_study(int pairs, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  TaylorStats stats;
  stats.pairs = pairs;
  double ratio_sum = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const Framework f = random_framework(rng, random_vertex_count(rng, 4, 12));
    const Eigen::MatrixXd R0 = build_rigidity_matrix(f).entries;
    const Index j = rigidity_index(f);
    const SvdResult anchor = full_svd(R0, j);
    const Eigen::MatrixXd E = Eigen::MatrixXd::NullaryExpr(R0.rows(), R0.cols(), [&] { return normal(rng); });
    const Eigen::MatrixXd dir = E / E.norm();
    const double delta = 1e-2 * R0.norm();
    auto error = [&](double d) {
      const Eigen::MatrixXd R1 = R0 + d * dir;
      return std::abs(smooth_sv(anchor, R0, R1, j).value - exact_singular_values(R1)(j - 1));
    };
    ratio_sum += error(delta) / error(delta / 2.0);

    // Aligned perturbation of a diagonal matrix: first order is exact.
    std::uniform_real_distribution<double> u(1.0, 10.0);
    Eigen::VectorXd d(6);
    for (Index i = 0; i < d.size(); ++i) d(i) = u(rng);
    std::sort(d.begin(), d.end(), std::greater<>());
    Eigen::MatrixXd D0 = Eigen::MatrixXd::Zero(6, 8);
    D0.diagonal() = d;
    const Index jd = std::uniform_int_distribution<Index>(1, 6)(rng);
    double gap = std::numeric_limits<double>::infinity();
    if (jd > 1) gap = std::min(gap, d(jd - 2) - d(jd - 1));
    if (jd < 6) gap = std::min(gap, d(jd - 1) - d(jd));
    const double eps = 0.1 * gap;
    Eigen::MatrixXd D1 = D0;
    D1(jd - 1, jd - 1) += eps;
    const SmoothEstimate est = smooth_sv(full_svd(D0, 6), D0, D1, jd);
    stats.max_diagonal_error = std::max(stats.max_diagonal_error, std::abs(est.value - (d(jd - 1) + eps)));
  }
  stats.mean_ratio = pairs > 0 ? ratio_sum / pairs : 0.0;
  return stats;
}

EstimatorStats noiseless_estimator_study(int scenes, std::uint64_t seed) {
  Rng rng(seed);
  RssModel model;
  model.shadowing_sigma_db = 0.0;
  SeedStream unused(0);
  EstimatorStats stats;
  stats.scenes = scenes;
  for (int t = 0; t < scenes; ++t) {
    const Vec2 target = uniform_point(rng, 150.0);
    const int count = random_vertex_count(rng, 3, 8);
    std::vector<RssMeasurement> ms;
    while (static_cast<int>(ms.size()) < count) {
      const Vec2 p = uniform_point(rng, 300.0);
      if ((p - target).norm() < 1.0) continue;
      ms.push_back(sample_rss(model, p, target, unused));
      // Keep the first three points well away from collinear.
      if (ms.size() == 3) {
        const Vec2 a = ms[1].position - ms[0].position, b = ms[2].position - ms[0].position;
        if (std::abs(a.x() * b.y() - a.y() * b.x()) < 1e3) ms.pop_back();
      }
    }
    const TargetEstimate est = estimate_target(ms, model);
    stats.max_error_m = std::max(stats.max_error_m, (est.position - target).norm());
  }
  return stats;
}

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  const int scale = options.quick ? 1 : 4;
  std::vector<CheckResult> out;

  {
    const RankLawStats s = rank_law_study(50 * scale, options.seed, options.index_offset);
    const bool ok = s.rank_mismatches == 0 && s.min_index_ratio > 1e-9 && s.max_tail_ratio <= 1e-9 &&
                    s.max_collinear_ratio <= 1e-9;
    out.push_back({"rank law", ok,
                   std::to_string(s.rank_mismatches) + " rank mismatches" +
                       fmt(", min sigma_idx/sigma_1 %.3g, max sigma_idx+1/sigma_1 %.3g", s.min_index_ratio,
                           s.max_tail_ratio) +
                       fmt(", collinear %.3g", s.max_collinear_ratio)});
  }
  {
    const Eigen::MatrixXd diag = Eigen::Vector3d(3, 2, 1).asDiagonal();
    const Eigen::VectorXd s = full_svd(diag, 3).S;
    Eigen::MatrixXd row(1, 4);
    row << -3, -4, 3, 4;
    const double r = full_svd(row, 1).S(0);
    const double err = std::max((s - Eigen::Vector3d(3, 2, 1)).cwiseAbs().maxCoeff(), std::abs(r - std::sqrt(50.0)));
    out.push_back({"full svd oracles", err <= 1e-12, fmt("max error %.3g", err)});
  }
  {
    const FidelityStats s = randomized_fidelity_study(50 * scale, options.seed + 1);
    out.push_back({"randomized svd fidelity", s.max_relative_error <= 1e-6,
                   fmt("max relative error %.3g", s.max_relative_error)});
  }
  {
    const TaylorStats s = smooth_taylor_study(25 * scale, options.seed + 2);
    out.push_back({"smooth svd taylor order", s.mean_ratio >= 3.0 && s.mean_ratio <= 5.0 && s.max_diagonal_error <= 1e-12,
                   fmt("mean error ratio %.3f, diagonal error %.3g", s.mean_ratio, s.max_diagonal_error)});
  }
  {
    const EstimatorStats s = noiseless_estimator_study(10 * scale, options.seed + 3);
    out.push_back({"noiseless estimator", s.max_error_m <= 1e-3, fmt("max error %.3g m", s.max_error_m)});
  }
  return out;
}

}  // namespace rigidplan
