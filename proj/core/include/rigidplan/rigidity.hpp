#pragma once

#include <rigidplan/svd.hpp>
#include <rigidplan/types.hpp>

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace rigidplan {

/// A UAV measurement point: where a UAV was (or would be) when it sampled RSS.
struct UavVertex {
  Vec2 position = Vec2::Zero();
  double epoch = 0.0;
  int uav_id = 0;
};

/// Bar between two vertex indices, stored with a < b.
struct Edge {
  Index a = 0;
  Index b = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Bar framework over the UAV measurement points plus the target.
///
/// Vertex indices 0..u-1 are the UAV vertices in insertion order; index u is
/// the target. Every UAV vertex has one bar to the target and bars to every
/// other UAV vertex, which stands in for the known relative geometry of the
/// UAV positions.
struct Framework {
  static constexpr int kDimension = 2;

  std::vector<UavVertex> uav_vertices;
  Vec2 target = Vec2::Zero();
  std::vector<Edge> edges;  // sorted by (a, b)

  Index vertex_count() const { return static_cast<Index>(uav_vertices.size()) + 1; }
  Index target_index() const { return static_cast<Index>(uav_vertices.size()); }
  const Vec2& position(Index v) const {
    return v == target_index() ? target : uav_vertices[static_cast<std::size_t>(v)].position;
  }
};

/// Builds the framework from a UAV history. Samples whose position exactly
/// repeats an earlier one map onto the existing vertex, so repeated
/// measurements never create duplicate bars.
Framework build_framework(std::span<const UavVertex> uav_history, const Vec2& target_estimate);

/// Appends a UAV vertex (no de-duplication) with its target bar and bars to
/// all existing UAV vertices, keeping edges sorted.
void append_uav_vertex(Framework& f, const UavVertex& vertex);

struct RigidityMatrix {
  Eigen::MatrixXd entries;           // m × 2|V|
  std::vector<Index> row_edge_map;   // row → index into Framework::edges

  Index rows() const { return entries.rows(); }
  Index cols() const { return entries.cols(); }
};

RigidityMatrix build_rigidity_matrix(const Framework& f);

/// Rewrites the rows of `R` for every bar incident to `vertex` after its
/// position changed in `f`. The topology of `f` must be the one `R` was built from.
void refresh_vertex_rows(RigidityMatrix& R, const Framework& f, Index vertex);

/// 1-based position of the objective in the descending singular values:
/// d|V| − d(d+1)/2, i.e. 2|V| − 3 in the plane.
Index rigidity_index(const Framework& f);
Index rigidity_index(Index vertex_count);

/// True when the rigidity index addresses an existing singular value.
bool is_solvable(const Framework& f);

/// Singular value of the rigidity matrix at the rigidity index.
double rigidity_value(const Framework& f, const SvdBackend& backend);
SmoothEstimate rigidity_value(const RigidityMatrix& R, Index index, const SvdBackend& backend);

}  // namespace rigidplan
