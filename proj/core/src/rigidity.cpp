#include <rigidplan/rigidity.hpp>

#include <algorithm>
#include <string>
#include <utility>

namespace rigidplan {

namespace {

// Complete graph over the UAV vertices plus one bar from each to the target
// (the last vertex). Emitted directly in (a, b) order.
std::vector<Edge> complete_edges(Index uav_count) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(uav_count + uav_count * (uav_count - 1) / 2));
  for (Index a = 0; a < uav_count; ++a) {
    for (Index b = a + 1; b <= uav_count; ++b) edges.push_back({a, b});
  }
  return edges;
}

void write_row(Eigen::MatrixXd& M, Index row, const Framework& f, const Edge& e) {
  const Vec2 diff = f.position(e.a) - f.position(e.b);
  M(row, 2 * e.a) = diff.x();
  M(row, 2 * e.a + 1) = diff.y();
  M(row, 2 * e.b) = -diff.x();
  M(row, 2 * e.b + 1) = -diff.y();
}

}  // namespace

Framework build_framework(std::span<const UavVertex> uav_history, const Vec2& target_estimate) {
  if (uav_history.empty()) throw Error("empty framework");
  if (!is_finite(target_estimate)) throw Error("target estimate is not finite");

  Framework f;
  f.target = target_estimate;
  f.uav_vertices.reserve(uav_history.size());
  for (const auto& v : uav_history) {
    if (!is_finite(v.position)) throw Error("UAV vertex position is not finite");
    const bool repeat = std::any_of(f.uav_vertices.begin(), f.uav_vertices.end(),
                                    [&](const UavVertex& kept) { return kept.position == v.position; });
    if (!repeat) f.uav_vertices.push_back(v);
  }
  f.edges = complete_edges(static_cast<Index>(f.uav_vertices.size()));
  return f;
}

void append_uav_vertex(Framework& f, const UavVertex& vertex) {
  if (!is_finite(vertex.position)) throw Error("UAV vertex position is not finite");
  f.uav_vertices.push_back(vertex);
  f.edges = complete_edges(static_cast<Index>(f.uav_vertices.size()));
}

RigidityMatrix build_rigidity_matrix(const Framework& f) {
  const auto m = static_cast<Index>(f.edges.size());
  const Index vertices = f.vertex_count();
  auto key = [&](Index i) {
    const Edge& e = f.edges[static_cast<std::size_t>(i)];
    return std::pair{std::min(e.a, e.b), std::max(e.a, e.b)};
  };

  RigidityMatrix R;
  R.row_edge_map.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    const Edge& e = f.edges[static_cast<std::size_t>(i)];
    if (e.a == e.b || e.a < 0 || e.b < 0 || e.a >= vertices || e.b >= vertices) {
      throw Error("edge " + std::to_string(i) + " does not join two distinct vertices");
    }
    R.row_edge_map[static_cast<std::size_t>(i)] = i;
  }
  std::stable_sort(R.row_edge_map.begin(), R.row_edge_map.end(), [&](Index x, Index y) { return key(x) < key(y); });
  for (std::size_t r = 1; r < R.row_edge_map.size(); ++r) {
    if (key(R.row_edge_map[r - 1]) == key(R.row_edge_map[r])) throw Error("duplicate edge in framework");
  }

  R.entries = Eigen::MatrixXd::Zero(m, Framework::kDimension * vertices);
  for (Index row = 0; row < m; ++row) {
    write_row(R.entries, row, f, f.edges[static_cast<std::size_t>(R.row_edge_map[static_cast<std::size_t>(row)])]);
  }
  return R;
}

void refresh_vertex_rows(RigidityMatrix& R, const Framework& f, Index vertex) {
  if (R.cols() != Framework::kDimension * f.vertex_count() || R.rows() != static_cast<Index>(f.edges.size())) {
    throw Error("rigidity matrix does not match framework topology");
  }
  for (Index row = 0; row < R.rows(); ++row) {
    const Edge& e = f.edges[static_cast<std::size_t>(R.row_edge_map[static_cast<std::size_t>(row)])];
    if (e.a == vertex || e.b == vertex) write_row(R.entries, row, f, e);
  }
}

Index rigidity_index(Index vertex_count) {
  constexpr Index d = Framework::kDimension;
  return d * vertex_count - d * (d + 1) / 2;
}

Index rigidity_index(const Framework& f) { return rigidity_index(f.vertex_count()); }

bool is_solvable(const Framework& f) {
  const Index index = rigidity_index(f);
  const Index m = static_cast<Index>(f.edges.size());
  const Index n = Framework::kDimension * f.vertex_count();
  return index >= 1 && index <= std::min(m, n);
}

SmoothEstimate rigidity_value(const RigidityMatrix& R, Index index, const SvdBackend& backend) {
  if (index < 1 || index > std::min(R.rows(), R.cols())) throw Error("underdetermined framework");
  SmoothEstimate est = singular_value_at(R.entries, index, backend);
  est.value = std::max(est.value, 0.0);
  return est;
}

double rigidity_value(const Framework& f, const SvdBackend& backend) {
  if (!is_solvable(f)) throw Error("underdetermined framework");
  return rigidity_value(build_rigidity_matrix(f), rigidity_index(f), backend).value;
}

}  // namespace rigidplan
