#include <rigidplan/pruning.hpp>

#include <algorithm>

namespace rigidplan {

PrunedHistory::PrunedHistory(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw Error("pruning capacity must be positive");
  retained_.reserve(capacity_ + 1);
}

std::optional<PrunedEntry> PrunedHistory::insert(const RssMeasurement& m, double priority) {
  PrunedEntry entry{m, priority, next_sequence_++};
  // First position whose entry ranks strictly below the new one.
  auto pos = std::find_if(retained_.begin(), retained_.end(), [&](const PrunedEntry& e) {
    return e.priority < entry.priority || (e.priority == entry.priority && e.sequence < entry.sequence);
  });
  retained_.insert(pos, entry);

  if (retained_.size() <= capacity_) return std::nullopt;
  PrunedEntry evicted = retained_.back();
  retained_.pop_back();
  ++evicted_;
  return evicted;
}

std::vector<UavVertex> PrunedHistory::vertices() const {
  std::vector<const PrunedEntry*> order;
  order.reserve(retained_.size());
  for (const auto& e : retained_) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const PrunedEntry* a, const PrunedEntry* b) { return a->sequence < b->sequence; });

  std::vector<UavVertex> out;
  out.reserve(order.size());
  for (const auto* e : order) out.push_back({e->measurement.position, e->measurement.epoch, e->measurement.uav_id});
  return out;
}

double leave_one_out_priority(std::span<const UavVertex> vertices, std::size_t which, const PruneContext& ctx) {
  if (which >= vertices.size()) throw Error("leave-one-out index out of range");
  const backend::Randomized randomized{ctx.seed};

  const double with = rigidity_value(build_framework(vertices, ctx.target_estimate), randomized);

  std::vector<UavVertex> rest;
  rest.reserve(vertices.size() - 1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i != which) rest.push_back(vertices[i]);
  }
  const double without = rest.empty() ? 0.0 : rigidity_value(build_framework(rest, ctx.target_estimate), randomized);
  return with - without;
}

PrunedHistory prune(PrunedHistory history, const RssMeasurement& m, const PruneContext& ctx) {
  std::vector<UavVertex> vertices = history.vertices();
  vertices.push_back({m.position, m.epoch, m.uav_id});
  const double priority = leave_one_out_priority(vertices, vertices.size() - 1, ctx);
  history.insert(m, priority);
  return history;
}

}  // namespace rigidplan
