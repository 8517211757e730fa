#pragma once

#include <rigidplan/measurement.hpp>
#include <rigidplan/rigidity.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rigidplan {

struct PrunedEntry {
  RssMeasurement measurement;
  double priority = 0.0;
  std::uint64_t sequence = 0;  // insertion order
};

/// Capacity-bounded measurement store. Entries are kept in nonincreasing
/// priority order; among equal priorities newer entries come first, so the
/// back of the list is always the next eviction candidate.
class PrunedHistory {
 public:
  explicit PrunedHistory(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return retained_.size(); }
  bool empty() const { return retained_.empty(); }
  const std::vector<PrunedEntry>& retained() const { return retained_; }
  std::size_t evicted_count() const { return evicted_; }

  /// Inserts unconditionally, then evicts the minimum-priority entry if the
  /// capacity is exceeded. Returns the evicted entry.
  std::optional<PrunedEntry> insert(const RssMeasurement& m, double priority);

  /// Retained measurement points in insertion order.
  std::vector<UavVertex> vertices() const;

 private:
  std::size_t capacity_;
  std::vector<PrunedEntry> retained_;
  std::uint64_t next_sequence_ = 0;
  std::size_t evicted_ = 0;
};

struct PruneContext {
  Vec2 target_estimate = Vec2::Zero();
  std::uint64_t seed = 0;  // randomized-SVD seed for the priority evaluations
};

/// Drop in the rigidity value when vertex `which` is removed from the
/// framework over `vertices`, evaluated with randomized SVD. A vertex whose
/// position repeats another one contributes nothing, so its priority is 0.
double leave_one_out_priority(std::span<const UavVertex> vertices, std::size_t which, const PruneContext& ctx);

/// Scores the new measurement against the retained set, inserts it and
/// evicts the lowest-priority entry when over capacity.
PrunedHistory prune(PrunedHistory history, const RssMeasurement& m, const PruneContext& ctx);

}  // namespace rigidplan
