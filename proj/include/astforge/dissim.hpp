#pragma once

#include <span>
#include <vector>

#include "astforge/trajectory.hpp"
#include "astforge/types.hpp"

namespace astforge::dissim {

// Which agents contribute position series to trajectory comparisons.
enum class Agents { lead_car, all };

struct DissimConfig {
  int n_segments = 10;
  Agents agents = Agents::lead_car;
};

// Splits `points` into n contiguous segments (earlier segments take the
// spare points when the length is not divisible) and returns each segment's
// centroid. Sequences shorter than n repeat boundary samples so the result
// always has exactly n entries. Throws DomainError on empty input or n < 1.
std::vector<Point2> normalize(std::span<const Point2> points, int n);

// Mean Euclidean distance between the n segment representatives of `a` and
// `b`. Symmetric, non-negative, zero for identical sequences, and invariant
// under a common translation.
double dissimilarity(std::span<const Point2> a, std::span<const Point2> b, int n);

// Dissimilarity of two episodes: lead-car series only, or averaged over all
// agents (which requires matching agent counts).
double trajectory_dissimilarity(const Trajectory& a, const Trajectory& b,
                                const DissimConfig& cfg);

// Keeps the top-k failure episodes ordered by descending total reward.
// Ties keep the earlier insertion first; overflow evicts the lowest entry.
class FailureArchive {
 public:
  explicit FailureArchive(int capacity);  // capacity >= 1

  // Takes only failure episodes; throws DomainError otherwise.
  void insert(Trajectory traj);

  const std::vector<Trajectory>& entries() const { return entries_; }
  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }

 private:
  int capacity_;
  std::vector<Trajectory> entries_;
};

// Average dissimilarity of `traj` to the archived episodes, using at most
// the first `k` entries. Returns 0 for an empty archive.
double mean_dissimilarity(const Trajectory& traj, const FailureArchive& archive, int k,
                          const DissimConfig& cfg);

}  // namespace astforge::dissim
