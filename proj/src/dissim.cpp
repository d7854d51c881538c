#include "astforge/dissim.hpp"

#include <algorithm>
#include <cmath>

#include "astforge/errors.hpp"

namespace astforge::dissim {

std::vector<Point2> normalize(std::span<const Point2> points, int n) {
  if (n < 1) throw DomainError("normalize: segment count must be at least 1");
  if (points.empty()) throw DomainError("normalize: empty point sequence");

  const std::size_t len = points.size();
  const std::size_t nn = static_cast<std::size_t>(n);
  std::vector<Point2> reps(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    // Ceil partition: segment i covers [ceil(i*len/n), ceil((i+1)*len/n)),
    // which hands the spare points to the earliest segments.
    std::size_t lo = (i * len + nn - 1) / nn;
    std::size_t hi = ((i + 1) * len + nn - 1) / nn;
    if (lo >= hi) {
      // Fewer samples than segments: fall back to the nearest real sample.
      reps[i] = points[std::min(lo, len - 1)];
      continue;
    }
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      sx += points[k].x;
      sy += points[k].y;
    }
    double count = static_cast<double>(hi - lo);
    reps[i] = {sx / count, sy / count};
  }
  return reps;
}

double dissimilarity(std::span<const Point2> a, std::span<const Point2> b, int n) {
  auto ra = normalize(a, n);
  auto rb = normalize(b, n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += std::hypot(ra[i].x - rb[i].x, ra[i].y - rb[i].y);
  }
  return total / static_cast<double>(n);
}

double trajectory_dissimilarity(const Trajectory& a, const Trajectory& b,
                                const DissimConfig& cfg) {
  if (cfg.agents == Agents::lead_car) {
    return dissimilarity(a.agent_points(0), b.agent_points(0), cfg.n_segments);
  }
  if (a.num_agents() != b.num_agents()) {
    throw InterfaceError("trajectory_dissimilarity: agent counts differ");
  }
  double total = 0.0;
  for (int i = 0; i < a.num_agents(); ++i) {
    total += dissimilarity(a.agent_points(i), b.agent_points(i), cfg.n_segments);
  }
  return total / static_cast<double>(a.num_agents());
}

FailureArchive::FailureArchive(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw DomainError("archive capacity must be at least 1");
  entries_.reserve(static_cast<std::size_t>(capacity) + 1);
}

void FailureArchive::insert(Trajectory traj) {
  if (!traj.failure_flag) {
    throw DomainError("archive only accepts failure episodes");
  }
  auto pos = std::find_if(entries_.begin(), entries_.end(), [&](const Trajectory& e) {
    return e.total_reward < traj.total_reward;
  });
  entries_.insert(pos, std::move(traj));
  if (static_cast<int>(entries_.size()) > capacity_) {
    entries_.pop_back();
  }
}

double mean_dissimilarity(const Trajectory& traj, const FailureArchive& archive, int k,
                          const DissimConfig& cfg) {
  int mu = std::min(k, archive.size());
  if (mu <= 0) return 0.0;
  double total = 0.0;
  for (int i = 0; i < mu; ++i) {
    total += trajectory_dissimilarity(traj, archive.entries()[i], cfg);
  }
  return total / static_cast<double>(mu);
}

}  // namespace astforge::dissim
