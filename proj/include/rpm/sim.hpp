#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rpm {

struct SimOptions {
  double batch_length = 1e3;
  /// Accumulate time spent in each state (requires an enumerable width).
  bool track_occupation = false;
};

/// One continuous-time trajectory started from the substrate.
struct TrajectoryStats {
  int width = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double t_total = 0;
  std::uint64_t n_tiles = 0;   // tiles counter, dropped tile included
  std::uint64_t n_global = 0;  // global avalanches
  std::uint64_t n_adsorbed = 0;
  std::uint64_t n_avalanches = 0;  // local and global
  std::uint64_t n_events = 0;
  double batch_length = 0;
  std::vector<double> tiles_batches;   // counter increments per complete batch
  std::vector<double> global_batches;
  std::vector<double> occupation;  // time per colex state index, when tracked
  std::vector<int> final_heights;

  bool operator==(const TrajectoryStats&) const = default;
};

/// Gillespie simulation up to time t_max. The random stream is seeded from
/// the pair (seed, stream), so distinct pairs give distinct streams.
TrajectoryStats run_trajectory(int width, double t_max, std::uint64_t seed, const SimOptions& opt = {},
                               std::uint64_t stream = 0);

/// Trajectory k uses stream k of `seed`; results are ordered by k whatever
/// the number of threads (0 = hardware concurrency).
std::vector<TrajectoryStats> run_ensemble(int width, double t_max, std::uint64_t seed, int trajectories,
                                          int threads = 0, const SimOptions& opt = {});

struct CumulantEstimate {
  double c1 = 0;
  double c2 = 0;
  double stderr1 = 0;
  double stderr2 = 0;
};

struct EnsembleEstimate {
  CumulantEstimate tiles;
  CumulantEstimate global;
  std::size_t batches = 0;
  double total_time = 0;
};

inline constexpr std::size_t kMinBatches = 16;

/// Batch-means estimates of the mean rate c1 and variance rate c2, pooling
/// the batches of every trajectory. Throws InvalidArgument below kMinBatches.
EnsembleEstimate estimate_cumulants(std::span<const TrajectoryStats> ensemble);

/// Time-weighted state distribution pooled over the ensemble.
std::vector<double> occupation_fractions(std::span<const TrajectoryStats> ensemble);

}  // namespace rpm
