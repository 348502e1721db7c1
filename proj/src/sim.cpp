#include "rpm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "rpm/dyck.hpp"
#include "rpm/errors.hpp"

namespace rpm {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

struct Moments {
  double mean = 0, var = 0, stderr_mean = 0, stderr_var = 0;
};

Moments batch_moments(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  Moments m;
  for (double v : x) m.mean += v;
  m.mean /= n;
  double m2 = 0, m4 = 0;
  for (double v : x) {
    const double d = (v - m.mean) * (v - m.mean);
    m2 += d;
    m4 += d * d;
  }
  m.var = m2 / (n - 1);
  m4 /= n;
  m.stderr_mean = std::sqrt(m.var / n);
  m.stderr_var = std::sqrt(std::max(0.0, m4 - (m2 / n) * (m2 / n)) / n);
  return m;
}

}  // namespace

TrajectoryStats run_trajectory(int width, double t_max, std::uint64_t seed, const SimOptions& opt,
                               std::uint64_t stream) {
  check_width(width);
  if (!(t_max > 0)) throw InvalidArgument("run_trajectory: t_max must be positive");
  if (!(opt.batch_length > 0)) throw InvalidArgument("run_trajectory: batch length must be positive");
  if (opt.track_occupation && width > kMaxEnumerationWidth)
    throw ResourceLimit("occupation tracking needs L <= " + std::to_string(kMaxEnumerationWidth));

  TrajectoryStats s;
  s.width = width;
  s.seed = seed;
  s.stream = stream;
  s.batch_length = opt.batch_length;
  if (opt.track_occupation) s.occupation.assign(state_count(width), 0.0);

  std::mt19937_64 rng = make_engine(seed, stream);
  std::exponential_distribution<double> wait(static_cast<double>(width));
  std::uniform_int_distribution<int> pick(1, width);

  DyckConfig c = substrate(width);
  std::uint64_t state = opt.track_occupation ? rank(c).index : 0;
  double t = 0, batch_end = opt.batch_length;
  std::uint64_t batch_tiles = 0, batch_global = 0;

  auto spend = [&](double dt) {
    if (opt.track_occupation) s.occupation[state] += dt;
  };

  for (;;) {
    const double next = t + wait(rng);
    // close every batch boundary crossed before the next event
    while (batch_end <= std::min(next, t_max)) {
      spend(batch_end - t);
      t = batch_end;
      s.tiles_batches.push_back(static_cast<double>(batch_tiles));
      s.global_batches.push_back(static_cast<double>(batch_global));
      batch_tiles = batch_global = 0;
      batch_end += opt.batch_length;
    }
    if (next > t_max) {
      spend(t_max - t);
      break;
    }
    spend(next - t);
    t = next;
    ++s.n_events;
    DropOutcome d = drop_tile(c, pick(rng));
    switch (d.kind) {
      case DropKind::Reflection:
        continue;
      case DropKind::Adsorption:
        ++s.n_adsorbed;
        break;
      default:
        ++s.n_avalanches;
        s.n_tiles += static_cast<std::uint64_t>(d.tiles_removed);
        batch_tiles += static_cast<std::uint64_t>(d.tiles_removed);
        if (d.global) {
          ++s.n_global;
          ++batch_global;
        }
    }
    c = std::move(d.next);
    if (opt.track_occupation) state = rank(c).index;
  }
  s.t_total = t_max;
  s.final_heights.assign(c.heights().begin(), c.heights().end());
  return s;
}

std::vector<TrajectoryStats> run_ensemble(int width, double t_max, std::uint64_t seed, int trajectories, int threads,
                                          const SimOptions& opt) {
  if (trajectories < 1) throw InvalidArgument("run_ensemble: need at least one trajectory");
  check_width(width);
  const int workers =
      std::clamp(threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()), 1, trajectories);
  std::vector<TrajectoryStats> out(static_cast<std::size_t>(trajectories));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int k = w; k < trajectories; k += workers)
            out[static_cast<std::size_t>(k)] = run_trajectory(width, t_max, seed, opt, static_cast<std::uint64_t>(k));
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

EnsembleEstimate estimate_cumulants(std::span<const TrajectoryStats> ensemble) {
  if (ensemble.empty()) throw InvalidArgument("estimate_cumulants: empty ensemble");
  const double tb = ensemble.front().batch_length;
  std::vector<double> tiles, global;
  EnsembleEstimate e;
  for (const TrajectoryStats& s : ensemble) {
    if (s.batch_length != tb) throw InvalidArgument("estimate_cumulants: trajectories use different batch lengths");
    tiles.insert(tiles.end(), s.tiles_batches.begin(), s.tiles_batches.end());
    global.insert(global.end(), s.global_batches.begin(), s.global_batches.end());
    e.total_time += s.t_total;
  }
  e.batches = tiles.size();
  if (e.batches < kMinBatches)
    throw InvalidArgument("estimate_cumulants: " + std::to_string(e.batches) + " batches, need at least " +
                          std::to_string(kMinBatches));
  auto fill = [tb](const std::vector<double>& x) {
    const Moments m = batch_moments(x);
    return CumulantEstimate{m.mean / tb, m.var / tb, m.stderr_mean / tb, m.stderr_var / tb};
  };
  e.tiles = fill(tiles);
  e.global = fill(global);
  return e;
}

std::vector<double> occupation_fractions(std::span<const TrajectoryStats> ensemble) {
  if (ensemble.empty() || ensemble.front().occupation.empty())
    throw InvalidArgument("occupation_fractions: trajectories were run without occupation tracking");
  std::vector<double> total(ensemble.front().occupation.size(), 0.0);
  double time = 0;
  for (const TrajectoryStats& s : ensemble) {
    if (s.occupation.size() != total.size()) throw InvalidArgument("occupation_fractions: mixed widths");
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += s.occupation[k];
    time += s.t_total;
  }
  for (double& v : total) v /= time;
  return total;
}

}  // namespace rpm
