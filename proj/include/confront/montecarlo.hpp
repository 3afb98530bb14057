#pragma once

// Seeded trajectory simulation of the shutdown MDP. A second, statistical
// oracle for the closed-form values.

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "confront/mdp.hpp"
#include "confront/model.hpp"

namespace confront {

struct SimulationOptions {
  double eps_tail = 1e-9;
  long max_horizon = 1'000'000;
  unsigned threads = 1;  // does not affect results
};

class HorizonLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrajectoryStats {
  long n = 0;
  double mean = 0.0;
  double std_err = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
  long truncation_horizon = 0;
  double tail_bound = 0.0;
};

// Smallest T >= 0 with γ^T r / (1-γ) < eps_tail. Throws HorizonLimit when
// that exceeds max_horizon.
long truncation_horizon(const ModelParams& params, const SimulationOptions& options = {});

// One discounted return Σ_{t=0..T} γ^t reward_t, drawn from stream
// (seed, stream_id). Deterministic in its arguments.
double simulate_return(const ModelParams& params, Action policy_at_operational, std::uint64_t seed,
                       std::uint64_t stream_id = 0, const SimulationOptions& options = {});

// Mean and standard error over n_samples trajectories; trajectory i uses
// stream (seed, i). Bit-identical for identical inputs at any thread count.
TrajectoryStats estimate_value(const ModelParams& params, Action policy_at_operational,
                               long n_samples, std::uint64_t seed,
                               const SimulationOptions& options = {});

}  // namespace confront
