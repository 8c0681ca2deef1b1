#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace simcamp::mm1 {

struct SimConfig {
  double lambda = 0;        // arrival rate, customers/s
  double mu = 0;            // service rate, customers/s
  std::uint64_t customers = 0;
  std::uint64_t seed = 0;
};

struct SimResult {
  double mean_sojourn = 0;
  double mean_queue_wait = 0;
  double throughput = 0;          // served / horizon
  std::uint64_t served = 0;
  double horizon = 0;             // time of the last departure
  double time_avg_in_system = 0;  // integral of N(t) dt over the horizon
  double mean_interarrival = 0;
  // Per-customer sojourn samples in departure order; times are the
  // departure instants and are non-decreasing.
  std::vector<double> sample_times;
  std::vector<double> sojourns;
};

/// Single-server FIFO queue with exponential interarrival (rate lambda)
/// and service (rate mu) times drawn from one SplitMix64 stream by
/// inverse transform. Deterministic for a given config: same input,
/// same result, bit for bit. An unstable load (lambda >= mu) is allowed;
/// the run still terminates after `customers` arrivals have been served.
SimResult simulate(const SimConfig& cfg);

/// Analytic M/M/1 steady-state mean sojourn time 1/(mu - lambda).
/// Requires lambda < mu.
double analytic_mean_sojourn(double lambda, double mu);

/// Analytic M/M/1 steady-state mean queueing delay rho/(mu - lambda).
double analytic_mean_queue_wait(double lambda, double mu);

/// Scalar result file in the SCA subset: a run line, the seed attr,
/// one itervar per factor of `run_key` (when nonempty), and the four
/// scalars (meanSojourn, meanQueueWait, throughput, servedCount) under
/// module Net.sink.
void write_sca(std::ostream& out, const SimResult& result, const std::string& run_id,
               const std::string& run_key, std::uint64_t seed);

/// Vector result file in the VEC subset: one declaration and one
/// (time, sojourn) sample line per served customer.
void write_vec(std::ostream& out, const SimResult& result);

}  // namespace simcamp::mm1
