#include "simcamp/mm1.hpp"

#include <cmath>
#include <deque>
#include <ostream>
#include <stdexcept>

#include "simcamp/factor_space.hpp"
#include "simcamp/rng.hpp"
#include "simcamp/value.hpp"

namespace simcamp::mm1 {

namespace {

double exponential(SplitMix64& g, double rate) { return -std::log(g.next_unit()) / rate; }

}  // namespace

double analytic_mean_sojourn(double lambda, double mu) {
  if (lambda >= mu) throw std::invalid_argument("no steady state: lambda >= mu");
  return 1.0 / (mu - lambda);
}

double analytic_mean_queue_wait(double lambda, double mu) {
  if (lambda >= mu) throw std::invalid_argument("no steady state: lambda >= mu");
  return (lambda / mu) / (mu - lambda);
}

SimResult simulate(const SimConfig& cfg) {
  if (cfg.lambda <= 0 || cfg.mu <= 0) throw std::invalid_argument("rates must be positive");
  if (cfg.customers < 1) throw std::invalid_argument("need at least one customer");

  SplitMix64 gen{cfg.seed};
  SimResult res;
  res.sample_times.reserve(cfg.customers);
  res.sojourns.reserve(cfg.customers);

  const double inf = std::numeric_limits<double>::infinity();
  std::deque<double> waiting;  // arrival times of queued customers
  double in_service_arrival = 0;
  bool server_busy = false;

  double now = 0;
  double area = 0;  // integral of N(t) dt
  std::uint64_t in_system = 0;
  std::uint64_t arrivals = 0;
  std::uint64_t served = 0;
  double next_arrival = exponential(gen, cfg.lambda);
  double sum_interarrival = next_arrival;
  double next_departure = inf;
  double sum_sojourn = 0;
  double sum_wait = 0;

  while (served < cfg.customers) {
    if (arrivals < cfg.customers && next_arrival <= next_departure) {
      area += static_cast<double>(in_system) * (next_arrival - now);
      now = next_arrival;
      ++arrivals;
      ++in_system;
      if (!server_busy) {
        server_busy = true;
        in_service_arrival = now;
        sum_wait += 0;
        next_departure = now + exponential(gen, cfg.mu);
      } else {
        waiting.push_back(now);
      }
      if (arrivals < cfg.customers) {
        double gap = exponential(gen, cfg.lambda);
        sum_interarrival += gap;
        next_arrival = now + gap;
      } else {
        next_arrival = inf;
      }
    } else {
      area += static_cast<double>(in_system) * (next_departure - now);
      now = next_departure;
      ++served;
      --in_system;
      double sojourn = now - in_service_arrival;
      sum_sojourn += sojourn;
      res.sample_times.push_back(now);
      res.sojourns.push_back(sojourn);
      if (!waiting.empty()) {
        in_service_arrival = waiting.front();
        waiting.pop_front();
        sum_wait += now - in_service_arrival;
        next_departure = now + exponential(gen, cfg.mu);
      } else {
        server_busy = false;
        next_departure = inf;
      }
    }
  }

  res.served = served;
  res.horizon = now;
  res.mean_sojourn = sum_sojourn / static_cast<double>(served);
  res.mean_queue_wait = sum_wait / static_cast<double>(served);
  res.throughput = static_cast<double>(served) / now;
  res.time_avg_in_system = area / now;
  res.mean_interarrival = sum_interarrival / static_cast<double>(arrivals);
  return res;
}

void write_sca(std::ostream& out, const SimResult& result, const std::string& run_id,
               const std::string& run_key, std::uint64_t seed) {
  out << "version 3\n";
  out << "run " << run_id << "\n";
  out << "attr seed " << seed << "\n";
  if (!run_key.empty()) {
    RunKeyParts parts = parse_run_key(run_key);
    for (const auto& [name, value] : parts.factors)
      out << "itervar " << name << " " << value << "\n";
  }
  out << "scalar Net.sink meanSojourn " << canonical_double(result.mean_sojourn) << "\n";
  out << "scalar Net.sink meanQueueWait " << canonical_double(result.mean_queue_wait) << "\n";
  out << "scalar Net.sink throughput " << canonical_double(result.throughput) << "\n";
  out << "scalar Net.sink servedCount " << result.served << "\n";
}

void write_vec(std::ostream& out, const SimResult& result) {
  out << "vector 0 Net.sink sojourn TV\n";
  for (std::size_t i = 0; i < result.sojourns.size(); ++i)
    out << "0 " << canonical_double(result.sample_times[i]) << " "
        << canonical_double(result.sojourns[i]) << "\n";
}

}  // namespace simcamp::mm1
