// Saturated ring: simulated throughput against n(T-D)/(nT+D) as TTRT grows.

#include <cstdio>

#include "fddi/mac_sim.hpp"

int main() {
  using namespace fddi::mac;
  const std::size_t n = 10;
  const double latency = 1000.0;

  TrafficModel load;
  for (std::size_t s = 0; s < n; ++s) {
    TrafficSource src;
    src.station = s;
    src.saturated = true;
    src.frame_bytes = 64;
    load.sources.push_back(src);
  }
  load.warmup_us = 20'000;

  std::printf("%8s %10s %10s\n", "T/D", "simulated", "formula");
  for (double ratio : {1.1, 1.5, 2.0, 4.0, 10.0, 40.0}) {
    RingConfig cfg;
    cfg.n_stations = n;
    cfg.ring_latency_us = latency;
    cfg.ttrt_us = ratio * latency;
    const auto m = run_simulation(cfg, load, 400'000, 7);
    std::printf("%8.1f %10.4f %10.4f\n", ratio, m.throughput, theoretical_efficiency(n, cfg.ttrt_us, latency));
  }
}
