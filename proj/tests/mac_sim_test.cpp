#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fddi/event_queue.hpp"
#include "fddi/mac_sim.hpp"

using namespace fddi;
using namespace fddi::mac;

namespace {

RingConfig ring(std::size_t n, double latency, double ttrt) {
  RingConfig c;
  c.n_stations = n;
  c.ring_latency_us = latency;
  c.ttrt_us = ttrt;
  return c;
}

TrafficModel saturated(std::size_t n, std::size_t frame_bytes, double warmup_us) {
  TrafficModel t;
  for (std::size_t s = 0; s < n; ++s) {
    TrafficSource src;
    src.station = s;
    src.saturated = true;
    src.frame_bytes = frame_bytes;
    t.sources.push_back(src);
  }
  t.warmup_us = warmup_us;
  return t;
}

}  // namespace

TEST(EventQueue, TotalOrder) {
  EventQueue<int, int> q;
  q.push(5, 1, 0, 10);
  q.push(5, 0, 1, 11);
  q.push(5, 0, 0, 12);
  q.push(3, 9, 9, 13);
  q.push(5, 0, 0, 14);
  std::vector<int> order;
  while (!q.empty()) order.push_back(q.pop().payload);
  EXPECT_EQ(order, (std::vector<int>{13, 12, 14, 11, 10}));
}

TEST(Config, Violations) {
  auto kinds = [](const RingConfig& c) {
    std::vector<Violation::Kind> k;
    for (const auto& v : validate_config(c)) k.push_back(v.kind);
    return k;
  };
  using K = Violation::Kind;
  EXPECT_TRUE(kinds(ring(10, 100, 200)).empty());
  EXPECT_EQ(kinds(ring(10, 100, 50)), std::vector<K>{K::TtrtBelowLatency});
  EXPECT_EQ(kinds(ring(501, 100, 200)), std::vector<K>{K::StationCount});
  auto c = ring(2, 100, 200);
  c.sync_allocation_us = {60, 60};
  EXPECT_EQ(kinds(c), std::vector<K>{K::SyncOverAllocated});
  c.sync_allocation_us = {60};
  EXPECT_EQ(kinds(c), std::vector<K>{K::SyncAllocationSize});
  c = ring(2, 100, 200);
  c.total_cable_km = 101;
  EXPECT_EQ(kinds(c), std::vector<K>{K::TotalCable});
  c.compliance = false;
  EXPECT_TRUE(kinds(c).empty());
  EXPECT_THROW(run_simulation(ring(10, 100, 50), {}, 1000, 1), Error);
}

TEST(Config, LatencyFromCable) {
  EXPECT_NEAR(ring_latency_from_cable(100, 500), 100 * kFiberDelayUsPerKm + 500 * kStationDelayUs, 1e-9);
}

TEST(Efficiency, Formula) {
  EXPECT_DOUBLE_EQ(theoretical_efficiency(10, 4000, 1000), 10.0 * 3000 / 41000);
  EXPECT_DOUBLE_EQ(theoretical_efficiency(1, 1000, 1000), 0.0);
  EXPECT_THROW(theoretical_efficiency(0, 10, 1), Error);
}

TEST(Simulation, SaturatedMatchesFormula) {
  for (std::size_t n : {3ul, 20ul}) {
    const auto cfg = ring(n, 1000, 3000);
    const auto m = run_simulation(cfg, saturated(n, 80, 30'000), 600'000, 1);
    const double expect = theoretical_efficiency(n, 3000, 1000);
    EXPECT_NEAR(m.throughput / expect, 1.0, 0.02) << n;
  }
}

TEST(Simulation, ThroughputMonotoneInTtrt) {
  double prev = 0;
  for (double t : {1200.0, 1500.0, 2000.0, 4000.0, 8000.0, 20000.0}) {
    const auto m = run_simulation(ring(8, 1000, t), saturated(8, 100, 50'000), 800'000, 4);
    EXPECT_GE(m.throughput, prev - 1e-3) << t;
    prev = m.throughput;
  }
}

TEST(Simulation, Deterministic) {
  auto cfg = ring(6, 500, 3000);
  cfg.sync_allocation_us = {200, 0, 0, 100, 0, 0};
  TrafficModel t;
  t.sources.push_back({0, TrafficClass::sync, false, 5, 500, std::nullopt, ArrivalProcess::periodic});
  t.sources.push_back({3, TrafficClass::sync, false, 2, 300, 5, ArrivalProcess::poisson});
  t.sources.push_back({1, TrafficClass::async, false, 40, 1500, std::nullopt, ArrivalProcess::poisson});
  t.sources.push_back({4, TrafficClass::async, true, 0, 4500, std::nullopt, ArrivalProcess::poisson});
  t.probe_rate_per_ms = 2;
  RunOptions o{true, true};
  const auto a = run_simulation(cfg, t, 200'000, 99, o);
  const auto b = run_simulation(cfg, t, 200'000, 99, o);
  EXPECT_EQ(a, b);
  const auto c = run_simulation(cfg, t, 200'000, 100, o);
  EXPECT_NE(a, c);
}

TEST(Simulation, ConservationAndTokenUniqueness) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng() % 12;
    const double d = 100 + static_cast<double>(rng() % 2000);
    auto cfg = ring(n, d, d * (1.2 + static_cast<double>(rng() % 50) / 10));
    TrafficModel t;
    for (std::size_t s = 0; s < n; ++s) {
      TrafficSource src;
      src.station = s;
      src.saturated = rng() % 4 == 0;
      src.rate_mbps = 5 + static_cast<double>(rng() % 30);
      src.frame_bytes = 50 + rng() % 4000;
      src.destination = rng() % n;
      t.sources.push_back(src);
    }
    const auto m = run_simulation(cfg, t, 100'000, trial, {true, false});
    for (const auto* c : {&m.sync, &m.async}) { EXPECT_EQ(c->bytes_received + c->bytes_in_flight, c->bytes_sent); }

    ASSERT_FALSE(m.trace.empty());
    EXPECT_EQ(m.trace.front().station, 0u);
    for (std::size_t i = 1; i < m.trace.size(); ++i) {
      const auto& p = m.trace[i - 1];
      const auto& q = m.trace[i];
      EXPECT_EQ(q.station, (p.station + 1) % n);
      EXPECT_GT(q.arrival, p.release);  // one token: next visit starts after the last one ends
      EXPECT_EQ(p.release - p.arrival, p.sync_time + p.async_time);
      if (!p.early) { EXPECT_EQ(p.async_time, Time{}); }
    }
  }
}

TEST(Simulation, ZeroLoadProbesAreUniformOverRotation) {
  // Kolmogorov-Smirnov against U(0, D), alpha = 0.01.
  const double d = 1000;
  TrafficModel t;
  t.probe_rate_per_ms = 40;
  const auto m = run_simulation(ring(16, d, 4 * d), t, 300'000, 5, {false, true});
  auto s = m.access_delay_samples_us;
  ASSERT_GE(s.size(), 5000u);
  std::sort(s.begin(), s.end());
  double ks = 0;
  const double n = static_cast<double>(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = std::clamp(s[i] / d, 0.0, 1.0);
    ks = std::max({ks, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
  }
  EXPECT_LT(ks, 1.628 / std::sqrt(n));
  EXPECT_NEAR(m.mean_access_delay_us, d / 2, 0.05 * d / 2);
  EXPECT_LE(m.max_access_delay_us, d);
}

TEST(Simulation, SyncGapWithinTwiceTtrt) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    const double d = 50 + static_cast<double>(rng() % 3000);
    const double ttrt = d * (1.1 + static_cast<double>(rng() % 90) / 10);
    auto cfg = ring(n, d, ttrt);
    cfg.sync_allocation_us.assign(n, 0);
    TrafficModel t;
    double room = ttrt - d;
    for (std::size_t s = 0; s < n; ++s) {
      TrafficSource src;
      src.station = s;
      src.frame_bytes = 20 + rng() % 2000;
      if (rng() % 3 == 0 && room > 0) {
        const double a = std::min(room, room * static_cast<double>(1 + rng() % 50) / 100);
        cfg.sync_allocation_us[s] = a;
        room -= a;
        src.cls = TrafficClass::sync;
        src.saturated = true;
      } else {
        src.cls = TrafficClass::async;
        src.saturated = rng() % 2 == 0;
        src.rate_mbps = 1 + static_cast<double>(rng() % 40);
      }
      t.sources.push_back(src);
    }
    const auto m = run_simulation(cfg, t, 40 * ttrt, trial);
    EXPECT_LE(m.max_sync_gap_us, 2 * ttrt + 1e-6) << "trial " << trial;
    EXPECT_LE(m.max_rotation_us, 2 * ttrt + 1e-6) << "trial " << trial;
  }
}

TEST(SpatialReuse, DestinationStrippingReusesLinks) {
  auto cfg = ring(8, 100, 1000);
  const std::vector<Flow> pairs{{0, 1}, {2, 3}, {4, 5}, {6, 7}};
  cfg.stripping = Stripping::source;
  const auto src = spatial_reuse_throughput(cfg, pairs, 500, 100'000);
  cfg.stripping = Stripping::destination;
  const auto dst = spatial_reuse_throughput(cfg, pairs, 500, 100'000);
  EXPECT_LE(src.aggregate_throughput, 1.0 + 1e-9);
  EXPECT_GT(dst.aggregate_throughput, 3.9);
  EXPECT_LE(dst.aggregate_throughput, 4.0 + 1e-9);

  const std::vector<Flow> one{{0, 1}};
  cfg.stripping = Stripping::source;
  const double a = spatial_reuse_throughput(cfg, one, 500, 100'000).aggregate_throughput;
  cfg.stripping = Stripping::destination;
  const double b = spatial_reuse_throughput(cfg, one, 500, 100'000).aggregate_throughput;
  EXPECT_NEAR(a, b, 1e-9);

  const std::vector<Flow> self{{2, 2}};
  EXPECT_THROW(spatial_reuse_throughput(cfg, self, 500, 1000), Error);
}

TEST(Simulation, WorkedExampleSyncVariation) {
  // 10 us ring, TTRT 165 (taken as us): visits every 10 us when idle,
  // never more than 330 us apart under saturation.
  auto cfg = ring(10, 10, 165);
  cfg.sync_allocation_us.assign(10, 0);
  cfg.sync_allocation_us[0] = 20;
  const auto idle = run_simulation(cfg, {}, 20'000, 1);
  EXPECT_DOUBLE_EQ(idle.max_sync_gap_us, 10.0);

  auto busy = saturated(10, 64, 1000);
  busy.sources[0].cls = TrafficClass::sync;
  const auto heavy = run_simulation(cfg, busy, 50'000, 1);
  EXPECT_GT(heavy.max_sync_gap_us, 100.0);
  EXPECT_LE(heavy.max_sync_gap_us, 330.0);
}
