#pragma once

// Discrete-event simulation of the FDDI timed-token MAC.
//
// The token walks the ring station by station; each hop costs a fixed share
// of the ring latency D. Every station runs the standard token rotation
// timer (TRT) with a late flag:
//   - TRT expiring while the flag is clear sets the flag and restarts TRT;
//   - a token arriving with the flag clear is early: the token holding
//     time is T - TRT and TRT restarts;
//   - a token arriving with the flag set is late: the flag clears, TRT
//     keeps running and no asynchronous frame may be sent.
// Synchronous frames are sent on every visit up to the station's
// allocation. Asynchronous frames are sent only while the remaining holding
// time covers the whole frame.
//
// Time is kept in integer nanoseconds; one byte takes 80 ns at 100 Mbps.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fddi/error.hpp"
#include "fddi/event_queue.hpp"

namespace fddi::mac {

using Time = std::chrono::nanoseconds;

inline constexpr double kRingBitRate = 100e6;
inline constexpr Time kByteTime{80};
inline constexpr std::size_t kMaxStations = 500;
inline constexpr double kMaxCableKm = 100.0;

// Model constants for deriving D from the physical ring (not used by the
// formula checks, which take D directly).
inline constexpr double kFiberDelayUsPerKm = 5.085;
inline constexpr double kStationDelayUs = 0.6;

inline Time from_us(double us) { return Time{static_cast<std::int64_t>(std::llround(us * 1000.0))}; }
inline double to_us(Time t) { return static_cast<double>(t.count()) / 1000.0; }
inline Time frame_time(std::size_t bytes) { return kByteTime * static_cast<std::int64_t>(bytes); }

inline double ring_latency_from_cable(double cable_km, std::size_t n_stations,
                                      double station_delay_us = kStationDelayUs) {
  return cable_km * kFiberDelayUsPerKm + static_cast<double>(n_stations) * station_delay_us;
}

enum class Stripping { source, destination };

struct RingConfig {
  std::size_t n_stations = 1;
  double ring_latency_us = 0;   // D: zero-load token rotation time
  double ttrt_us = 0;           // T
  std::vector<double> sync_allocation_us;  // per station per visit; empty = none
  Stripping stripping = Stripping::source;
  double total_cable_km = 0;
  bool compliance = true;       // enforce the 500-station / 100 km limits

  double sync_allocation(std::size_t station) const {
    return station < sync_allocation_us.size() ? sync_allocation_us[station] : 0.0;
  }
};

struct Violation {
  enum class Kind {
    NoStations,
    NegativeLatency,
    TtrtBelowLatency,
    SyncAllocationSize,
    NegativeSyncAllocation,
    SyncOverAllocated,
    StationCount,
    TotalCable,
  };
  Kind kind;
  std::string detail;
};

inline const char* to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::NoStations: return "NoStations";
    case Violation::Kind::NegativeLatency: return "NegativeLatency";
    case Violation::Kind::TtrtBelowLatency: return "TtrtBelowLatency";
    case Violation::Kind::SyncAllocationSize: return "SyncAllocationSize";
    case Violation::Kind::NegativeSyncAllocation: return "NegativeSyncAllocation";
    case Violation::Kind::SyncOverAllocated: return "SyncOverAllocated";
    case Violation::Kind::StationCount: return "StationCount";
    case Violation::Kind::TotalCable: return "TotalCable";
  }
  return "?";
}

inline std::vector<Violation> validate_config(const RingConfig& cfg) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  auto num = [](double v) { return std::to_string(v); };
  if (cfg.n_stations < 1) out.push_back({K::NoStations, "ring needs at least one station"});
  if (cfg.ring_latency_us < 0) out.push_back({K::NegativeLatency, "D=" + num(cfg.ring_latency_us)});
  if (cfg.ttrt_us < cfg.ring_latency_us)
    out.push_back({K::TtrtBelowLatency, "T=" + num(cfg.ttrt_us) + " us < D=" + num(cfg.ring_latency_us) + " us"});
  if (!cfg.sync_allocation_us.empty() && cfg.sync_allocation_us.size() != cfg.n_stations)
    out.push_back({K::SyncAllocationSize, std::to_string(cfg.sync_allocation_us.size()) + " allocations for " +
                                              std::to_string(cfg.n_stations) + " stations"});
  double sum = 0;
  for (double a : cfg.sync_allocation_us) {
    if (a < 0) out.push_back({K::NegativeSyncAllocation, num(a)});
    sum += a;
  }
  if (sum > 0 && sum > cfg.ttrt_us - cfg.ring_latency_us + 1e-9)
    out.push_back({K::SyncOverAllocated, "sum " + num(sum) + " us > T - D = " + num(cfg.ttrt_us - cfg.ring_latency_us) + " us"});
  if (cfg.compliance) {
    if (cfg.n_stations > kMaxStations)
      out.push_back({K::StationCount, std::to_string(cfg.n_stations) + " stations > " + std::to_string(kMaxStations)});
    if (cfg.total_cable_km > kMaxCableKm)
      out.push_back({K::TotalCable, num(cfg.total_cable_km) + " km > " + num(kMaxCableKm) + " km"});
  }
  return out;
}

// Maximum relative throughput of the timed-token ring under saturation:
// n(T - D) / (nT + D).
inline double theoretical_efficiency(std::size_t n, double ttrt, double latency) {
  if (n < 1) throw Error("DomainError", "n must be at least 1");
  if (latency < 0 || ttrt < latency) throw Error("DomainError", "requires T >= D >= 0");
  if (latency == 0) return 1.0;
  const double nd = static_cast<double>(n);
  return nd * (ttrt - latency) / (nd * ttrt + latency);
}

// --- Traffic -----------------------------------------------------------------

enum class TrafficClass { sync, async };
enum class ArrivalProcess { poisson, periodic };

struct TrafficSource {
  std::size_t station = 0;
  TrafficClass cls = TrafficClass::async;
  bool saturated = false;      // always has a frame ready
  double rate_mbps = 0;        // offered load when not saturated
  std::size_t frame_bytes = 500;
  std::optional<std::size_t> destination;  // default: next station downstream
  ArrivalProcess arrivals = ArrivalProcess::poisson;
};

struct TrafficModel {
  std::vector<TrafficSource> sources;
  double probe_rate_per_ms = 0;  // zero-length access-delay probes, never transmitted
  double warmup_us = 0;          // statistics ignore everything before this
};

struct RunOptions {
  bool record_trace = false;
  bool keep_probe_samples = false;
};

struct TokenVisit {
  std::size_t station = 0;
  Time arrival{};
  Time release{};
  bool early = false;
  Time sync_time{};
  Time async_time{};
  friend bool operator==(const TokenVisit&, const TokenVisit&) = default;
};

struct ClassCounters {
  std::uint64_t frames_sent = 0;
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
  std::uint64_t bytes_in_flight = 0;
  std::uint64_t delay_samples = 0;
  double mean_delay_us = 0;  // arrival to start of transmission, non-saturated sources
  double max_delay_us = 0;
  friend bool operator==(const ClassCounters&, const ClassCounters&) = default;
};

struct SimMetrics {
  double throughput = 0;  // fraction of 100 Mbps over the measurement window
  double sync_throughput = 0;
  double async_throughput = 0;
  double mean_access_delay_us = 0;  // probes: arrival until the token next reaches the station
  double max_access_delay_us = 0;
  std::uint64_t probes = 0;
  double max_sync_gap_us = 0;  // longest interval between token visits at a station with a sync allocation
  double mean_rotation_us = 0;
  double max_rotation_us = 0;
  std::uint64_t token_visits = 0;
  std::uint64_t late_tokens = 0;
  std::uint64_t trt_overflows = 0;  // TRT expired twice without a token; real rings would claim
  ClassCounters sync;
  ClassCounters async;
  std::vector<double> access_delay_samples_us;
  std::vector<TokenVisit> trace;
  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

namespace detail {

// Hop latencies summing exactly to D.
inline std::vector<Time> hop_latencies(std::size_t n, Time ring_latency) {
  std::vector<Time> hops(n);
  const auto total = ring_latency.count();
  const auto nn = static_cast<std::int64_t>(n);
  for (std::int64_t i = 0; i < nn; ++i) hops[static_cast<std::size_t>(i)] = Time{(i + 1) * total / nn - i * total / nn};
  return hops;
}

class SourceState {
 public:
  SourceState(const TrafficSource& src, std::uint64_t seed, std::size_t index)
      : src_(src), ft_(frame_time(src.frame_bytes)) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), 0x5EEDu};
    rng_.seed(seq);
    if (!src.saturated) {
      if (!(src.rate_mbps > 0)) throw Error("BadTraffic", "non-saturated source needs a positive rate");
      mean_gap_ns_ = static_cast<double>(src.frame_bytes) * 8.0 / (src.rate_mbps * 1e6) * 1e9;
      std::uniform_real_distribution<double> phase(0.0, mean_gap_ns_);
      next_ = src.arrivals == ArrivalProcess::periodic ? Time{static_cast<std::int64_t>(phase(rng_))} : draw_gap();
    }
  }

  const TrafficSource& spec() const { return src_; }
  Time frame_duration() const { return ft_; }

  void refill(Time now) {
    if (src_.saturated) return;
    while (next_ <= now) {
      queue_.push_back(next_);
      next_ += src_.arrivals == ArrivalProcess::periodic
                   ? Time{static_cast<std::int64_t>(std::llround(mean_gap_ns_))}
                   : draw_gap();
    }
  }

  bool has_frame() const { return src_.saturated || !queue_.empty(); }

  // Arrival time of the frame taken, or nothing for saturated sources.
  std::optional<Time> take() {
    if (src_.saturated) return std::nullopt;
    Time t = queue_.front();
    queue_.pop_front();
    return t;
  }

 private:
  Time draw_gap() {
    std::exponential_distribution<double> gap(1.0 / mean_gap_ns_);
    return Time{std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(gap(rng_))))};
  }

  TrafficSource src_;
  Time ft_;
  std::mt19937_64 rng_;
  double mean_gap_ns_ = 0;
  Time next_{};
  std::deque<Time> queue_;
};

struct Delivery {
  std::uint64_t bytes;
  TrafficClass cls;
};

struct DelayAccumulator {
  double sum = 0;
  void add(ClassCounters& c, double us) {
    ++c.delay_samples;
    sum += us;
    c.max_delay_us = std::max(c.max_delay_us, us);
    c.mean_delay_us = sum / static_cast<double>(c.delay_samples);
  }
};

}  // namespace detail

inline SimMetrics run_simulation(const RingConfig& cfg, const TrafficModel& load, double duration_us,
                                 std::uint64_t seed, const RunOptions& opts = {}) {
  if (auto v = validate_config(cfg); !v.empty())
    throw Error("InvalidConfig", std::string(to_string(v.front().kind)) + ": " + v.front().detail);
  const std::size_t n = cfg.n_stations;
  for (const auto& s : load.sources) {
    if (s.station >= n) throw Error("BadTraffic", "source station " + std::to_string(s.station) + " outside ring");
    if (s.destination && *s.destination >= n)
      throw Error("BadTraffic", "destination " + std::to_string(*s.destination) + " outside ring");
    if (s.frame_bytes == 0) throw Error("BadTraffic", "frame size must be positive");
  }

  const Time ttrt = from_us(cfg.ttrt_us);
  const Time latency = from_us(cfg.ring_latency_us);
  const Time end = from_us(duration_us);
  const Time warmup = from_us(load.warmup_us);
  const auto hops = detail::hop_latencies(n, latency);

  // Propagation from station s to station d (d == s: a full rotation).
  auto propagation = [&](std::size_t s, std::size_t d) {
    Time t{};
    std::size_t i = s;
    do {
      t += hops[i];
      i = (i + 1) % n;
    } while (i != d);
    return t;
  };

  std::vector<std::vector<detail::SourceState>> sources(n);
  for (std::size_t i = 0; i < load.sources.size(); ++i)
    sources[load.sources[i].station].emplace_back(load.sources[i], seed, i);

  // Probes, pre-drawn per station in arrival order.
  std::vector<std::deque<Time>> probes(n);
  if (load.probe_rate_per_ms > 0) {
    std::mt19937_64 rng;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x9A0BEu};
    rng.seed(seq);
    std::exponential_distribution<double> gap(load.probe_rate_per_ms / 1e6);  // per ns
    std::uniform_int_distribution<std::size_t> where(0, n - 1);
    double t = static_cast<double>(warmup.count());
    for (;;) {
      t += gap(rng);
      if (t >= static_cast<double>(end.count())) break;
      probes[where(rng)].push_back(Time{static_cast<std::int64_t>(t)});
    }
  }

  struct StationTimers {
    Time trt_start{};
    bool late = false;
    std::optional<Time> last_arrival;
  };
  std::vector<StationTimers> timers(n);

  SimMetrics m;
  detail::DelayAccumulator sync_delay, async_delay;
  double access_sum = 0;
  double rotation_sum = 0;
  std::uint64_t rotation_samples = 0;
  Time sync_busy{}, async_busy{};

  auto window_overlap = [&](Time a, Time b) {
    const Time lo = std::max(a, warmup), hi = std::min(b, end);
    return hi > lo ? hi - lo : Time{};
  };

  enum Kind : std::uint8_t { kDelivery = 0, kToken = 1 };
  struct Payload {
    detail::Delivery delivery{};
  };
  EventQueue<Time, Payload> events;
  events.push(Time{}, 0, kToken, {});

  auto counters = [&](TrafficClass c) -> ClassCounters& { return c == TrafficClass::sync ? m.sync : m.async; };

  auto send_frames = [&](std::size_t st, detail::SourceState& src, Time& now, Time budget, Time& used,
                         detail::DelayAccumulator& acc) {
    const Time ft = src.frame_duration();
    const auto& spec = src.spec();
    ClassCounters& cc = counters(spec.cls);
    const std::size_t dst = spec.destination.value_or((st + 1) % n);
    const Time prop = propagation(st, dst);
    if (spec.saturated) {
      if (ft > budget - used) return;
      const auto k = (budget - used) / ft;
      const Time start = now;
      now += ft * k;
      used += ft * k;
      cc.frames_sent += static_cast<std::uint64_t>(k);
      cc.bytes_sent += static_cast<std::uint64_t>(k) * spec.frame_bytes;
      (spec.cls == TrafficClass::sync ? sync_busy : async_busy) += window_overlap(start, now);
      // Batches are delivered as at most two events: the frames that reach
      // dst by the end of the run, and the rest.
      const auto bytes = static_cast<std::uint64_t>(spec.frame_bytes);
      const auto first_arrival = start + ft + prop;
      const std::int64_t on_time =
          end < first_arrival ? 0 : std::min<std::int64_t>(k, (end - first_arrival) / ft + 1);
      if (on_time > 0)
        events.push(start + ft * on_time + prop, static_cast<std::uint32_t>(dst), kDelivery,
                    {{bytes * static_cast<std::uint64_t>(on_time), spec.cls}});
      if (on_time < k)
        events.push(start + ft * k + prop, static_cast<std::uint32_t>(dst), kDelivery,
                    {{bytes * static_cast<std::uint64_t>(k - on_time), spec.cls}});
      return;
    }
    for (;;) {
      src.refill(now);
      if (!src.has_frame() || ft > budget - used) return;
      const auto arrived = src.take();
      if (arrived && *arrived >= warmup) acc.add(cc, to_us(now - *arrived));
      const Time start = now;
      now += ft;
      used += ft;
      ++cc.frames_sent;
      cc.bytes_sent += spec.frame_bytes;
      (spec.cls == TrafficClass::sync ? sync_busy : async_busy) += window_overlap(start, now);
      events.push(now + prop, static_cast<std::uint32_t>(dst), kDelivery,
                  {{static_cast<std::uint64_t>(spec.frame_bytes), spec.cls}});
    }
  };

  while (!events.empty() && events.top().time <= end) {
    auto ev = events.pop();
    if (ev.kind == kDelivery) {
      counters(ev.payload.delivery.cls).bytes_received += ev.payload.delivery.bytes;
      continue;
    }

    const std::size_t st = ev.station;
    Time now = ev.time;
    auto& tm = timers[st];

    // Token rotation timer.
    while (now - tm.trt_start >= ttrt && ttrt > Time{}) {
      if (tm.late) ++m.trt_overflows;
      tm.late = true;
      tm.trt_start += ttrt;
    }
    Time holding{};
    const bool early = !tm.late;
    if (early) {
      holding = ttrt - (now - tm.trt_start);
      tm.trt_start = now;
    } else {
      tm.late = false;
    }

    if (tm.last_arrival && now >= warmup) {
      const double rot = to_us(now - *tm.last_arrival);
      rotation_sum += rot;
      ++rotation_samples;
      m.max_rotation_us = std::max(m.max_rotation_us, rot);
      if (cfg.sync_allocation(st) > 0) m.max_sync_gap_us = std::max(m.max_sync_gap_us, rot);
    }
    tm.last_arrival = now;
    if (now >= warmup) {
      ++m.token_visits;
      if (!early) ++m.late_tokens;
    }

    auto& pq = probes[st];
    while (!pq.empty() && pq.front() <= now) {
      const double d = to_us(now - pq.front());
      pq.pop_front();
      ++m.probes;
      access_sum += d;
      m.max_access_delay_us = std::max(m.max_access_delay_us, d);
      if (opts.keep_probe_samples) m.access_delay_samples_us.push_back(d);
    }

    TokenVisit visit{st, now, now, early, {}, {}};

    const Time sync_budget = from_us(cfg.sync_allocation(st));
    Time sync_used{};
    for (auto& src : sources[st])
      if (src.spec().cls == TrafficClass::sync) send_frames(st, src, now, sync_budget, sync_used, sync_delay);
    visit.sync_time = sync_used;

    Time async_used{};
    if (early && holding > Time{})
      for (auto& src : sources[st])
        if (src.spec().cls == TrafficClass::async) send_frames(st, src, now, holding, async_used, async_delay);
    visit.async_time = async_used;

    visit.release = now;
    if (opts.record_trace) m.trace.push_back(visit);
    const std::size_t next = (st + 1) % n;
    events.push(now + hops[st], static_cast<std::uint32_t>(next), kToken, {});
  }

  while (!events.empty()) {
    auto ev = events.pop();
    if (ev.kind == kDelivery) counters(ev.payload.delivery.cls).bytes_in_flight += ev.payload.delivery.bytes;
  }

  const double window = to_us(end - warmup);
  if (window > 0) {
    m.sync_throughput = to_us(sync_busy) / window;
    m.async_throughput = to_us(async_busy) / window;
    m.throughput = m.sync_throughput + m.async_throughput;
  }
  if (m.probes > 0) m.mean_access_delay_us = access_sum / static_cast<double>(m.probes);
  if (rotation_samples > 0) m.mean_rotation_us = rotation_sum / static_cast<double>(rotation_samples);
  return m;
}

// --- Spatial reuse -------------------------------------------------------------

struct Flow {
  std::size_t source = 0;
  std::size_t destination = 0;
};

struct ReuseResult {
  double aggregate_throughput = 0;  // multiples of one link's 100 Mbps
  std::vector<double> per_flow;
};

// Saturated flows on a ring without a token: a source may insert a frame
// whenever every link the frame will cross is free when it gets there.
// Under source stripping a frame circulates the whole ring back to its
// source, so frames never overlap on a link and the aggregate stays at or
// below 1. Under destination stripping a frame only occupies the links
// between source and destination, so disjoint flows run concurrently.
// Contention goes to the source whose frame can start first, then to the
// lower flow index.
inline ReuseResult spatial_reuse_throughput(const RingConfig& cfg, std::span<const Flow> flows,
                                            std::size_t frame_bytes, double duration_us) {
  const std::size_t n = cfg.n_stations;
  if (n < 2) throw Error("DomainError", "spatial reuse needs at least two stations");
  if (frame_bytes == 0) throw Error("DomainError", "frame size must be positive");
  for (const auto& f : flows)
    if (f.source >= n || f.destination >= n || f.source == f.destination)
      throw Error("BadTraffic", "flow endpoints must be distinct stations on the ring");

  const auto hops = detail::hop_latencies(n, from_us(cfg.ring_latency_us));
  const Time ft = frame_time(frame_bytes);
  const Time end = from_us(duration_us);

  struct Path {
    std::vector<std::size_t> links;
    std::vector<Time> offsets;  // when the frame's first bit enters each link, relative to start
  };
  std::vector<Path> paths;
  for (const auto& f : flows) {
    Path p;
    std::size_t at = f.source;
    Time off{};
    const std::size_t stop = cfg.stripping == Stripping::source ? f.source : f.destination;
    do {
      p.links.push_back(at);
      p.offsets.push_back(off);
      off += hops[at];
      at = (at + 1) % n;
    } while (at != stop);
    paths.push_back(std::move(p));
  }

  struct Interval {
    Time begin, end;
  };
  std::vector<std::vector<Interval>> busy(n);
  std::vector<Time> ready(flows.size(), Time{});
  std::vector<std::uint64_t> sent(flows.size(), 0);

  for (;;) {
    std::size_t f = 0;
    for (std::size_t i = 1; i < flows.size(); ++i)
      if (ready[i] < ready[f]) f = i;
    if (flows.empty() || ready[f] + ft > end) break;

    const Time floor_time = ready[f];
    for (auto& link : busy)
      std::erase_if(link, [&](const Interval& iv) { return iv.end <= floor_time; });

    Time start = ready[f];
    Time pushed = start;
    for (std::size_t j = 0; j < paths[f].links.size(); ++j) {
      const Time a = start + paths[f].offsets[j], b = a + ft;
      for (const auto& iv : busy[paths[f].links[j]])
        if (iv.begin < b && a < iv.end) pushed = std::max(pushed, iv.end - paths[f].offsets[j]);
    }
    if (pushed != start) {
      ready[f] = pushed;
      continue;
    }
    for (std::size_t j = 0; j < paths[f].links.size(); ++j) {
      const Time a = start + paths[f].offsets[j];
      busy[paths[f].links[j]].push_back({a, a + ft});
    }
    ++sent[f];
    ready[f] = start + ft;
  }

  ReuseResult r;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const double share = static_cast<double>(sent[i]) * to_us(ft) / duration_us;
    r.per_flow.push_back(share);
    r.aggregate_throughput += share;
  }
  return r;
}

}  // namespace fddi::mac
