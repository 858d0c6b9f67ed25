#pragma once

// FDDI-II hybrid mode: the 125 us cycle, the sixteen 96-byte wideband
// channels and their packet/isochronous split, isochronous byte
// allocation, and auditing of reserved bytes in a trace of cycles.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fddi/error.hpp"

namespace fddi::hybrid {

inline constexpr std::size_t kCycleUs = 125;
inline constexpr std::size_t kPreambleBytes = 2;
inline constexpr std::size_t kCycleBodyBytes = 1560;
inline constexpr std::size_t kWbcCount = 16;
inline constexpr std::size_t kWbcBytes = 96;
inline constexpr std::size_t kWbcTotalBytes = kWbcCount * kWbcBytes;            // 1536
inline constexpr std::size_t kHeaderBytes = kCycleBodyBytes - kWbcTotalBytes;  // 24, opaque
inline constexpr std::size_t kAccountedBytes = kPreambleBytes + kCycleBodyBytes;
// 100 Mbps for 125 us is 12500 bits = 1562.5 bytes; the half byte is unused.
inline constexpr std::size_t kCycleBits = 100 * kCycleUs;
inline constexpr std::size_t kSlackBits = kCycleBits - 8 * kAccountedBytes;

static_assert(kHeaderBytes == 24);
static_assert(kSlackBits == 4);

// Bandwidth of n bytes per cycle, in kbit/s (exact).
constexpr std::int64_t bytes_per_cycle_kbps(std::size_t bytes) {
  return static_cast<std::int64_t>(bytes * 8 * 1000 / kCycleUs);
}

// 96 bytes per 125 us.
constexpr std::int64_t wbc_bandwidth_kbps() { return bytes_per_cycle_kbps(kWbcBytes); }
inline double wbc_bandwidth_mbps() { return static_cast<double>(wbc_bandwidth_kbps()) / 1000.0; }

enum class StationKind { fddi, fddi2 };

struct Station {
  int id = 0;
  StationKind kind = StationKind::fddi2;
};

// Hybrid mode needs every station on the ring to be FDDI-II capable.
inline bool can_enter_hybrid(std::span<const Station> stations) {
  if (stations.empty()) throw Error("EmptyRing", "no stations");
  return std::all_of(stations.begin(), stations.end(),
                     [](const Station& s) { return s.kind == StationKind::fddi2; });
}

enum class WbcMode { isochronous, packet };

using ModeMap = std::array<WbcMode, kWbcCount>;

inline ModeMap all_modes(WbcMode m) {
  ModeMap modes;
  modes.fill(m);
  return modes;
}

// Accepts 16 characters of I/P (case-insensitive), or a comma-separated
// list of "iso"/"isochronous"/"packet".
inline ModeMap parse_modes(const std::string& text) {
  std::vector<std::string> tokens;
  if (text.find(',') == std::string::npos && text.size() == kWbcCount) {
    for (char c : text) tokens.emplace_back(1, c);
  } else {
    std::string cur;
    for (char c : text + ",") {
      if (c == ',') {
        tokens.push_back(cur);
        cur.clear();
      } else if (c != ' ') {
        cur.push_back(c);
      }
    }
  }
  if (tokens.size() != kWbcCount)
    throw Error("BadModes", "expected 16 wideband channel modes, got " + std::to_string(tokens.size()));
  ModeMap modes;
  for (std::size_t i = 0; i < kWbcCount; ++i) {
    const auto& t = tokens[i];
    if (t == "I" || t == "i" || t == "iso" || t == "isochronous")
      modes[i] = WbcMode::isochronous;
    else if (t == "P" || t == "p" || t == "packet")
      modes[i] = WbcMode::packet;
    else
      throw Error("BadModes", "unknown mode '" + t + "' for WBC " + std::to_string(i + 1));
  }
  return modes;
}

struct ChannelRequest {
  int channel = 0;
  std::size_t bytes_per_cycle = 0;
};

struct Grant {
  int channel = 0;
  std::vector<std::uint8_t> positions;  // byte indices 0..95 within the WBC
};

struct WidebandChannel {
  std::size_t index = 0;  // 0-based; reports show index + 1
  WbcMode mode = WbcMode::isochronous;
  std::vector<Grant> grants;

  std::size_t granted_bytes() const {
    std::size_t n = 0;
    for (const auto& g : grants) n += g.positions.size();
    return n;
  }
};

struct Allocation {
  std::array<WidebandChannel, kWbcCount> wbcs;

  std::size_t isochronous_capacity() const {
    return kWbcBytes * static_cast<std::size_t>(std::count_if(
                           wbcs.begin(), wbcs.end(), [](const auto& w) { return w.mode == WbcMode::isochronous; }));
  }
  std::size_t packet_pool_bytes() const { return kWbcTotalBytes - isochronous_capacity(); }
  std::size_t granted_bytes() const {
    std::size_t n = 0;
    for (const auto& w : wbcs) n += w.granted_bytes();
    return n;
  }

  // WBC and byte position owned by each channel.
  std::map<int, std::vector<std::pair<std::size_t, std::uint8_t>>> ownership() const {
    std::map<int, std::vector<std::pair<std::size_t, std::uint8_t>>> out;
    for (const auto& w : wbcs)
      for (const auto& g : w.grants)
        for (auto p : g.positions) out[g.channel].emplace_back(w.index, p);
    return out;
  }

  std::optional<int> owner(std::size_t wbc, std::uint8_t pos) const {
    for (const auto& g : wbcs.at(wbc).grants)
      if (std::find(g.positions.begin(), g.positions.end(), pos) != g.positions.end()) return g.channel;
    return std::nullopt;
  }
};

// First-fit over isochronous WBCs in index order; a request may span WBCs.
inline Allocation allocate(const ModeMap& modes, std::span<const ChannelRequest> requests) {
  Allocation a;
  for (std::size_t i = 0; i < kWbcCount; ++i) {
    a.wbcs[i].index = i;
    a.wbcs[i].mode = modes[i];
  }
  std::size_t total = 0;
  std::set<int> seen;
  for (const auto& r : requests) {
    if (!seen.insert(r.channel).second)
      throw Error("DuplicateChannel", "channel " + std::to_string(r.channel) + " requested twice");
    total += r.bytes_per_cycle;
  }
  if (total > a.isochronous_capacity())
    throw Error("CapacityExceeded", std::to_string(total) + " isochronous bytes/cycle requested, " +
                                        std::to_string(a.isochronous_capacity()) + " available");

  std::size_t wbc = 0, pos = 0;
  auto advance_to_iso = [&] {
    while (wbc < kWbcCount && (a.wbcs[wbc].mode != WbcMode::isochronous || pos == kWbcBytes)) {
      ++wbc;
      pos = 0;
    }
  };
  for (const auto& r : requests) {
    std::size_t left = r.bytes_per_cycle;
    while (left > 0) {
      advance_to_iso();
      auto& w = a.wbcs[wbc];
      if (w.grants.empty() || w.grants.back().channel != r.channel) w.grants.push_back({r.channel, {}});
      const std::size_t take = std::min(left, kWbcBytes - pos);
      for (std::size_t k = 0; k < take; ++k) w.grants.back().positions.push_back(static_cast<std::uint8_t>(pos + k));
      pos += take;
      left -= take;
    }
  }
  return a;
}

// Offset within the 1560-byte cycle body of byte `pos` of wideband channel
// `wbc`: the opaque header first, then 96 cyclic groups of one byte from
// each WBC in index order.
constexpr std::size_t cycle_offset(std::size_t wbc, std::size_t pos) { return kHeaderBytes + pos * kWbcCount + wbc; }

// --- Cycle traces --------------------------------------------------------------

inline constexpr int kPacketWriter = -1;
inline constexpr std::uint8_t kIdleFill = 0x00;

struct ByteFill {
  std::optional<int> writer;  // channel id, kPacketWriter, or nothing (idle)
  std::uint8_t value = kIdleFill;
  friend bool operator==(const ByteFill&, const ByteFill&) = default;
};

struct CycleRecord {
  std::array<std::array<ByteFill, kWbcBytes>, kWbcCount> wbc{};
};

// Builds one cycle: active channels write their payload into owned bytes,
// packet-mode WBCs carry packet data when `packet_busy`, everything else
// carries idle fill.
inline CycleRecord fill_cycle(const Allocation& a, const std::map<int, std::vector<std::uint8_t>>& payloads,
                              bool packet_busy) {
  CycleRecord c;
  for (const auto& w : a.wbcs) {
    if (w.mode == WbcMode::packet) {
      if (packet_busy)
        for (auto& b : c.wbc[w.index]) b = {kPacketWriter, 0xA5};
      continue;
    }
    for (const auto& g : w.grants) {
      auto it = payloads.find(g.channel);
      if (it == payloads.end()) continue;
      std::size_t k = 0;
      for (auto p : g.positions) {
        c.wbc[w.index][p] = {g.channel, it->second.empty() ? std::uint8_t{0} : it->second[k % it->second.size()]};
        ++k;
      }
    }
  }
  return c;
}

struct AuditViolation {
  std::size_t cycle = 0;
  std::size_t wbc = 0;
  std::uint8_t position = 0;
  std::optional<int> owner;
  std::optional<int> writer;
  std::string reason;
};

// `active[k]` lists the channels with data in cycle k. Bytes owned by an
// idle channel must carry idle fill; bytes owned by an active channel must
// carry only that channel's data; unowned isochronous bytes stay idle.
inline std::vector<AuditViolation> reserved_byte_audit(const Allocation& a, std::span<const CycleRecord> trace,
                                                       std::span<const std::set<int>> active) {
  if (active.size() != trace.size())
    throw Error("TraceMismatch", "activity list length differs from trace length");
  std::vector<AuditViolation> out;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    for (const auto& w : a.wbcs) {
      for (std::size_t p = 0; p < kWbcBytes; ++p) {
        const auto& fill = trace[k].wbc[w.index][p];
        auto pos = static_cast<std::uint8_t>(p);
        if (w.mode == WbcMode::packet) {
          if (fill.writer && *fill.writer != kPacketWriter)
            out.push_back({k, w.index, pos, std::nullopt, fill.writer, "isochronous data in packet-mode WBC"});
          continue;
        }
        auto owner = a.owner(w.index, pos);
        if (!owner) {
          if (fill.writer) out.push_back({k, w.index, pos, std::nullopt, fill.writer, "data in unallocated byte"});
        } else if (!active[k].count(*owner)) {
          if (fill.writer || fill.value != kIdleFill)
            out.push_back({k, w.index, pos, owner, fill.writer, "idle channel's byte not left unused"});
        } else if (fill.writer != owner) {
          out.push_back({k, w.index, pos, owner, fill.writer, "byte carries another writer's data"});
        }
      }
    }
  }
  return out;
}

struct CyclesInFlight {
  std::size_t full = 0;
  double fraction = 0.0;  // remaining part of a cycle, in [0, 1)
};

inline CyclesInFlight cycles_in_flight(double ring_latency_us) {
  if (!(ring_latency_us >= 0.0)) throw Error("DomainError", "ring latency must be non-negative");
  const double cycles = ring_latency_us / static_cast<double>(kCycleUs);
  CyclesInFlight r;
  r.full = static_cast<std::size_t>(cycles);
  r.fraction = cycles - static_cast<double>(r.full);
  return r;
}

}  // namespace fddi::hybrid
