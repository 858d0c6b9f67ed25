#pragma once

// SONET/SDH rate hierarchy and the FDDI-to-SONET physical-layer mapping:
// an STM-1 synchronous payload envelope carrying the 125 Mbps 4B/5B code
// stream between fixed stuff, with every run of user-carrying bytes capped
// at 17 and seeded with a stuff-control bit.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fddi/bits.hpp"
#include "fddi/error.hpp"

namespace fddi::sonet {

// --- Rate hierarchy ------------------------------------------------------------

// Rates are held in kbit/s so the published table reproduces exactly.
struct RateEntry {
  int sts_level = 0;
  std::int64_t line_kbps = 0;
  std::int64_t payload_kbps = 0;
  std::optional<int> stm_level;
};

inline constexpr std::int64_t kSts1LineKbps = 51'840;

// Payload figures are the published ones. For STS-96 and STS-192 they fall
// 576 kbit/s short of N x 50.112 Mbps, so they cannot be derived from N.
inline constexpr std::array<RateEntry, 10> kRateTable{{
    {1, 51'840, 50'112, std::nullopt},
    {3, 155'520, 150'336, 1},
    {9, 466'560, 451'008, 3},
    {12, 622'080, 601'344, 4},
    {18, 933'120, 902'016, 6},
    {24, 1'244'160, 1'202'688, 8},
    {36, 1'866'240, 1'804'032, 12},
    {48, 2'488'320, 2'405'376, 16},
    {96, 4'976'640, 4'810'176, 32},
    {192, 9'953'280, 9'620'928, 64},
}};

inline RateEntry sts_rates(int level) {
  for (const auto& e : kRateTable)
    if (e.sts_level == level) return e;
  throw Error("UnknownLevel", "STS-" + std::to_string(level) + " is not in the SONET hierarchy");
}

// "51840" kbps -> "51.84"; exact decimal, trailing zeros dropped.
inline std::string kbps_to_mbps_string(std::int64_t kbps) {
  std::string s = std::to_string(kbps / 1000);
  auto frac = kbps % 1000;
  if (frac == 0) return s;
  std::string f = std::to_string(frac);
  f.insert(0, 3 - f.size(), '0');
  while (!f.empty() && f.back() == '0') f.pop_back();
  return s + "." + f;
}

// --- SPE geometry ----------------------------------------------------------------

inline constexpr std::size_t kSpeRows = 9;
inline constexpr std::size_t kSpeColumns = 261;
inline constexpr std::size_t kSpeBytes = kSpeRows * kSpeColumns;  // 2349
inline constexpr std::size_t kFramePeriodUs = 125;
inline constexpr std::size_t kFddiBitsPerFrame = 15'625;  // 125 Mbps x 125 us

struct SpeBandwidth {
  std::int64_t cited_kbps = 139'264;                                  // published figure
  std::int64_t recomputed_kbps = kSpeBytes * 8 * 1000 / kFramePeriodUs;  // 2349 x 8 / 125 us
  std::int64_t cited_bytes = 139'264 * kFramePeriodUs / 8 / 1000;       // bytes per frame implied
  bool consistent() const { return cited_kbps == recomputed_kbps; }
};

// The cited SPE bandwidth and the recomputation from the SPE size
// disagree; both are returned and the cited figure is the headline value.
inline SpeBandwidth spe_bandwidth() { return {}; }

enum class ByteRole : std::uint8_t { path_overhead, fixed_stuff, stuff_control, user_data };

inline const char* to_string(ByteRole r) {
  switch (r) {
    case ByteRole::path_overhead: return "path_overhead";
    case ByteRole::fixed_stuff: return "fixed_stuff";
    case ByteRole::stuff_control: return "stuff_control";
    case ByteRole::user_data: return "user_data";
  }
  return "?";
}

struct SpeLayoutParams {
  // Each row's 260 payload columns are cut into blocks of block_bytes:
  // fixed_stuff_bytes of fixed stuff, one byte whose first bit is a
  // stuff-control bit (its other seven bits carry user data), then user
  // data bytes.
  std::size_t block_bytes = 20;
  std::size_t fixed_stuff_bytes = 3;
  // Capacity held back beyond the nominal 15625 bits for clock-jitter
  // stuffing; one opportunity per row.
  std::size_t jitter_reserve_bits = kSpeRows;
  friend bool operator==(const SpeLayoutParams&, const SpeLayoutParams&) = default;
};

inline constexpr std::size_t kMaxUserRunBytes = 17;

struct LayoutAudit {
  std::size_t max_user_run = 0;          // bytes carrying user bits, consecutive in transmission order
  std::size_t runs_without_control = 0;  // such runs lacking a stuff-control bit
  std::size_t path_overhead_bytes = 0;
  std::size_t capacity_bits = 0;
};

class SpeLayout {
 public:
  static SpeLayout build(const SpeLayoutParams& params = {}) {
    constexpr std::size_t payload_cols = kSpeColumns - 1;
    if (params.block_bytes == 0 || payload_cols % params.block_bytes != 0)
      throw Error("InfeasibleLayout", "block size " + std::to_string(params.block_bytes) +
                                          " does not divide the " + std::to_string(payload_cols) + " payload columns");
    if (params.fixed_stuff_bytes + 1 > params.block_bytes)
      throw Error("InfeasibleLayout", "block has no room for a stuff-control byte");

    SpeLayout layout;
    layout.params_ = params;
    for (std::size_t row = 0; row < kSpeRows; ++row) {
      const std::size_t base = row * kSpeColumns;
      layout.roles_[base] = ByteRole::path_overhead;
      for (std::size_t c = 0; c < payload_cols; ++c) {
        const std::size_t in_block = c % params.block_bytes;
        ByteRole role = ByteRole::user_data;
        if (in_block < params.fixed_stuff_bytes)
          role = ByteRole::fixed_stuff;
        else if (in_block == params.fixed_stuff_bytes)
          role = ByteRole::stuff_control;
        layout.roles_[base + 1 + c] = role;
      }
    }
    for (std::size_t i = 0; i < kSpeBytes; ++i) {
      if (layout.roles_[i] == ByteRole::user_data) {
        for (std::uint32_t b = 0; b < 8; ++b) layout.user_bits_.push_back(static_cast<std::uint32_t>(i * 8 + b));
      } else if (layout.roles_[i] == ByteRole::stuff_control) {
        for (std::uint32_t b = 1; b < 8; ++b) layout.user_bits_.push_back(static_cast<std::uint32_t>(i * 8 + b));
      }
    }

    auto a = layout.audit();
    if (a.max_user_run > kMaxUserRunBytes || a.runs_without_control > 0)
      throw Error("InfeasibleLayout", "user data runs of " + std::to_string(a.max_user_run) +
                                          " bytes exceed the 17-byte limit or lack a stuff-control bit");
    const std::size_t need = kFddiBitsPerFrame + params.jitter_reserve_bits;
    if (a.capacity_bits < need)
      throw Error("InfeasibleLayout", "capacity " + std::to_string(a.capacity_bits) + " bits < required " +
                                          std::to_string(need));
    return layout;
  }

  // Recomputed from the per-byte roles alone.
  LayoutAudit audit() const {
    LayoutAudit a;
    std::size_t run = 0;
    bool has_control = false;
    auto close = [&] {
      if (run > 0 && !has_control) ++a.runs_without_control;
      run = 0;
      has_control = false;
    };
    for (auto r : roles_) {
      if (r == ByteRole::user_data || r == ByteRole::stuff_control) {
        ++run;
        has_control = has_control || r == ByteRole::stuff_control;
        a.max_user_run = std::max(a.max_user_run, run);
        a.capacity_bits += r == ByteRole::user_data ? 8 : 7;
      } else {
        close();
        if (r == ByteRole::path_overhead) ++a.path_overhead_bytes;
      }
    }
    close();
    return a;
  }

  const SpeLayoutParams& params() const { return params_; }
  std::span<const ByteRole> roles() const { return roles_; }
  std::size_t capacity_bits() const { return user_bits_.size(); }
  // Frame bit index (MSB-first within bytes) of each user bit, in order.
  std::span<const std::uint32_t> user_bit_positions() const { return user_bits_; }

  friend bool operator==(const SpeLayout& a, const SpeLayout& b) { return a.params_ == b.params_; }

 private:
  SpeLayoutParams params_;
  std::array<ByteRole, kSpeBytes> roles_{};
  std::vector<std::uint32_t> user_bits_;
};

struct SpeFrame {
  std::array<std::uint8_t, kSpeBytes> bytes{};
  std::size_t user_bits = 0;  // user positions actually carrying input
  SpeLayoutParams layout;
};

inline std::vector<SpeFrame> map_fddi(const SpeLayout& layout, std::span<const std::uint8_t> code_bits) {
  std::vector<SpeFrame> frames;
  const auto positions = layout.user_bit_positions();
  const std::size_t cap = positions.size();
  for (std::size_t start = 0; start < code_bits.size(); start += cap) {
    SpeFrame f;
    f.layout = layout.params();
    f.user_bits = std::min(cap, code_bits.size() - start);
    for (std::size_t i = 0; i < f.user_bits; ++i) {
      if (code_bits[start + i]) {
        auto pos = positions[i];
        f.bytes[pos / 8] |= static_cast<std::uint8_t>(0x80U >> (pos % 8));
      }
    }
    frames.push_back(f);
  }
  return frames;
}

inline Bits extract_fddi(const SpeLayout& layout, std::span<const SpeFrame> frames) {
  Bits out;
  const auto positions = layout.user_bit_positions();
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& f = frames[k];
    if (!(f.layout == layout.params()))
      throw Error("LayoutMismatch", "frame " + std::to_string(k) + " was built with a different layout");
    if (f.user_bits > positions.size())
      throw Error("LayoutMismatch", "frame " + std::to_string(k) + " claims more user bits than the layout holds");
    for (std::size_t i = 0; i < f.user_bits; ++i) {
      auto pos = positions[i];
      out.push_back(static_cast<std::uint8_t>((f.bytes[pos / 8] >> (7 - pos % 8)) & 1U));
    }
  }
  return out;
}

}  // namespace fddi::sonet
