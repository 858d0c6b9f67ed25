#pragma once

// SONET frame-synchronous scrambler (generator 1 + x^6 + x^7, seeded with
// all ones at each frame start) and the interference analyzer that finds
// the longest stretch of valid 4B/5B code bits that can coincide with the
// scrambler sequence or its complement.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fddi/bits.hpp"
#include "fddi/error.hpp"
#include "fddi/phy_codec.hpp"

namespace fddi::sonet {

inline constexpr std::size_t kScramblerPeriod = 127;
inline constexpr std::uint8_t kScramblerSeed = 0x7F;

// Bit k of `registers` is shift-register stage k+1. Stage 7 is the output.
struct ScramblerState {
  std::uint8_t registers = kScramblerSeed;
  std::uint64_t position = 0;  // bits emitted since the last seed
  friend constexpr bool operator==(const ScramblerState&, const ScramblerState&) = default;
};

constexpr ScramblerState seed() { return {}; }

struct StepResult {
  std::uint8_t bit;
  ScramblerState next;
};

constexpr StepResult next_bit(ScramblerState s) {
  const auto stage6 = static_cast<std::uint8_t>((s.registers >> 5) & 1U);
  const auto stage7 = static_cast<std::uint8_t>((s.registers >> 6) & 1U);
  const auto fb = static_cast<std::uint8_t>(stage6 ^ stage7);
  ScramblerState n;
  n.registers = static_cast<std::uint8_t>(((s.registers << 1) | fb) & 0x7FU);
  n.position = s.position + 1;
  return {stage7, n};
}

constexpr std::array<std::uint8_t, kScramblerPeriod> scrambler_sequence() {
  std::array<std::uint8_t, kScramblerPeriod> seq{};
  auto s = seed();
  for (auto& b : seq) {
    auto r = next_bit(s);
    b = r.bit;
    s = r.next;
  }
  return seq;
}

// Number of steps until the register returns to its starting contents.
constexpr std::size_t register_period(ScramblerState start = seed()) {
  auto s = next_bit(start).next;
  std::size_t n = 1;
  while (s.registers != start.registers) {
    s = next_bit(s).next;
    ++n;
  }
  return n;
}

// Stateful frame-synchronous scrambler. Exempt bits pass through unchanged
// and do not advance the register.
class FrameScrambler {
 public:
  Bits process(std::span<const std::uint8_t> data, bool frame_start,
               std::span<const std::uint8_t> exempt = {}) {
    if (!exempt.empty() && exempt.size() != data.size())
      throw Error("MaskMismatch", "exemption mask length differs from data length");
    if (frame_start) state_ = seed();
    Bits out(data.begin(), data.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!exempt.empty() && exempt[i]) continue;
      auto r = next_bit(state_);
      out[i] = static_cast<std::uint8_t>(out[i] ^ r.bit);
      state_ = r.next;
    }
    return out;
  }

  const ScramblerState& state() const { return state_; }

 private:
  ScramblerState state_ = seed();
};

inline Bits scramble(std::span<const std::uint8_t> data, std::span<const std::uint8_t> exempt = {}) {
  FrameScrambler s;
  return s.process(data, true, exempt);
}

// --- Interference analysis ----------------------------------------------------

struct WitnessPart {
  std::string symbol;   // symbol name from the code table
  std::string pattern;  // its full 5-bit code
  int first = 0;        // bits [first, last) of the pattern lie in the match
  int last = 5;
};

struct MatchResult {
  std::size_t length_bits = 0;
  std::size_t offset = 0;    // start of the match within the 127-bit sequence
  bool complement = false;   // matched the complemented sequence
  std::size_t lead_bits = 0;   // trailing fragment of a symbol before the first whole symbol
  std::size_t whole_symbols = 0;
  std::size_t trail_bits = 0;  // leading fragment of a symbol after the last whole symbol
  bool unbounded = false;    // every alignment matched; length capped at one full cycle of symbols
  std::vector<WitnessPart> witness;
  Bits bits;
};

struct MatchReport {
  // Candidate strings are concatenations of whole 5-bit symbols.
  MatchResult whole_symbol;
  // Additionally admits a partial symbol at each end of the string.
  MatchResult with_fragments;
};

namespace detail {

inline std::uint8_t window_code(std::span<const std::uint8_t> seq, std::size_t pos) {
  std::uint8_t code = 0;
  for (std::size_t i = 0; i < 5; ++i) code = static_cast<std::uint8_t>((code << 1) | seq[(pos + i) % seq.size()]);
  return code;
}

inline const phy::Symbol* find_suffix(const phy::CodeTable& t, std::span<const std::uint8_t> seq,
                                      std::size_t end, std::size_t len) {
  const std::size_t n = seq.size();
  for (const auto& s : t.symbols()) {
    bool ok = true;
    for (std::size_t i = 0; i < len && ok; ++i) {
      auto bit = seq[(end + n * 5 - len + i) % n];
      ok = ((s.code >> (len - 1 - i)) & 1U) == bit;
    }
    if (ok) return &s;
  }
  return nullptr;
}

inline const phy::Symbol* find_prefix(const phy::CodeTable& t, std::span<const std::uint8_t> seq,
                                      std::size_t start, std::size_t len) {
  const std::size_t n = seq.size();
  for (const auto& s : t.symbols()) {
    bool ok = true;
    for (std::size_t i = 0; i < len && ok; ++i) ok = ((s.code >> (4 - i)) & 1U) == seq[(start + i) % n];
    if (ok) return &s;
  }
  return nullptr;
}

}  // namespace detail

// Exhaustive over every start offset of the periodic sequence, both
// polarities, and (implicitly) every symbol alignment. Ties keep the first
// hit in (polarity, offset) order.
inline MatchReport longest_valid_match(const phy::CodeTable& table) {
  const auto base = scrambler_sequence();
  const std::size_t n = base.size();
  MatchReport report;

  for (int pol = 0; pol < 2; ++pol) {
    std::vector<std::uint8_t> seq(base.begin(), base.end());
    if (pol) for (auto& b : seq) b ^= 1U;

    std::vector<bool> valid(n);
    for (std::size_t p = 0; p < n; ++p) valid[p] = table.is_valid(detail::window_code(seq, p));

    // Stepping by 5 visits every residue mod 127, so a chain can only be
    // endless if every window is valid.
    for (std::size_t p = 0; p < n; ++p) {
      std::size_t k = 0;
      while (k < n && valid[(p + 5 * k) % n]) ++k;
      const bool unbounded = (k == n);

      std::size_t lead = 0, trail = 0;
      const phy::Symbol* lead_sym = nullptr;
      const phy::Symbol* trail_sym = nullptr;
      if (!unbounded) {
        for (std::size_t a = 4; a > 0; --a)
          if ((lead_sym = detail::find_suffix(table, seq, p, a))) {
            lead = a;
            break;
          }
        const std::size_t e = p + 5 * k;
        for (std::size_t b = 4; b > 0; --b)
          if ((trail_sym = detail::find_prefix(table, seq, e, b))) {
            trail = b;
            break;
          }
      }

      auto fill = [&](MatchResult& m, std::size_t lead_bits, std::size_t trail_bits) {
        m = MatchResult{};
        m.lead_bits = lead_bits;
        m.trail_bits = trail_bits;
        m.whole_symbols = k;
        m.length_bits = lead_bits + 5 * k + trail_bits;
        m.offset = (p + n - lead_bits) % n;
        m.complement = pol == 1;
        m.unbounded = unbounded;
        if (lead_bits)
          m.witness.push_back({lead_sym->name, lead_sym->pattern(), static_cast<int>(5 - lead_bits), 5});
        for (std::size_t j = 0; j < k; ++j) {
          const auto& s = *table.lookup(detail::window_code(seq, p + 5 * j));
          m.witness.push_back({s.name, s.pattern(), 0, 5});
        }
        if (trail_bits)
          m.witness.push_back({trail_sym->name, trail_sym->pattern(), 0, static_cast<int>(trail_bits)});
        for (std::size_t i = 0; i < m.length_bits; ++i) m.bits.push_back(seq[(m.offset + i) % n]);
      };

      if (5 * k > report.whole_symbol.length_bits) fill(report.whole_symbol, 0, 0);
      if (lead + 5 * k + trail > report.with_fragments.length_bits) fill(report.with_fragments, lead, trail);
    }
  }
  return report;
}

inline std::string describe_witness(const MatchResult& m) {
  std::string out;
  for (const auto& w : m.witness) {
    if (!out.empty()) out += ' ';
    out += w.symbol;
    if (w.first != 0 || w.last != 5) out += "[" + w.pattern.substr(static_cast<std::size_t>(w.first), static_cast<std::size_t>(w.last - w.first)) + "]";
  }
  return out;
}

}  // namespace fddi::sonet
