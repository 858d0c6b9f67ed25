#pragma once

// FDDI physical-layer coding: table-driven 4B/5B symbol coding, NRZI and
// MLT-3 line codes, and fundamental-frequency measurement of periodic line
// signals.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fddi/bits.hpp"
#include "fddi/error.hpp"
#include "fddi/record_file.hpp"

namespace fddi::phy {

inline constexpr double kDataRateBps = 100e6;
inline constexpr double kCodeRateBps = 125e6;  // 5 code bits per 4 data bits

class Nibble {
 public:
  constexpr Nibble() = default;
  constexpr explicit Nibble(unsigned v) : value_(static_cast<std::uint8_t>(v)) {
    if (v > 15) throw Error("InvalidNibble", std::to_string(v));
  }
  constexpr std::uint8_t value() const noexcept { return value_; }
  friend constexpr bool operator==(Nibble, Nibble) = default;

 private:
  std::uint8_t value_ = 0;
};

enum class SymbolKind { data, control };

struct Symbol {
  std::uint8_t code = 0;  // low 5 bits, first-transmitted bit is bit 4
  SymbolKind kind = SymbolKind::data;
  std::uint8_t data_value = 0;  // valid for data symbols
  std::string name;             // hex digit for data, symbol name for control

  std::string pattern() const {
    std::string s(5, '0');
    for (int i = 0; i < 5; ++i)
      if (code & (0x10U >> i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
  }
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

// The 32-entry 5-bit code space and the subset of it that is valid.
class CodeTable {
 public:
  static CodeTable parse(std::string_view text) {
    CodeTable table;
    auto file = parse_records(text);
    table.version_ = file.version;
    for (const auto& rec : file.records) {
      auto where = "line " + std::to_string(rec.line);
      if (rec.fields.size() != 3)
        throw Error("BadCodeTable", where + ": expected <pattern> <kind> <meaning>");
      const auto& pat = rec.fields[0];
      if (pat.size() != 5 || pat.find_first_not_of("01") != std::string::npos)
        throw Error("BadCodeTable", where + ": pattern must be five 0/1 characters");
      Symbol sym;
      for (char c : pat) sym.code = static_cast<std::uint8_t>((sym.code << 1) | (c == '1'));
      sym.name = rec.fields[2];
      if (rec.fields[1] == "data") {
        sym.kind = SymbolKind::data;
        auto v = parse_hex_digit(sym.name);
        if (!v) throw Error("BadCodeTable", where + ": data meaning must be a hex digit");
        sym.data_value = *v;
      } else if (rec.fields[1] == "control") {
        sym.kind = SymbolKind::control;
      } else {
        throw Error("BadCodeTable", where + ": kind must be data or control");
      }
      table.add(sym, where);
    }
    return table;
  }

  static CodeTable load(const std::string& path) { return parse(read_text_file(path)); }

  // Programmatic construction, mainly for analysis of reduced symbol sets.
  void add(const Symbol& sym, const std::string& where = "add") {
    if (by_code_[sym.code])
      throw Error("BadCodeTable", where + ": duplicate pattern " + sym.pattern());
    if (sym.kind == SymbolKind::data) {
      if (sym.data_value > 15) throw Error("BadCodeTable", where + ": data value out of range");
      if (by_value_[sym.data_value])
        throw Error("BadCodeTable", where + ": duplicate data value " + sym.name);
      by_value_[sym.data_value] = sym.code;
    }
    by_code_[sym.code] = sym;
    symbols_.push_back(sym);
  }

  const std::optional<Symbol>& lookup(std::uint8_t code) const { return by_code_.at(code & 0x1FU); }
  bool is_valid(std::uint8_t code) const { return lookup(code).has_value(); }

  std::optional<std::uint8_t> data_code(Nibble n) const { return by_value_[n.value()]; }
  bool has_all_data_symbols() const {
    for (const auto& c : by_value_)
      if (!c) return false;
    return true;
  }

  std::span<const Symbol> symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  int version() const { return version_; }

 private:
  static std::optional<std::uint8_t> parse_hex_digit(const std::string& s) {
    if (s.size() != 1) return std::nullopt;
    char c = s[0];
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    return std::nullopt;
  }

  int version_ = 0;
  std::array<std::optional<Symbol>, 32> by_code_{};
  std::array<std::optional<std::uint8_t>, 16> by_value_{};
  std::vector<Symbol> symbols_;
};

// --- 4B/5B -----------------------------------------------------------------

inline std::vector<Symbol> encode_4b5b(const CodeTable& table, std::span<const Nibble> data) {
  std::vector<Symbol> out;
  out.reserve(data.size());
  for (auto n : data) {
    auto code = table.data_code(n);
    if (!code)
      throw Error("IncompleteCodeTable", "no data symbol for nibble " + std::to_string(n.value()));
    out.push_back(*table.lookup(*code));
  }
  return out;
}

inline Bits symbols_to_bits(std::span<const Symbol> symbols) {
  Bits out;
  out.reserve(symbols.size() * 5);
  for (const auto& s : symbols)
    for (int i = 4; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((s.code >> i) & 1U));
  return out;
}

// Groups a code-bit stream into 5-bit patterns. A trailing partial group is
// an error.
inline std::vector<std::uint8_t> bits_to_patterns(std::span<const std::uint8_t> bits) {
  if (bits.size() % 5 != 0)
    throw Error("PartialSymbol", std::to_string(bits.size()) + " code bits is not a multiple of 5");
  std::vector<std::uint8_t> out(bits.size() / 5, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    out[i / 5] = static_cast<std::uint8_t>((out[i / 5] << 1) | (bits[i] & 1U));
  return out;
}

inline std::vector<Nibble> nibbles_from_bytes(std::span<const std::uint8_t> bytes) {
  std::vector<Nibble> out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.emplace_back(static_cast<unsigned>(b >> 4));
    out.emplace_back(static_cast<unsigned>(b & 0x0FU));
  }
  return out;
}

struct DecodeIssue {
  enum class Kind { invalid_symbol, control_symbol };
  Kind kind;
  std::size_t position;  // symbol index in the input
  std::string name;      // control symbol name; empty for invalid symbols
  friend bool operator==(const DecodeIssue&, const DecodeIssue&) = default;
};

struct DecodeResult {
  std::vector<Nibble> nibbles;      // data symbols only, in order
  std::vector<DecodeIssue> issues;  // every non-data pattern, in order
  bool ok() const { return issues.empty(); }
};

inline DecodeResult decode_4b5b(const CodeTable& table, std::span<const std::uint8_t> patterns) {
  DecodeResult r;
  r.nibbles.reserve(patterns.size());
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const auto& sym = table.lookup(patterns[i]);
    if (!sym) {
      r.issues.push_back({DecodeIssue::Kind::invalid_symbol, i, {}});
    } else if (sym->kind == SymbolKind::control) {
      r.issues.push_back({DecodeIssue::Kind::control_symbol, i, sym->name});
    } else {
      r.nibbles.emplace_back(sym->data_value);
    }
  }
  return r;
}

// --- Line codes --------------------------------------------------------------

enum class Level : std::int8_t { low = 0, high = 1 };

struct LineSignal {
  // NRZI: 0 = low, 1 = high. MLT-3: -1, 0, +1.
  std::vector<std::int8_t> levels;
  double bit_rate = kCodeRateBps;
  bool three_level = false;
};

inline LineSignal nrzi_encode(std::span<const std::uint8_t> bits, Level initial = Level::low,
                              double bit_rate = kCodeRateBps) {
  LineSignal sig{{}, bit_rate, false};
  sig.levels.reserve(bits.size());
  auto level = static_cast<std::int8_t>(initial);
  for (auto b : bits) {
    if (b) level = static_cast<std::int8_t>(1 - level);
    sig.levels.push_back(level);
  }
  return sig;
}

inline Bits nrzi_decode(const LineSignal& sig, Level initial = Level::low) {
  Bits out;
  out.reserve(sig.levels.size());
  auto prev = static_cast<std::int8_t>(initial);
  for (auto l : sig.levels) {
    out.push_back(l != prev ? 1 : 0);
    prev = l;
  }
  return out;
}

// A 1 advances through 0, +1, 0, -1; a 0 holds.
inline LineSignal mlt3_encode(std::span<const std::uint8_t> bits, double bit_rate = kCodeRateBps) {
  static constexpr std::array<std::int8_t, 4> kCycle{0, 1, 0, -1};
  LineSignal sig{{}, bit_rate, true};
  sig.levels.reserve(bits.size());
  std::size_t phase = 0;
  for (auto b : bits) {
    if (b) phase = (phase + 1) % kCycle.size();
    sig.levels.push_back(kCycle[phase]);
  }
  return sig;
}

inline Bits mlt3_decode(const LineSignal& sig) {
  Bits out;
  out.reserve(sig.levels.size());
  std::int8_t prev = 0;
  for (auto l : sig.levels) {
    out.push_back(l != prev ? 1 : 0);
    prev = l;
  }
  return out;
}

inline std::size_t transition_count(const LineSignal& sig, std::int8_t initial_level) {
  std::size_t n = 0;
  auto prev = initial_level;
  for (auto l : sig.levels) {
    if (l != prev) ++n;
    prev = l;
  }
  return n;
}

// Smallest p such that levels[i] == levels[i + p] for every valid i and the
// signal holds at least two whole periods. Empty result means aperiodic.
inline std::optional<std::size_t> smallest_period(std::span<const std::int8_t> levels) {
  const std::size_t n = levels.size();
  if (n < 2) return std::nullopt;
  // Prefix function: border[i] = longest proper border of levels[0..i].
  std::vector<std::size_t> border(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = border[i - 1];
    while (k > 0 && levels[i] != levels[k]) k = border[k - 1];
    if (levels[i] == levels[k]) ++k;
    border[i] = k;
  }
  std::size_t p = n - border[n - 1];
  if (2 * p > n) return std::nullopt;
  return p;
}

// Fundamental frequency in Hz of a periodic line signal: bit_rate / period.
// A constant signal has no transitions and reports 0 Hz.
inline double fundamental_frequency(const LineSignal& sig) {
  auto p = smallest_period(sig.levels);
  if (!p) throw Error("AperiodicSignal", "no exact repeat within " + std::to_string(sig.levels.size()) + " bits");
  if (*p == 1) return 0.0;
  return sig.bit_rate / static_cast<double>(*p);
}

}  // namespace fddi::phy
