#pragma once

// Mixed-media link planning for one FDDI ring: per-PMD optical power
// budgets, fiber attenuation and connector losses, rise/fall-time
// compatibility, distance limits, and ring-wide station/cable limits.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fddi/error.hpp"
#include "fddi/number_format.hpp"
#include "fddi/record_file.hpp"

namespace fddi::link {

inline constexpr double kDefaultConnectorLossDb = 0.3;  // per mated pair
inline constexpr double kOpticalWavelengthNm = 1300.0;
inline constexpr std::size_t kMaxStations = 500;
inline constexpr double kMaxTotalCableM = 100'000.0;

struct Range {
  double min = 0;
  double max = 0;
  friend bool operator==(const Range&, const Range&) = default;
};

struct MediaSpec {
  std::string name;
  std::optional<double> wavelength_nm;
  std::optional<Range> tx_power_dbm;
  std::optional<Range> rx_power_dbm;
  double max_length_m = 0;
  std::optional<double> attenuation_db_per_km;
  std::optional<double> tx_rise_fall_ns;
  std::optional<double> rx_rise_fall_tolerance_ns;
  std::optional<double> stated_budget_db;
  bool standard = true;

  bool optical() const { return tx_power_dbm.has_value() && rx_power_dbm.has_value(); }
  friend bool operator==(const MediaSpec&, const MediaSpec&) = default;
};

class MediaTable {
 public:
  static MediaTable parse(std::string_view text) {
    MediaTable t;
    auto file = parse_records(text);
    t.version_ = file.version;
    for (const auto& rec : file.records) {
      const auto where = "line " + std::to_string(rec.line);
      if (rec.fields.size() != 12) throw Error("BadMediaTable", where + ": expected 12 fields");
      const auto& f = rec.fields;
      auto opt = [&](const std::string& s) -> std::optional<double> {
        if (s == "-") return std::nullopt;
        return parse_double(s);
      };
      auto range = [&](const std::string& lo, const std::string& hi) -> std::optional<Range> {
        auto a = opt(lo), b = opt(hi);
        if (!a && !b) return std::nullopt;
        if (!a || !b) throw Error("BadMediaTable", where + ": power range needs both ends");
        if (*b < *a) throw Error("BadMediaTable", where + ": range max below min");
        return Range{*a, *b};
      };
      MediaSpec m;
      m.name = f[0];
      m.wavelength_nm = opt(f[1]);
      m.tx_power_dbm = range(f[2], f[3]);
      m.rx_power_dbm = range(f[4], f[5]);
      m.max_length_m = parse_double(f[6]);
      if (!(m.max_length_m > 0)) throw Error("BadMediaTable", where + ": max length must be positive");
      m.attenuation_db_per_km = opt(f[7]);
      m.tx_rise_fall_ns = opt(f[8]);
      m.rx_rise_fall_tolerance_ns = opt(f[9]);
      m.stated_budget_db = opt(f[10]);
      if (f[11] == "standard")
        m.standard = true;
      else if (f[11] == "nonstandard")
        m.standard = false;
      else
        throw Error("BadMediaTable", where + ": status must be standard or nonstandard");
      if (t.media_.count(m.name)) throw Error("BadMediaTable", where + ": duplicate medium " + m.name);
      t.order_.push_back(m.name);
      t.media_.emplace(m.name, std::move(m));
    }
    return t;
  }

  static MediaTable load(const std::string& path) { return parse(read_text_file(path)); }

  std::string serialize() const {
    auto num = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("-"); };
    std::string out = "version " + std::to_string(version_) + "\n";
    for (const auto& name : order_) {
      const auto& m = media_.at(name);
      std::vector<std::string> f{
          m.name,
          num(m.wavelength_nm),
          num(m.tx_power_dbm ? std::optional(m.tx_power_dbm->min) : std::nullopt),
          num(m.tx_power_dbm ? std::optional(m.tx_power_dbm->max) : std::nullopt),
          num(m.rx_power_dbm ? std::optional(m.rx_power_dbm->min) : std::nullopt),
          num(m.rx_power_dbm ? std::optional(m.rx_power_dbm->max) : std::nullopt),
          format_double(m.max_length_m),
          num(m.attenuation_db_per_km),
          num(m.tx_rise_fall_ns),
          num(m.rx_rise_fall_tolerance_ns),
          num(m.stated_budget_db),
          m.standard ? "standard" : "nonstandard"};
      for (std::size_t i = 0; i < f.size(); ++i) out += (i ? " " : "") + f[i];
      out += "\n";
    }
    return out;
  }

  const MediaSpec& at(const std::string& name) const {
    auto it = media_.find(name);
    if (it == media_.end()) throw Error("UnknownMedia", name);
    return it->second;
  }
  bool contains(const std::string& name) const { return media_.count(name) != 0; }
  const std::vector<std::string>& names() const { return order_; }
  int version() const { return version_; }

  friend bool operator==(const MediaTable&, const MediaTable&) = default;

 private:
  int version_ = 0;
  std::vector<std::string> order_;
  std::map<std::string, MediaSpec> media_;
};

// Worst-case allowed path loss: minimum transmit power less minimum
// receiver sensitivity, unless the table states the budget directly.
inline double power_budget(const MediaSpec& m) {
  if (!m.optical()) throw Error("NotOptical", m.name + " has no optical power ranges");
  if (m.stated_budget_db) return *m.stated_budget_db;
  return m.tx_power_dbm->min - m.rx_power_dbm->min;
}

struct LinkSpec {
  std::string name;
  std::string media;
  double length_m = 0;
  std::vector<double> connector_losses_db;

  static LinkSpec with_connectors(std::string name, std::string media, double length_m, std::size_t pairs,
                                  double loss_db = kDefaultConnectorLossDb) {
    return {std::move(name), std::move(media), length_m, std::vector<double>(pairs, loss_db)};
  }
};

enum class Verdict { pass, fail };
inline const char* to_string(Verdict v) { return v == Verdict::pass ? "pass" : "fail"; }

struct RuleResult {
  std::string rule;
  Verdict verdict = Verdict::pass;
  std::string detail;
};

struct BudgetReport {
  std::string link;
  std::optional<double> allowed_loss_db;  // optical media only
  std::optional<double> computed_loss_db;
  double margin_db = 0;
  std::vector<RuleResult> rules;

  Verdict verdict() const {
    if (margin_db < 0) return Verdict::fail;
    for (const auto& r : rules)
      if (r.verdict == Verdict::fail) return Verdict::fail;
    return Verdict::pass;
  }
  std::vector<std::string> violated_rules() const {
    std::vector<std::string> out;
    for (const auto& r : rules)
      if (r.verdict == Verdict::fail) out.push_back(r.rule);
    return out;
  }
};

inline BudgetReport validate_link(const MediaTable& table, const LinkSpec& link) {
  const auto& m = table.at(link.media);
  if (!(link.length_m > 0)) throw Error("BadLink", link.name + ": length must be positive");
  for (double l : link.connector_losses_db)
    if (l < 0) throw Error("BadLink", link.name + ": negative connector loss");

  BudgetReport r;
  r.link = link.name;
  const bool long_ok = link.length_m <= m.max_length_m;
  r.rules.push_back({"LengthExceeded", long_ok ? Verdict::pass : Verdict::fail,
                     format_double(link.length_m) + " m of " + m.name + ", limit " + format_double(m.max_length_m) + " m"});

  if (m.optical()) {
    const double connectors = std::accumulate(link.connector_losses_db.begin(), link.connector_losses_db.end(), 0.0);
    const double fiber = m.attenuation_db_per_km.value_or(0.0) * link.length_m / 1000.0;
    r.allowed_loss_db = power_budget(m);
    r.computed_loss_db = fiber + connectors;
    r.margin_db = *r.allowed_loss_db - *r.computed_loss_db;
    r.rules.push_back({"BudgetExceeded", r.margin_db >= 0 ? Verdict::pass : Verdict::fail,
                       "loss " + format_fixed(*r.computed_loss_db, 3) + " dB of " +
                           format_fixed(*r.allowed_loss_db, 3) + " dB budget"});
  }
  if (!m.standard) r.rules.push_back({"NonStandardMedia", Verdict::fail, m.name + " is not a standard PMD"});
  return r;
}

struct EndsCheck {
  Verdict verdict = Verdict::pass;
  double allowed_loss_db = 0;
  double max_length_m = 0;
  std::string detail;
};

// Devices of two PMD types at the two ends of one fiber link.
inline EndsCheck mixed_ends_check(const MediaSpec& tx, const MediaSpec& rx, double length_m) {
  for (const auto* m : {&tx, &rx}) {
    if (!m->optical()) throw Error("NotOptical", m->name + " has no optical power ranges");
    if (!m->wavelength_nm || *m->wavelength_nm != kOpticalWavelengthNm)
      throw Error("WavelengthMismatch", m->name + " is not a 1300 nm device");
  }
  EndsCheck c;
  // A duplex link runs both ways; the weaker direction sets the budget.
  c.allowed_loss_db = std::min(tx.tx_power_dbm->min - rx.rx_power_dbm->min, rx.tx_power_dbm->min - tx.rx_power_dbm->min);
  c.max_length_m = std::min(tx.max_length_m, rx.max_length_m);
  const double attenuation = std::max(tx.attenuation_db_per_km.value_or(0.0), rx.attenuation_db_per_km.value_or(0.0));
  const double loss = attenuation * length_m / 1000.0;
  const bool length_ok = length_m <= c.max_length_m;
  const bool loss_ok = loss <= c.allowed_loss_db;
  c.verdict = length_ok && loss_ok ? Verdict::pass : Verdict::fail;
  c.detail = tx.name + "->" + rx.name + " " + format_double(length_m) + " m (limit " + format_double(c.max_length_m) +
             " m), loss " + format_fixed(loss, 3) + " dB of " + format_fixed(c.allowed_loss_db, 3) + " dB";
  return c;
}

inline Verdict rise_fall_check(double tx_rise_fall_ns, const MediaSpec& rx) {
  if (!rx.rx_rise_fall_tolerance_ns) throw Error("NotOptical", rx.name + " has no receiver rise/fall tolerance");
  return tx_rise_fall_ns <= *rx.rx_rise_fall_tolerance_ns ? Verdict::pass : Verdict::fail;
}

inline Verdict rise_fall_check(const MediaSpec& tx, const MediaSpec& rx) {
  if (!tx.tx_rise_fall_ns) throw Error("NotOptical", tx.name + " has no transmitter rise/fall time");
  return rise_fall_check(*tx.tx_rise_fall_ns, rx);
}

struct RingReport {
  std::vector<BudgetReport> links;
  std::vector<RuleResult> global;

  Verdict verdict() const {
    for (const auto& l : links)
      if (l.verdict() == Verdict::fail) return Verdict::fail;
    for (const auto& g : global)
      if (g.verdict == Verdict::fail) return Verdict::fail;
    return Verdict::pass;
  }
  std::vector<std::string> failing_links() const {
    std::vector<std::string> out;
    for (const auto& l : links)
      if (l.verdict() == Verdict::fail) out.push_back(l.link);
    return out;
  }
};

inline RingReport validate_ring(const MediaTable& table, std::span<const LinkSpec> links, std::size_t n_stations) {
  RingReport r;
  double total = 0;
  for (const auto& l : links) {
    r.links.push_back(validate_link(table, l));
    total += l.length_m;
  }
  r.global.push_back({"StationCount", n_stations <= kMaxStations ? Verdict::pass : Verdict::fail,
                      std::to_string(n_stations) + " stations, limit " + std::to_string(kMaxStations)});
  r.global.push_back({"TotalCable", total <= kMaxTotalCableM ? Verdict::pass : Verdict::fail,
                      format_double(total) + " m total, limit " + format_double(kMaxTotalCableM) + " m"});
  return r;
}

}  // namespace fddi::link
