#pragma once

// fddi-lab command-line front end. dispatch() is the whole program; main()
// only forwards argv and the standard streams.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fddi/bits.hpp"
#include "fddi/error.hpp"
#include "fddi/fddi2.hpp"
#include "fddi/link_planner.hpp"
#include "fddi/mac_sim.hpp"
#include "fddi/number_format.hpp"
#include "fddi/phy_codec.hpp"
#include "fddi/record_file.hpp"
#include "fddi/scrambler.hpp"
#include "fddi/spm.hpp"
#include "report.hpp"

#ifndef FDDI_DATA_DIR
#define FDDI_DATA_DIR "data"
#endif
#ifndef FDDI_LAB_VERSION
#define FDDI_LAB_VERSION "0.0.0"
#endif

namespace fddi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

inline const std::string kDefaultCodeTable = std::string(FDDI_DATA_DIR) + "/fddi_4b5b.tbl";
inline const std::string kDefaultMediaTable = std::string(FDDI_DATA_DIR) + "/media.tbl";

// Everything needed to reproduce a run byte for byte.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> arguments;
  std::map<std::string, std::string> input_digests;
  std::uint64_t seed = 0;
  std::string version = FDDI_LAB_VERSION;

  std::string to_json() const {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["arguments"] = arguments;
    j["inputs"] = input_digests;
    j["seed"] = seed;
    j["version"] = version;
    return j.dump(2) + "\n";
  }
};

// Wire format of `sonet-map` output: magic, big-endian code-bit count, then
// whole 2349-byte SPEs.
inline constexpr char kSpmMagic[8] = {'F', 'D', 'D', 'I', 'S', 'P', 'M', '1'};

namespace detail {

struct Session {
  std::ostream& out;
  std::ostream& err;
  RunManifest manifest;
  Format format = Format::csv;

  std::string read_input(const std::string& path) {
    auto data = read_text_file(path);
    manifest.input_digests[path] = fnv1a_hex(data);
    return data;
  }

  void write_file(const std::string& path, const std::string& data) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("FileNotWritable", path);
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
  }

  // Report goes to `path` when given, else to the output stream.
  void emit(const Report& r, const std::string& path = {}) {
    auto text = emit_report(r, format);
    if (path.empty())
      out << text;
    else
      write_file(path, text);
  }
};

inline std::string bits_text(std::span<const std::uint8_t> bits) { return fddi::to_string(bits) + "\n"; }

// --- simulate -----------------------------------------------------------------

inline mac::RingConfig ring_from_json(const nlohmann::json& j) {
  mac::RingConfig cfg;
  cfg.n_stations = j.at("n_stations").get<std::size_t>();
  cfg.ttrt_us = j.at("ttrt_us").get<double>();
  cfg.total_cable_km = j.value("total_cable_km", 0.0);
  if (j.contains("ring_latency_us"))
    cfg.ring_latency_us = j.at("ring_latency_us").get<double>();
  else
    cfg.ring_latency_us = mac::ring_latency_from_cable(cfg.total_cable_km, cfg.n_stations);
  if (j.contains("sync_allocation_us")) {
    const auto& s = j.at("sync_allocation_us");
    if (s.is_array())
      cfg.sync_allocation_us = s.get<std::vector<double>>();
    else
      cfg.sync_allocation_us.assign(cfg.n_stations, s.get<double>());
  }
  const auto strip = j.value("stripping", std::string("source"));
  if (strip == "source")
    cfg.stripping = mac::Stripping::source;
  else if (strip == "destination")
    cfg.stripping = mac::Stripping::destination;
  else
    throw Error("BadConfig", "stripping must be source or destination");
  cfg.compliance = j.value("compliance", true);
  return cfg;
}

inline mac::TrafficModel traffic_from_json(const nlohmann::json& j) {
  mac::TrafficModel t;
  for (const auto& s : j.value("traffic", nlohmann::json::array())) {
    mac::TrafficSource src;
    src.station = s.at("station").get<std::size_t>();
    const auto cls = s.at("class").get<std::string>();
    if (cls == "sync")
      src.cls = mac::TrafficClass::sync;
    else if (cls == "async")
      src.cls = mac::TrafficClass::async;
    else
      throw Error("BadConfig", "traffic class must be sync or async");
    const auto& rate = s.at("rate_mbps");
    if (rate.is_string()) {
      if (rate.get<std::string>() != "saturated") throw Error("BadConfig", "rate_mbps must be a number or \"saturated\"");
      src.saturated = true;
    } else {
      src.rate_mbps = rate.get<double>();
    }
    src.frame_bytes = s.value("frame_bytes", std::size_t{500});
    if (s.contains("destination")) src.destination = s.at("destination").get<std::size_t>();
    const auto arr = s.value("arrivals", std::string("poisson"));
    if (arr == "poisson")
      src.arrivals = mac::ArrivalProcess::poisson;
    else if (arr == "periodic")
      src.arrivals = mac::ArrivalProcess::periodic;
    else
      throw Error("BadConfig", "arrivals must be poisson or periodic");
    t.sources.push_back(src);
  }
  if (j.contains("probes")) t.probe_rate_per_ms = j.at("probes").value("rate_per_ms", 0.0);
  t.warmup_us = j.value("warmup_us", 0.0);
  return t;
}

inline Report metrics_report(const mac::RingConfig& cfg, const mac::SimMetrics& m) {
  Report r{{"metric", "value", "unit", "provenance"}, {}};
  auto f = [](double v) { return format_fixed(v, 6); };
  auto u = [](std::uint64_t v) { return std::to_string(v); };
  r.add({"n_stations", u(cfg.n_stations), "count", "input"});
  r.add({"ring_latency", f(cfg.ring_latency_us), "us", "input"});
  r.add({"ttrt", f(cfg.ttrt_us), "us", "input"});
  r.add({"theoretical_efficiency", f(mac::theoretical_efficiency(cfg.n_stations, cfg.ttrt_us, cfg.ring_latency_us)),
         "fraction", "formula"});
  r.add({"zero_load_access_delay", f(cfg.ring_latency_us / 2), "us", "formula"});
  r.add({"throughput", f(m.throughput), "fraction", "simulated"});
  r.add({"sync_throughput", f(m.sync_throughput), "fraction", "simulated"});
  r.add({"async_throughput", f(m.async_throughput), "fraction", "simulated"});
  r.add({"mean_access_delay", f(m.mean_access_delay_us), "us", "simulated"});
  r.add({"max_access_delay", f(m.max_access_delay_us), "us", "simulated"});
  r.add({"probes", u(m.probes), "count", "simulated"});
  r.add({"max_sync_gap", f(m.max_sync_gap_us), "us", "simulated"});
  r.add({"mean_rotation", f(m.mean_rotation_us), "us", "simulated"});
  r.add({"max_rotation", f(m.max_rotation_us), "us", "simulated"});
  r.add({"token_visits", u(m.token_visits), "count", "simulated"});
  r.add({"late_tokens", u(m.late_tokens), "count", "simulated"});
  r.add({"trt_overflows", u(m.trt_overflows), "count", "simulated"});
  for (auto [name, c] : {std::pair{"sync", &m.sync}, std::pair{"async", &m.async}}) {
    const std::string p = name;
    r.add({p + "_frames_sent", u(c->frames_sent), "frames", "simulated"});
    r.add({p + "_bytes_sent", u(c->bytes_sent), "bytes", "simulated"});
    r.add({p + "_bytes_received", u(c->bytes_received), "bytes", "simulated"});
    r.add({p + "_bytes_in_flight", u(c->bytes_in_flight), "bytes", "simulated"});
    r.add({p + "_mean_delay", f(c->mean_delay_us), "us", "simulated"});
    r.add({p + "_max_delay", f(c->max_delay_us), "us", "simulated"});
  }
  return r;
}

inline Report violations_report(const std::vector<mac::Violation>& v) {
  Report r{{"violation", "detail"}, {}};
  for (const auto& x : v) r.add({mac::to_string(x.kind), x.detail});
  return r;
}

inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(parse_double(cur));
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  return out;
}

// --- sonet-map wire format ----------------------------------------------------

inline std::string pack_frames(std::span<const sonet::SpeFrame> frames, std::uint64_t bit_count) {
  std::string out(kSpmMagic, sizeof kSpmMagic);
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<char>((bit_count >> (8 * i)) & 0xFFU));
  for (const auto& f : frames) out.append(reinterpret_cast<const char*>(f.bytes.data()), f.bytes.size());
  return out;
}

inline std::vector<sonet::SpeFrame> unpack_frames(const std::string& data, const sonet::SpeLayout& layout) {
  if (data.size() < 16 || !std::equal(kSpmMagic, kSpmMagic + 8, data.begin()))
    throw Error("BadSpmFile", "missing FDDISPM1 header");
  std::uint64_t bits = 0;
  for (std::size_t i = 8; i < 16; ++i) bits = (bits << 8) | static_cast<unsigned char>(data[i]);
  const std::size_t body = data.size() - 16;
  if (body % sonet::kSpeBytes != 0) throw Error("BadSpmFile", "trailing partial SPE");
  const std::size_t count = body / sonet::kSpeBytes;
  const std::size_t cap = layout.capacity_bits();
  if (count != (bits + cap - 1) / cap)
    throw Error("LayoutMismatch", std::to_string(count) + " SPEs cannot hold exactly " + std::to_string(bits) + " bits");
  std::vector<sonet::SpeFrame> frames(count);
  std::uint64_t left = bits;
  for (std::size_t k = 0; k < count; ++k) {
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(16 + k * sonet::kSpeBytes), sonet::kSpeBytes,
                frames[k].bytes.begin());
    frames[k].layout = layout.params();
    frames[k].user_bits = static_cast<std::size_t>(std::min<std::uint64_t>(left, cap));
    left -= frames[k].user_bits;
  }
  return frames;
}

inline void scramble_frames(std::vector<sonet::SpeFrame>& frames) {
  for (auto& f : frames) {
    auto bits = bytes_to_bits(f.bytes);
    auto s = sonet::scramble(bits);
    auto bytes = bits_to_bytes(s);
    std::copy(bytes.begin(), bytes.end(), f.bytes.begin());
  }
}

}  // namespace detail

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"FDDI protocol laboratory", "fddi-lab"};
  app.require_subcommand(1);
  app.fallthrough();

  detail::Session session{out, err, {}, Format::csv};
  std::string format_name = "csv";
  std::uint64_t seed = 1;
  std::string manifest_path;
  app.add_option("--format", format_name, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--manifest", manifest_path, "Write a run manifest (JSON) to this file");

  int status = kExitOk;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Timed-token ring simulation");
  std::string sim_config, sim_out, sim_sweep;
  double sim_duration = 0;
  unsigned sim_jobs = 1;
  sim->add_option("--config", sim_config, "Ring/traffic JSON config")->required();
  sim->add_option("--duration", sim_duration, "Simulated time in microseconds")->required();
  sim->add_option("--seed", seed, "Random seed");
  sim->add_option("--out", sim_out, "Report file (default stdout)");
  sim->add_option("--ttrt-sweep", sim_sweep, "Comma-separated TTRT values (us) to sweep");
  sim->add_option("--jobs", sim_jobs, "Parallel runs during a sweep")->check(CLI::Range(1u, 256u));

  // codec
  auto* codec = app.add_subcommand("codec", "Line codes");
  std::string codec_kind, codec_in, codec_out, codec_table = kDefaultCodeTable, codec_initial = "low";
  bool codec_decode = false;
  double codec_rate = phy::kCodeRateBps;
  codec->add_option("kind", codec_kind, "4b5b | nrzi | mlt3")->required()->check(CLI::IsMember({"4b5b", "nrzi", "mlt3"}));
  codec->add_option("--in", codec_in, "Input file")->required();
  codec->add_option("--out", codec_out, "Output file")->required();
  codec->add_flag("--decode", codec_decode, "Decode instead of encode");
  codec->add_option("--table", codec_table, "4B/5B code table");
  codec->add_option("--initial", codec_initial, "NRZI initial level")->check(CLI::IsMember({"low", "high"}));
  codec->add_option("--bit-rate", codec_rate, "Code bit rate (bit/s)");

  // scrambler
  auto* scr = app.add_subcommand("scrambler", "SONET frame-synchronous scrambler");
  scr->require_subcommand(1);
  auto* dump = scr->add_subcommand("dump", "Print the scrambler sequence");
  std::size_t dump_bits = sonet::kScramblerPeriod;
  dump->add_option("--bits", dump_bits, "Number of bits");
  auto* analyze = scr->add_subcommand("analyze", "Longest valid 4B/5B match against the sequence");
  std::string analyze_table = kDefaultCodeTable;
  analyze->add_option("--table", analyze_table, "4B/5B code table");

  // sonet-map
  auto* map = app.add_subcommand("sonet-map", "Map a code-bit file into STM-1 SPEs and back");
  std::string map_in, map_out;
  bool map_extract = false, map_scramble = false;
  map->add_option("--in", map_in, "Input file")->required();
  map->add_option("--out", map_out, "Output file")->required();
  map->add_flag("--extract", map_extract, "Recover code bits from an SPE file");
  map->add_flag("--scramble", map_scramble, "Frame-synchronous scrambling of each SPE");

  // rates
  auto* rates = app.add_subcommand("rates", "SONET/SDH rate hierarchy");
  int rate_level = 0;
  rates->add_option("--level", rate_level, "Only this STS level");

  // fddi2 plan
  auto* f2 = app.add_subcommand("fddi2", "FDDI-II hybrid mode");
  f2->require_subcommand(1);
  auto* f2plan = f2->add_subcommand("plan", "Allocate isochronous channels to wideband channels");
  std::string f2_modes, f2_requests;
  f2plan->add_option("--modes", f2_modes, "16 WBC modes, e.g. PIIIPIPIIIIIIIII")->required();
  f2plan->add_option("--requests", f2_requests, "Channel requests file: <channel> <bytes per cycle>")->required();

  // plan
  auto* plan = app.add_subcommand("plan", "Validate a mixed-media ring");
  std::string plan_ring, plan_media = kDefaultMediaTable;
  plan->add_option("--ring", plan_ring, "Ring description (JSON)")->required();
  plan->add_option("--media", plan_media, "Media table");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.get_name() << ": " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  session.format = format_name == "json" ? Format::json : Format::csv;
  session.manifest.arguments = args;
  session.manifest.seed = seed;

  try {
    if (*sim) {
      session.manifest.subcommand = "simulate";
      const auto doc = nlohmann::json::parse(session.read_input(sim_config));
      const auto ring = detail::ring_from_json(doc.contains("ring") ? doc.at("ring") : doc);
      const auto traffic = detail::traffic_from_json(doc);
      if (auto v = mac::validate_config(ring); !v.empty()) {
        session.emit(detail::violations_report(v), sim_out);
        err << "error: InvalidConfig: " << mac::to_string(v.front().kind) << ": " << v.front().detail << "\n";
        status = kExitDomain;
      } else if (!sim_sweep.empty()) {
        const auto ttrts = detail::parse_double_list(sim_sweep);
        std::vector<mac::SimMetrics> results(ttrts.size());
        std::vector<mac::RingConfig> cfgs(ttrts.size(), ring);
        for (std::size_t i = 0; i < ttrts.size(); ++i) {
          cfgs[i].ttrt_us = ttrts[i];
          if (auto bad = mac::validate_config(cfgs[i]); !bad.empty())
            throw Error("InvalidConfig", std::string(mac::to_string(bad.front().kind)) + ": " + bad.front().detail);
        }
        for (std::size_t base = 0; base < ttrts.size(); base += sim_jobs) {
          std::vector<std::future<mac::SimMetrics>> batch;
          for (std::size_t i = base; i < std::min(ttrts.size(), base + sim_jobs); ++i)
            batch.push_back(std::async(std::launch::async, [&, i] {
              return mac::run_simulation(cfgs[i], traffic, sim_duration, seed);
            }));
          for (std::size_t k = 0; k < batch.size(); ++k) results[base + k] = batch[k].get();
        }
        Report r{{"ttrt_us", "throughput", "theoretical_efficiency", "mean_access_delay_us", "max_sync_gap_us"}, {}};
        for (std::size_t i = 0; i < ttrts.size(); ++i)
          r.add({format_fixed(ttrts[i], 3), format_fixed(results[i].throughput, 6),
                 format_fixed(mac::theoretical_efficiency(ring.n_stations, ttrts[i], ring.ring_latency_us), 6),
                 format_fixed(results[i].mean_access_delay_us, 6), format_fixed(results[i].max_sync_gap_us, 6)});
        session.emit(r, sim_out);
      } else {
        const auto m = mac::run_simulation(ring, traffic, sim_duration, seed);
        session.emit(detail::metrics_report(ring, m), sim_out);
      }
    } else if (*codec) {
      session.manifest.subcommand = "codec " + codec_kind;
      const auto input = session.read_input(codec_in);
      Report r{{"metric", "value", "unit"}, {}};
      if (codec_kind == "4b5b") {
        const auto table = phy::CodeTable::load(codec_table);
        session.manifest.input_digests[codec_table] = fnv1a_hex(read_text_file(codec_table));
        if (!codec_decode) {
          const std::vector<std::uint8_t> bytes(input.begin(), input.end());
          const auto nibbles = phy::nibbles_from_bytes(bytes);
          const auto symbols = phy::encode_4b5b(table, nibbles);
          const auto bits = phy::symbols_to_bits(symbols);
          session.write_file(codec_out, detail::bits_text(bits));
          r.add({"nibbles", std::to_string(nibbles.size()), "count"});
          r.add({"code_bits", std::to_string(bits.size()), "bits"});
        } else {
          const auto patterns = phy::bits_to_patterns(bits_from_string(input));
          const auto res = phy::decode_4b5b(table, patterns);
          std::string bytes;
          for (std::size_t i = 0; i + 1 < res.nibbles.size(); i += 2)
            bytes.push_back(static_cast<char>((res.nibbles[i].value() << 4) | res.nibbles[i + 1].value()));
          if (res.nibbles.size() % 2) bytes.push_back(static_cast<char>(res.nibbles.back().value() << 4));
          session.write_file(codec_out, bytes);
          r.add({"symbols", std::to_string(patterns.size()), "count"});
          r.add({"nibbles", std::to_string(res.nibbles.size()), "count"});
          for (const auto& issue : res.issues)
            r.add({issue.kind == phy::DecodeIssue::Kind::invalid_symbol ? "InvalidSymbol" : "ControlSymbol:" + issue.name,
                   std::to_string(issue.position), "symbol_index"});
          if (!res.ok()) status = kExitDomain;
        }
      } else {
        const bool mlt3 = codec_kind == "mlt3";
        if (!codec_decode) {
          const auto bits = bits_from_string(input);
          const auto sig = mlt3 ? phy::mlt3_encode(bits, codec_rate)
                                : phy::nrzi_encode(bits, codec_initial == "high" ? phy::Level::high : phy::Level::low,
                                                   codec_rate);
          std::string text;
          for (auto l : sig.levels) text.push_back(mlt3 ? (l > 0 ? '+' : l < 0 ? '-' : '0') : (l ? '1' : '0'));
          session.write_file(codec_out, text + "\n");
          const std::int8_t initial = mlt3 ? 0 : (codec_initial == "high" ? 1 : 0);
          r.add({"bits", std::to_string(bits.size()), "bits"});
          r.add({"transitions", std::to_string(phy::transition_count(sig, initial)), "count"});
          try {
            r.add({"fundamental_frequency", format_fixed(phy::fundamental_frequency(sig), 3), "Hz"});
          } catch (const Error&) {
            r.add({"fundamental_frequency", "aperiodic", "Hz"});
          }
        } else {
          phy::LineSignal sig{{}, codec_rate, mlt3};
          for (char c : input) {
            if (c == '+' || c == '1') sig.levels.push_back(1);
            else if (c == '-') sig.levels.push_back(-1);
            else if (c == '0') sig.levels.push_back(0);
            else if (c != '\n' && c != '\r' && c != ' ') throw Error("BadLevelFile", std::string("unexpected '") + c + "'");
          }
          const auto bits = mlt3 ? phy::mlt3_decode(sig)
                                 : phy::nrzi_decode(sig, codec_initial == "high" ? phy::Level::high : phy::Level::low);
          session.write_file(codec_out, detail::bits_text(bits));
          r.add({"bits", std::to_string(bits.size()), "bits"});
        }
      }
      session.emit(r);
    } else if (*scr) {
      if (*dump) {
        session.manifest.subcommand = "scrambler dump";
        const auto seq = sonet::scrambler_sequence();
        Bits bits;
        for (std::size_t i = 0; i < dump_bits; ++i) bits.push_back(seq[i % seq.size()]);
        Report r{{"bits"}, {{fddi::to_string(bits)}}};
        session.emit(r);
      } else {
        session.manifest.subcommand = "scrambler analyze";
        const auto table = phy::CodeTable::parse(session.read_input(analyze_table));
        const auto rep = sonet::longest_valid_match(table);
        Report r{{"model", "length_bits", "offset", "polarity", "lead_bits", "whole_symbols", "trail_bits", "witness", "bits"}, {}};
        for (auto [name, m] : {std::pair{"whole_symbol", &rep.whole_symbol}, std::pair{"with_fragments", &rep.with_fragments}})
          r.add({name, std::to_string(m->length_bits), std::to_string(m->offset), m->complement ? "complement" : "true",
                 std::to_string(m->lead_bits), std::to_string(m->whole_symbols), std::to_string(m->trail_bits),
                 sonet::describe_witness(*m), fddi::to_string(m->bits)});
        session.emit(r);
      }
    } else if (*map) {
      session.manifest.subcommand = "sonet-map";
      const auto layout = sonet::SpeLayout::build();
      const auto input = session.read_input(map_in);
      Report r{{"metric", "value", "unit", "provenance"}, {}};
      const auto bw = sonet::spe_bandwidth();
      r.add({"spe_bandwidth_cited", sonet::kbps_to_mbps_string(bw.cited_kbps), "Mbps", "published"});
      r.add({"spe_bandwidth_recomputed", sonet::kbps_to_mbps_string(bw.recomputed_kbps), "Mbps", "computed"});
      r.add({"user_bits_per_spe", std::to_string(layout.capacity_bits()), "bits", "computed"});
      r.add({"max_user_run", std::to_string(layout.audit().max_user_run), "bytes", "computed"});
      if (!map_extract) {
        const auto bits = bits_from_string(input);
        auto frames = sonet::map_fddi(layout, bits);
        if (map_scramble) detail::scramble_frames(frames);
        session.write_file(map_out, detail::pack_frames(frames, bits.size()));
        r.add({"code_bits", std::to_string(bits.size()), "bits", "computed"});
        r.add({"spes", std::to_string(frames.size()), "count", "computed"});
      } else {
        auto frames = detail::unpack_frames(input, layout);
        if (map_scramble) detail::scramble_frames(frames);
        const auto bits = sonet::extract_fddi(layout, frames);
        session.write_file(map_out, detail::bits_text(bits));
        r.add({"code_bits", std::to_string(bits.size()), "bits", "computed"});
        r.add({"spes", std::to_string(frames.size()), "count", "computed"});
      }
      session.emit(r);
    } else if (*rates) {
      session.manifest.subcommand = "rates";
      Report r{{"sts", "oc", "stm", "line_mbps", "payload_mbps"}, {}};
      for (const auto& e : sonet::kRateTable) {
        if (rate_level != 0 && e.sts_level != rate_level) continue;
        r.add({"STS-" + std::to_string(e.sts_level), "OC-" + std::to_string(e.sts_level),
               e.stm_level ? "STM-" + std::to_string(*e.stm_level) : "", sonet::kbps_to_mbps_string(e.line_kbps),
               sonet::kbps_to_mbps_string(e.payload_kbps)});
      }
      if (rate_level != 0) sonet::sts_rates(rate_level);  // UnknownLevel
      session.emit(r);
    } else if (*f2) {
      session.manifest.subcommand = "fddi2 plan";
      const auto modes = hybrid::parse_modes(f2_modes);
      std::vector<hybrid::ChannelRequest> reqs;
      for (const auto& rec : parse_records(session.read_input(f2_requests)).records) {
        if (rec.fields.size() != 2) throw Error("BadRequests", "line " + std::to_string(rec.line) + ": expected <channel> <bytes>");
        reqs.push_back({std::stoi(rec.fields[0]), static_cast<std::size_t>(std::stoul(rec.fields[1]))});
      }
      const auto alloc = hybrid::allocate(modes, reqs);
      Report r{{"wbc", "mode", "channel", "bytes", "kbps"}, {}};
      for (const auto& w : alloc.wbcs) {
        const auto idx = std::to_string(w.index + 1);
        if (w.mode == hybrid::WbcMode::packet) {
          r.add({idx, "packet", "packet-pool", std::to_string(hybrid::kWbcBytes),
                 std::to_string(hybrid::bytes_per_cycle_kbps(hybrid::kWbcBytes))});
          continue;
        }
        for (const auto& g : w.grants)
          r.add({idx, "isochronous", std::to_string(g.channel), std::to_string(g.positions.size()),
                 std::to_string(hybrid::bytes_per_cycle_kbps(g.positions.size()))});
        if (const auto free = hybrid::kWbcBytes - w.granted_bytes(); free > 0)
          r.add({idx, "isochronous", "unallocated", std::to_string(free),
                 std::to_string(hybrid::bytes_per_cycle_kbps(free))});
      }
      session.emit(r);
    } else if (*plan) {
      session.manifest.subcommand = "plan";
      const auto table = link::MediaTable::parse(session.read_input(plan_media));
      const auto doc = nlohmann::json::parse(session.read_input(plan_ring));
      std::vector<link::LinkSpec> links;
      std::size_t idx = 0;
      for (const auto& l : doc.at("links")) {
        ++idx;
        link::LinkSpec spec;
        spec.name = l.value("name", "link" + std::to_string(idx));
        spec.media = l.at("media").get<std::string>();
        spec.length_m = l.at("length_m").get<double>();
        if (l.contains("connector_losses_db"))
          spec.connector_losses_db = l.at("connector_losses_db").get<std::vector<double>>();
        else if (l.contains("connectors"))
          spec.connector_losses_db.assign(l.at("connectors").get<std::size_t>(), link::kDefaultConnectorLossDb);
        links.push_back(std::move(spec));
      }
      const auto rep = link::validate_ring(table, links, doc.at("stations").get<std::size_t>());
      Report r{{"link", "rule", "verdict", "detail"}, {}};
      for (const auto& l : rep.links)
        for (const auto& rule : l.rules) r.add({l.link, rule.rule, link::to_string(rule.verdict), rule.detail});
      for (const auto& g : rep.global) r.add({"ring", g.rule, link::to_string(g.verdict), g.detail});
      r.add({"ring", "Verdict", link::to_string(rep.verdict()), std::to_string(rep.failing_links().size()) + " failing links"});
      session.emit(r);
      if (rep.verdict() == link::Verdict::fail) status = kExitDomain;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const nlohmann::json::exception& e) {
    err << "error: BadConfig: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: Failure: " << e.what() << "\n";
    return kExitDomain;
  }

  if (!manifest_path.empty()) {
    try {
      session.write_file(manifest_path, session.manifest.to_json());
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitDomain;
    }
  }
  return status;
}

}  // namespace fddi::cli
