#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = fddi::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("fddi_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }
  static std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
  }

  fs::path dir_;
};

const char* kRing = R"({
  "ring": {"n_stations": 4, "ring_latency_us": 200, "ttrt_us": 1000},
  "traffic": [
    {"station": 0, "class": "async", "rate_mbps": "saturated", "frame_bytes": 100},
    {"station": 2, "class": "async", "rate_mbps": 20, "frame_bytes": 400}
  ],
  "probes": {"rate_per_ms": 1},
  "warmup_us": 1000
})";

}  // namespace

TEST_F(CliTest, RatesExact) {
  const auto r = run({"rates"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "sts,oc,stm,line_mbps,payload_mbps\n"
            "STS-1,OC-1,,51.84,50.112\n"
            "STS-3,OC-3,STM-1,155.52,150.336\n"
            "STS-9,OC-9,STM-3,466.56,451.008\n"
            "STS-12,OC-12,STM-4,622.08,601.344\n"
            "STS-18,OC-18,STM-6,933.12,902.016\n"
            "STS-24,OC-24,STM-8,1244.16,1202.688\n"
            "STS-36,OC-36,STM-12,1866.24,1804.032\n"
            "STS-48,OC-48,STM-16,2488.32,2405.376\n"
            "STS-96,OC-96,STM-32,4976.64,4810.176\n"
            "STS-192,OC-192,STM-64,9953.28,9620.928\n");
  EXPECT_EQ(run({"rates", "--level", "12"}).out, "sts,oc,stm,line_mbps,payload_mbps\nSTS-12,OC-12,STM-4,622.08,601.344\n");
  const auto bad = run({"rates", "--level", "7"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.err.rfind("error: UnknownLevel:", 0), 0u);
}

TEST_F(CliTest, JsonFormat) {
  const auto r = run({"--format", "json", "rates", "--level", "3"});
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["rows"][0]["stm"], "STM-1");
  EXPECT_EQ(j["columns"].size(), 5u);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"rates", "--level", "abc"}).code, 2);
  EXPECT_EQ(run({"simulate", "--duration", "10"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, SimulateTtrtBelowLatencyFails) {
  const auto cfg = write("bad.json", R"({"ring": {"n_stations": 4, "ring_latency_us": 500, "ttrt_us": 100}})");
  const auto r = run({"simulate", "--config", cfg, "--duration", "1000"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("TtrtBelowLatency"), std::string::npos);
  EXPECT_NE(r.err.find("error: InvalidConfig"), std::string::npos);
}

TEST_F(CliTest, SimulateByteIdenticalReruns) {
  const auto cfg = write("ring.json", kRing);
  const auto a = path("a.csv"), b = path("b.csv");
  ASSERT_EQ(run({"simulate", "--config", cfg, "--duration", "50000", "--seed", "9", "--out", a}).code, 0);
  ASSERT_EQ(run({"simulate", "--config", cfg, "--duration", "50000", "--seed", "9", "--out", b}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).rfind("metric,value,unit,provenance\n", 0), 0u);
  EXPECT_NE(slurp(a).find("theoretical_efficiency,0.761905,fraction,formula"), std::string::npos);
}

TEST_F(CliTest, SweepIndependentOfJobs) {
  const auto cfg = write("ring.json", kRing);
  const auto one = run({"simulate", "--config", cfg, "--duration", "30000", "--ttrt-sweep", "400,800,1600,3200"});
  const auto four =
      run({"simulate", "--config", cfg, "--duration", "30000", "--ttrt-sweep", "400,800,1600,3200", "--jobs", "4"});
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(std::count(one.out.begin(), one.out.end(), '\n'), 5);
}

TEST_F(CliTest, Manifest) {
  const auto cfg = write("ring.json", kRing);
  const auto man = path("m.json");
  ASSERT_EQ(run({"--manifest", man, "simulate", "--config", cfg, "--duration", "5000", "--seed", "3"}).code, 0);
  const auto j = nlohmann::json::parse(slurp(man));
  EXPECT_EQ(j["subcommand"], "simulate");
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["inputs"][cfg], fddi::cli::fnv1a_hex(kRing));
}

TEST_F(CliTest, CodecRoundTrips) {
  const auto raw = write("raw.bin", std::string("\x00\x01\xfe\xff hello", 10));
  ASSERT_EQ(run({"codec", "4b5b", "--in", raw, "--out", path("c.txt")}).code, 0);
  EXPECT_EQ(slurp(path("c.txt")).size(), 10u * 10u + 1u);
  ASSERT_EQ(run({"codec", "4b5b", "--decode", "--in", path("c.txt"), "--out", path("back.bin")}).code, 0);
  EXPECT_EQ(slurp(path("back.bin")), slurp(raw));

  for (const std::string kind : {"nrzi", "mlt3"}) {
    ASSERT_EQ(run({"codec", kind, "--in", path("c.txt"), "--out", path("l.txt")}).code, 0);
    ASSERT_EQ(run({"codec", kind, "--decode", "--in", path("l.txt"), "--out", path("c2.txt")}).code, 0);
    EXPECT_EQ(slurp(path("c2.txt")), slurp(path("c.txt"))) << kind;
  }
}

TEST_F(CliTest, CodecReportsControlSymbols) {
  const auto in = write("jk.txt", "11000 10001 11110\n");
  const auto r = run({"codec", "4b5b", "--decode", "--in", in, "--out", path("o.bin")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("ControlSymbol:J,0,symbol_index"), std::string::npos);
}

TEST_F(CliTest, CodecFundamental) {
  const auto in = write("ones.txt", std::string(40, '1'));
  const auto nrzi = run({"codec", "nrzi", "--in", in, "--out", path("n.txt")});
  const auto mlt3 = run({"codec", "mlt3", "--in", in, "--out", path("m.txt")});
  EXPECT_NE(nrzi.out.find("fundamental_frequency,62500000.000,Hz"), std::string::npos);
  EXPECT_NE(mlt3.out.find("fundamental_frequency,31250000.000,Hz"), std::string::npos);
}

TEST_F(CliTest, SonetMapRoundTrip) {
  std::string bits;
  for (int i = 0; i < 40'000; ++i) bits += (i * 7919 % 13) < 6 ? '1' : '0';
  const auto in = write("bits.txt", bits + "\n");
  for (bool scramble : {false, true}) {
    std::vector<std::string> map{"sonet-map", "--in", in, "--out", path("f.spm")};
    std::vector<std::string> ext{"sonet-map", "--extract", "--in", path("f.spm"), "--out", path("back.txt")};
    if (scramble) {
      map.push_back("--scramble");
      ext.push_back("--scramble");
    }
    ASSERT_EQ(run(map).code, 0);
    EXPECT_EQ(slurp(path("f.spm")).size(), 16u + 3u * 2349u);
    ASSERT_EQ(run(ext).code, 0);
    EXPECT_EQ(slurp(path("back.txt")), bits + "\n");
  }
  write("junk.spm", "not a frame file");
  EXPECT_EQ(run({"sonet-map", "--extract", "--in", path("junk.spm"), "--out", path("x")}).code, 1);
}

TEST_F(CliTest, ScramblerCommands) {
  const auto dump = run({"scrambler", "dump", "--bits", "16"});
  EXPECT_EQ(dump.out, "bits\n1111111000000100\n");
  const auto a = run({"scrambler", "analyze"});
  EXPECT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("\nwhole_symbol,50,"), std::string::npos);
  EXPECT_NE(a.out.find("\nwith_fragments,58,"), std::string::npos);
}

TEST_F(CliTest, Fddi2Plan) {
  const auto req = write("req.txt", "# ch bytes\n1 24\n2 96\n");
  const auto r = run({"fddi2", "plan", "--modes", "PIIIIIIIIIIIIIII", "--requests", req});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("2,isochronous,1,24,1536\n"), std::string::npos);
  EXPECT_NE(r.out.find("2,isochronous,2,72,4608\n3,isochronous,2,24,1536\n"), std::string::npos);
  const auto big = write("big.txt", "1 1500\n");
  EXPECT_EQ(run({"fddi2", "plan", "--modes", "PIIIIIIIIIIIIIII", "--requests", big}).code, 1);
}

TEST_F(CliTest, PlanVerdicts) {
  const auto good = write("good.json", R"({"stations": 10, "links": [
      {"name": "a", "media": "LCF", "length_m": 500},
      {"name": "b", "media": "STP_COAX", "length_m": 100}]})");
  const auto r = run({"plan", "--ring", good});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ring,Verdict,pass"), std::string::npos);
  const auto bad = write("bad.json", R"({"stations": 10, "links": [{"name": "u", "media": "UTP", "length_m": 51}]})");
  const auto f = run({"plan", "--ring", bad});
  EXPECT_EQ(f.code, 1);
  EXPECT_NE(f.out.find("u,LengthExceeded,fail"), std::string::npos);
}

TEST(Report, EmptyResultIsHeaderOnly) {
  const fddi::cli::Report r{{"a", "b"}, {}};
  EXPECT_EQ(fddi::cli::emit_report(r, fddi::cli::Format::csv), "a,b\n");
  EXPECT_EQ(nlohmann::json::parse(fddi::cli::emit_report(r, fddi::cli::Format::json))["rows"].size(), 0u);
}

TEST(Report, CsvQuoting) {
  fddi::cli::Report r{{"x"}, {}};
  r.add({"a,\"b\""});
  EXPECT_EQ(fddi::cli::emit_csv(r), "x\n\"a,\"\"b\"\"\"\n");
}

TEST_F(CliTest, GlobalFlagsAfterSubcommand) {
  const auto r = run({"rates", "--level", "3", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.front(), '{');
}
