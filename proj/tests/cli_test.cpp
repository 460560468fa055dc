// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/cli.hpp"

#include <cstdio>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "sprkit/keyvalue.hpp"
#include "sprkit/reports.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace sprkit {
namespace {

const fs::path kDemo = fs::path(SPRKIT_SOURCE_DIR) / "fixtures/demo";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    auto rel = fs::relative(e.path(), root).generic_string();
    if (rel.rfind("store/", 0) == 0) continue;
    files[rel] = read_file(e.path());
  }
  return files;
}

std::size_t count_matrices(const fs::path& root) {
  std::size_t n = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "matrices")) {
    const auto name = e.path().filename().string();
    n += e.is_regular_file() && name.find(".full.") == std::string::npos;
  }
  return n;
}

TEST(Cli, NoArgumentsPrintsUsage) {
  auto r = cli({});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(std::system((std::string(SPRKIT_CLI_PATH) + " >/dev/null 2>&1").c_str()) >> 8, cli::kExitUsage);
}

TEST(Cli, UnknownSubcommandOrFlagIsUsageError) {
  EXPECT_EQ(cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(cli({"analyze", "--no-such-flag"}).code, cli::kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, cli::kExitOk);
}

TEST(Cli, IngestDemo) {
  auto r = cli({"ingest", "--config", (kDemo / "sprkit.conf").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("pairs: 6"), std::string::npos);
}

TEST(Cli, ReplayAnalyzeReportValidate) {
  testing::TempDir dir;
  const std::string out = (dir.path() / "out").string();
  auto r = cli({"analyze", "--replay", kDemo.string(), "--out", out, "--l-min", "3", "--l-max", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  // fake-a and fake-b at both temperatures, fake-c at temperature 1 only.
  EXPECT_EQ(count_matrices(out), 5u * 18u);
  const std::string header = read_file(fs::path(out) / "matrices/primary/fake-a/t0_l03.csv");
  EXPECT_EQ(header.substr(0, header.find('\n')), "group,primary,CGPT_p=01,CGPT_p=02,CGPT_p=03,control");
  const std::string t1 = read_file(fs::path(out) / "matrices/primary/fake-c/t1_l20.csv");
  EXPECT_EQ(t1.substr(0, t1.find('\n')), "group,primary,CGPT_p=01,CGPT_p=02,CGPT_p=03,CGPT_p=04,CGPT_p=05,control");

  for (const char* kind : {"sweep", "spread", "relative"}) {
    const fs::path base = fs::path(out) / "series/primary" / kind;
    EXPECT_EQ(parse_series_csv(read_file(base.string() + ".v1.csv")),
              parse_series_json(json::parse(read_file(base.string() + ".v1.json"))))
        << kind;
  }
  auto meta = json::parse(read_file(fs::path(out) / "metadata.json"));
  EXPECT_EQ(meta["sources"][0]["spread_absent"][0]["model"], "fake-c");
  EXPECT_EQ(meta["manifest_checksum"].get<std::string>().size(), 64u);

  const auto first = snapshot(out);
  auto rep = cli({"report", "--config", (kDemo / "sprkit.conf").string(), "--out", out});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_EQ(snapshot(out), first);

  auto ok = cli({"validate", "--config", (kDemo / "sprkit.conf").string(), "--out", out});
  EXPECT_EQ(ok.code, 0) << ok.err;

  const fs::path victim = fs::path(out) / "store/fake-b/t1/ch03_round-4.txt";
  std::string bytes = read_file(victim);
  bytes[bytes.size() / 2] ^= 0x20;
  write_file_atomic(victim, bytes);
  auto bad = cli({"validate", "--store", (fs::path(out) / "store").string()});
  EXPECT_EQ(bad.code, cli::kExitError);
  EXPECT_NE(bad.err.find("checksum"), std::string::npos);
  EXPECT_NE(bad.err.find("ch03_round-4.txt"), std::string::npos);
}

TEST(Cli, DemoSweepMatchesGolden) {
  testing::TempDir dir;
  const std::string out = (dir.path() / "out").string();
  ASSERT_EQ(cli({"analyze", "--replay", kDemo.string(), "--out", out}).code, 0);
  EXPECT_EQ(read_file(fs::path(out) / "series/primary/sweep.v1.csv"),
            read_file(fs::path(SPRKIT_SOURCE_DIR) / "tests/golden/demo_sweep.v1.csv"));
}

TEST(Cli, FlagsOverrideConfig) {
  testing::TempDir dir;
  const std::string out = (dir.path() / "out").string();
  auto r = cli({"analyze", "--replay", kDemo.string(), "--out", out, "--l-max", "5", "--models", "fake-a"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_matrices(out), 2u * 3u);
  EXPECT_TRUE(fs::exists(fs::path(out) / "matrices/primary/fake-a/t1_l05.csv"));
  EXPECT_FALSE(fs::exists(fs::path(out) / "matrices/primary/fake-a/t1_l06.csv"));
}

TEST(Cli, ConfigErrorsAreReported) {
  testing::TempDir dir;
  write_file_atomic(dir.path() / "bad.conf", "[run]\nl_mni=3\n");
  auto r = cli({"ingest", "--config", (dir.path() / "bad.conf").string()});
  EXPECT_EQ(r.code, cli::kExitError);
  EXPECT_NE(r.err.find("l_mni"), std::string::npos);
  EXPECT_EQ(cli({"ingest", "--config", (kDemo / "sprkit.conf").string(), "--temps", "0.5"}).code, cli::kExitError);
}

TEST(Cli, FailedCampaignExitsWithPartialCode) {
  testing::TempDir dir;
  std::string conf = read_file(kDemo / "sprkit.conf");
  conf.replace(conf.find("dataset=index.tsv"), 17, "dataset=" + (kDemo / "index.tsv").string());
  conf += "\n[provider]\ncredential_env=SPRKIT_TEST_UNSET_CREDENTIAL\nmax_retries=0\n";
  write_file_atomic(dir.path() / "live.conf", conf);
  ::unsetenv("SPRKIT_TEST_UNSET_CREDENTIAL");
  auto r = cli({"generate", "--config", (dir.path() / "live.conf").string(), "--mode", "live", "--gap-seconds",
                "0.001", "--store", (dir.path() / "store").string(), "--models", "fake-a", "--temps", "1"});
  EXPECT_EQ(r.code, cli::kExitPartial) << r.err;
  EXPECT_NE(r.out.find("failed 30"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("SPRKIT_TEST_UNSET_CREDENTIAL"), std::string::npos);
}

}  // namespace
}  // namespace sprkit
