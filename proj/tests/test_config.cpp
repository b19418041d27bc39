#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "dslab/config.hpp"

using namespace dslab;

TEST(Config, ParsesSectionsCommentsAndWhitespace) {
  const Config c = Config::parse(
      "# header\n"
      "[grid]\n"
      "modes = 64\n"
      "  length=25.5  \n"
      "; other comment\n"
      "\n"
      "[solver]\n"
      "dealias = false\n"
      "dt = 1e-3\n");
  EXPECT_EQ(c.get_int("grid", "modes", 0), 64);
  EXPECT_DOUBLE_EQ(c.get_double("grid", "length", 0), 25.5);
  EXPECT_FALSE(c.get_bool("solver", "dealias", true));
  EXPECT_DOUBLE_EQ(c.get_double("solver", "dt", 0), 1e-3);
  EXPECT_DOUBLE_EQ(c.get_double("solver", "missing", 7.0), 7.0);
  EXPECT_FALSE(c.has("grid", "dt"));
}

TEST(Config, Lists) {
  const Config c = Config::parse("[k]\nN = 8, 16,32 ,64\nbad = 1,,2\n");
  EXPECT_EQ(c.get_list("k", "N", {}), (std::vector<double>{8, 16, 32, 64}));
  EXPECT_THROW(c.get_list("k", "bad", {}), ConfigError);
  EXPECT_EQ(c.get_list("k", "none", {1.5}), (std::vector<double>{1.5}));
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(Config::parse("modes = 4\n"), ConfigError);
  EXPECT_THROW(Config::parse("[grid\nmodes = 4\n"), ConfigError);
  EXPECT_THROW(Config::parse("[grid]\nmodes 4\n"), ConfigError);
  EXPECT_THROW(Config::parse("[grid]\nmodes = 4\nmodes = 8\n"), ConfigError);
  EXPECT_THROW(Config::parse("[a b]\n"), ConfigError);
  const Config c = Config::parse("[x]\nn = 3.5\nb = maybe\nf = 1.0abc\nu = -1\n");
  EXPECT_THROW(c.get_int("x", "n", 0), ConfigError);
  EXPECT_THROW(c.get_bool("x", "b", false), ConfigError);
  EXPECT_THROW(c.get_double("x", "f", 0), ConfigError);
  EXPECT_THROW(c.get_u64("x", "u", 0), ConfigError);
}

TEST(Config, ErrorNamesOriginAndLine) {
  try {
    Config::parse("[a]\nx = 1\noops\n", "my.ini");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("my.ini:3"), std::string::npos) << e.what();
  }
}

TEST(Config, MissingFileNamesPath) {
  try {
    Config::load("/nonexistent/dir/run.ini");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/run.ini"), std::string::npos);
  }
}

TEST(Config, SerializeParseIdempotent) {
  const std::string text =
      "[solver]\nt_end = 10\nc1 = 1\n\n# c\n[grid]\nmodes = 128\n[empty]\n[blocks]\nvalues = 1, 2, 4\n";
  const std::string once = Config::parse(text).serialize();
  EXPECT_EQ(Config::parse(once).serialize(), once);
  EXPECT_EQ(once, "[blocks]\nvalues = 1, 2, 4\n\n[empty]\n\n[grid]\nmodes = 128\n\n[solver]\nc1 = 1\nt_end = 10\n");
}

TEST(Config, RoundTripRandomConfigs) {
  std::mt19937_64 rng(7);
  const std::string alphabet = "abcdefgh_0123";
  auto name = [&] {
    std::string s;
    for (int i = 0, n = 1 + static_cast<int>(rng() % 6); i < n; ++i) s += alphabet[rng() % alphabet.size()];
    return s;
  };
  for (int trial = 0; trial < 50; ++trial) {
    Config c;
    for (int k = 0, n = static_cast<int>(rng() % 12); k < n; ++k)
      c.set(name(), name(), format_double(std::ldexp(static_cast<double>(rng() >> 11), -40)));
    const std::string s = c.serialize();
    const Config back = Config::parse(s);
    EXPECT_EQ(back.sections(), c.sections());
    EXPECT_EQ(back.serialize(), s);
  }
}

TEST(Config, UnknownKeys) {
  const Config c = Config::parse("[grid]\nmodes = 4\nmdoes = 8\n");
  EXPECT_EQ(c.unknown_keys("grid", {"modes", "length"}), std::vector<std::string>{"mdoes"});
}

TEST(Hash, GitBlobMatchesKnownIds) {
  // git hash-object of the empty blob and of "hello\n"
  EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
  EXPECT_EQ(sha1_hex("abc"), "a9993e364706816aba3e25717850c26c9cd0d89d");
}

TEST(Csv, FormatsRoundTripExactly) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Csv, TableLayout) {
  CsvTable t({"step", "t", "label", "flag"});
  t.add(3, 0.5, "ppp", true);
  t.add(std::size_t{4}, 1.0, std::string("pp"), false);
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.str(), "step,t,label,flag\n3,0.5,ppp,1\n4,1,pp,0\n");
  EXPECT_THROW(t.add(1, 2.0), std::logic_error);
  EXPECT_THROW(t.add(1, 2.0, "a,b", true), std::logic_error);
}

TEST(Manifest, HashTracksInputsOnly) {
  RunManifest a;
  a.command = "simulate";
  a.config = "[grid]\nmodes = 64\n";
  a.seed = 5;
  RunManifest b = a;
  b.wall_seconds = 12.0;
  b.steps = 99;
  EXPECT_EQ(a.input_hash(), b.input_hash());
  b.seed = 6;
  EXPECT_NE(a.input_hash(), b.input_hash());
  b = a;
  b.config = "[grid]\nmodes = 128\n";
  EXPECT_NE(a.input_hash(), b.input_hash());

  const auto j = a.to_json();
  for (const char* key : {"command", "tool_version", "config", "seed", "grid", "input_hash", "wall_seconds", "steps",
                          "outputs", "summary"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["input_hash"].get<std::string>().size(), 40u);
}

TEST(Manifest, WritesParseableJson) {
  const auto dir = std::filesystem::temp_directory_path() / "dslab_manifest_test";
  std::filesystem::create_directories(dir);
  RunManifest m;
  m.command = "knapp";
  m.outputs["knapp.csv"] = 4;
  m.write(dir);
  std::ifstream in(dir / "manifest.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["outputs"]["knapp.csv"].get<int>(), 4);
  std::filesystem::remove_all(dir);
}
