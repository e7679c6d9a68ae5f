#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gffexc/harness.hpp"
#include "gffexc/seeds.hpp"

using namespace gffexc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gffexc_harness_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small(const std::string& name) {
  ExperimentConfig c = default_config();
  c.n = 3;
  c.samples = 100;
  c.out = scratch(name).string();
  return c;
}

}  // namespace

TEST(Config, DefaultsAndEcho) {
  const auto parsed = parse_config("domain = square(side=2, center=0,0)\n");
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(parsed.config->samples, 100u);
  EXPECT_EQ(parsed.config->levels(), std::vector<int>{6});
  const auto again = parse_config(parsed.config->echo());
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(again.config->echo(), parsed.config->echo());
}

TEST(Config, ReportsLineOfBadLevel) {
  const auto parsed = parse_config("domain = square(side=2, center=0,0)\n\nn = 1\n");
  ASSERT_FALSE(parsed.ok());
  ASSERT_EQ(parsed.errors.size(), 1u);
  EXPECT_EQ(parsed.errors[0].line, 3u);
  EXPECT_EQ(parsed.errors[0].message, "value out of range for 'n': refinement level must be >= 2, got 1");
}

TEST(Config, DuplicateKeyNamesBothLines) {
  const auto parsed = parse_config("domain = square(side=2, center=0,0)\nM = 5\n[sample]\nM = 6\n");
  ASSERT_EQ(parsed.errors.size(), 1u);
  EXPECT_EQ(parsed.errors[0].message, "duplicate key 'M' (lines 2 and 4)");
}

TEST(Config, UnknownKeyAndMissingDomainAreAllReported) {
  const auto parsed = parse_config("colour = red\nn = 0\n");
  ASSERT_FALSE(parsed.ok());
  std::set<std::string> messages;
  for (const auto& e : parsed.errors) messages.insert(e.message);
  EXPECT_TRUE(messages.contains("unknown key 'colour'"));
  EXPECT_TRUE(messages.contains("missing required key 'domain'"));
  EXPECT_EQ(parsed.errors.size(), 3u);
}

TEST(Config, SectionsAndComments) {
  const auto parsed = parse_config(
      "# experiment\n[domain]\ndomain = rect(x0=0, y0=0, x1=1, y1=1)\n[lattice]\nn_list = 3, 4\n[stats]\n"
      "J = all\nmode = discrete\n");
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(parsed.config->levels(), (std::vector<int>{3, 4}));
  EXPECT_TRUE(parsed.config->ranks.all);
  EXPECT_EQ(parsed.config->mode, DecompositionMode::discrete);
  EXPECT_FALSE(parse_config("domain = rect(x0=0, y0=0, x1=1, y1=1)\n[bogus]\n").ok());
}

TEST(Seeds, DeterministicAndDistinct) {
  EXPECT_EQ(derive_seed(1, 2, StreamTag::field), derive_seed(1, 2, StreamTag::field));
  std::set<std::uint64_t> seen;
  const StreamTag tags[] = {StreamTag::field, StreamTag::openings, StreamTag::bridge, StreamTag::first_zero,
                            StreamTag::synthetic};
  for (std::uint64_t base = 0; base < 4; ++base) {
    for (std::uint64_t r = 0; r < 50'000; ++r) {
      for (StreamTag t : tags) seen.insert(derive_seed(base, r, t));
    }
  }
  EXPECT_EQ(seen.size(), 4u * 50'000u * 5u);
}

TEST(Seeds, LowBitsUniform) {
  constexpr std::size_t buckets = 1 << 16;
  constexpr std::size_t draws = 1 << 22;
  std::vector<std::size_t> count(buckets, 0);
  for (std::uint64_t r = 0; r < draws; ++r) ++count[derive_seed(7, r, StreamTag::field) & (buckets - 1)];
  const double expected = static_cast<double>(draws) / buckets;
  double chi2 = 0.0;
  for (auto c : count) chi2 += (c - expected) * (c - expected) / expected;
  // Chi-square with 65535 degrees of freedom: mean 65535, sd about 362.
  EXPECT_LT(std::abs(chi2 - (buckets - 1)), 5.0 * std::sqrt(2.0 * (buckets - 1)));
}

TEST(Csv, FormatsAndValidatesRows) {
  CsvTable t({"a", "b"});
  t << 1 << 0.1;
  t.end_row();
  t << std::string_view("x") << std::nan("");
  t.end_row();
  EXPECT_EQ(t.text(), "a,b\n1,0.1\nx,nan\n");
  t << 1;
  EXPECT_THROW(t.end_row(), std::logic_error);
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1e300), "1e+300");
}

TEST(Run, InvalidUsage) {
  std::ostringstream log;
  EXPECT_EQ(run(small("bad"), "bogus", "", log).exit_code, 2);
  EXPECT_EQ(run(small("bad"), "sample", "l2", log).exit_code, 2);
}

TEST(Run, CorruptedSignTestFails) {
  auto c = small("corrupt");
  c.n = 4;
  c.samples = 200;
  c.top = 3;
  c.corrupt = true;
  std::ostringstream log;
  const auto s = run(c, "stats", "sign-independence", log);
  EXPECT_EQ(s.exit_code, 1);
  EXPECT_TRUE(fs::exists(fs::path(c.out) / "manifest.txt"));
  EXPECT_NE(slurp(fs::path(c.out) / "manifest.txt").find("exit_code = 1"), std::string::npos);
}

TEST(Run, OutputsAreReproducible) {
  auto a = small("repro_a");
  auto b = small("repro_b");
  std::ostringstream log;
  ASSERT_EQ(run(a, "decompose", "", log).exit_code, 0);
  ASSERT_EQ(run(b, "decompose", "", log).exit_code, 0);
  for (const char* name : {"clusters.csv", "finiteness.csv"}) {
    const auto x = slurp(fs::path(a.out) / name);
    EXPECT_FALSE(x.empty());
    EXPECT_EQ(x, slurp(fs::path(b.out) / name)) << name;
  }
  EXPECT_EQ(first_line(slurp(fs::path(a.out) / "clusters.csv")), "n,replica,rank,id,sign,size,mass,diameter");
}

TEST(Run, CrossingGridShape) {
  auto c = small("crossing");
  c.n_list = {3, 4};
  c.samples = 20;
  std::ostringstream log;
  const auto s = run(c, "crossing", "", log);
  const auto text = slurp(fs::path(c.out) / "crossing.csv");
  EXPECT_EQ(first_line(text), "n,a,b,M,p_hat,ci_low,ci_high,seed0");
  EXPECT_EQ(line_count(text), 1u + 9u * 2u);
  EXPECT_EQ(s.table_rows.at("crossing.csv"), 18u);
}

TEST(Run, SampleVarianceSchema) {
  auto c = small("sample");
  std::ostringstream log;
  EXPECT_EQ(run(c, "sample", "", log).exit_code, 0);
  const auto text = slurp(fs::path(c.out) / "variance.csv");
  EXPECT_EQ(first_line(text), "n,vertex,x,y,green_vv,empirical_var,se");
  EXPECT_EQ(line_count(text), 1u + 225u);
  const auto manifest = slurp(fs::path(c.out) / "manifest.txt");
  EXPECT_NE(manifest.find("seed_rule = splitmix64-chain-v1"), std::string::npos);
  EXPECT_NE(manifest.find("[config]"), std::string::npos);
}
