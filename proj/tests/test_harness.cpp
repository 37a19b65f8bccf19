#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blindbeam/error.hpp"
#include "blindbeam/harness.hpp"

using namespace blindbeam;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("blindbeam-test-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  const auto text = slurp(p);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string field_of(const std::string& text) {
  try {
    parse(text).validate();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

const char* kSmall =
    "model.direct_scale = 1\n"
    "system.U = 3\n"
    "sampling.T = 500\n"
    "algorithms = mv-csm, rms\n"
    "seeds.count = 2\n"
    "sweep.axis = N\n"
    "sweep.values = 16, 32\n";

}  // namespace

TEST(Config, ParsesEveryKey) {
  const auto c = parse(
      "# comment\n"
      "model.type = pathloss\n"
      "model.direct_scale = 0.5   # trailing comment\n"
      "model.reflected_magnitude = 2\n"
      "system.N = 10\nsystem.U = 3\nsystem.K = 8\n"
      "sampling.T = 77\nsampling.S = 2\nsampling.mode = binary\n"
      "sampling.deterministic_symbol = true\nsampling.noiseless = true\n"
      "link.power_dbm = 10\nlink.noise_dbm = -90\n"
      "algorithms = cpp, rms\ntie = random\n"
      "seeds.count = 4\nseeds.base = 100\n"
      "sweep.axis = U\nsweep.values = 2, 4\n"
      "output.path = out/x\noutput.dump_samples = true\n");
  c.validate();
  EXPECT_EQ(c.model, ChannelModel::pathloss);
  EXPECT_EQ(c.direct_scale, 0.5);
  EXPECT_EQ(c.reflected_magnitude, 2.0);
  EXPECT_EQ(c.elements, 10u);
  EXPECT_EQ(c.resolution, 8);
  EXPECT_EQ(c.samples, 77u);
  EXPECT_EQ(c.measurement.symbols, 2);
  EXPECT_EQ(c.mode, SamplingMode::binary);
  EXPECT_TRUE(c.measurement.deterministic_symbol && c.measurement.noiseless);
  EXPECT_EQ(c.algorithms, (std::vector<std::string>{"cpp", "rms"}));
  EXPECT_EQ(c.tie.kind, TieBreak::seeded_random);
  EXPECT_EQ(c.base_seed, 100u);
  EXPECT_EQ(c.points(), (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(c.at_point(4).positions, 4u);
  EXPECT_EQ(c.output, fs::path("out/x"));
  EXPECT_TRUE(c.dump_samples);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(field_of("system.Q = 3\n"), "system.Q");
  EXPECT_EQ(field_of("system.N = many\n"), "system.N");
  EXPECT_EQ(field_of("system.N = 3\nsystem.N = 4\n"), "system.N");
  EXPECT_EQ(field_of("system.K = 3\nsampling.mode = binary\n"), "sampling.mode");
  EXPECT_EQ(field_of("algorithms = mv-csm, greedy\n"), "algorithms");
  EXPECT_EQ(field_of("sweep.axis = N\nsweep.values = 8, 4\n"), "sweep.values");
  EXPECT_EQ(field_of("sweep.axis = N\nsweep.values = 0, 4\n"), "sweep.values");
  EXPECT_EQ(field_of("tie = coin\n"), "tie");
  EXPECT_EQ(field_of("sampling.T = 0\n"), "sampling.T");
  EXPECT_EQ(field_of("sampling.noiseless = maybe\n"), "sampling.noiseless");
}

TEST(Config, PresetsLoad) {
  for (const char* name : {"fig4-desk.cfg", "quick.cfg"})
    EXPECT_NO_THROW(load_config(fs::path(BLINDBEAM_CONFIG_DIR) / name).validate()) << name;
}

TEST(Runner, RowCountAndSummary) {
  const auto dir = scratch("rows");
  const auto rep = run(parse(kSmall), {dir, 1});
  EXPECT_EQ(rep.rows_written, 8u);
  EXPECT_EQ(line_count(rep.results), 9u);
  EXPECT_EQ(slurp(rep.results).substr(0, csv_header().size()), csv_header());
  // One summary line per (algorithm, point).
  EXPECT_EQ(line_count(rep.summary), 5u);
}

TEST(Runner, RerunIsByteIdenticalAcrossJobCounts) {
  const auto a = scratch("det-a"), b = scratch("det-b");
  run(parse(kSmall), {a, 1});
  run(parse(kSmall), {b, 3});
  EXPECT_EQ(slurp(a / "results.csv"), slurp(b / "results.csv"));
  EXPECT_EQ(slurp(a / "summary.csv"), slurp(b / "summary.csv"));
}

TEST(Runner, ResumeSkipsCompletedRows) {
  const auto dir = scratch("resume");
  const auto cfg = parse(kSmall);
  run(cfg, {dir, 1});
  const auto full = slurp(dir / "results.csv");
  const auto again = run(cfg, {dir, 1});
  EXPECT_EQ(again.rows_written, 0u);
  EXPECT_EQ(again.rows_skipped, 8u);
  EXPECT_EQ(slurp(dir / "results.csv"), full);

  // Interrupted run: three rows and a torn fourth line.
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) pos = full.find('\n', pos) + 1;
  {
    std::ofstream out(dir / "results.csv", std::ios::binary | std::ios::trunc);
    out << full.substr(0, pos) << full.substr(pos, 10);
  }
  const auto resumed = run(cfg, {dir, 2});
  EXPECT_EQ(resumed.rows_skipped, 3u);
  EXPECT_EQ(resumed.rows_written, 5u);
  EXPECT_EQ(slurp(dir / "results.csv"), full);
}

TEST(Runner, EnvironmentOverridesConfigOutput) {
  const auto dir = scratch("env");
  auto cfg = parse(kSmall);
  cfg.output = scratch("env-unused");
  ::setenv("BLINDBEAM_OUT_DIR", dir.c_str(), 1);
  run(cfg, {});
  ::unsetenv("BLINDBEAM_OUT_DIR");
  EXPECT_TRUE(fs::exists(dir / "results.csv"));
  EXPECT_FALSE(fs::exists(cfg.output / "results.csv"));
}

TEST(Runner, DumpSamplesWritesInputs) {
  const auto dir = scratch("dump");
  auto cfg = parse(kSmall);
  cfg.dump_samples = true;
  cfg.seed_count = 1;
  run(cfg, {dir, 1});
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    files += e.path().extension() == ".samples";
  EXPECT_EQ(files, 2u);
}

TEST(Runner, WorkCountersAreLinear) {
  auto cfg = parse("model.direct_scale = 1\nsystem.N = 16\nsystem.U = 2\nsampling.T = 400\n"
                   "algorithms = mv-csm, rms\n");
  const auto base = run_point(cfg, 1);
  auto check = [&](ExperimentConfig c, double mv_ratio, double rms_ratio) {
    const auto rows = run_point(c, 1);
    EXPECT_NEAR(double(rows[0].work) / double(base[0].work), mv_ratio, 0.05 * mv_ratio);
    EXPECT_NEAR(double(rows[1].work) / double(base[1].work), rms_ratio, 0.05 * rms_ratio);
  };
  auto c = cfg;
  c.elements = 32;
  check(c, 2.0, 1.0);
  c = cfg;
  c.samples = 800;
  check(c, 2.0, 2.0);
  c = cfg;
  c.positions = 4;
  check(c, 2.0, 2.0);
}

TEST(Runner, SumRateNanForSinglePosition) {
  auto cfg = parse("system.N = 8\nsystem.U = 1\nsampling.T = 200\nalgorithms = csm\n");
  const auto rows = run_point(cfg, 1);
  EXPECT_TRUE(std::isnan(rows[0].sum_rate));
  EXPECT_EQ(to_csv(rows[0]).find(",nan,") != std::string::npos, true);
}

TEST(Runner, Fig4DeskPresetGrowsWithN) {
  const auto dir = scratch("fig4");
  auto cfg = load_config(fs::path(BLINDBEAM_CONFIG_DIR) / "fig4-desk.cfg");
  cfg.algorithms = {"mv-csm"};
  const auto rep = run(cfg, {dir, 1});
  const auto rows = csv_rows(rep.summary);
  ASSERT_EQ(rows.size(), 4u);
  double previous = 0.0;
  for (const auto& r : rows) {
    EXPECT_EQ(r[0], "mv-csm");
    EXPECT_EQ(r[5], "20");
    const double mean = std::stod(r[6]);
    EXPECT_GT(mean, previous) << "N=" << r[1];
    previous = mean;
  }
}

TEST(Verify, WorkedExampleSuite) {
  const auto rep = verify("table1");
  EXPECT_TRUE(rep.passed());
  const auto csv = verdict_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "suite,check_id,statistic,threshold,pass");
  EXPECT_TRUE(verify("empty").passed());
  EXPECT_THROW(verify("nonsense"), Error);
}
