#pragma once

// Batch experiment runner and verification suites behind the CLI.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "blindbeam/algorithms.hpp"
#include "blindbeam/channels.hpp"
#include "blindbeam/sampling.hpp"

namespace blindbeam {

enum class ChannelModel { assumption1, pathloss };
enum class SweepAxis { none, elements, positions, samples };

/// Everything one run depends on. Parsed from a flat "dotted.key = value"
/// file; see configs/ for examples.
struct ExperimentConfig {
  ChannelModel model = ChannelModel::assumption1;
  double reflected_magnitude = 1.0;  ///< model.reflected_magnitude (c_u)
  double direct_scale = 0.1;         ///< model.direct_scale: |h0| = scale sqrt(N) c

  std::size_t elements = 64;   ///< system.N
  std::size_t positions = 4;   ///< system.U
  int resolution = 4;          ///< system.K
  std::size_t samples = 1000;  ///< sampling.T
  SamplingMode mode = SamplingMode::full;
  MeasurementModel measurement{};
  double power_dbm = 20.0;   ///< link.power_dbm
  double noise_dbm = -80.0;  ///< link.noise_dbm

  std::vector<std::string> algorithms{"mv-csm"};
  TieBreakPolicy tie{};
  std::size_t seed_count = 1;
  std::uint64_t base_seed = 1;

  SweepAxis axis = SweepAxis::none;
  std::vector<std::size_t> sweep_values;

  std::filesystem::path output = "results";
  bool dump_samples = false;

  LinkBudget budget() const { return LinkBudget::from_dbm(power_dbm, noise_dbm); }
  /// Sweep points; a single point when the axis is none.
  std::vector<std::size_t> points() const;
  /// Copy with the sweep variable set to value.
  ExperimentConfig at_point(std::size_t value) const;
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string_view to_string(SweepAxis axis);

struct RunOptions {
  std::filesystem::path out_dir;  ///< overrides config.output when non-empty
  int jobs = 1;
};

struct RunReport {
  std::size_t rows_written = 0;
  std::size_t rows_skipped = 0;
  std::filesystem::path results;
  std::filesystem::path summary;
};

struct ResultRow {
  std::string algorithm_id;
  std::size_t elements = 0;
  std::size_t positions = 0;
  int resolution = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double min_snr_db = 0.0;
  double mean_snr_db = 0.0;
  double sum_rate = 0.0;
  std::size_t samples_used = 0;
  std::uint64_t work = 0;
};

/// Channel instance for (config at a sweep point, seed).
ChannelSet make_channels(const ExperimentConfig& config, std::uint64_t seed);

/// Every roster algorithm on one (point, seed). Sample-based algorithms share
/// one SampleSet.
std::vector<ResultRow> run_point(const ExperimentConfig& config, std::uint64_t seed,
                                 std::vector<BeamformingResult>* results = nullptr);

/// Writes results.csv (append-only; completed rows are skipped on resume)
/// and regenerates summary.csv at the end.
RunReport run(const ExperimentConfig& config, const RunOptions& options);

std::string format_double(double value);
std::string csv_header();
std::string to_csv(const ResultRow& row);

// -- verification -------------------------------------------------------------

/// The six-sample worked example (N=4, K=2, U=1): phases as indices
/// (1 = pi) and the measured powers 2.8, 1.0, 1.5, 3.3, 0.3, 0.4.
SampleSet table1_dataset();

struct Verdict {
  std::string check;
  double statistic = 0.0;
  std::string threshold;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<Verdict> verdicts;
  bool passed() const;
};

struct VerifyOptions {
  int jobs = 1;
  /// Scratch directory for suites that exercise the runner.
  std::filesystem::path scratch = std::filesystem::temp_directory_path() / "blindbeam-verify";
};

std::vector<std::string> suite_names();
bool is_suite(const std::string& name);
SuiteReport verify(const std::string& suite, const VerifyOptions& options = {});
void write_verdicts(std::ostream& out, const SuiteReport& report, bool header = true);
/// Verdict CSV text of one report, header included.
std::string verdict_csv(const SuiteReport& report);

/// Rerun each suite and compare its verdict CSV byte for byte against
/// reference[suite]; suites without a reference are run twice. Reruns use
/// a different job count than the reference run.
SuiteReport determinism_check(const std::vector<std::string>& suites,
                              const std::map<std::string, std::string>& reference,
                              const VerifyOptions& options = {});

}  // namespace blindbeam
