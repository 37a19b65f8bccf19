// Command-line front end: run experiment configs, verification suites, and
// algorithm replays on dumped sample sets.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "blindbeam/algorithms.hpp"
#include "blindbeam/channels.hpp"
#include "blindbeam/error.hpp"
#include "blindbeam/harness.hpp"
#include "blindbeam/sampling.hpp"

namespace bb = blindbeam;

namespace {

int do_run(const std::string& config_path, const std::string& out_dir, int jobs) {
  const bb::ExperimentConfig config = bb::load_config(config_path);
  const auto report = bb::run(config, bb::RunOptions{out_dir, jobs});
  std::cout << "rows written: " << report.rows_written << ", skipped (already present): "
            << report.rows_skipped << '\n'
            << "results: " << report.results.string() << '\n'
            << "summary: " << report.summary.string() << '\n';
  return 0;
}

int do_verify(const std::string& suite, int jobs, const std::string& out_path) {
  bb::VerifyOptions options;
  options.jobs = jobs;
  const auto report = bb::verify(suite, options);
  if (out_path.empty()) {
    bb::write_verdicts(std::cout, report);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw bb::Error("cannot write '" + out_path + "'");
    bb::write_verdicts(out, report);
  }
  std::cerr << suite << ": " << (report.passed() ? "PASS" : "FAIL") << " ("
            << report.verdicts.size() << " checks)\n";
  return report.passed() ? 0 : 1;
}

int do_replay(const std::string& samples_path, const std::string& algo,
              const std::string& channels_path, const std::string& tie, std::uint64_t seed,
              double power_dbm, double noise_dbm) {
  std::ifstream in(samples_path);
  if (!in) throw bb::Error("cannot open sample file '" + samples_path + "'");
  const bb::SampleSet samples = bb::read_samples(in);
  const bb::TieBreakPolicy policy =
      tie == "random" ? bb::TieBreakPolicy::random(seed) : bb::TieBreakPolicy::lowest();
  const bb::LinkBudget budget = bb::LinkBudget::from_dbm(power_dbm, noise_dbm);

  std::optional<bb::ChannelSet> channels;
  if (!channels_path.empty()) {
    std::ifstream cin(channels_path);
    if (!cin) throw bb::Error("cannot open channel file '" + channels_path + "'");
    channels = bb::read_channels(cin);
  }

  bb::PhaseConfig config;
  if (algo == "csm") {
    config = bb::csm(samples, 0, policy);
  } else if (algo == "mv-csm") {
    config = bb::mv_csm_from_samples(samples, policy).config;
  } else if (algo == "p-csm") {
    config = bb::p_csm_from_samples(samples, policy).config;
  } else if (algo == "rms") {
    const auto objective =
        channels ? bb::RmsObjective::exact_snr : bb::RmsObjective::measured_power;
    config = samples.config(bb::rms_select(samples, channels ? &*channels : nullptr, budget,
                                           objective));
  } else if (bb::is_registered(algo)) {
    if (!channels) throw bb::Error("algorithm '" + algo + "' needs --channels");
    bb::SamplingPlan plan{samples.samples(), samples.resolution(), samples.mode(), {}};
    bb::AlgorithmContext ctx{*channels, budget, plan, policy, seed, &samples};
    config = bb::run_algorithm(algo, ctx).config;
  } else {
    throw bb::Error("unknown algorithm id '" + algo + "'");
  }

  std::cout << "algorithm_id," << algo << "\nconfig";
  for (auto k : config.indices()) std::cout << ',' << k;
  std::cout << '\n';
  if (channels) {
    const auto r = bb::evaluate(*channels, budget, config, algo, seed, samples.samples(), 0);
    std::cout << "min_snr_db," << bb::format_double(bb::to_db(r.min_snr)) << '\n';
    std::cout << "snr_db";
    for (double s : r.snr_per_position) std::cout << ',' << bb::format_double(bb::to_db(s));
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind IRS beamforming simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Execute an experiment config");
  run->add_option("--config", config_path, "Experiment config file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output.path)");
  run->add_option("--jobs", jobs, "Parallel (point, seed) tasks")->check(CLI::PositiveNumber);

  std::string suite, verdict_out;
  bool list = false;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "Suite name");
  verify->add_option("--jobs", jobs, "Parallel seeds")->check(CLI::PositiveNumber);
  verify->add_option("--out", verdict_out, "Write the verdict CSV here instead of stdout");
  verify->add_flag("--list", list, "List suite names");

  std::string samples_path, algo, channels_path, tie = "lowest";
  std::uint64_t seed = 0;
  double power_dbm = 20.0, noise_dbm = -80.0;
  auto* replay = app.add_subcommand("replay", "Run an algorithm on a dumped sample set");
  replay->add_option("--samples", samples_path, "Sample file")->required();
  replay->add_option("--algo", algo, "Algorithm id")->required();
  replay->add_option("--channels", channels_path, "Channel file (enables SNR evaluation)");
  replay->add_option("--tie", tie, "Tie-break policy")->check(CLI::IsMember({"lowest", "random"}));
  replay->add_option("--seed", seed, "Seed for random tie-breaking");
  replay->add_option("--power-dbm", power_dbm, "Transmit power in dBm");
  replay->add_option("--noise-dbm", noise_dbm, "Noise power in dBm");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return do_run(config_path, out_dir, jobs);
    if (*verify) {
      if (list) {
        for (const auto& name : bb::suite_names()) std::cout << name << '\n';
        return 0;
      }
      if (suite.empty()) throw bb::Error("verify needs --suite <name> (or --list)");
      return do_verify(suite, jobs, verdict_out);
    }
    return do_replay(samples_path, algo, channels_path, tie, seed, power_dbm, noise_dbm);
  } catch (const bb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
