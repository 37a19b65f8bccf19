#include <omp.h>

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "blindbeam/error.hpp"
#include "blindbeam/harness.hpp"
#include "blindbeam/theory.hpp"
#include "text_io.hpp"

namespace blindbeam {

namespace fs = std::filesystem;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  return detail::digits17(value);
}

std::string csv_header() {
  return "algorithm_id,N,U,K,T,seed,min_snr_db,mean_snr_db,sum_rate,samples_used,work_counter";
}

std::string to_csv(const ResultRow& r) {
  std::string s = r.algorithm_id;
  for (const auto& field :
       {std::to_string(r.elements), std::to_string(r.positions), std::to_string(r.resolution),
        std::to_string(r.samples), std::to_string(r.seed), format_double(r.min_snr_db),
        format_double(r.mean_snr_db), format_double(r.sum_rate), std::to_string(r.samples_used),
        std::to_string(r.work)}) {
    s += ',';
    s += field;
  }
  return s;
}

ChannelSet make_channels(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.model == ChannelModel::pathloss)
    return gen_pathloss_rayleigh(Topology::grid(config.positions), config.elements, seed);
  return gen_assumption1(config.positions, config.elements,
                         Assumption1Params::uniform(config.positions, config.elements,
                                                    config.reflected_magnitude,
                                                    config.direct_scale),
                         seed);
}

namespace {

SamplingPlan plan_of(const ExperimentConfig& c) {
  return SamplingPlan{c.samples, c.resolution, c.mode, c.measurement};
}

std::string row_key(const std::string& id, std::size_t N, std::size_t U, int K, std::size_t T,
                    std::uint64_t seed) {
  std::ostringstream k;
  k << id << ',' << N << ',' << U << ',' << K << ',' << T << ',' << seed;
  return k.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

ResultRow parse_row(const std::string& line, const fs::path& file) {
  const auto cells = split_csv(line);
  if (cells.size() != 11) throw Error(file.string() + ": malformed row '" + line + "'");
  const std::string where = file.string();
  auto integer = [&](const std::string& s) -> std::uint64_t {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw Error(where + ": bad integer '" + s + "'");
    return v;
  };
  ResultRow r;
  r.algorithm_id = cells[0];
  r.elements = integer(cells[1]);
  r.positions = integer(cells[2]);
  r.resolution = static_cast<int>(integer(cells[3]));
  r.samples = integer(cells[4]);
  r.seed = integer(cells[5]);
  r.min_snr_db = detail::parse_double(cells[6], where);
  r.mean_snr_db = detail::parse_double(cells[7], where);
  r.sum_rate = detail::parse_double(cells[8], where);
  r.samples_used = integer(cells[9]);
  r.work = integer(cells[10]);
  return r;
}

// Rows already on disk. A torn final line from an interrupted run is cut.
std::vector<ResultRow> load_results(const fs::path& file) {
  std::vector<ResultRow> rows;
  if (!fs::exists(file)) return rows;
  std::string content;
  {
    std::ifstream in(file, std::ios::binary);
    content.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  if (!content.empty() && content.back() != '\n') {
    const auto last = content.rfind('\n');
    content.erase(last == std::string::npos ? 0 : last + 1);
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    out << content;
  }
  std::istringstream in(content);
  std::string line;
  if (!std::getline(in, line)) return rows;
  if (line != csv_header())
    throw Error(file.string() + ": existing file has a different header; refusing to append");
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(parse_row(line, file));
  return rows;
}

struct Task {
  ExperimentConfig config;
  std::uint64_t seed = 0;
  std::vector<std::string> missing;
};

void dump_inputs(const fs::path& dir, const ExperimentConfig& c, std::uint64_t seed) {
  fs::create_directories(dir);
  const std::string stem = "N" + std::to_string(c.elements) + "-U" + std::to_string(c.positions) +
                           "-T" + std::to_string(c.samples) + "-seed" + std::to_string(seed);
  const ChannelSet channels = make_channels(c, seed);
  {
    std::ofstream out(dir / (stem + ".channels"), std::ios::binary);
    write_channels(out, channels);
  }
  std::ofstream out(dir / (stem + ".samples"), std::ios::binary);
  write_samples(out, collect_samples(channels, c.budget(), plan_of(c), seed));
}

void write_summary(const fs::path& file, const ExperimentConfig& config,
                   const std::vector<ResultRow>& rows) {
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << "algorithm_id,N,U,K,T,seeds,min_snr_mean,min_snr_ci_low,min_snr_ci_high,"
           "min_snr_db,mean_snr_db,sum_rate_mean,samples_used,work_mean\n";
    for (std::size_t v : config.points()) {
      const ExperimentConfig c = config.at_point(v);
      for (const auto& id : config.algorithms) {
        std::vector<double> min_lin, mean_lin, rate, work;
        std::size_t used = 0;
        for (std::size_t i = 0; i < config.seed_count; ++i) {
          const std::uint64_t seed = config.base_seed + i;
          const auto key = row_key(id, c.elements, c.positions, c.resolution, c.samples, seed);
          for (const auto& r : rows) {
            if (row_key(r.algorithm_id, r.elements, r.positions, r.resolution, r.samples,
                        r.seed) != key)
              continue;
            min_lin.push_back(from_db(r.min_snr_db));
            mean_lin.push_back(from_db(r.mean_snr_db));
            rate.push_back(r.sum_rate);
            work.push_back(static_cast<double>(r.work));
            used = r.samples_used;
            break;
          }
        }
        if (min_lin.empty()) continue;
        const auto ms = mean_se(min_lin);
        double lo = std::nan(""), hi = std::nan("");
        if (min_lin.size() >= 2) {
          const boost::math::students_t t(static_cast<double>(min_lin.size() - 1));
          const double q = boost::math::quantile(t, 0.975);
          lo = ms.mean - q * ms.se;
          hi = ms.mean + q * ms.se;
        }
        out << id << ',' << c.elements << ',' << c.positions << ',' << c.resolution << ','
            << c.samples << ',' << min_lin.size() << ',' << format_double(ms.mean) << ','
            << format_double(lo) << ',' << format_double(hi) << ','
            << format_double(to_db(ms.mean)) << ',' << format_double(to_db(mean_of(mean_lin)))
            << ',' << format_double(mean_of(rate)) << ',' << used << ','
            << format_double(mean_of(work)) << '\n';
      }
    }
  }
  fs::rename(tmp, file);
}

}  // namespace

std::vector<ResultRow> run_point(const ExperimentConfig& config, std::uint64_t seed,
                                 std::vector<BeamformingResult>* results) {
  const ChannelSet channels = make_channels(config, seed);
  const LinkBudget budget = config.budget();
  const SamplingPlan plan = plan_of(config);
  TieBreakPolicy tie = config.tie;
  tie.seed = seed;

  const auto& registry = algorithm_registry();
  std::optional<SampleSet> samples;
  for (const auto& id : config.algorithms) {
    const auto it = registry.find(id);
    if (it != registry.end() && it->second.uses_samples) {
      samples.emplace(collect_samples(channels, budget, plan, seed));
      break;
    }
  }

  std::vector<ResultRow> rows;
  for (const auto& id : config.algorithms) {
    const AlgorithmContext ctx{channels, budget, plan, tie, seed, samples ? &*samples : nullptr};
    BeamformingResult r = run_algorithm(id, ctx);
    ResultRow row;
    row.algorithm_id = id;
    row.elements = config.elements;
    row.positions = config.positions;
    row.resolution = config.resolution;
    row.samples = config.samples;
    row.seed = seed;
    row.min_snr_db = to_db(r.min_snr);
    row.mean_snr_db = to_db(mean_of(r.snr_per_position));
    row.sum_rate =
        channels.positions() >= 2 ? sum_rate_uniform(channels, r.config, budget) : std::nan("");
    row.samples_used = r.sample_budget;
    row.work = r.work;
    rows.push_back(row);
    if (results) results->push_back(std::move(r));
  }
  return rows;
}

RunReport run(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  fs::path dir = config.output;
  if (const char* env = std::getenv("BLINDBEAM_OUT_DIR"); env && *env) dir = env;
  if (!options.out_dir.empty()) dir = options.out_dir;
  fs::create_directories(dir);

  RunReport report;
  report.results = dir / "results.csv";
  report.summary = dir / "summary.csv";

  const auto existing = load_results(report.results);
  std::set<std::string> done;
  for (const auto& r : existing)
    done.insert(row_key(r.algorithm_id, r.elements, r.positions, r.resolution, r.samples, r.seed));

  std::vector<Task> tasks;
  for (std::size_t v : config.points()) {
    const ExperimentConfig c = config.at_point(v);
    for (std::size_t i = 0; i < config.seed_count; ++i) {
      Task task{c, config.base_seed + i, {}};
      for (const auto& id : config.algorithms) {
        if (done.count(row_key(id, c.elements, c.positions, c.resolution, c.samples, task.seed)))
          ++report.rows_skipped;
        else
          task.missing.push_back(id);
      }
      if (!task.missing.empty()) tasks.push_back(std::move(task));
    }
  }

  std::ofstream out(report.results, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot open '" + report.results.string() + "' for writing");
  if (existing.empty() && fs::file_size(report.results) == 0) out << csv_header() << '\n';
  out.flush();

  const int jobs = std::max(1, options.jobs);
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(tasks.size());
  std::string failure;
#pragma omp parallel for ordered schedule(dynamic) num_threads(jobs) if (jobs > 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    std::vector<ResultRow> rows;
    std::string error;
    try {
      ExperimentConfig c = tasks[i].config;
      c.algorithms = tasks[i].missing;
      rows = run_point(c, tasks[i].seed);
      if (c.dump_samples) dump_inputs(dir / "samples", c, tasks[i].seed);
    } catch (const std::exception& e) {
      error = e.what();
    }
#pragma omp ordered
    {
      // Rows land in task order regardless of which thread finished first.
      if (failure.empty() && !error.empty()) failure = error;
      if (failure.empty()) {
        for (const auto& r : rows) out << to_csv(r) << '\n';
        out.flush();
        report.rows_written += rows.size();
      }
    }
  }
  out.close();
  if (!failure.empty()) throw Error("run aborted: " + failure);

  write_summary(report.summary, config, load_results(report.results));
  return report;
}

}  // namespace blindbeam
