// Flat "dotted.key = value" experiment files. '#' starts a comment; lists
// are comma separated. Every key is optional and unknown keys are errors.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "blindbeam/error.hpp"
#include "blindbeam/harness.hpp"

namespace blindbeam {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ConfigError(key, "expected a number, got '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + value + "'");
}

SweepAxis parse_axis(const std::string& key, const std::string& value) {
  if (value == "none") return SweepAxis::none;
  if (value == "N") return SweepAxis::elements;
  if (value == "U") return SweepAxis::positions;
  if (value == "T") return SweepAxis::samples;
  throw ConfigError(key, "expected none, N, U or T, got '" + value + "'");
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "model.type") {
    if (value == "assumption1")
      c.model = ChannelModel::assumption1;
    else if (value == "pathloss")
      c.model = ChannelModel::pathloss;
    else
      throw ConfigError(key, "expected assumption1 or pathloss, got '" + value + "'");
  } else if (key == "model.direct_scale") {
    c.direct_scale = parse_number<double>(key, value);
  } else if (key == "model.reflected_magnitude") {
    c.reflected_magnitude = parse_number<double>(key, value);
  } else if (key == "system.N") {
    c.elements = parse_number<std::size_t>(key, value);
  } else if (key == "system.U") {
    c.positions = parse_number<std::size_t>(key, value);
  } else if (key == "system.K") {
    c.resolution = parse_number<int>(key, value);
  } else if (key == "sampling.T") {
    c.samples = parse_number<std::size_t>(key, value);
  } else if (key == "sampling.S") {
    c.measurement.symbols = parse_number<int>(key, value);
  } else if (key == "sampling.mode") {
    try {
      c.mode = parse_sampling_mode(value);
    } catch (const Error& e) {
      throw ConfigError(key, e.what());
    }
  } else if (key == "sampling.deterministic_symbol") {
    c.measurement.deterministic_symbol = parse_bool(key, value);
  } else if (key == "sampling.noiseless") {
    c.measurement.noiseless = parse_bool(key, value);
  } else if (key == "link.power_dbm") {
    c.power_dbm = parse_number<double>(key, value);
  } else if (key == "link.noise_dbm") {
    c.noise_dbm = parse_number<double>(key, value);
  } else if (key == "algorithms") {
    c.algorithms = split_list(value);
  } else if (key == "tie") {
    if (value == "lowest")
      c.tie.kind = TieBreak::lowest_index;
    else if (value == "random")
      c.tie.kind = TieBreak::seeded_random;
    else
      throw ConfigError(key, "expected lowest or random, got '" + value + "'");
  } else if (key == "seeds.count") {
    c.seed_count = parse_number<std::size_t>(key, value);
  } else if (key == "seeds.base") {
    c.base_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "sweep.axis") {
    c.axis = parse_axis(key, value);
  } else if (key == "sweep.values") {
    c.sweep_values.clear();
    for (const auto& item : split_list(value))
      c.sweep_values.push_back(parse_number<std::size_t>(key, item));
  } else if (key == "output.path") {
    c.output = value;
  } else if (key == "output.dump_samples") {
    c.dump_samples = parse_bool(key, value);
  } else {
    throw ConfigError(key, "unknown key");
  }
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::elements: return "N";
    case SweepAxis::positions: return "U";
    case SweepAxis::samples: return "T";
    case SweepAxis::none: break;
  }
  return "none";
}

std::vector<std::size_t> ExperimentConfig::points() const {
  if (axis == SweepAxis::none) return {0};
  return sweep_values;
}

ExperimentConfig ExperimentConfig::at_point(std::size_t value) const {
  ExperimentConfig c = *this;
  switch (axis) {
    case SweepAxis::elements: c.elements = value; break;
    case SweepAxis::positions: c.positions = value; break;
    case SweepAxis::samples: c.samples = value; break;
    case SweepAxis::none: break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (!(direct_scale > 0.0)) throw ConfigError("model.direct_scale", "must be positive");
  if (!(reflected_magnitude > 0.0)) throw ConfigError("model.reflected_magnitude", "must be positive");
  if (resolution < 2 || resolution > 65535) throw ConfigError("system.K", "must be in [2, 65535]");
  if (mode == SamplingMode::binary && resolution % 2 != 0)
    throw ConfigError("sampling.mode", "binary sampling needs an even system.K");
  if (measurement.symbols < 1) throw ConfigError("sampling.S", "must be at least 1");
  if (seed_count < 1) throw ConfigError("seeds.count", "must be at least 1");
  if (algorithms.empty()) throw ConfigError("algorithms", "roster is empty");
  std::set<std::string> seen;
  for (const auto& id : algorithms) {
    if (!is_registered(id)) throw ConfigError("algorithms", "unknown algorithm id '" + id + "'");
    if (!seen.insert(id).second) throw ConfigError("algorithms", "duplicate id '" + id + "'");
  }
  if (axis == SweepAxis::none) {
    if (!sweep_values.empty()) throw ConfigError("sweep.values", "given but sweep.axis is none");
  } else {
    if (sweep_values.empty()) throw ConfigError("sweep.values", "empty list for a sweep");
    for (std::size_t i = 1; i < sweep_values.size(); ++i)
      if (sweep_values[i] <= sweep_values[i - 1])
        throw ConfigError("sweep.values", "must be strictly increasing");
  }
  const char* field[] = {"system.N", "system.U", "sampling.T"};
  for (std::size_t v : points()) {
    const ExperimentConfig c = at_point(v);
    const std::size_t values[] = {c.elements, c.positions, c.samples};
    for (int i = 0; i < 3; ++i) {
      if (values[i] == 0) {
        const bool swept = (axis == SweepAxis::elements && i == 0) ||
                           (axis == SweepAxis::positions && i == 1) ||
                           (axis == SweepAxis::samples && i == 2);
        throw ConfigError(swept ? "sweep.values" : field[i], "must be at least 1");
      }
    }
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    apply(c, key, value);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace blindbeam
