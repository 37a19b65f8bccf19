#pragma once

// Line-oriented helpers shared by the channel and sample file formats.

#include <charconv>
#include <cstdint>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "blindbeam/error.hpp"

namespace blindbeam::detail {

/// Shortest text that parses back to exactly the same double.
inline std::string shortest(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

/// Fixed 17 significant digits.
inline std::string digits17(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& token, const std::string& context) {
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    if (token == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw Error(context + ": not a number: '" + token + "'");
  }
  return value;
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string what) : in_(in), what_(std::move(what)) {}

  std::vector<std::string> tokens() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      std::vector<std::string> out;
      for (std::string tok; ss >> tok;) out.push_back(tok);
      if (!out.empty()) return out;
    }
    throw Error(what_ + ": unexpected end of input after line " + std::to_string(line_no_));
  }

  void expect_tag(const std::string& tag, const std::string& version) {
    const auto t = tokens();
    if (t.size() != 2 || t[0] != tag || t[1] != version)
      throw Error(what_ + ": expected header '" + tag + " " + version + "'");
  }

  template <typename T>
  T field(const std::string& key) {
    const auto t = tokens();
    if (t.size() != 2 || t[0] != key) throw Error(where() + ": expected '" + key + " <value>'");
    if constexpr (std::is_same_v<T, std::string>) {
      return t[1];
    } else {
      T value{};
      const auto res = std::from_chars(t[1].data(), t[1].data() + t[1].size(), value);
      if (res.ec != std::errc() || res.ptr != t[1].data() + t[1].size())
        throw Error(where() + ": bad value for '" + key + "'");
      return value;
    }
  }

  std::vector<double> numbers(std::size_t count) {
    const auto t = tokens();
    if (t.size() != count)
      throw Error(where() + ": expected " + std::to_string(count) + " values, got " +
                  std::to_string(t.size()));
    std::vector<double> out;
    out.reserve(count);
    for (const auto& tok : t) out.push_back(parse_double(tok, where()));
    return out;
  }

  std::string where() const { return what_ + " line " + std::to_string(line_no_); }

 private:
  std::istream& in_;
  std::string what_;
  std::size_t line_no_ = 0;
};

}  // namespace blindbeam::detail
