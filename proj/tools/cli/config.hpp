#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "distq/noise.hpp"
#include "distq/prior.hpp"
#include "distq/quantizer.hpp"

namespace distq::cli {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Read-only view of one JSON object that remembers which keys were read,
/// so that `finish()` can reject everything else.
class Section {
 public:
  Section(const json& value, std::string path);

  bool has(const std::string& key) const;
  Section child(const std::string& key) const;
  std::optional<Section> optional_child(const std::string& key) const;
  std::vector<Section> children(const std::string& key) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  double positive(const std::string& key, double fallback) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::size_t> counts(const std::string& key) const;
  std::vector<std::vector<double>> matrix(const std::string& key) const;

  /// Throws ConfigError naming the first key that was never read.
  void finish() const;

  const std::string& path() const noexcept { return path_; }
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

 private:
  const json& at(const std::string& key) const;

  const json* value_;
  std::string path_;
  mutable std::set<std::string> used_;
};

json load_config(const std::optional<std::filesystem::path>& path);

// {"kind": "uniform", "lo", "hi"} | {"kind": "gaussian", "mean", "variance", "truncate": [lo, hi]}
// | {"kind": "tabulated", "nodes", "density"} | {"kind": "point_mass", "at"}
ParamPrior parse_prior(const Section& s);
// {"kind": "delta"} | {"kind": "gaussian", "variance"} | {"kind": "raised_cosine", "center"}
// | {"kind": "tabulated", "nodes", "density"}
NoiseModel parse_noise(const Section& s);
// {"kind": "threshold", "T"} | {"kind": "sine", "lo", "hi"} | {"kind": "tabulated", "y", "response"}
BinaryQuantizer parse_quantizer(const Section& s);

}  // namespace distq::cli
