#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace distq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct Options {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

/// Files to write (name, content) and a human-readable summary. Nothing is
/// written until a command has finished computing.
struct Outcome {
  int code = kExitOk;
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
};

Outcome design_command(const Section& cfg, const Options& opt);
Outcome fisher_command(const Section& cfg, const Options& opt);
Outcome simulate_command(const Section& cfg, const Options& opt);
Outcome pbpo_command(const Section& cfg, const Options& opt);
Outcome rate_command(const Section& cfg, const Options& opt);
Outcome counterexample_command(const Section& cfg, const Options& opt);

/// Entry point of the `distq` tool; returns the process exit code.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace distq::cli
