#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

#include "distq/csv.hpp"
#include "distq/error.hpp"

namespace distq::cli {

namespace {

using Command = std::function<Outcome(const Section&, const Options&)>;

const std::map<std::string, std::pair<Command, std::string>>& commands() {
  static const std::map<std::string, std::pair<Command, std::string>> table = {
      {"design", {design_command, "least-favourable response and the quantizer that realises it"}},
      {"fisher", {fisher_command, "posterior Fisher information of a quantizer under a prior"}},
      {"simulate", {simulate_command, "Monte Carlo MSE of the arcsine estimator against 4/(N pi^2)"}},
      {"pbpo", {pbpo_command, "person-by-person optimisation on a finite problem"}},
      {"rate", {rate_command, "rank sensor allocations under a bit budget"}},
      {"counterexample", {counterexample_command, "identical vs bisection rules under common noise"}},
  };
  return table;
}

void write_outputs(const Options& opt, const Outcome& outcome) {
  std::filesystem::create_directories(opt.out);
  for (const auto& [name, content] : outcome.files) write_file_atomic(opt.out / name, content);
  write_file_atomic(opt.out / "summary.txt", outcome.summary);
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"distq: quantizer design and verification for distributed Bayesian estimation"};
  app.require_subcommand(1);
  Options opt;
  std::string config, out = ".";
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool quiet = false;
  for (const auto& [name, entry] : commands()) {
    CLI::App* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--config", config, "JSON config file");
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "master seed; overrides the config");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_flag("--quiet", quiet, "do not echo the summary to stdout");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (!config.empty()) opt.config = config;
  opt.out = out;
  if (sub->count("--seed")) opt.seed = seed;
  opt.threads = threads;

  Outcome outcome;
  try {
    const json root = load_config(opt.config);
    Section cfg(root, "config");
    outcome = commands().at(name).first(cfg, opt);
  } catch (const ConfigError& e) {
    std::cerr << "distq " << name << ": config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "distq " << name << ": " << e.what() << '\n';
    return is_numerical(e.kind()) ? kExitNumerical : kExitConfig;
  }
  try {
    write_outputs(opt, outcome);
  } catch (const std::exception& e) {
    std::cerr << "distq " << name << ": cannot write output: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!quiet) std::cout << outcome.summary;
  return outcome.code;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("distq");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace distq::cli
