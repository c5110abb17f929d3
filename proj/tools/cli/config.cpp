#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace distq::cli {

Section::Section(const json& value, std::string path) : value_(&value), path_(std::move(path)) {
  if (!value.is_object()) throw ConfigError(path_ + ": expected an object");
}

void Section::fail(const std::string& key, const std::string& what) const {
  throw ConfigError(path_ + "." + key + ": " + what);
}

bool Section::has(const std::string& key) const { return value_->contains(key); }

const json& Section::at(const std::string& key) const {
  used_.insert(key);
  auto it = value_->find(key);
  if (it == value_->end()) fail(key, "missing");
  return *it;
}

Section Section::child(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_object()) fail(key, "expected an object");
  return Section(v, path_ + "." + key);
}

std::optional<Section> Section::optional_child(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return child(key);
}

std::vector<Section> Section::children(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array()) fail(key, "expected an array of objects");
  std::vector<Section> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_object()) fail(key, "element " + std::to_string(i) + " is not an object");
    out.emplace_back(v[i], path_ + "." + key + "[" + std::to_string(i) + "]");
  }
  return out;
}

double Section::number(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_number()) fail(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(key, "expected a finite number");
  return x;
}

double Section::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

double Section::positive(const std::string& key, double fallback) const {
  const double x = number(key, fallback);
  if (!(x > 0.0)) fail(key, "must be positive");
  return x;
}

std::size_t Section::count(const std::string& key, std::size_t fallback) const {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_number_unsigned()) fail(key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::uint64_t Section::u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_number_unsigned()) fail(key, "expected an unsigned 64-bit integer");
  return v.get<std::uint64_t>();
}

bool Section::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_boolean()) fail(key, "expected true or false");
  return v.get<bool>();
}

std::string Section::text(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> Section::numbers(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array()) fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) fail(key, "expected an array of numbers");
    out.push_back(e.get<double>());
    if (!std::isfinite(out.back())) fail(key, "expected finite numbers");
  }
  return out;
}

std::vector<std::size_t> Section::counts(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array()) fail(key, "expected an array of nonnegative integers");
  std::vector<std::size_t> out;
  for (const json& e : v) {
    if (!e.is_number_unsigned()) fail(key, "expected an array of nonnegative integers");
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

std::vector<std::vector<double>> Section::matrix(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array()) fail(key, "expected an array of rows");
  std::vector<std::vector<double>> out;
  for (const json& row : v) {
    if (!row.is_array()) fail(key, "expected an array of rows");
    auto& r = out.emplace_back();
    for (const json& e : row) {
      if (!e.is_number()) fail(key, "expected numeric rows");
      r.push_back(e.get<double>());
    }
    if (r.size() != out.front().size()) fail(key, "rows differ in length");
  }
  return out;
}

void Section::finish() const {
  for (auto it = value_->begin(); it != value_->end(); ++it)
    if (!used_.count(it.key())) throw ConfigError(path_ + "." + it.key() + ": unknown key");
}

json load_config(const std::optional<std::filesystem::path>& path) {
  if (!path) return json::object();
  std::ifstream in(*path);
  if (!in) throw ConfigError("cannot read config file " + path->string());
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path->string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(path->string() + ": top level must be an object");
  return j;
}

ParamPrior parse_prior(const Section& s) {
  const std::string kind = s.text("kind", "");
  ParamPrior p = [&] {
    if (kind == "uniform") return ParamPrior::uniform(s.number("lo", -1.0), s.number("hi", 1.0));
    if (kind == "gaussian") {
      const double mean = s.number("mean", 0.0);
      const double var = s.positive("variance", 1.0);
      if (!s.has("truncate")) return ParamPrior::gaussian(mean, var);
      const auto t = s.numbers("truncate");
      if (t.size() != 2 || !(t[0] < t[1])) s.fail("truncate", "expected [lo, hi] with lo < hi");
      return ParamPrior::gaussian(mean, var, Interval{t[0], t[1]});
    }
    if (kind == "tabulated") return ParamPrior::tabulated(s.numbers("nodes"), s.numbers("density"));
    if (kind == "point_mass") return ParamPrior::point_mass(s.number("at"));
    s.fail("kind", "expected uniform, gaussian, tabulated or point_mass");
  }();
  s.finish();
  return p;
}

NoiseModel parse_noise(const Section& s) {
  const std::string kind = s.text("kind", "");
  NoiseModel n = [&] {
    if (kind == "delta") return NoiseModel::delta();
    if (kind == "gaussian") return NoiseModel::gaussian(std::sqrt(s.positive("variance", 1.0)));
    if (kind == "raised_cosine") return NoiseModel::raised_cosine(s.number("center", 0.0));
    if (kind == "tabulated") return NoiseModel::tabulated(s.numbers("nodes"), s.numbers("density"));
    s.fail("kind", "expected delta, gaussian, raised_cosine or tabulated");
  }();
  s.finish();
  return n;
}

BinaryQuantizer parse_quantizer(const Section& s) {
  const std::string kind = s.text("kind", "");
  BinaryQuantizer q = [&] {
    if (kind == "threshold") return BinaryQuantizer::threshold(s.number("T", 0.0));
    if (kind == "sine") return BinaryQuantizer::sine(s.number("lo", -1.0), s.number("hi", 1.0));
    if (kind == "tabulated") return BinaryQuantizer::tabulated(s.numbers("y"), s.numbers("response"));
    s.fail("kind", "expected threshold, sine or tabulated");
  }();
  s.finish();
  return q;
}

}  // namespace distq::cli
