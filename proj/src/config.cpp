#include "spinlab/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spinlab/disorder_io.hpp"

namespace spinlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
  }
  return x;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v[0] != '-') x = std::stoull(v, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw std::invalid_argument("config: '" + key + "' expects a nonnegative integer, got '" + v + "'");
  }
  return x;
}

template <class T, class F>
std::vector<T> parse_list(const std::string& key, const std::string& v, F&& one) {
  std::vector<T> out;
  for (const auto& item : split_list(v)) out.push_back(static_cast<T>(one(key, item)));
  if (out.empty()) throw std::invalid_argument("config: '" + key + "' expects a non-empty list");
  return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ',';
    if constexpr (std::is_floating_point_v<T>) {
      s += format_double(v[k]);
    } else {
      s += std::to_string(v[k]);
    }
  }
  return s;
}

}  // namespace

McmcParams ExperimentConfig::mcmc() const {
  McmcParams p;
  p.sweeps = sweeps;
  p.burn_in = burn_in == 0 ? kDefaultBurnIn : burn_in;
  p.batches = batches;
  return p;
}

std::vector<Variant> ExperimentConfig::variants() const {
  if (variant == "both") return {Variant::free, Variant::bisection};
  return {parse_variant(variant)};
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (n == 0) fail("n must be positive");
  for (auto v : n_list) {
    if (v == 0) fail("n_list entries must be positive");
  }
  if (!(d > 0.0)) fail("d must be positive");
  for (double v : d_list) {
    if (!(v > 0.0)) fail("d_list entries must be positive");
  }
  if (!std::isfinite(beta)) fail("beta must be finite");
  if (!(t >= 0.0 && t <= 1.0)) fail("t must lie in [0, 1]");
  for (double v : t_list) {
    if (!(v >= 0.0 && v <= 1.0)) fail("t_list entries must lie in [0, 1]");
  }
  variants();
  if (disorder_draws == 0) fail("disorder_draws must be positive");
  if (sweeps == 0) fail("sweeps must be positive");
  if (batches == 0) fail("batches must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must lie in (0, 1)");
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "energy_correspondence", "overlap_correspondence", "chaos",
      "restricted_mass",       "interp_free_energy",     "magnetization_suppression",
      "identity_suite"};
  return names;
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "energy_correspondence") {
    c.beta = 1.2;
    c.disorder_draws = 300;
  } else if (experiment == "overlap_correspondence") {
    c.beta = 1.5;
    c.disorder_draws = 300;
  } else if (experiment == "chaos") {
    c.n = 128;
    c.d = 64.0;
    c.beta = 1.5;
    c.disorder_draws = 64;
  } else if (experiment == "restricted_mass") {
    c.beta = 1.5;
    c.t = 0.3;
    c.epsilon = 0.3;
    c.disorder_draws = 100;
  } else if (experiment == "interp_free_energy") {
    c.variant = "bisection";
    c.n_list = {8, 12, 16};
    c.disorder_draws = 200;
  } else if (experiment == "magnetization_suppression") {
    c.n = 128;
    c.beta = 1.5;
    c.d_list = {4.0, 16.0, 64.0, 256.0};
    c.disorder_draws = 32;
    c.sweeps = 20000;
  } else if (experiment == "identity_suite") {
    c.n = 12;
    c.d_list = {16.0, 64.0, 256.0};
    c.disorder_draws = 400;
  } else {
    throw std::invalid_argument("unknown experiment '" + experiment + "'");
  }
  c.output_path = experiment + ".csv";
  return c;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "experiment", "n",          "n_list",  "d",       "d_list", "beta",
      "beta_list",  "t",          "t_list",  "variant", "disorder_draws",
      "sweeps",     "burn_in",    "batches", "grid_points", "seed", "epsilon",
      "output_path"};
  return keys;
}

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  for (auto& ch : key) {
    if (ch == '-') ch = '_';
  }
  const std::string v = trim(raw_value);
  auto size = [&](const std::string& k, const std::string& x) {
    return static_cast<std::size_t>(parse_unsigned(k, x));
  };
  if (key == "experiment") {
    c.experiment = v;
  } else if (key == "n") {
    c.n = size(key, v);
  } else if (key == "n_list") {
    c.n_list = parse_list<std::size_t>(key, v, size);
  } else if (key == "d") {
    c.d = parse_double(key, v);
  } else if (key == "d_list") {
    c.d_list = parse_list<double>(key, v, parse_double);
  } else if (key == "beta") {
    c.beta = parse_double(key, v);
  } else if (key == "beta_list") {
    c.beta_list = parse_list<double>(key, v, parse_double);
  } else if (key == "t") {
    c.t = parse_double(key, v);
  } else if (key == "t_list") {
    c.t_list = parse_list<double>(key, v, parse_double);
  } else if (key == "variant") {
    c.variant = v;
  } else if (key == "disorder_draws") {
    c.disorder_draws = size(key, v);
  } else if (key == "sweeps") {
    c.sweeps = size(key, v);
  } else if (key == "burn_in") {
    c.burn_in = size(key, v);
  } else if (key == "batches") {
    c.batches = size(key, v);
  } else if (key == "grid_points") {
    c.grid_points = size(key, v);
  } else if (key == "seed") {
    c.seed = parse_unsigned(key, v);
  } else if (key == "epsilon") {
    c.epsilon = parse_double(key, v);
  } else if (key == "output_path" || key == "output") {
    c.output_path = v;
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

void apply_config_text(ExperimentConfig& cfg, std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  apply_config_text(cfg, in);
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "experiment = " << c.experiment << '\n'
    << "n = " << c.n << '\n'
    << "n_list = " << join(c.n_list) << '\n'
    << "d = " << format_double(c.d) << '\n'
    << "d_list = " << join(c.d_list) << '\n'
    << "beta = " << format_double(c.beta) << '\n'
    << "beta_list = " << join(c.beta_list) << '\n'
    << "t = " << format_double(c.t) << '\n'
    << "t_list = " << join(c.t_list) << '\n'
    << "variant = " << c.variant << '\n'
    << "disorder_draws = " << c.disorder_draws << '\n'
    << "sweeps = " << c.sweeps << '\n'
    << "burn_in = " << c.burn_in << '\n'
    << "batches = " << c.batches << '\n'
    << "grid_points = " << c.grid_points << '\n'
    << "seed = " << c.seed << '\n'
    << "epsilon = " << format_double(c.epsilon) << '\n'
    << "output_path = " << c.output_path << '\n';
  return o.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.output_path.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_text(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace spinlab
