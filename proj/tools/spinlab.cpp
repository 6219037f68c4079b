#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>

#include "spinlab/config.hpp"
#include "spinlab/disorder_io.hpp"
#include "spinlab/experiments.hpp"
#include "spinlab/sampling.hpp"

namespace {

using namespace spinlab;

struct ExperimentCommand {
  std::string name;
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> overrides;
  bool print_by_default = false;
};

void add_config_options(ExperimentCommand& cmd) {
  cmd.app->add_option("--config", cmd.config_path, "Flat key = value config file")
      ->check(CLI::ExistingFile);
  for (const auto& key : config_keys()) {
    if (key == "experiment") continue;
    std::string names = "--" + key;
    std::string dashed = key;
    for (auto& c : dashed) {
      if (c == '_') c = '-';
    }
    if (dashed != key) names += ",--" + dashed;
    if (key == "output_path") names += ",--output,-o";
    cmd.app->add_option(names, cmd.overrides[key], "Override config key '" + key + "'");
  }
}

int run_command(const ExperimentCommand& cmd) {
  ExperimentConfig cfg = default_config(cmd.name);
  if (cmd.print_by_default) cfg.output_path.clear();
  if (!cmd.config_path.empty()) apply_config_file(cfg, cmd.config_path);
  if (cfg.experiment != cmd.name) {
    throw std::invalid_argument("config file is for experiment '" + cfg.experiment + "', not '" +
                                cmd.name + "'");
  }
  for (const auto& key : config_keys()) {
    if (key == "experiment") continue;
    if (cmd.app->count("--" + key) > 0) apply_setting(cfg, key, cmd.overrides.at(key));
  }
  cfg.validate();

  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult res = run_experiment(cfg);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<std::pair<std::string, const ResultTable*>> extra;
  for (const auto& [suffix, table] : res.extra) extra.emplace_back(suffix, &table);
  if (cfg.output_path.empty()) {
    res.table.write_csv(std::cout);
    for (const auto& [suffix, table] : res.extra) {
      std::cout << "\n# " << suffix << '\n';
      table.write_csv(std::cout);
    }
  } else {
    write_outputs(cfg, res.table, wall, extra);
    std::cout << cmd.name << ": wrote " << cfg.output_path << " (" << res.table.rows().size()
              << " rows, config " << config_hash(cfg) << ", " << wall << " s)\n";
  }
  if (!res.passed) {
    std::cerr << cmd.name << ": identity checks failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinlab: dense and sparse Ising spin-glass experiments"};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<ExperimentCommand>> commands;
  for (const auto& name : experiment_names()) {
    auto cmd = std::make_unique<ExperimentCommand>();
    cmd->name = name;
    cmd->app = app.add_subcommand(name, "Run the " + name + " experiment");
    add_config_options(*cmd);
    commands.push_back(std::move(cmd));
  }

  auto selftest = std::make_unique<ExperimentCommand>();
  selftest->name = "identity_suite";
  selftest->app = app.add_subcommand("selftest", "Run the identity suite with default settings");
  add_config_options(*selftest);
  selftest->print_by_default = true;

  auto* gen = app.add_subcommand("gen", "Write one seeded disorder draw");
  gen->require_subcommand(1);
  std::size_t n = 0;
  double d = 0.0;
  std::uint64_t seed = 1;
  std::string out_path, format = "binary";
  auto* gen_sk = gen->add_subcommand("sk", "Dense SK matrix with N(0, 1/(2n)) entries");
  gen_sk->add_option("--n", n, "Number of sites")->required()->check(CLI::PositiveNumber);
  gen_sk->add_option("--seed", seed, "Master seed");
  gen_sk->add_option("--output,-o", out_path, "Output file")->required();
  gen_sk->add_option("--format", format, "binary or text")
      ->check(CLI::IsMember({"binary", "text"}));
  auto* gen_sparse = gen->add_subcommand("sparse", "Poissonized multigraph with mean degree d");
  gen_sparse->add_option("--n", n, "Number of sites")->required()->check(CLI::PositiveNumber);
  gen_sparse->add_option("--d", d, "Mean degree")->required()->check(CLI::PositiveNumber);
  gen_sparse->add_option("--seed", seed, "Master seed");
  gen_sparse->add_option("--output,-o", out_path, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_sk) {
      std::ofstream out(out_path, std::ios::binary);
      const DenseDisorder g = sample_sk(n, seed);
      if (format == "binary") {
        write_dense_binary(out, g);
      } else {
        write_dense_text(out, g);
      }
      return out ? 0 : 2;
    }
    if (*gen_sparse) {
      std::ofstream out(out_path);
      write_sparse_text(out, sample_sparse(n, d, seed), {d, seed});
      return out ? 0 : 2;
    }
    if (*selftest->app) return run_command(*selftest);
    for (const auto& cmd : commands) {
      if (*cmd->app) return run_command(*cmd);
    }
  } catch (const std::exception& e) {
    std::cerr << "spinlab: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
