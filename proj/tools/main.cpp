// dladmm command-line tool: train, baseline, bench, eval.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>

#include "dladmm/checkpoint.hpp"
#include "dladmm/config.hpp"
#include "dladmm/data.hpp"
#include "dladmm/metrics.hpp"

namespace fs = std::filesystem;
using namespace dladmm;

namespace {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::data: return 3;
    case ErrorKind::numeric: return 4;
    case ErrorKind::checkpoint: return 5;
  }
  return 1;
}

std::string output_dir(const RunConfig& config) {
  if (const char* env = std::getenv("DLADMM_OUTPUT_DIR")) return env;
  return config.output_dir;
}

Dataset load_train(const RunConfig& c) {
  return load_dataset(c.dataset.train_images, c.dataset.train_labels,
                      c.dataset.num_classes, c.dataset.subsample_n,
                      c.hyper.seed, c.dataset.drop_train_to,
                      c.dataset.name.empty() ? "train" : c.dataset.name);
}

std::optional<Dataset> load_test(const RunConfig& c) {
  if (c.dataset.test_images.empty()) return std::nullopt;
  return load_dataset(c.dataset.test_images, c.dataset.test_labels,
                      c.dataset.num_classes, 0, c.hyper.seed, 0, "test");
}

void write_history(const RunConfig& config, const std::string& dir,
                   const std::vector<IterationRecord>& history) {
  const char* ext = config.metrics_format == MetricsFormat::csv ? "csv" : "jsonl";
  const std::string path = dir + "/metrics." + ext;
  fs::remove(path);
  MetricsWriter writer(path, config.metrics_format);
  for (const auto& rec : history) writer.write(rec);
}

void print_summary(const std::vector<IterationRecord>& history) {
  double best_train = 0.0, best_test = 0.0, total_ms = 0.0;
  for (const auto& r : history) {
    best_train = std::max(best_train, r.train_accuracy);
    best_test = std::max(best_test, r.test_accuracy);
    total_ms += r.wall_ms;
  }
  std::cout << "iterations=" << history.size()
            << " best_train_accuracy=" << best_train
            << " best_test_accuracy=" << best_test
            << " total_time_s=" << total_ms / 1000.0 << "\n";
}

int cmd_train(const std::string& config_path) {
  RunConfig config = parse_config(config_path);
  Dataset train_set = load_train(config);
  std::optional<Dataset> test_set = load_test(config);
  const std::string dir = output_dir(config);
  fs::create_directories(dir);

  NetState state;
  auto history = train(config.arch, config.hyper, RiskSpec{}, train_set,
                       test_set ? &*test_set : nullptr, &state);
  write_history(config, dir, history);
  save_checkpoint(dir + "/model.ckpt", Checkpoint{state.W, state.b});
  print_summary(history);
  return 0;
}

int cmd_baseline(const std::string& config_path) {
  RunConfig config = parse_config(config_path);
  if (!config.optimizer)
    throw Error(ErrorKind::config, "baseline requires an optimizer section");
  Dataset train_set = load_train(config);
  std::optional<Dataset> test_set = load_test(config);
  const std::string dir = output_dir(config);
  fs::create_directories(dir);

  NetState state;
  auto history =
      train_baseline(config.arch, config.hyper, *config.optimizer, train_set,
                     test_set ? &*test_set : nullptr, &state);
  write_history(config, dir, history);
  save_checkpoint(dir + "/model.ckpt", Checkpoint{state.W, state.b});
  print_summary(history);
  return 0;
}

Dataset synthetic_dataset(int n_features, int num_classes, int n,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Dataset d;
  d.name = "synthetic";
  d.x.resize(n_features, n);
  d.y = Matrix::Zero(num_classes, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n_features; ++i) d.x(i, j) = unif(rng);
    d.y(j % num_classes, j) = 1.0;
  }
  return d;
}

double mean_iter_seconds(const Architecture& arch, Hyperparams hyper,
                         const Dataset& data, double rho, int warmup,
                         int timed) {
  hyper.rho0 = rho;
  hyper.rho_schedule = RhoSchedule{};
  NetState state = init_state(arch, data, hyper);
  Trainer trainer(arch, hyper, RiskSpec{});
  for (int k = 0; k < warmup; ++k) trainer.iterate(state, data, nullptr, k);
  double total_ms = 0.0;
  for (int k = 0; k < timed; ++k) {
    auto rec = trainer.iterate(state, data, nullptr, warmup + k);
    total_ms += rec.wall_ms;
  }
  return total_ms / 1000.0 / timed;
}

int cmd_bench(const std::string& config_path) {
  RunConfig config = parse_config(config_path);
  const BenchConfig bench = config.bench.value_or(BenchConfig{});
  const std::string dir = output_dir(config);
  fs::create_directories(dir);

  auto dataset_for = [&](int n_samples) -> Dataset {
    if (!config.dataset.train_images.empty()) {
      RunConfig c = config;
      c.dataset.subsample_n = n_samples;
      return load_train(c);
    }
    return synthetic_dataset(bench.n_features, bench.num_classes, n_samples,
                             config.hyper.seed);
  };

  std::ofstream out(dir + "/scaling.csv");
  out << "sweep,hidden,samples,rho,mean_iter_sec\n";
  out.precision(9);

  Dataset width_data = dataset_for(bench.fixed_samples);
  for (int h : bench.hidden_sizes) {
    Architecture arch;
    arch.layer_dims = {bench.n_features, h, h, bench.num_classes};
    for (double rho : bench.rhos) {
      const double sec = mean_iter_seconds(arch, config.hyper, width_data, rho,
                                           bench.warmup_iters, bench.timed_iters);
      out << "width," << h << ',' << bench.fixed_samples << ',' << rho << ','
          << sec << '\n';
      std::cout << "width h=" << h << " rho=" << rho << " sec/iter=" << sec << "\n";
    }
  }
  Architecture arch;
  arch.layer_dims = {bench.n_features, bench.fixed_hidden, bench.fixed_hidden,
                     bench.num_classes};
  for (int n : bench.sample_counts) {
    Dataset data = dataset_for(n);
    for (double rho : bench.rhos) {
      const double sec = mean_iter_seconds(arch, config.hyper, data, rho,
                                           bench.warmup_iters, bench.timed_iters);
      out << "samples," << bench.fixed_hidden << ',' << n << ',' << rho << ','
          << sec << '\n';
      std::cout << "samples n=" << n << " rho=" << rho << " sec/iter=" << sec << "\n";
    }
  }
  return 0;
}

int cmd_eval(const std::string& ckpt_path, const std::string& config_path) {
  Checkpoint ckpt = load_checkpoint(ckpt_path);
  RunConfig config = parse_config(config_path);
  std::optional<Dataset> test_set = load_test(config);
  if (!test_set)
    throw Error(ErrorKind::config, "eval needs dataset.test_images/test_labels");

  Architecture arch;
  arch.layer_dims.push_back(static_cast<int>(ckpt.W.front().cols()));
  for (const auto& W : ckpt.W)
    arch.layer_dims.push_back(static_cast<int>(W.rows()));
  arch.activation = config.arch.activation;

  const double acc = accuracy(ckpt.W, ckpt.b, arch, *test_set);
  std::cout << "test_accuracy=" << acc << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dlADMM trainer for fully-connected networks"};
  app.require_subcommand(1);

  std::string config_path, ckpt_path, data_path;

  auto* train_cmd = app.add_subcommand("train", "train with dlADMM");
  train_cmd->add_option("config", config_path, "config file")->required();

  auto* baseline_cmd =
      app.add_subcommand("baseline", "train a first-order baseline");
  baseline_cmd->add_option("config", config_path, "config file")->required();

  auto* bench_cmd = app.add_subcommand("bench", "per-iteration scaling sweep");
  bench_cmd->add_option("config", config_path, "config file")->required();

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  eval_cmd->add_option("checkpoint", ckpt_path, "checkpoint file")->required();
  eval_cmd->add_option("data", data_path, "config naming the test dataset")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(config_path);
    if (baseline_cmd->parsed()) return cmd_baseline(config_path);
    if (bench_cmd->parsed()) return cmd_bench(config_path);
    if (eval_cmd->parsed()) return cmd_eval(ckpt_path, data_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
