#pragma once

#include <optional>
#include <string>

#include "dladmm/baselines.hpp"

namespace dladmm {

enum class MetricsFormat { csv, json_lines };

struct DatasetConfig {
  std::string train_images;
  std::string train_labels;
  std::string test_images;
  std::string test_labels;
  int num_classes = 10;
  std::size_t subsample_n = 0;   // 0 = full set
  std::size_t drop_train_to = 0; // 0 = keep file size (55k MNIST convention)
  std::string name;
};

struct BenchConfig {
  std::vector<int> hidden_sizes{50, 100, 200, 400};
  std::vector<int> sample_counts{1000, 2000, 4000};
  std::vector<double> rhos{1e-6, 1.0};
  int warmup_iters = 2;
  int timed_iters = 5;
  int n_features = 784;
  int num_classes = 10;
  int fixed_hidden = 100;   // hidden width for the sample-count sweep
  int fixed_samples = 1000; // sample count for the width sweep
};

struct RunConfig {
  DatasetConfig dataset;
  Architecture arch;
  Hyperparams hyper;
  std::optional<OptimizerSpec> optimizer;
  std::optional<BenchConfig> bench;
  std::string output_dir = ".";
  MetricsFormat metrics_format = MetricsFormat::csv;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text);
std::string serialize_config(const RunConfig& config);

}  // namespace dladmm
