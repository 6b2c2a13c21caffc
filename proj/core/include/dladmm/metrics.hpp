#pragma once

#include <fstream>

#include "dladmm/config.hpp"

namespace dladmm {

// Append-only per-iteration metrics writer. CSV column order matches
// kMetricsColumns; per-layer coefficient lists are semicolon-joined inside
// one column.
class MetricsWriter {
 public:
  MetricsWriter(const std::string& path, MetricsFormat format);

  void write(const IterationRecord& rec);
  void flush() { out_.flush(); }

  static const char* header();

 private:
  std::ofstream out_;
  MetricsFormat format_;
};

}  // namespace dladmm
