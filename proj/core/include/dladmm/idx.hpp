#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dladmm/error.hpp"

namespace dladmm {

// Raw IDX tensor: big-endian container with ubyte payload.
struct IdxTensor {
  std::vector<std::size_t> dims;
  std::vector<std::uint8_t> data;

  std::size_t count() const { return dims.empty() ? 0 : dims[0]; }
  std::size_t item_size() const {
    std::size_t n = 1;
    for (std::size_t i = 1; i < dims.size(); ++i) n *= dims[i];
    return n;
  }
};

// Parses an IDX file (magic 0x00000801 for 1-D labels, 0x00000803 for 3-D
// images). Gzip-compressed files are decompressed transparently.
IdxTensor load_idx(const std::string& path);

// Writes an uncompressed IDX file; only 1-D and 3-D supported.
void write_idx(const std::string& path, const IdxTensor& tensor);

}  // namespace dladmm
