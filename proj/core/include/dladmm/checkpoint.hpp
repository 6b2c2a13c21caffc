#pragma once

#include "dladmm/types.hpp"

namespace dladmm {

// Little-endian binary container: magic "DLADMMCK", u32 version, u32 layer
// count, then per layer u32 rows, u32 cols, row-major f64 weights, f64 bias.
struct Checkpoint {
  std::vector<Matrix> W;
  std::vector<Vector> b;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace dladmm
