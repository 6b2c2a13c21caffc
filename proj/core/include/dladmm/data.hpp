#pragma once

#include "dladmm/idx.hpp"
#include "dladmm/types.hpp"

namespace dladmm {

// Pixels scaled by 1/255, labels one-hot encoded. subsample_n = 0 keeps the
// full set; otherwise a seeded shuffle picks n columns deterministically.
Dataset prepare(const IdxTensor& images, const IdxTensor& labels,
                int num_classes, std::size_t subsample_n, std::uint64_t seed,
                const std::string& name = "");

// load_idx + prepare, with the 55k convention: when drop_tail_to is nonzero
// and the file holds more samples, the trailing ones are dropped before any
// subsampling.
Dataset load_dataset(const std::string& images_path,
                     const std::string& labels_path, int num_classes,
                     std::size_t subsample_n, std::uint64_t seed,
                     std::size_t drop_tail_to = 0,
                     const std::string& name = "");

}  // namespace dladmm
