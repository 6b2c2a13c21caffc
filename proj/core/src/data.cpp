#include "dladmm/data.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace dladmm {

Dataset prepare(const IdxTensor& images, const IdxTensor& labels,
                int num_classes, std::size_t subsample_n, std::uint64_t seed,
                const std::string& name) {
  const std::size_t n = images.count();
  if (labels.count() != n)
    throw Error(ErrorKind::data, "image/label counts differ");
  const std::size_t features = images.item_size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (subsample_n != 0) {
    if (subsample_n > n)
      throw Error(ErrorKind::data, "subsample larger than dataset");
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(subsample_n);
  }

  Dataset d;
  d.name = name;
  d.x.resize(features, order.size());
  d.y = Matrix::Zero(num_classes, order.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    const std::size_t src = order[j];
    const std::uint8_t* px = images.data.data() + src * features;
    for (std::size_t i = 0; i < features; ++i) d.x(i, j) = px[i] / 255.0;
    const int label = labels.data[src];
    if (label >= num_classes)
      throw Error(ErrorKind::data,
                  "label " + std::to_string(label) + " >= num_classes");
    d.y(label, j) = 1.0;
  }
  return d;
}

Dataset load_dataset(const std::string& images_path,
                     const std::string& labels_path, int num_classes,
                     std::size_t subsample_n, std::uint64_t seed,
                     std::size_t drop_tail_to, const std::string& name) {
  IdxTensor images = load_idx(images_path);
  IdxTensor labels = load_idx(labels_path);
  if (drop_tail_to != 0 && images.count() > drop_tail_to) {
    const std::size_t features = images.item_size();
    images.data.resize(drop_tail_to * features);
    images.dims[0] = drop_tail_to;
    labels.data.resize(drop_tail_to);
    labels.dims[0] = drop_tail_to;
  }
  return prepare(images, labels, num_classes, subsample_n, seed, name);
}

}  // namespace dladmm
