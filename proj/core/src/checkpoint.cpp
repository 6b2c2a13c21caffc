#include "dladmm/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace dladmm {

namespace {

constexpr char kMagic[8] = {'D', 'L', 'A', 'D', 'M', 'M', 'C', 'K'};

template <typename T>
void write_pod(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& path) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorKind::checkpoint, path + ": truncated checkpoint");
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::checkpoint, "cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(out, kCheckpointVersion);
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.W.size()));
  for (std::size_t l = 0; l < ckpt.W.size(); ++l) {
    const Matrix& W = ckpt.W[l];
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(W.rows()));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(W.cols()));
    for (Eigen::Index i = 0; i < W.rows(); ++i)
      for (Eigen::Index j = 0; j < W.cols(); ++j) write_pod<double>(out, W(i, j));
    for (Eigen::Index i = 0; i < ckpt.b[l].size(); ++i)
      write_pod<double>(out, ckpt.b[l](i));
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::checkpoint, "cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error(ErrorKind::checkpoint, path + ": bad checkpoint magic");
  const auto version = read_pod<std::uint32_t>(in, path);
  if (version != kCheckpointVersion)
    throw Error(ErrorKind::checkpoint,
                path + ": unsupported checkpoint version " +
                    std::to_string(version));
  const auto L = read_pod<std::uint32_t>(in, path);
  Checkpoint ckpt;
  ckpt.W.resize(L);
  ckpt.b.resize(L);
  for (std::uint32_t l = 0; l < L; ++l) {
    const auto rows = read_pod<std::uint32_t>(in, path);
    const auto cols = read_pod<std::uint32_t>(in, path);
    ckpt.W[l].resize(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
      for (std::uint32_t j = 0; j < cols; ++j)
        ckpt.W[l](i, j) = read_pod<double>(in, path);
    ckpt.b[l].resize(rows);
    for (std::uint32_t i = 0; i < rows; ++i)
      ckpt.b[l](i) = read_pod<double>(in, path);
  }
  return ckpt;
}

}  // namespace dladmm
