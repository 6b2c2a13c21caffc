#include "dladmm/idx.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <limits>

namespace dladmm {

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::data, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::uint8_t> gunzip(const std::vector<std::uint8_t>& in) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK)
    throw Error(ErrorKind::data, "zlib init failed");
  std::vector<std::uint8_t> out;
  std::uint8_t buf[1 << 16];
  zs.next_in = const_cast<std::uint8_t*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = buf;
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(ErrorKind::data, "gzip decompression failed");
    }
    out.insert(out.end(), buf, buf + sizeof(buf) - zs.avail_out);
  }
  inflateEnd(&zs);
  return out;
}

std::uint32_t read_u32_be(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void write_u32_be(std::ofstream& out, std::uint32_t v) {
  const std::uint8_t bytes[4] = {std::uint8_t(v >> 24), std::uint8_t(v >> 16),
                                 std::uint8_t(v >> 8), std::uint8_t(v)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

}  // namespace

IdxTensor load_idx(const std::string& path) {
  std::vector<std::uint8_t> raw = read_file(path);
  if (raw.size() >= 2 && raw[0] == 0x1f && raw[1] == 0x8b) raw = gunzip(raw);
  if (raw.size() < 4) throw Error(ErrorKind::data, path + ": truncated IDX header");

  const std::uint32_t magic = read_u32_be(raw.data());
  std::size_t ndims;
  if (magic == 0x00000801)
    ndims = 1;
  else if (magic == 0x00000803)
    ndims = 3;
  else
    throw Error(ErrorKind::data, path + ": bad IDX magic");

  if (raw.size() < 4 + 4 * ndims)
    throw Error(ErrorKind::data, path + ": truncated IDX dimensions");

  IdxTensor t;
  std::size_t total = 1;
  for (std::size_t i = 0; i < ndims; ++i) {
    const std::uint32_t d = read_u32_be(raw.data() + 4 + 4 * i);
    if (d != 0 && total > std::numeric_limits<std::size_t>::max() / d)
      throw Error(ErrorKind::data, path + ": IDX dimension overflow");
    total *= d;
    t.dims.push_back(d);
  }
  const std::size_t offset = 4 + 4 * ndims;
  if (raw.size() - offset < total)
    throw Error(ErrorKind::data, path + ": truncated IDX payload");
  t.data.assign(raw.begin() + offset, raw.begin() + offset + total);
  return t;
}

void write_idx(const std::string& path, const IdxTensor& tensor) {
  if (tensor.dims.size() != 1 && tensor.dims.size() != 3)
    throw Error(ErrorKind::data, "write_idx supports only 1-D and 3-D tensors");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::data, "cannot write " + path);
  write_u32_be(out, tensor.dims.size() == 1 ? 0x00000801u : 0x00000803u);
  std::size_t total = 1;
  for (std::size_t d : tensor.dims) {
    write_u32_be(out, static_cast<std::uint32_t>(d));
    total *= d;
  }
  if (total != tensor.data.size())
    throw Error(ErrorKind::data, "write_idx: dims do not match payload size");
  out.write(reinterpret_cast<const char*>(tensor.data.data()),
            static_cast<std::streamsize>(tensor.data.size()));
}

}  // namespace dladmm
